//! Angular scan records produced by a rotating-horn narrowband sounder.
//!
//! A [`ScanRecord`] holds one link's measurement: a time-ordered stream of
//! power samples, each tagged with the horn azimuth and the turn (full
//! rotation) it belongs to. Powers are stored in dBm; every average taken
//! downstream is computed on linear milliwatts.

mod io;
mod sounder;
mod synth;
mod validate;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

pub use io::{parse_scan_dataset, read_scan_dataset, write_scan_dataset, ScanFormat};
pub use sounder::{AzimuthPattern, PatternSpec, SounderConfig};
pub use synth::{synthesize_scan_record, SceneTruth, SpecularPath};
pub use validate::{
    validate_record, ValidationReport, Violation, COMPLIANT_MIN_DURATION_S, COMPLIANT_MIN_TURNS,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    SameStreet,
    OtherStreet,
    VisualLos,
    OpenField,
}

impl Scenario {
    pub const ALL: [Scenario; 4] = [
        Scenario::SameStreet,
        Scenario::OtherStreet,
        Scenario::VisualLos,
        Scenario::OpenField,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Scenario::SameStreet => "same_street",
            Scenario::OtherStreet => "other_street",
            Scenario::VisualLos => "visual_los",
            Scenario::OpenField => "open_field",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown scenario '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub time_s: f64,
    pub azimuth_deg: f64,
    pub power_dbm: f64,
    pub turn_index: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub link_id: String,
    pub street_id: String,
    pub scenario: Scenario,
    /// Euclidean Tx-Rx distance in meters.
    pub distance_m: f64,
    pub samples: Vec<Sample>,
}

impl ScanRecord {
    /// Samples grouped into consecutive runs sharing a turn index.
    pub fn turns(&self) -> Vec<&[Sample]> {
        self.samples
            .chunk_by(|a, b| a.turn_index == b.turn_index)
            .collect()
    }

    pub fn turn_count(&self) -> usize {
        self.turns().len()
    }

    /// Record duration, counting the final sample's interval so that `N`
    /// samples at rate `fs` span `N / fs` seconds.
    pub fn duration_s(&self) -> f64 {
        match self.samples.as_slice() {
            [] => 0.0,
            [_] => 0.0,
            [first, .., last] => {
                let n = self.samples.len() as f64;
                (last.time_s - first.time_s) * n / (n - 1.0)
            }
        }
    }

    pub fn is_compliant(&self) -> bool {
        validate_record(self).compliant
    }
}
