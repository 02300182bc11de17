use std::fmt;

use serde::Serialize;

use super::ScanRecord;

/// Minimum number of full scans for per-link temporal statistics.
pub const COMPLIANT_MIN_TURNS: usize = 37;
pub const COMPLIANT_MIN_DURATION_S: f64 = 10.0;

// Relative slack on duration and azimuth-travel comparisons; sample clocks
// are stored as decimal seconds.
const REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    NoSamples,
    NonPositiveDistance { distance_m: f64 },
    AzimuthOutOfRange { index: usize, azimuth_deg: f64 },
    NonMonotoneTime { index: usize },
    NonMonotoneTurn { index: usize },
    NonFinitePower { index: usize },
    LessThanOneTurn,
    InsufficientTurns { turns: usize },
    ShortRecord { duration_s: f64 },
}

impl Violation {
    /// Structural violations make a record unusable; the rest only mark it
    /// as non-compliant for temporal statistics.
    pub fn is_fatal(&self) -> bool {
        !matches!(
            self,
            Violation::LessThanOneTurn
                | Violation::InsufficientTurns { .. }
                | Violation::ShortRecord { .. }
        )
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoSamples => write!(f, "no samples"),
            Violation::NonPositiveDistance { distance_m } => {
                write!(f, "non-positive distance {distance_m} m")
            }
            Violation::AzimuthOutOfRange { index, azimuth_deg } => {
                write!(f, "azimuth {azimuth_deg} out of [0,360) at sample {index}")
            }
            Violation::NonMonotoneTime { index } => {
                write!(f, "non-monotone time at sample {index}")
            }
            Violation::NonMonotoneTurn { index } => {
                write!(f, "decreasing turn index at sample {index}")
            }
            Violation::NonFinitePower { index } => write!(f, "non-finite power at sample {index}"),
            Violation::LessThanOneTurn => write!(f, "record spans less than one full turn"),
            Violation::InsufficientTurns { turns } => write!(
                f,
                "insufficient turns for temporal statistics ({turns} < {COMPLIANT_MIN_TURNS})"
            ),
            Violation::ShortRecord { duration_s } => write!(
                f,
                "record shorter than {COMPLIANT_MIN_DURATION_S} s ({duration_s:.3} s)"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub turns: usize,
    pub duration_s: f64,
    pub samples_per_turn: f64,
    pub compliant: bool,
}

impl ValidationReport {
    pub fn fatal(&self) -> impl Iterator<Item = &Violation> {
        self.violations.iter().filter(|v| v.is_fatal())
    }

    pub fn has_fatal(&self) -> bool {
        self.fatal().next().is_some()
    }
}

pub fn validate_record(record: &ScanRecord) -> ValidationReport {
    let mut violations = Vec::new();
    let samples = &record.samples;

    if !(record.distance_m > 0.0) {
        violations.push(Violation::NonPositiveDistance {
            distance_m: record.distance_m,
        });
    }
    if samples.is_empty() {
        violations.push(Violation::NoSamples);
    }

    for (i, s) in samples.iter().enumerate() {
        if !(0.0..360.0).contains(&s.azimuth_deg) {
            violations.push(Violation::AzimuthOutOfRange {
                index: i,
                azimuth_deg: s.azimuth_deg,
            });
        }
        if !s.power_dbm.is_finite() {
            violations.push(Violation::NonFinitePower { index: i });
        }
    }
    for (i, w) in samples.windows(2).enumerate() {
        if !(w[1].time_s > w[0].time_s) {
            violations.push(Violation::NonMonotoneTime { index: i + 1 });
        }
        if w[1].turn_index < w[0].turn_index {
            violations.push(Violation::NonMonotoneTurn { index: i + 1 });
        }
    }

    let turns = record.turn_count();
    let duration_s = record.duration_s();
    let samples_per_turn = if turns > 0 {
        samples.len() as f64 / turns as f64
    } else {
        0.0
    };

    if !samples.is_empty() && azimuth_travel_deg(record) < 360.0 * (1.0 - REL_TOL) {
        violations.push(Violation::LessThanOneTurn);
    }
    if turns < COMPLIANT_MIN_TURNS {
        violations.push(Violation::InsufficientTurns { turns });
    }
    if duration_s < COMPLIANT_MIN_DURATION_S * (1.0 - REL_TOL) {
        violations.push(Violation::ShortRecord { duration_s });
    }

    let compliant = violations.is_empty();
    ValidationReport {
        violations,
        turns,
        duration_s,
        samples_per_turn,
        compliant,
    }
}

/// Total unwrapped azimuth swept by the record, including the final
/// sample's nominal step.
fn azimuth_travel_deg(record: &ScanRecord) -> f64 {
    let steps: Vec<f64> = record
        .samples
        .windows(2)
        .map(|w| (w[1].azimuth_deg - w[0].azimuth_deg).rem_euclid(360.0))
        .collect();
    if steps.is_empty() {
        return 0.0;
    }
    let total: f64 = steps.iter().sum();
    total + total / steps.len() as f64
}
