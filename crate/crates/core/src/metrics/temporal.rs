use super::profile::{AngularProfile, BIN_COUNT};
use super::stats::EmpiricalCdf;
use crate::error::{Error, Result};
use crate::scan::ScanRecord;
use crate::units::{db_to_linear, linear_to_db};

/// Half-width of the azimuth window collected around a fixed direction.
pub const FIXED_ANGLE_HALF_WIDTH_DEG: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesMode {
    /// Power along one azimuth bin, every turn.
    FixedAngle(usize),
    /// Strongest 1° bin of each turn.
    PerTurnBest,
}

/// One power value per turn.
#[derive(Debug, Clone, PartialEq)]
pub struct TemporalSeries {
    pub values_dbm: Vec<f64>,
    pub dt_s: f64,
    /// Turn positions whose value was interpolated because the direction
    /// was not observed in that turn.
    pub interpolated: Vec<usize>,
}

impl TemporalSeries {
    pub fn new(values_dbm: Vec<f64>, dt_s: f64) -> Result<Self> {
        if values_dbm.len() < 2 {
            return Err(Error::InsufficientData(
                "temporal series needs at least 2 values".into(),
            ));
        }
        if !(dt_s > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "dt_s must be positive, got {dt_s}"
            )));
        }
        Ok(Self {
            values_dbm,
            dt_s,
            interpolated: Vec::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.values_dbm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values_dbm.is_empty()
    }

    pub fn linear_mw(&self) -> Vec<f64> {
        self.values_dbm.iter().map(|&v| db_to_linear(v)).collect()
    }

    /// Linear mean power in dBm.
    pub fn mean_power_dbm(&self) -> f64 {
        let lin = self.linear_mw();
        linear_to_db(lin.iter().sum::<f64>() / lin.len() as f64)
    }
}

fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(360.0);
    d.min(360.0 - d)
}

pub fn temporal_series(record: &ScanRecord, mode: SeriesMode) -> Result<TemporalSeries> {
    let turns = record.turns();
    if turns.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "temporal series needs at least 2 turns, record has {}",
            turns.len()
        )));
    }
    let dt_s = record.duration_s() / turns.len() as f64;

    let per_turn: Vec<Option<f64>> = match mode {
        SeriesMode::FixedAngle(bin) => {
            if bin >= BIN_COUNT {
                return Err(Error::InvalidArgument(format!("bin {bin} out of range")));
            }
            let centre = bin as f64 + 0.5;
            turns
                .iter()
                .map(|turn| {
                    let (sum, n) = turn
                        .iter()
                        .filter(|s| {
                            circular_distance(s.azimuth_deg, centre) <= FIXED_ANGLE_HALF_WIDTH_DEG
                        })
                        .fold((0.0, 0usize), |(sum, n), s| {
                            (sum + db_to_linear(s.power_dbm), n + 1)
                        });
                    (n > 0).then(|| sum / n as f64)
                })
                .collect()
        }
        SeriesMode::PerTurnBest => turns
            .iter()
            .map(|turn| AngularProfile::from_samples(turn).max_bin().map(|(_, p)| p))
            .collect(),
    };

    let (values_mw, interpolated) = fill_gaps(&per_turn)?;
    Ok(TemporalSeries {
        values_dbm: values_mw.into_iter().map(linear_to_db).collect(),
        dt_s,
        interpolated,
    })
}

/// Linear interpolation (in mW) across unobserved turns; leading and
/// trailing gaps take the nearest observed value.
fn fill_gaps(values: &[Option<f64>]) -> Result<(Vec<f64>, Vec<usize>)> {
    let observed: Vec<(usize, f64)> = values
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.map(|v| (i, v)))
        .collect();
    if observed.is_empty() {
        return Err(Error::InsufficientData(
            "direction never observed in any turn".into(),
        ));
    }
    let mut out = Vec::with_capacity(values.len());
    let mut filled = Vec::new();
    let mut next = 0usize;
    for (i, v) in values.iter().enumerate() {
        if let Some(v) = v {
            out.push(*v);
            next += 1;
            continue;
        }
        filled.push(i);
        let before = next.checked_sub(1).map(|j| observed[j]);
        let after = observed.get(next).copied();
        let v = match (before, after) {
            (Some((i0, v0)), Some((i1, v1))) => v0 + (v1 - v0) * (i - i0) as f64 / (i1 - i0) as f64,
            (Some((_, v0)), None) => v0,
            (None, Some((_, v1))) => v1,
            (None, None) => unreachable!("observed is non-empty"),
        };
        out.push(v);
    }
    Ok((out, filled))
}

/// Consecutive-turn power changes.
#[derive(Debug, Clone, PartialEq)]
pub struct FluctuationStats {
    /// |values[i+1] - values[i]| in dB.
    pub deltas_db: Vec<f64>,
    pub cdf: EmpiricalCdf,
    pub p90_db: f64,
}

pub fn turn_fluctuation_stats(series: &TemporalSeries) -> Result<FluctuationStats> {
    if series.len() < 2 {
        return Err(Error::InsufficientData(
            "fluctuation needs at least 2 values".into(),
        ));
    }
    let deltas_db: Vec<f64> = series
        .values_dbm
        .windows(2)
        .map(|w| (w[1] - w[0]).abs())
        .collect();
    let cdf = EmpiricalCdf::new(deltas_db.clone())?;
    let p90_db = cdf.quantile(0.9);
    Ok(FluctuationStats {
        deltas_db,
        cdf,
        p90_db,
    })
}

/// Mean power advantage of re-aiming every turn over holding the
/// best-on-average direction: difference of linear mean powers, in dB.
pub fn beamswitch_gain_db(per_turn_best: &TemporalSeries, fixed: &TemporalSeries) -> f64 {
    per_turn_best.mean_power_dbm() - fixed.mean_power_dbm()
}
