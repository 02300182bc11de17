//! Temporal Rician K-factor.
//!
//! The estimator uses the first two moments of received power G:
//!
//! ```text
//! V = Var[G] / E[G]^2
//! K = sqrt(1 - V) / (1 - sqrt(1 - V))
//! ```
//!
//! `V >= 1` (Rayleigh or more severe) maps to `K = 0`, reported as
//! `-inf` dB; a series with no variance maps to `+inf` dB.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::temporal::TemporalSeries;
use crate::error::{Error, Result};
use crate::units::{db_to_linear, linear_to_db};

/// Turn period of the sounder at full speed, used as the nominal sample
/// interval of simulated series.
const DEFAULT_DT_S: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RicianFit {
    /// K in dB; `+inf` for a constant envelope, `-inf` for V >= 1.
    pub k_db: f64,
    /// Mean power in dBm.
    pub omega_dbm: f64,
}

impl RicianFit {
    pub fn k_linear(&self) -> f64 {
        db_to_linear(self.k_db)
    }
}

pub fn estimate_k_factor_mom(series: &TemporalSeries) -> Result<RicianFit> {
    if series.len() < 2 {
        return Err(Error::InsufficientData(
            "K-factor needs at least 2 samples".into(),
        ));
    }
    let g = series.linear_mw();
    let n = g.len() as f64;
    let mean = g.iter().sum::<f64>() / n;
    if !(mean > 0.0) {
        return Err(Error::InvalidArgument("all-zero powers".into()));
    }
    let var = g.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    let v = var / (mean * mean);

    let k_db = if v >= 1.0 {
        f64::NEG_INFINITY
    } else {
        let root = (1.0 - v).sqrt();
        let denom = 1.0 - root;
        if denom <= 0.0 {
            f64::INFINITY
        } else {
            linear_to_db(root / denom)
        }
    };
    Ok(RicianFit {
        k_db,
        omega_dbm: linear_to_db(mean),
    })
}

/// `n` Rician power samples with K-factor `k_db` and mean power
/// `omega_dbm`, spaced by the nominal 0.2 s turn period.
pub fn sample_rician(k_db: f64, omega_dbm: f64, n: usize, seed: u64) -> Result<TemporalSeries> {
    if n < 1 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if k_db.is_nan() {
        return Err(Error::InvalidArgument("k_db is NaN".into()));
    }
    let omega = db_to_linear(omega_dbm);
    let values = if k_db == f64::INFINITY {
        vec![omega_dbm; n]
    } else {
        let k = if k_db == f64::NEG_INFINITY {
            0.0
        } else {
            db_to_linear(k_db)
        };
        let los = (omega * k / (k + 1.0)).sqrt();
        let sigma = (0.5 * omega / (k + 1.0)).sqrt();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                let h = Complex64::new(los + sigma * re, sigma * im);
                linear_to_db(h.norm_sqr())
            })
            .collect()
    };
    Ok(TemporalSeries {
        values_dbm: values,
        dt_s: DEFAULT_DT_S,
        interpolated: Vec::new(),
    })
}
