use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Normal distribution of dB values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogNormalDb {
    pub mu_db: f64,
    pub sigma_db: f64,
}

impl LogNormalDb {
    pub fn new(mu_db: f64, sigma_db: f64) -> Result<Self> {
        if !(sigma_db >= 0.0) || !mu_db.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "invalid log-normal parameters ({mu_db}, {sigma_db})"
            )));
        }
        Ok(Self { mu_db, sigma_db })
    }
}

/// Sample mean and unbiased standard deviation of dB values.
pub fn fit_lognormal_db(samples_db: &[f64]) -> Result<LogNormalDb> {
    if samples_db.len() < 2 {
        return Err(Error::InsufficientData(
            "log-normal fit needs at least 2 samples".into(),
        ));
    }
    let n = samples_db.len() as f64;
    let mu = samples_db.iter().sum::<f64>() / n;
    let ss: f64 = samples_db.iter().map(|x| (x - mu).powi(2)).sum();
    LogNormalDb::new(mu, (ss / (n - 1.0)).sqrt())
}

/// Right-continuous empirical distribution function.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    sorted: Vec<f64>,
}

impl EmpiricalCdf {
    /// NaN samples are dropped; infinities are kept.
    pub fn new(mut samples: Vec<f64>) -> Result<Self> {
        samples.retain(|x| !x.is_nan());
        if samples.is_empty() {
            return Err(Error::InsufficientData(
                "empirical CDF needs a sample".into(),
            ));
        }
        samples.sort_by(f64::total_cmp);
        Ok(Self { sorted: samples })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }

    /// Fraction of samples <= x.
    pub fn cdf(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&v| v <= x) as f64 / self.sorted.len() as f64
    }

    /// Smallest sample value v with cdf(v) >= p.
    pub fn quantile(&self, p: f64) -> f64 {
        let n = self.sorted.len();
        let k = (p.clamp(0.0, 1.0) * n as f64).ceil() as usize;
        self.sorted[k.clamp(1, n) - 1]
    }

    pub fn median(&self) -> f64 {
        self.quantile(0.5)
    }

    /// (value, cdf) steps, one per distinct value.
    pub fn steps(&self) -> Vec<(f64, f64)> {
        let n = self.sorted.len() as f64;
        let mut out: Vec<(f64, f64)> = Vec::new();
        for (i, &v) in self.sorted.iter().enumerate() {
            let f = (i + 1) as f64 / n;
            match out.last_mut() {
                Some(last) if last.0 == v => last.1 = f,
                _ => out.push((v, f)),
            }
        }
        out
    }
}

pub fn empirical_cdf(samples: &[f64]) -> Result<EmpiricalCdf> {
    EmpiricalCdf::new(samples.to_vec())
}
