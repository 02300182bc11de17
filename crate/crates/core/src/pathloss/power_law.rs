use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Log-distance path-gain model with log-normal shadowing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawModel {
    /// Path gain at 1 m, dB.
    pub intercept_db: f64,
    /// Distance slope n; gain changes by 10 n dB per decade.
    pub slope: f64,
    /// Shadow-fading standard deviation, dB.
    pub sigma_db: f64,
    /// 90% confidence half-width of the intercept.
    #[serde(default)]
    pub ci_intercept_db: f64,
    /// 90% confidence half-width of the slope.
    #[serde(default)]
    pub ci_slope: f64,
    #[serde(default)]
    pub n_points: usize,
}

impl PowerLawModel {
    pub fn new(intercept_db: f64, slope: f64, sigma_db: f64) -> Self {
        Self {
            intercept_db,
            slope,
            sigma_db,
            ci_intercept_db: 0.0,
            ci_slope: 0.0,
            n_points: 0,
        }
    }

    pub fn with_ci(mut self, ci_intercept_db: f64, ci_slope: f64, n_points: usize) -> Self {
        self.ci_intercept_db = ci_intercept_db;
        self.ci_slope = ci_slope;
        self.n_points = n_points;
        self
    }

    pub fn mean_db(&self, d_m: f64) -> f64 {
        self.intercept_db + 10.0 * self.slope * d_m.log10()
    }

    /// Mean plus one shadow-fading draw from `rng`.
    pub fn sample_with<R: Rng + ?Sized>(&self, d_m: f64, rng: &mut R) -> f64 {
        let z: f64 = rng.sample(StandardNormal);
        self.mean_db(d_m) + self.sigma_db * z
    }
}

fn check_distance(d_m: f64) -> Result<()> {
    if !(d_m > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "distance must be positive, got {d_m}"
        )));
    }
    Ok(())
}

pub fn power_law_eval(model: &PowerLawModel, d_m: f64) -> Result<f64> {
    check_distance(d_m)?;
    Ok(model.mean_db(d_m))
}

pub fn power_law_sample(model: &PowerLawModel, d_m: f64, seed: u64) -> Result<f64> {
    check_distance(d_m)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(model.sample_with(d_m, &mut rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pathloss::friis_path_gain;

    #[test]
    fn same_street_at_100m() {
        let m = PowerLawModel::new(-45.1, -4.06, 6.4);
        let g = power_law_eval(&m, 100.0).unwrap();
        assert!((g + 126.3).abs() < 1e-9);
        let excess = friis_path_gain(100.0, 28e9).unwrap() - g;
        assert!((excess - 24.9).abs() < 0.1, "{excess}");
    }

    #[test]
    fn other_street_at_100m() {
        let m = PowerLawModel::new(-80.3, -3.13, 4.8);
        let g = power_law_eval(&m, 100.0).unwrap();
        assert!((g + 142.9).abs() < 1e-9);
        let excess = friis_path_gain(100.0, 28e9).unwrap() - g;
        assert!((excess - 41.5).abs() < 0.1, "{excess}");
    }

    #[test]
    fn zero_sigma_sample_is_mean() {
        let m = PowerLawModel::new(-45.1, -4.06, 0.0);
        assert_eq!(
            power_law_sample(&m, 57.0, 3).unwrap(),
            power_law_eval(&m, 57.0).unwrap()
        );
    }

    #[test]
    fn sample_is_seeded() {
        let m = PowerLawModel::new(-45.1, -4.06, 6.4);
        assert_eq!(
            power_law_sample(&m, 80.0, 1).unwrap(),
            power_law_sample(&m, 80.0, 1).unwrap()
        );
        assert_ne!(
            power_law_sample(&m, 80.0, 1).unwrap(),
            power_law_sample(&m, 80.0, 2).unwrap()
        );
    }

    #[test]
    fn non_positive_distance() {
        let m = PowerLawModel::new(-45.1, -4.06, 6.4);
        assert!(power_law_eval(&m, 0.0).is_err());
        assert!(power_law_sample(&m, -1.0, 0).is_err());
    }
}
