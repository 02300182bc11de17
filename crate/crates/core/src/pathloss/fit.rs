//! Least-squares fits of path gain against `10 log10(d)`.
//!
//! Confidence half-widths are two-sided Student-t intervals on the OLS
//! coefficients at [`CI_LEVEL`].

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use super::power_law::PowerLawModel;
use crate::error::{Error, Result};

pub const CI_LEVEL: f64 = 0.90;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitDataset {
    pub label: String,
    /// (distance_m, path_gain_db)
    pub points: Vec<(f64, f64)>,
}

impl FitDataset {
    pub fn new(label: impl Into<String>, points: Vec<(f64, f64)>) -> Result<Self> {
        if let Some(&(d, _)) = points.iter().find(|(d, _)| !(*d > 0.0)) {
            return Err(Error::InvalidArgument(format!("distance {d} not positive")));
        }
        if points.iter().any(|(_, g)| !g.is_finite()) {
            return Err(Error::InvalidArgument("non-finite path gain".into()));
        }
        Ok(Self {
            label: label.into(),
            points,
        })
    }

    /// Draws one path gain per distance from `model`.
    pub fn generate(
        label: impl Into<String>,
        model: &PowerLawModel,
        distances_m: &[f64],
        seed: u64,
    ) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let points = distances_m
            .iter()
            .map(|&d| (d, model.sample_with(d, &mut rng)))
            .collect();
        Self::new(label, points)
    }

    /// Measurement positions along a street route repeated until `n`
    /// points: every 1 m from 20 to 70 m, then every 3 m out to 200 m.
    pub fn route_distances(n: usize) -> Vec<f64> {
        let route: Vec<f64> = (20..=70)
            .map(f64::from)
            .chain((73..=200).step_by(3).map(f64::from))
            .collect();
        route.iter().copied().cycle().take(n).collect()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn log_points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.points.iter().map(|&(d, g)| (10.0 * d.log10(), g))
    }
}

struct Moments {
    n: f64,
    mean_x: f64,
    mean_y: f64,
    sxx: f64,
    sxy: f64,
}

impl Moments {
    fn of(data: &FitDataset) -> Self {
        let n = data.len() as f64;
        let (sx, sy) = data
            .log_points()
            .fold((0.0, 0.0), |(sx, sy), (x, y)| (sx + x, sy + y));
        let (mean_x, mean_y) = (sx / n, sy / n);
        let (sxx, sxy) = data.log_points().fold((0.0, 0.0), |(sxx, sxy), (x, y)| {
            let dx = x - mean_x;
            (sxx + dx * dx, sxy + dx * (y - mean_y))
        });
        Self {
            n,
            mean_x,
            mean_y,
            sxx,
            sxy,
        }
    }
}

fn sse(data: &FitDataset, intercept: f64, slope: f64) -> f64 {
    data.log_points()
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum()
}

fn t_quantile(dof: f64) -> Result<f64> {
    let t = StudentsT::new(0.0, 1.0, dof).map_err(|e| Error::Degenerate(e.to_string()))?;
    Ok(t.inverse_cdf(0.5 + CI_LEVEL / 2.0))
}

/// OLS fit of `gain = A + n * 10 log10(d)`. With `fixed_intercept_db`, only
/// the slope is estimated. `sigma_db` is the RMS residual.
pub fn fit_power_law(data: &FitDataset, fixed_intercept_db: Option<f64>) -> Result<PowerLawModel> {
    match fixed_intercept_db {
        None => fit_free(data),
        Some(a) => fit_fixed(data, a),
    }
}

fn fit_free(data: &FitDataset) -> Result<PowerLawModel> {
    if data.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "free regression needs at least 3 points, '{}' has {}",
            data.label,
            data.len()
        )));
    }
    let m = Moments::of(data);
    if m.sxx <= 0.0 {
        return Err(Error::Degenerate(format!(
            "all distances equal in '{}'",
            data.label
        )));
    }
    let slope = m.sxy / m.sxx;
    let intercept = m.mean_y - slope * m.mean_x;
    let sse = sse(data, intercept, slope);
    let s2 = sse / (m.n - 2.0);
    let t = t_quantile(m.n - 2.0)?;
    Ok(PowerLawModel {
        intercept_db: intercept,
        slope,
        sigma_db: (sse / m.n).sqrt(),
        ci_intercept_db: t * (s2 * (1.0 / m.n + m.mean_x * m.mean_x / m.sxx)).sqrt(),
        ci_slope: t * (s2 / m.sxx).sqrt(),
        n_points: data.len(),
    })
}

fn fit_fixed(data: &FitDataset, intercept: f64) -> Result<PowerLawModel> {
    if data.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "fixed-intercept regression needs at least 2 points, '{}' has {}",
            data.label,
            data.len()
        )));
    }
    let (sxx, sxy) = data.log_points().fold((0.0, 0.0), |(sxx, sxy), (x, y)| {
        (sxx + x * x, sxy + x * (y - intercept))
    });
    if sxx <= 0.0 {
        return Err(Error::Degenerate(format!(
            "all distances are 1 m in '{}'; slope undefined with fixed intercept",
            data.label
        )));
    }
    let n = data.len() as f64;
    let slope = sxy / sxx;
    let sse = sse(data, intercept, slope);
    let t = t_quantile(n - 1.0)?;
    Ok(PowerLawModel {
        intercept_db: intercept,
        slope,
        sigma_db: (sse / n).sqrt(),
        ci_intercept_db: 0.0,
        ci_slope: t * (sse / (n - 1.0) / sxx).sqrt(),
        n_points: data.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CommonSlopeFit {
    pub slope: f64,
    pub intercept_a_db: f64,
    pub intercept_b_db: f64,
    /// RMS residual over both datasets.
    pub rms_db: f64,
}

impl CommonSlopeFit {
    /// Intercept gap a - b in dB.
    pub fn gap_db(&self) -> f64 {
        self.intercept_a_db - self.intercept_b_db
    }
}

/// Joint least squares with one shared slope and an intercept per dataset.
pub fn common_slope_fit(a: &FitDataset, b: &FitDataset) -> Result<CommonSlopeFit> {
    for d in [a, b] {
        if d.len() < 3 {
            return Err(Error::InsufficientData(format!(
                "common-slope fit needs at least 3 points per dataset, '{}' has {}",
                d.label,
                d.len()
            )));
        }
    }
    let (ma, mb) = (Moments::of(a), Moments::of(b));
    let sxx = ma.sxx + mb.sxx;
    if sxx <= 0.0 {
        return Err(Error::Degenerate(
            "all distances equal in both datasets".into(),
        ));
    }
    let slope = (ma.sxy + mb.sxy) / sxx;
    let ia = ma.mean_y - slope * ma.mean_x;
    let ib = mb.mean_y - slope * mb.mean_x;
    let total_sse = sse(a, ia, slope) + sse(b, ib, slope);
    Ok(CommonSlopeFit {
        slope,
        intercept_a_db: ia,
        intercept_b_db: ib,
        rms_db: (total_sse / (ma.n + mb.n)).sqrt(),
    })
}
