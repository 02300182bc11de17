//! Synthetic scan records from a known scene.
//!
//! The scene's angular power spectrum is a set of specular plane waves plus
//! an azimuthally uniform diffuse floor, normalised so that the
//! omni-equivalent power equals the scene path gain. Each received sample
//! is that spectrum seen through the receive azimuth pattern at the horn's
//! current pointing angle, scaled by the link budget, with the sounder's
//! noise floor added in milliwatts.
//!
//! Temporal fading is block-constant over a turn: every specular path gets
//! an independent Rician gain sequence, one complex value per turn. With a
//! Doppler decay set, the diffuse part of each sequence has an exponential
//! power spectral density `exp(-|f| / decay_hz)` in turn-rate samples;
//! otherwise turns are independent.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::{Sample, ScanRecord, Scenario, SounderConfig};
use crate::error::{Error, Result};
use crate::units::{db_to_linear, linear_to_db};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpecularPath {
    pub azimuth_deg: f64,
    pub relative_power_db: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneTruth {
    #[serde(default = "default_link_id")]
    pub link_id: String,
    #[serde(default = "default_link_id")]
    pub street_id: String,
    #[serde(default = "default_scenario")]
    pub scenario: Scenario,
    #[serde(default = "default_distance")]
    pub distance_m: f64,

    /// Omni-equivalent path gain of the scene, dB.
    pub path_gain_db: f64,
    #[serde(default)]
    pub specular_paths: Vec<SpecularPath>,
    /// Relative level of the azimuthally uniform component; absent means
    /// no diffuse power.
    #[serde(default)]
    pub diffuse_floor_db: Option<f64>,
    /// Temporal Rician K-factor of every specular path; `inf` disables
    /// fading.
    #[serde(default = "default_k")]
    pub k_factor_db: f64,
    /// E-folding frequency of the exponential Doppler spectrum, Hz.
    #[serde(default)]
    pub doppler_decay_hz: Option<f64>,
    pub turns: usize,
    pub rpm: f64,
    pub sample_rate_hz: f64,
    #[serde(default)]
    pub rng_seed: u64,
}

fn default_link_id() -> String {
    "synthetic".into()
}
fn default_scenario() -> Scenario {
    Scenario::OpenField
}
fn default_distance() -> f64 {
    100.0
}
fn default_k() -> f64 {
    f64::INFINITY
}

impl SceneTruth {
    /// Scene skeleton using the 300 rpm / 740 Hz instrument timing.
    pub fn new(path_gain_db: f64, turns: usize) -> Self {
        Self {
            link_id: default_link_id(),
            street_id: default_link_id(),
            scenario: default_scenario(),
            distance_m: default_distance(),
            path_gain_db,
            specular_paths: Vec::new(),
            diffuse_floor_db: None,
            k_factor_db: f64::INFINITY,
            doppler_decay_hz: None,
            turns,
            rpm: 300.0,
            sample_rate_hz: 740.0,
            rng_seed: 0,
        }
    }

    pub fn with_path(mut self, azimuth_deg: f64, relative_power_db: f64) -> Self {
        self.specular_paths.push(SpecularPath {
            azimuth_deg,
            relative_power_db,
        });
        self
    }

    pub fn with_diffuse(mut self, level_db: f64) -> Self {
        self.diffuse_floor_db = Some(level_db);
        self
    }

    pub fn with_k_factor(mut self, k_db: f64) -> Self {
        self.k_factor_db = k_db;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.rng_seed = seed;
        self
    }

    pub fn turn_period_s(&self) -> f64 {
        60.0 / self.rpm
    }

    /// Omni-equivalent received power implied by the scene and sounder,
    /// excluding noise: path gain plus transmit power and gains.
    pub fn omni_power_dbm(&self, sounder: &SounderConfig) -> f64 {
        self.path_gain_db
            + sounder.tx_power_dbm
            + sounder.tx_gain_dbi
            + sounder.rx_elevation_gain_db()
    }

    /// Normalised (specular weights, diffuse weight), summing to one.
    pub fn weights(&self) -> (Vec<f64>, f64) {
        let spec: Vec<f64> = self
            .specular_paths
            .iter()
            .map(|p| db_to_linear(p.relative_power_db))
            .collect();
        let diffuse = self.diffuse_floor_db.map(db_to_linear).unwrap_or(0.0);
        let total: f64 = spec.iter().sum::<f64>() + diffuse;
        (spec.iter().map(|w| w / total).collect(), diffuse / total)
    }

    fn check(&self) -> Result<()> {
        if !(self.rpm > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "rpm must be positive, got {}",
                self.rpm
            )));
        }
        if !(self.sample_rate_hz > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "sample rate must be positive, got {}",
                self.sample_rate_hz
            )));
        }
        if self.turns < 1 {
            return Err(Error::InvalidArgument(
                "scene needs at least one turn".into(),
            ));
        }
        if self.specular_paths.is_empty() && self.diffuse_floor_db.is_none() {
            return Err(Error::InvalidArgument(
                "scene has neither specular paths nor diffuse power".into(),
            ));
        }
        if !(self.distance_m > 0.0) {
            return Err(Error::InvalidArgument("distance must be positive".into()));
        }
        if self.k_factor_db.is_nan() {
            return Err(Error::InvalidArgument("k_factor_db is NaN".into()));
        }
        if let Some(fd) = self.doppler_decay_hz {
            if !(fd > 0.0) {
                return Err(Error::InvalidArgument(
                    "doppler decay must be positive".into(),
                ));
            }
        }
        Ok(())
    }
}

pub fn synthesize_scan_record(truth: &SceneTruth, sounder: &SounderConfig) -> Result<ScanRecord> {
    truth.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(truth.rng_seed);

    let (spec_w, diffuse_w) = truth.weights();
    let fading: Vec<Vec<f64>> = truth
        .specular_paths
        .iter()
        .map(|_| fading_power_sequence(truth, &mut rng))
        .collect();

    let budget_mw = db_to_linear(truth.omni_power_dbm(sounder));
    let noise_mw = db_to_linear(sounder.noise_floor_dbm);
    let pattern = &sounder.rx_azimuth_pattern;

    let samples_per_turn = truth.sample_rate_hz * truth.turn_period_s();
    let n = (truth.turns as f64 * samples_per_turn).round() as usize;
    let step_deg = 360.0 / samples_per_turn;

    let mut samples = Vec::with_capacity(n);
    for k in 0..n {
        let travel = k as f64 * step_deg;
        let turn = ((travel / 360.0) + 1e-9).floor();
        let azimuth = (travel - 360.0 * turn).clamp(0.0, 360.0);
        let azimuth = if azimuth >= 360.0 { 0.0 } else { azimuth };
        let t = (turn as usize).min(truth.turns - 1);

        let mut rel = diffuse_w;
        for ((path, w), fade) in truth.specular_paths.iter().zip(&spec_w).zip(&fading) {
            rel += w * fade[t] * pattern.normalized_gain(azimuth - path.azimuth_deg);
        }
        samples.push(Sample {
            time_s: k as f64 / truth.sample_rate_hz,
            azimuth_deg: azimuth,
            power_dbm: linear_to_db(budget_mw * rel + noise_mw),
            turn_index: turn as i64,
        });
    }

    Ok(ScanRecord {
        link_id: truth.link_id.clone(),
        street_id: truth.street_id.clone(),
        scenario: truth.scenario,
        distance_m: truth.distance_m,
        samples,
    })
}

/// Per-turn |h|^2 for one specular path, unit mean.
fn fading_power_sequence(truth: &SceneTruth, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let turns = truth.turns;
    if truth.k_factor_db == f64::INFINITY {
        return vec![1.0; turns];
    }
    let k = if truth.k_factor_db == f64::NEG_INFINITY {
        0.0
    } else {
        db_to_linear(truth.k_factor_db)
    };
    let los = (k / (k + 1.0)).sqrt();
    let scatter = (1.0 / (k + 1.0)).sqrt();

    let diffuse = match truth.doppler_decay_hz {
        None => (0..turns).map(|_| complex_normal(rng)).collect(),
        Some(decay_hz) => shaped_gaussian(turns, 1.0 / truth.turn_period_s(), decay_hz, rng),
    };
    diffuse
        .into_iter()
        .map(|d| (Complex64::new(los, 0.0) + d * scatter).norm_sqr())
        .collect()
}

/// Circularly-symmetric complex normal with unit variance.
fn complex_normal<R: Rng>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Unit-variance complex Gaussian sequence with PSD proportional to
/// `exp(-|f| / decay_hz)`, synthesised by shaping white noise in the
/// frequency domain.
fn shaped_gaussian<R: Rng>(len: usize, fs: f64, decay_hz: f64, rng: &mut R) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = (0..len).map(|_| complex_normal(rng)).collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(len).process(&mut buf);

    let freq = |k: usize| {
        let kk = if k <= len / 2 {
            k as f64
        } else {
            k as f64 - len as f64
        };
        kk * fs / len as f64
    };
    let shape: Vec<f64> = (0..len)
        .map(|k| (-freq(k).abs() / decay_hz).exp())
        .collect();
    let total: f64 = shape.iter().sum();
    for (x, s) in buf.iter_mut().zip(&shape) {
        *x *= (len as f64 * s / total).sqrt();
    }
    planner.plan_fft_inverse(len).process(&mut buf);
    let scale = 1.0 / len as f64;
    buf.iter().map(|x| x * scale).collect()
}
