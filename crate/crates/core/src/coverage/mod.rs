//! Monte Carlo downlink coverage: per-link SNR draws, the SNR exceeded by
//! a coverage fraction of links at each distance, and the corresponding
//! Shannon rate.
//!
//! Every link draws its randomness from a ChaCha8 stream keyed by
//! `(seed, distance, link index)`, so results do not depend on how the
//! work is split across threads, and all gain-reduction modes see the same
//! shadowing and gain draws.

mod config;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

pub use config::{parse_distance_range, GainReductionMode, SimulationPlan, SystemConfig};

use crate::error::{Error, Result};
use crate::metrics::EmpiricalCdf;
use crate::pathloss::{ModelCatalog, PathGainModel};
use crate::units::{db_to_linear, THERMAL_NOISE_DBM_PER_HZ};

/// Thermal noise power in dBm over `bandwidth_hz` with a receiver noise
/// figure.
pub fn noise_power(bandwidth_hz: f64, noise_figure_db: f64) -> Result<f64> {
    if !(bandwidth_hz > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "bandwidth must be positive, got {bandwidth_hz}"
        )));
    }
    Ok(THERMAL_NOISE_DBM_PER_HZ + 10.0 * bandwidth_hz.log10() + noise_figure_db)
}

/// Shannon rate in bit/s for an SNR in dB.
pub fn shannon_rate(bandwidth_hz: f64, snr_db: f64) -> f64 {
    bandwidth_hz * (1.0 + db_to_linear(snr_db)).log2()
}

/// Identifies one simulated link.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinkKey {
    pub seed: u64,
    pub link_index: u64,
}

fn link_rng(key: LinkKey, d_m: f64) -> ChaCha8Rng {
    let mut bytes = [0u8; 32];
    bytes[..8].copy_from_slice(&key.seed.to_le_bytes());
    bytes[8..16].copy_from_slice(&d_m.to_bits().to_le_bytes());
    bytes[16..24].copy_from_slice(&key.link_index.to_le_bytes());
    ChaCha8Rng::from_seed(bytes)
}

/// A configuration with its path-gain model resolved and noise computed.
#[derive(Debug, Clone)]
pub struct LinkBudget {
    cfg: SystemConfig,
    model: PathGainModel,
    noise_dbm: f64,
}

impl LinkBudget {
    pub fn new(cfg: &SystemConfig, catalog: &ModelCatalog) -> Result<Self> {
        cfg.validate()?;
        let model = catalog.get(&cfg.pathloss_model)?.model;
        Ok(Self {
            cfg: cfg.clone(),
            model,
            noise_dbm: noise_power(cfg.bandwidth_hz, cfg.noise_figure_db)?,
        })
    }

    pub fn config(&self) -> &SystemConfig {
        &self.cfg
    }

    pub fn noise_dbm(&self) -> f64 {
        self.noise_dbm
    }

    fn reduced_gain(&self, nominal_dbi: f64, dist_mu: f64, draw: f64) -> f64 {
        let reference = self.cfg.nominal_measured_azim_gain_db;
        match self.cfg.gain_reduction_mode {
            GainReductionMode::None => nominal_dbi,
            GainReductionMode::FixedOffset => nominal_dbi - (reference - dist_mu),
            GainReductionMode::Sampled => nominal_dbi - (reference - draw).max(0.0),
        }
    }

    /// Effective (BS, CPE) antenna gains for the given log-normal draws.
    pub fn effective_gains(&self, bs_draw_db: f64, cpe_draw_db: f64) -> (f64, f64) {
        let c = &self.cfg;
        (
            self.reduced_gain(c.bs_antenna_gain_dbi, c.bs_gain_dist.mu_db, bs_draw_db),
            self.reduced_gain(c.cpe_antenna_gain_dbi, c.cpe_gain_dist.mu_db, cpe_draw_db),
        )
    }

    /// SNR in dB for one link at `d_m`.
    pub fn link_snr(&self, d_m: f64, key: LinkKey) -> Result<f64> {
        Ok(self.link_snr_with_mean(self.model.mean_db(d_m)?, d_m, key))
    }

    fn link_snr_with_mean(&self, mean_path_gain_db: f64, d_m: f64, key: LinkKey) -> f64 {
        let mut rng = link_rng(key, d_m);
        let shadow_z: f64 = rng.sample(StandardNormal);
        let path_gain = mean_path_gain_db + self.model.sigma_db() * shadow_z;
        let bs_z: f64 = rng.sample(StandardNormal);
        let cpe_z: f64 = rng.sample(StandardNormal);
        let c = &self.cfg;
        let (bs_gain, cpe_gain) = self.effective_gains(
            c.bs_gain_dist.mu_db + c.bs_gain_dist.sigma_db * bs_z,
            c.cpe_gain_dist.mu_db + c.cpe_gain_dist.sigma_db * cpe_z,
        );
        c.bs_tx_power_dbm + bs_gain + path_gain + cpe_gain - self.noise_dbm
    }

    /// SNR exceeded by `1 - coverage_quantile` of the plan's links at `d_m`.
    pub fn coverage_snr(&self, plan: &SimulationPlan, d_m: f64) -> Result<f64> {
        let mean = self.model.mean_db(d_m)?;
        let snrs: Vec<f64> = (0..plan.links_per_distance as u64)
            .into_par_iter()
            .map(|link_index| {
                let key = LinkKey {
                    seed: plan.seed,
                    link_index,
                };
                self.link_snr_with_mean(mean, d_m, key)
            })
            .collect();
        Ok(EmpiricalCdf::new(snrs)?.quantile(plan.coverage_quantile))
    }

    pub fn rate_vs_distance(&self, plan: &SimulationPlan) -> Result<Vec<RatePoint>> {
        plan.validate()?;
        plan.distances_m
            .par_iter()
            .map(|&d| {
                let gamma = self.coverage_snr(plan, d)?;
                Ok(RatePoint {
                    distance_m: d,
                    gamma_q_db: gamma,
                    rate_bps: shannon_rate(self.cfg.bandwidth_hz, gamma),
                })
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatePoint {
    pub distance_m: f64,
    pub gamma_q_db: f64,
    pub rate_bps: f64,
}

/// One output row of a rate table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateRow {
    pub distance_m: f64,
    pub gamma_q_db: f64,
    pub rate_bps: f64,
    pub config_label: String,
    pub mode: GainReductionMode,
}

pub const RATE_CSV_HEADER: [&str; 5] = [
    "distance_m",
    "gamma_q_db",
    "rate_bps",
    "config_label",
    "mode",
];

pub fn sample_link_snr(
    cfg: &SystemConfig,
    catalog: &ModelCatalog,
    d_m: f64,
    key: LinkKey,
) -> Result<f64> {
    LinkBudget::new(cfg, catalog)?.link_snr(d_m, key)
}

pub fn coverage_snr(
    cfg: &SystemConfig,
    catalog: &ModelCatalog,
    plan: &SimulationPlan,
    d_m: f64,
) -> Result<f64> {
    plan.validate()?;
    LinkBudget::new(cfg, catalog)?.coverage_snr(plan, d_m)
}

pub fn rate_vs_distance(
    cfg: &SystemConfig,
    catalog: &ModelCatalog,
    plan: &SimulationPlan,
) -> Result<Vec<RatePoint>> {
    LinkBudget::new(cfg, catalog)?.rate_vs_distance(plan)
}

/// Rate curves for several configurations over the same distances and
/// seed, concatenated in configuration order.
pub fn scenario_compare(
    cfgs: &[SystemConfig],
    catalog: &ModelCatalog,
    plan: &SimulationPlan,
) -> Result<Vec<RateRow>> {
    if cfgs.is_empty() {
        return Err(Error::InvalidArgument(
            "scenario_compare needs a configuration".into(),
        ));
    }
    let mut rows = Vec::new();
    for cfg in cfgs {
        for p in rate_vs_distance(cfg, catalog, plan)? {
            rows.push(RateRow {
                distance_m: p.distance_m,
                gamma_q_db: p.gamma_q_db,
                rate_bps: p.rate_bps,
                config_label: cfg.label.clone(),
                mode: cfg.gain_reduction_mode,
            });
        }
    }
    Ok(rows)
}

/// Writes rows as CSV. Floats use the shortest round-trip representation
/// so identical inputs give identical bytes.
pub fn write_rate_csv<W: std::io::Write>(writer: W, rows: &[RateRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let ser = |e: csv::Error| Error::Serialization(e.to_string());
    w.write_record(RATE_CSV_HEADER).map_err(ser)?;
    for r in rows {
        w.write_record([
            r.distance_m.to_string(),
            r.gamma_q_db.to_string(),
            r.rate_bps.to_string(),
            r.config_label.clone(),
            r.mode.as_str().to_string(),
        ])
        .map_err(ser)?;
    }
    w.flush().map_err(|e| Error::Serialization(e.to_string()))
}
