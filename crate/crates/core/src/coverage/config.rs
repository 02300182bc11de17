use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::LogNormalDb;

/// How the measured azimuth-gain distributions reduce the nominal antenna
/// gains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GainReductionMode {
    /// Nominal gains.
    #[default]
    None,
    /// Nominal minus the mean deficit of the distribution.
    FixedOffset,
    /// Nominal minus a per-link deficit drawn from the distribution.
    Sampled,
}

impl GainReductionMode {
    pub const ALL: [GainReductionMode; 3] = [
        GainReductionMode::None,
        GainReductionMode::FixedOffset,
        GainReductionMode::Sampled,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GainReductionMode::None => "none",
            GainReductionMode::FixedOffset => "fixed_offset",
            GainReductionMode::Sampled => "sampled",
        }
    }
}

impl fmt::Display for GainReductionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GainReductionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "unknown gain reduction mode '{s}' (expected none, fixed_offset or sampled)"
                ))
            })
    }
}

fn default_bs_gain_dist() -> LogNormalDb {
    LogNormalDb {
        mu_db: 12.4,
        sigma_db: 1.5,
    }
}

fn default_cpe_gain_dist() -> LogNormalDb {
    LogNormalDb {
        mu_db: 9.5,
        sigma_db: 1.5,
    }
}

fn default_nominal_azim_gain() -> f64 {
    14.5
}

fn default_label() -> String {
    "system".into()
}

/// Downlink system parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    #[serde(default = "default_label")]
    pub label: String,
    pub carrier_hz: f64,
    pub bandwidth_hz: f64,
    pub bs_tx_power_dbm: f64,
    pub bs_antenna_gain_dbi: f64,
    pub cpe_antenna_gain_dbi: f64,
    pub noise_figure_db: f64,
    pub pathloss_model: String,
    #[serde(default)]
    pub gain_reduction_mode: GainReductionMode,
    #[serde(default = "default_bs_gain_dist")]
    pub bs_gain_dist: LogNormalDb,
    #[serde(default = "default_cpe_gain_dist")]
    pub cpe_gain_dist: LogNormalDb,
    #[serde(default = "default_nominal_azim_gain")]
    pub nominal_measured_azim_gain_db: f64,
}

impl SystemConfig {
    /// 28 GHz, 800 MHz, 28 dBm into a 23 dBi base station antenna, 11 dBi CPE.
    pub fn reference_28ghz(pathloss_model: &str) -> Self {
        Self {
            label: format!("28ghz_{pathloss_model}"),
            carrier_hz: 28e9,
            bandwidth_hz: 800e6,
            bs_tx_power_dbm: 28.0,
            bs_antenna_gain_dbi: 23.0,
            cpe_antenna_gain_dbi: 11.0,
            noise_figure_db: 9.0,
            pathloss_model: pathloss_model.into(),
            gain_reduction_mode: GainReductionMode::None,
            bs_gain_dist: default_bs_gain_dist(),
            cpe_gain_dist: default_cpe_gain_dist(),
            nominal_measured_azim_gain_db: default_nominal_azim_gain(),
        }
    }

    /// 2 GHz small cell with UMi NLOS propagation and 5 dBi antennas.
    pub fn baseline_2ghz() -> Self {
        Self {
            label: "2ghz_umi_nlos".into(),
            carrier_hz: 2e9,
            bandwidth_hz: 20e6,
            bs_tx_power_dbm: 30.0,
            bs_antenna_gain_dbi: 5.0,
            cpe_antenna_gain_dbi: 5.0,
            noise_figure_db: 9.0,
            pathloss_model: "umi_nlos_2ghz".into(),
            gain_reduction_mode: GainReductionMode::None,
            bs_gain_dist: default_bs_gain_dist(),
            cpe_gain_dist: default_cpe_gain_dist(),
            nominal_measured_azim_gain_db: default_nominal_azim_gain(),
        }
    }

    pub fn with_mode(mut self, mode: GainReductionMode) -> Self {
        self.gain_reduction_mode = mode;
        self
    }

    pub fn eirp_dbm(&self) -> f64 {
        self.bs_tx_power_dbm + self.bs_antenna_gain_dbi
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if !(self.bandwidth_hz > 0.0) {
            return bad(format!(
                "bandwidth_hz must be positive, got {}",
                self.bandwidth_hz
            ));
        }
        if !(self.carrier_hz > 0.0) {
            return bad(format!(
                "carrier_hz must be positive, got {}",
                self.carrier_hz
            ));
        }
        let finite = [
            self.bs_tx_power_dbm,
            self.bs_antenna_gain_dbi,
            self.cpe_antenna_gain_dbi,
            self.noise_figure_db,
            self.nominal_measured_azim_gain_db,
        ];
        if finite.iter().any(|v| !v.is_finite()) {
            return bad("power and gain values must be finite".into());
        }
        for d in [self.bs_gain_dist, self.cpe_gain_dist] {
            LogNormalDb::new(d.mu_db, d.sigma_db).map_err(|e| Error::Config(e.to_string()))?;
        }
        Ok(())
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(s).map_err(|e| Error::Config(e.message().to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn default_links() -> usize {
    10_000
}

fn default_quantile() -> f64 {
    0.1
}

/// Distances and Monte Carlo settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationPlan {
    pub distances_m: Vec<f64>,
    #[serde(default = "default_links")]
    pub links_per_distance: usize,
    #[serde(default = "default_quantile")]
    pub coverage_quantile: f64,
    pub seed: u64,
}

pub const MIN_LINKS_PER_DISTANCE: usize = 100;

impl SimulationPlan {
    pub fn new(distances_m: Vec<f64>, seed: u64) -> Result<Self> {
        let plan = Self {
            distances_m,
            links_per_distance: default_links(),
            coverage_quantile: default_quantile(),
            seed,
        };
        plan.validate()?;
        Ok(plan)
    }

    pub fn validate(&self) -> Result<()> {
        if self.distances_m.is_empty() {
            return Err(Error::InvalidArgument("plan has no distances".into()));
        }
        if self
            .distances_m
            .iter()
            .any(|d| !(d.is_finite() && *d > 0.0))
        {
            return Err(Error::InvalidArgument("distances must be positive".into()));
        }
        if self.distances_m.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument(
                "distances must be strictly increasing".into(),
            ));
        }
        if self.links_per_distance < MIN_LINKS_PER_DISTANCE {
            return Err(Error::InvalidArgument(format!(
                "links_per_distance must be at least {MIN_LINKS_PER_DISTANCE}, got {}",
                self.links_per_distance
            )));
        }
        if !(self.coverage_quantile > 0.0 && self.coverage_quantile < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "coverage quantile must be in (0, 1), got {}",
                self.coverage_quantile
            )));
        }
        Ok(())
    }
}

/// Parses `start:stop:step` into an inclusive list of distances.
pub fn parse_distance_range(s: &str) -> Result<Vec<f64>> {
    let bad = || Error::InvalidArgument(format!("expected start:stop:step, got '{s}'"));
    let parts: Vec<f64> = s
        .split(':')
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    let [start, stop, step] = parts[..] else {
        return Err(bad());
    };
    if !(start > 0.0 && stop >= start && step > 0.0) || !stop.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "distance range '{s}' needs 0 < start <= stop and step > 0"
        )));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| start + i as f64 * step).collect())
}
