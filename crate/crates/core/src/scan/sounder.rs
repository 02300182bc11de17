use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::{db_to_linear, linear_to_db};

/// Receive gain versus azimuth on a uniform grid covering the full circle,
/// starting at 0° (boresight). Values are in dB with arbitrary reference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PatternSpec", into = "PatternSpec")]
pub struct AzimuthPattern {
    gains_db: Vec<f64>,
}

/// File representation of an azimuth pattern.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PatternSpec {
    /// Uniformly spaced samples over [0, 360).
    Sampled { gains_db: Vec<f64> },
    /// Gaussian main lobe with a flat sidelobe floor solved so that the
    /// peak-to-average ratio equals `azimuth_gain_db`.
    Horn { hpbw_deg: f64, azimuth_gain_db: f64 },
}

impl TryFrom<PatternSpec> for AzimuthPattern {
    type Error = Error;

    fn try_from(spec: PatternSpec) -> Result<Self> {
        match spec {
            PatternSpec::Sampled { gains_db } => AzimuthPattern::from_samples(gains_db),
            PatternSpec::Horn {
                hpbw_deg,
                azimuth_gain_db,
            } => AzimuthPattern::horn(hpbw_deg, azimuth_gain_db),
        }
    }
}

impl From<AzimuthPattern> for PatternSpec {
    fn from(p: AzimuthPattern) -> Self {
        PatternSpec::Sampled {
            gains_db: p.gains_db,
        }
    }
}

const HORN_GRID: usize = 1440;

impl AzimuthPattern {
    pub fn from_samples(gains_db: Vec<f64>) -> Result<Self> {
        if gains_db.is_empty() {
            return Err(Error::Config(
                "azimuth pattern needs at least one sample".into(),
            ));
        }
        if gains_db.iter().any(|g| !g.is_finite()) {
            return Err(Error::Config(
                "azimuth pattern contains non-finite gain".into(),
            ));
        }
        Ok(Self { gains_db })
    }

    pub fn uniform() -> Self {
        Self {
            gains_db: vec![0.0; 360],
        }
    }

    /// Ideal sector: 0 dB over `width_deg` centred on boresight, `floor_db`
    /// elsewhere, sampled on a 0.25° grid.
    pub fn sector(width_deg: f64, floor_db: f64) -> Result<Self> {
        let step = 360.0 / HORN_GRID as f64;
        let gains = (0..HORN_GRID)
            .map(|i| {
                let off = wrap_offset(i as f64 * step);
                if off >= -width_deg / 2.0 && off < width_deg / 2.0 {
                    0.0
                } else {
                    floor_db
                }
            })
            .collect();
        Self::from_samples(gains)
    }

    /// Gaussian beam of half-power width `hpbw_deg` whose sidelobe floor is
    /// chosen so the pattern's peak-to-average ratio is `azimuth_gain_db`.
    pub fn horn(hpbw_deg: f64, azimuth_gain_db: f64) -> Result<Self> {
        if !(hpbw_deg > 0.0 && hpbw_deg < 360.0) {
            return Err(Error::Config(format!("hpbw {hpbw_deg} outside (0, 360)")));
        }
        let step = 360.0 / HORN_GRID as f64;
        let lobe: Vec<f64> = (0..HORN_GRID)
            .map(|i| {
                let off = wrap_offset(i as f64 * step) / hpbw_deg;
                db_to_linear(-12.0 * off * off)
            })
            .collect();
        let pta = |floor: f64| {
            let mean = lobe.iter().map(|&g| g.max(floor)).sum::<f64>() / HORN_GRID as f64;
            -linear_to_db(mean)
        };
        let target = azimuth_gain_db;
        if target > pta(0.0) + 1e-9 || target <= 0.0 {
            return Err(Error::Config(format!(
                "azimuth gain {target} dB not reachable with a {hpbw_deg}° beam (max {:.2} dB)",
                pta(0.0)
            )));
        }
        // peak-to-average decreases monotonically as the floor rises
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if pta(mid) > target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let floor = 0.5 * (lo + hi);
        let gains = lobe.iter().map(|&g| linear_to_db(g.max(floor))).collect();
        Self::from_samples(gains)
    }

    pub fn gains_db(&self) -> &[f64] {
        &self.gains_db
    }

    pub fn step_deg(&self) -> f64 {
        360.0 / self.gains_db.len() as f64
    }

    pub fn peak_db(&self) -> f64 {
        self.gains_db
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn mean_linear(&self) -> f64 {
        self.gains_db.iter().map(|&g| db_to_linear(g)).sum::<f64>() / self.gains_db.len() as f64
    }

    /// Peak-to-average ratio in dB.
    pub fn peak_to_average_db(&self) -> f64 {
        self.peak_db() - linear_to_db(self.mean_linear())
    }

    /// Linear gain at `offset_deg` from boresight, normalised so that the
    /// circular mean is one. Linear interpolation between grid points.
    pub fn normalized_gain(&self, offset_deg: f64) -> f64 {
        self.interp_linear(offset_deg) / self.mean_linear()
    }

    fn interp_linear(&self, offset_deg: f64) -> f64 {
        let n = self.gains_db.len();
        let pos = offset_deg.rem_euclid(360.0) / self.step_deg();
        let i0 = (pos.floor() as usize) % n;
        let i1 = (i0 + 1) % n;
        let frac = pos - pos.floor();
        let g0 = db_to_linear(self.gains_db[i0]);
        let g1 = db_to_linear(self.gains_db[i1]);
        g0 + (g1 - g0) * frac
    }
}

/// Maps an azimuth in [0, 360) to a signed offset in (-180, 180].
fn wrap_offset(az: f64) -> f64 {
    let a = az.rem_euclid(360.0);
    if a > 180.0 {
        a - 360.0
    } else {
        a
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SounderConfig {
    pub tx_power_dbm: f64,
    pub tx_gain_dbi: f64,
    /// Total receive antenna gain (azimuth and elevation).
    pub rx_total_gain_dbi: f64,
    pub rx_azimuth_pattern: AzimuthPattern,
    pub noise_floor_dbm: f64,
}

impl SounderConfig {
    /// 28 GHz sounder: 22 dBm CW into a 10 dBi transmit horn; 24 dBi, 10°
    /// receive horn with 14.5 dB azimuth peak-to-average; -126 dBm floor.
    pub fn reference_28ghz() -> Self {
        Self {
            tx_power_dbm: 22.0,
            tx_gain_dbi: 10.0,
            rx_total_gain_dbi: 24.0,
            rx_azimuth_pattern: AzimuthPattern::horn(10.0, 14.5)
                .expect("reference horn parameters are reachable"),
            noise_floor_dbm: -126.0,
        }
    }

    /// Nominal azimuth gain of the receive pattern (peak-to-average).
    pub fn rx_azimuth_gain_db(&self) -> f64 {
        self.rx_azimuth_pattern.peak_to_average_db()
    }

    /// Elevation gain: total gain less the azimuth share.
    pub fn rx_elevation_gain_db(&self) -> f64 {
        self.rx_total_gain_dbi - self.rx_azimuth_gain_db()
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::Config(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn horn_hits_requested_azimuth_gain() {
        let p = AzimuthPattern::horn(10.0, 14.5).unwrap();
        assert!((p.peak_to_average_db() - 14.5).abs() < 1e-6);
        // half-power at +/- 5 deg
        let g5 = linear_to_db(p.interp_linear(5.0)) - p.peak_db();
        assert!((g5 + 3.0).abs() < 0.05, "{g5}");
    }

    #[test]
    fn horn_rejects_unreachable_gain() {
        assert!(AzimuthPattern::horn(10.0, 16.0).is_err());
        assert!(AzimuthPattern::horn(0.0, 10.0).is_err());
    }

    #[test]
    fn normalized_gain_has_unit_mean() {
        let p = AzimuthPattern::horn(10.0, 14.5).unwrap();
        let n = 3600;
        let mean: f64 = (0..n)
            .map(|i| p.normalized_gain(i as f64 * 0.1))
            .sum::<f64>()
            / n as f64;
        assert!((mean - 1.0).abs() < 1e-3, "{mean}");
    }

    #[test]
    fn reference_sounder_elevation_gain() {
        let s = SounderConfig::reference_28ghz();
        assert!((s.rx_elevation_gain_db() - 9.5).abs() < 1e-6);
    }

    #[test]
    fn sounder_toml_with_horn_spec() {
        let s = SounderConfig::from_toml_str(
            r#"
            tx_power_dbm = 22.0
            tx_gain_dbi = 10.0
            rx_total_gain_dbi = 24.0
            noise_floor_dbm = -126.0
            [rx_azimuth_pattern]
            kind = "horn"
            hpbw_deg = 10.0
            azimuth_gain_db = 14.5
            "#,
        )
        .unwrap();
        assert!((s.rx_azimuth_gain_db() - 14.5).abs() < 1e-6);
    }
}
