//! Direct plus ground-reflected ray over a lossy dielectric half-space.
//!
//! Complex permittivity is `eps_r * (1 - j tan_delta)`; with the principal
//! square root this keeps `|Gamma| <= 1` for any passive ground. Both
//! reflection coefficients tend to -1 at grazing incidence.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::wavelength;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarization {
    Vertical,
    Horizontal,
}

/// Gaussian elevation beams, boresight horizontal; gain in dB is
/// `-12 (theta / hpbw)^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElevationBeam {
    pub tx_hpbw_deg: Option<f64>,
    pub rx_hpbw_deg: Option<f64>,
}

impl ElevationBeam {
    fn amplitude(&self, elevation_rad: f64) -> f64 {
        let theta = elevation_rad.to_degrees();
        let db = |hpbw: Option<f64>| hpbw.map_or(0.0, |h| -12.0 * (theta / h).powi(2));
        10f64.powf((db(self.tx_hpbw_deg) + db(self.rx_hpbw_deg)) / 20.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoRayGeometry {
    pub h_tx_m: f64,
    pub h_rx_m: f64,
    pub freq_hz: f64,
    pub epsilon_r: f64,
    pub loss_tangent: f64,
    #[serde(default = "default_polarization")]
    pub polarization: Polarization,
    #[serde(default)]
    pub beam: Option<ElevationBeam>,
}

fn default_polarization() -> Polarization {
    Polarization::Vertical
}

impl TwoRayGeometry {
    /// Open-field calibration: transmit horn at 1 m, receive horn on a
    /// 3 m mast, 28 GHz, ground with eps_r = 5 and tan delta = 0.1.
    pub fn open_field_28ghz() -> Self {
        Self {
            h_tx_m: 1.0,
            h_rx_m: 3.0,
            freq_hz: 28e9,
            epsilon_r: 5.0,
            loss_tangent: 0.1,
            polarization: Polarization::Vertical,
            beam: None,
        }
    }

    /// Adds the 10° receive / 55° transmit elevation beams.
    pub fn with_horn_beams(mut self) -> Self {
        self.beam = Some(ElevationBeam {
            tx_hpbw_deg: Some(55.0),
            rx_hpbw_deg: Some(10.0),
        });
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.h_tx_m > 0.0 && self.h_rx_m > 0.0) {
            return Err(Error::InvalidArgument(
                "antenna heights must be positive".into(),
            ));
        }
        if !(self.freq_hz > 0.0) {
            return Err(Error::InvalidArgument("frequency must be positive".into()));
        }
        if !(self.epsilon_r > 1.0) {
            return Err(Error::InvalidArgument("epsilon_r must exceed 1".into()));
        }
        if !(self.loss_tangent >= 0.0) {
            return Err(Error::InvalidArgument(
                "loss tangent must be non-negative".into(),
            ));
        }
        Ok(())
    }

    pub fn complex_permittivity(&self) -> Complex64 {
        Complex64::new(self.epsilon_r, -self.epsilon_r * self.loss_tangent)
    }
}

/// Fresnel reflection coefficient at `grazing_angle_rad` above the ground.
pub fn fresnel_reflection(grazing_angle_rad: f64, geom: &TwoRayGeometry) -> Complex64 {
    let eps = geom.complex_permittivity();
    let (sin, cos) = grazing_angle_rad.sin_cos();
    let root = (eps - cos * cos).sqrt();
    match geom.polarization {
        Polarization::Horizontal => (sin - root) / (sin + root),
        Polarization::Vertical => (eps * sin - root) / (eps * sin + root),
    }
}

/// Path gain in dB at ground distance `d_m`.
pub fn two_ray_path_gain(d_m: f64, geom: &TwoRayGeometry) -> Result<f64> {
    geom.validate()?;
    let grazing = (geom.h_tx_m + geom.h_rx_m).atan2(d_m);
    two_ray_path_gain_with_reflection(d_m, geom, fresnel_reflection(grazing, geom))
}

/// Two-ray path gain with a caller-supplied reflection coefficient.
pub fn two_ray_path_gain_with_reflection(
    d_m: f64,
    geom: &TwoRayGeometry,
    reflection: Complex64,
) -> Result<f64> {
    if !(d_m > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "distance must be positive, got {d_m}"
        )));
    }
    let lambda = wavelength(geom.freq_hz);
    let k = 2.0 * PI / lambda;
    let dh = geom.h_rx_m - geom.h_tx_m;
    let sh = geom.h_rx_m + geom.h_tx_m;
    let r_direct = d_m.hypot(dh);
    let r_reflected = d_m.hypot(sh);

    let (w_direct, w_reflected) = match geom.beam {
        Some(beam) => (beam.amplitude(dh.atan2(d_m)), beam.amplitude(sh.atan2(d_m))),
        None => (1.0, 1.0),
    };

    let direct = Complex64::from_polar(w_direct / r_direct, -k * r_direct);
    let reflected = reflection * Complex64::from_polar(w_reflected / r_reflected, -k * r_reflected);
    let field = (direct + reflected) * (lambda / (4.0 * PI));
    Ok(20.0 * field.norm().log10())
}
