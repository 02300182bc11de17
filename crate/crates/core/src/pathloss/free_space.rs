use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::units::wavelength;

/// Distance range over which the UMi NLOS formula is specified.
pub const UMI_VALID_RANGE_M: (f64, f64) = (10.0, 2000.0);

/// Free-space path gain, `-20 log10(4 pi d / lambda)`.
pub fn friis_path_gain(d_m: f64, freq_hz: f64) -> Result<f64> {
    if !(d_m > 0.0) || !(freq_hz > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "friis needs positive distance and frequency, got d={d_m} f={freq_hz}"
        )));
    }
    Ok(-20.0 * (4.0 * PI * d_m / wavelength(freq_hz)).log10())
}

/// Maximum radius of the first Fresnel zone at distances `d1_m`, `d2_m`
/// from the two ends.
pub fn first_fresnel_radius(d1_m: f64, d2_m: f64, freq_hz: f64) -> Result<f64> {
    if !(d1_m >= 0.0) || !(d2_m >= 0.0) || !(freq_hz > 0.0) {
        return Err(Error::InvalidArgument(
            "Fresnel radius needs non-negative distances and positive frequency".into(),
        ));
    }
    let total = d1_m + d2_m;
    if total == 0.0 {
        return Err(Error::InvalidArgument("d1 + d2 must be positive".into()));
    }
    Ok((wavelength(freq_hz) * d1_m * d2_m / total).sqrt())
}

/// UMi NLOS path loss (positive dB): `22.7 + 36.7 log10(d) + 26 log10(f_GHz)`.
pub fn umi_nlos_path_loss(d_m: f64, freq_ghz: f64) -> Result<f64> {
    if !(d_m > 0.0) || !(freq_ghz > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "UMi path loss needs positive distance and frequency, got d={d_m} f={freq_ghz}"
        )));
    }
    let (lo, hi) = UMI_VALID_RANGE_M;
    if d_m < lo || d_m > hi {
        log::warn!("UMi NLOS evaluated at {d_m} m, outside {lo}-{hi} m");
    }
    Ok(22.7 + 36.7 * d_m.log10() + 26.0 * freq_ghz.log10())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn friis_at_28ghz() {
        assert!((friis_path_gain(1.0, 28e9).unwrap() + 61.4).abs() < 0.05);
        let g100 = friis_path_gain(100.0, 28e9).unwrap();
        let g1 = friis_path_gain(1.0, 28e9).unwrap();
        assert!((g100 - (g1 - 40.0)).abs() < 1e-9);
        assert!((g100 + 101.4).abs() < 0.05);
    }

    #[test]
    fn friis_doubling() {
        let a = friis_path_gain(37.0, 28e9).unwrap();
        let b = friis_path_gain(74.0, 28e9).unwrap();
        assert!((a - b - 6.0206).abs() < 1e-4);
    }

    #[test]
    fn friis_rejects_non_positive() {
        assert!(friis_path_gain(0.0, 28e9).is_err());
        assert!(friis_path_gain(1.0, -1.0).is_err());
    }

    #[test]
    fn fresnel_midpoint() {
        let r = first_fresnel_radius(50.0, 50.0, 28e9).unwrap();
        let expected = (wavelength(28e9) * 25.0).sqrt();
        assert!((r - expected).abs() < 1e-12);
        assert!((r - 0.517).abs() < 1e-3, "{r}");
        assert_eq!(first_fresnel_radius(0.0, 80.0, 28e9).unwrap(), 0.0);
        let (a, b) = (
            first_fresnel_radius(30.0, 70.0, 28e9).unwrap(),
            first_fresnel_radius(70.0, 30.0, 28e9).unwrap(),
        );
        assert!((a - b).abs() < 1e-15);
        assert!(first_fresnel_radius(0.0, 0.0, 28e9).is_err());
    }

    #[test]
    fn umi_values() {
        assert!((umi_nlos_path_loss(100.0, 2.0).unwrap() - 103.927).abs() < 1e-3);
        assert!((umi_nlos_path_loss(1000.0, 2.0).unwrap() - 140.627).abs() < 1e-3);
        assert!(umi_nlos_path_loss(0.0, 2.0).is_err());
    }

    #[test]
    fn umi_monotone() {
        let mut prev = 0.0;
        for d in [10.0, 20.0, 50.0, 100.0, 500.0, 2000.0] {
            let pl = umi_nlos_path_loss(d, 2.0).unwrap();
            assert!(pl > prev);
            prev = pl;
        }
        assert!(umi_nlos_path_loss(100.0, 3.5).unwrap() > umi_nlos_path_loss(100.0, 2.0).unwrap());
    }
}
