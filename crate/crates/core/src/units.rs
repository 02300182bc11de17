//! Decibel conversions and physical constants.

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Thermal noise density at 290 K, dBm/Hz.
pub const THERMAL_NOISE_DBM_PER_HZ: f64 = -174.0;

#[inline]
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[inline]
pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

#[inline]
pub fn wavelength(freq_hz: f64) -> f64 {
    SPEED_OF_LIGHT / freq_hz
}

/// Mean of dB values taken in the linear domain, returned in dB.
pub fn linear_mean_db(values_db: &[f64]) -> f64 {
    let sum: f64 = values_db.iter().map(|&v| db_to_linear(v)).sum();
    linear_to_db(sum / values_db.len() as f64)
}
