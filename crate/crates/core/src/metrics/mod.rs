//! Measurement mathematics on angular scan records: omni-equivalent path
//! gain, nominal and effective azimuth gain, per-turn temporal series and
//! their Rician, fluctuation and Doppler statistics.

mod doppler;
mod kfactor;
mod profile;
mod stats;
mod summary;
mod temporal;

pub use doppler::{doppler_spectrum, DopplerSpectrum, MAX_SEGMENT_LEN, MIN_SERIES_LEN};
pub use kfactor::{estimate_k_factor_mom, sample_rician, RicianFit};
pub use profile::{
    angular_profile, azimuth_average_power, best_on_average_angle, compute_path_gain,
    effective_azimuth_gain, nominal_azimuth_gain, path_gain_from_average, AngularProfile,
    BIN_COUNT,
};
pub use stats::{empirical_cdf, fit_lognormal_db, EmpiricalCdf, LogNormalDb};
pub use summary::{link_metrics, LinkMetrics};
pub use temporal::{
    beamswitch_gain_db, temporal_series, turn_fluctuation_stats, FluctuationStats, SeriesMode,
    TemporalSeries, FIXED_ANGLE_HALF_WIDTH_DEG,
};
