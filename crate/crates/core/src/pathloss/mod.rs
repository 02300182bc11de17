//! Closed-form propagation models and path-gain regression.
//!
//! Path gain is expressed in dB (negative for physical links). Power-law
//! models follow `A + 10 n log10(d) + N(0, sigma)` with `A` the 1 m
//! intercept and `n` the (negative) distance slope.

mod catalog;
mod fit;
mod free_space;
mod power_law;
mod two_ray;

pub use catalog::{CatalogEntry, ModelCatalog, PathGainModel};
pub use fit::{common_slope_fit, fit_power_law, CommonSlopeFit, FitDataset, CI_LEVEL};
pub use free_space::{
    first_fresnel_radius, friis_path_gain, umi_nlos_path_loss, UMI_VALID_RANGE_M,
};
pub use power_law::{power_law_eval, power_law_sample, PowerLawModel};
pub use two_ray::{
    fresnel_reflection, two_ray_path_gain, two_ray_path_gain_with_reflection, ElevationBeam,
    Polarization, TwoRayGeometry,
};
