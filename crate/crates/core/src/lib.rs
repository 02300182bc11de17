//! Channel modeling toolkit for suburban fixed wireless access at cm/mm-wave
//! bands.
//!
//! The crate is organised around the processing chain of a rotating-horn
//! narrowband sounder:
//!
//! - [`scan`]: angular scan records, their file formats, validation and a
//!   synthetic scene generator used as ground truth by the estimators.
//! - [`metrics`]: omni-equivalent path gain, effective azimuth gain, Rician
//!   K-factor, turn-to-turn fluctuation and Doppler statistics.
//! - [`pathloss`]: Friis, two-ray ground reflection, power-law path-gain
//!   models and their regression fits, plus the UMi NLOS baseline.
//! - [`coverage`]: Monte Carlo link budgets and coverage-quantile Shannon
//!   rate versus distance.
//! - [`cli`]: the `fwa` command-line front end.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod coverage;
pub mod error;
pub mod metrics;
pub mod pathloss;
pub mod scan;
pub mod units;

pub use error::{Error, Result};
