//! The `fwa` command-line front end.
//!
//! Every command writes its outputs atomically and leaves a
//! `<output>.manifest.json` beside the primary output recording the
//! inputs, a digest of the effective configuration, the seed and the tool
//! version.

mod measure;
mod model;
mod output;
mod simulate;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::pathloss::ModelCatalog;

pub use output::{manifest_path, sha256_hex, Outputs, RunManifest};

#[derive(Debug, Parser)]
#[command(name = "fwa", version, about = "Fixed wireless access channel toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-link path gain, effective azimuth gain and temporal statistics
    /// from scan records.
    Metrics(MetricsArgs),
    /// Fit a power-law path-gain model to (distance, path gain) points.
    Fit(FitArgs),
    /// Synthesize scan records from scenes, or path-gain points from a model.
    Synth(SynthArgs),
    /// Two-ray ground-reflection path gain versus distance.
    Tworay(TworayArgs),
    /// Monte Carlo coverage SNR and rate versus distance.
    Simulate(SimulateArgs),
    /// Summary tables from `metrics` or `simulate` output.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    /// Scan dataset, CSV or JSON (by extension).
    #[arg(long)]
    pub input: PathBuf,
    /// Per-link metrics CSV.
    #[arg(long)]
    pub output: PathBuf,
    /// Sounder configuration TOML; defaults to the 28 GHz reference sounder.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Also write one Doppler PSD CSV per link into this directory.
    #[arg(long)]
    pub psd_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// CSV with `distance_m` and `path_gain_db` columns.
    #[arg(long)]
    pub input: PathBuf,
    /// Catalog TOML holding the fitted entry.
    #[arg(long)]
    pub output: PathBuf,
    /// Residuals CSV; defaults to `<output stem>.residuals.csv`.
    #[arg(long)]
    pub residuals: Option<PathBuf>,
    /// Catalog name of the fitted model.
    #[arg(long, default_value = "fitted")]
    pub name: String,
    /// Hold the 1 m intercept at this value (dB) and fit the slope only.
    #[arg(long, allow_hyphen_values = true)]
    pub fixed_intercept: Option<f64>,
    /// Keep only rows whose `scenario` column equals this value.
    #[arg(long)]
    pub scenario: Option<String>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Scene TOML (one scene, or a `[[scene]]` array).
    #[arg(long, required_unless_present = "model", conflicts_with = "model")]
    pub config: Option<PathBuf>,
    /// Sounder configuration TOML for scene synthesis.
    #[arg(long)]
    pub sounder: Option<PathBuf>,
    /// Draw path-gain points from this catalog model instead of scenes.
    #[arg(long)]
    pub model: Option<String>,
    /// Extra catalog TOML merged over the built-in models.
    #[arg(long)]
    pub catalog: Option<PathBuf>,
    /// Distances `start:stop:step` for --model; default is a street route
    /// sampled every 1 m to 70 m and every 3 m to 200 m.
    #[arg(long)]
    pub distances: Option<String>,
    /// Number of points for --model (distances repeat as needed).
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct TworayArgs {
    /// Geometry TOML; defaults to the 28 GHz open-field setup.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, default_value = "20:200:0.5")]
    pub distances: String,
    /// Weight both rays by the horn elevation patterns.
    #[arg(long)]
    pub beams: bool,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Simulation TOML with `[[system]]` tables and an optional `[plan]`.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Extra catalog TOML merged over the built-in models.
    #[arg(long)]
    pub catalog: Option<PathBuf>,
    /// Override the path-gain model of every system.
    #[arg(long)]
    pub model: Option<String>,
    /// none, fixed_offset, sampled, or all (one curve per mode).
    #[arg(long)]
    pub mode: Option<String>,
    #[arg(long)]
    pub distances: Option<String>,
    #[arg(long)]
    pub links: Option<usize>,
    #[arg(long)]
    pub quantile: Option<f64>,
    #[arg(long)]
    pub seed: u64,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Output of `metrics` or `simulate`.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    /// Distances (m, comma separated) at which rate tables are read off.
    #[arg(long, value_delimiter = ',', default_values_t = [100.0, 200.0])]
    pub at: Vec<f64>,
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Metrics(a) => measure::metrics(a),
        Command::Fit(a) => model::fit(a),
        Command::Synth(a) => model::synth(a),
        Command::Tworay(a) => model::tworay(a),
        Command::Simulate(a) => simulate::simulate(a),
        Command::Report(a) => measure::report(a),
    }
}

pub(crate) fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub(crate) fn load_catalog(path: Option<&Path>) -> Result<ModelCatalog> {
    match path {
        Some(p) => ModelCatalog::builtin_with_file(p),
        None => Ok(ModelCatalog::builtin()),
    }
}

pub(crate) fn digest_of<T: serde::Serialize>(value: &T) -> Result<String> {
    let json = serde_json::to_vec(value).map_err(|e| Error::Serialization(e.to_string()))?;
    Ok(sha256_hex(&json))
}

pub(crate) fn csv_error(e: csv::Error) -> Error {
    Error::Serialization(e.to_string())
}

/// Empty string for missing values, shortest round-trip text otherwise.
pub(crate) fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}
