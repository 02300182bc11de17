use std::process::ExitCode;

use clap::Parser;
use fwa_channel::cli::{run, Cli};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = e.to_string().replace(['\n', '\r'], " ");
            eprintln!("error: {}: {}", e.kind(), msg);
            ExitCode::FAILURE
        }
    }
}
