//! Driver for `dercat-core`: seeded corpora, verification suites and
//! one-off computations, all speaking JSON.

pub mod compute;
pub mod config;
pub mod corpus;
pub mod report;
pub mod suites;

pub use config::{parse_degrees, parse_ring, CliError, RunConfig};
pub use report::{CheckRecord, Report};

/// Runs the configured suite, or re-validates a corpus directory when `input` is given.
pub fn verify(config: &RunConfig, input: Option<&std::path::Path>) -> Result<Report, CliError> {
    let checks = match input {
        Some(dir) => corpus::verify(dir)?,
        None => suites::run_suite(config)?,
    };
    let mut config = config.clone();
    if input.is_some() {
        config.suite = "corpus".into();
    }
    Ok(Report::new(&config, checks))
}
