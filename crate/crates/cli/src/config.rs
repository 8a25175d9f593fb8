use std::path::PathBuf;

use dercat_core::gen::Sizes;
use dercat_core::Ring;
use thiserror::Error;

use crate::suites::SUITES;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(#[from] dercat_core::Error),
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
}

impl CliError {
    pub fn io(path: &std::path::Path, e: impl std::fmt::Display) -> CliError {
        CliError::Io { path: path.to_path_buf(), message: e.to_string() }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub seed: u64,
    pub ring: Ring,
    pub sizes: Sizes,
    pub suite: String,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(seed: u64, ring: Ring, sizes: Sizes, suite: &str, out: Option<PathBuf>) -> Result<RunConfig, CliError> {
        if !SUITES.contains(&suite) {
            return Err(CliError::Usage(format!("unknown suite {suite:?}; known: {}", SUITES.join(", "))));
        }
        if sizes.hi < sizes.lo {
            return Err(CliError::Usage(format!("empty degree range {}..{}", sizes.lo, sizes.hi)));
        }
        Ok(RunConfig { seed, ring, sizes, suite: suite.to_string(), out })
    }
}

/// `Z`, `Q` or `Fp:p`.
pub fn parse_ring(s: &str) -> Result<Ring, CliError> {
    match s {
        "Z" => Ok(Ring::Integers),
        "Q" => Ok(Ring::Rationals),
        _ => {
            let p = s
                .strip_prefix("Fp:")
                .and_then(|p| p.parse::<u64>().ok())
                .ok_or_else(|| CliError::Usage(format!("ring must be Z, Q or Fp:p, got {s:?}")))?;
            Ring::prime_field(p).map_err(|e| CliError::Usage(e.to_string()))
        }
    }
}

/// `LO..HI`, inclusive on both ends.
pub fn parse_degrees(s: &str) -> Result<(i32, i32), CliError> {
    let bad = || CliError::Usage(format!("degrees must look like LO..HI, got {s:?}"));
    let (lo, hi) = s.split_once("..").ok_or_else(bad)?;
    let lo: i32 = lo.trim().parse().map_err(|_| bad())?;
    let hi: i32 = hi.trim().parse().map_err(|_| bad())?;
    if hi < lo {
        return Err(CliError::Usage(format!("empty degree range {s}")));
    }
    Ok((lo, hi))
}
