use thiserror::Error;

use crate::linalg::Ring;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not a supported prime")]
    NotPrime(u64),
    #[error("{value} is not an element of {ring}")]
    NotInRing { value: String, ring: Ring },
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(Ring, Ring),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is not an admissible monomorphism")]
    NotAdmissibleMono,
    #[error("differential does not square to zero at degree {degree}")]
    NotAComplex { degree: i32 },
    #[error("not a chain map: square fails at degree {degree}")]
    NotAChainMap { degree: i32 },
    #[error("maps are not composable or not parallel: {0}")]
    Incompatible(String),
    #[error("not a quasi-isomorphism")]
    NotQuasiIso,
    #[error("hypothesis violated at degree {degree}: {what}")]
    Hypothesis { degree: i32, what: String },
    #[error("diagram does not commute along {from} -> {to} at degree {degree}")]
    NotCommutative { from: String, to: String, degree: i32 },
    #[error("shape error: {0}")]
    Shape(String),
    #[error("index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("S-object violation at ({i},{j},{k}) degree {degree}: {what}")]
    SnViolation { i: usize, j: usize, k: usize, degree: i32, what: String },
    #[error("edge {from} -> {to} is not a degreewise split monomorphism at degree {degree}")]
    NotSplitMono { from: String, to: String, degree: i32 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}
