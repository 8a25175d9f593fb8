//! Exact bounded cochain complexes of free modules over `Z`, `Q` and `F_p`.
//!
//! The crate is layered bottom-up:
//!
//! * [`linalg`]: exact matrices, Smith normal form, solving, cokernels.
//! * [`complex`]: complexes, chain maps, homotopies, the canonical homotopy
//!   pullback and pushout together with cone, cylinder and cocylinder,
//!   homology and quasi-isomorphism detection.
//! * [`derived`]: roofs `X <- Z -> Y` with a quasi-isomorphic backward leg,
//!   derived Hom groups and the strictification of homotopy commutative squares.
//! * [`diagram`]: complexes indexed by the posets `Δⁿ`, `□`, `⌐` and `ArΔⁿ`.
//! * [`sconst`]: Waldhausen `S_n` objects, filtrations and extensions.
//! * [`k_theory`]: Euler characteristics as `K₀` classes.
//! * [`gen`]: seeded generators used by tests and the command line driver.

pub mod complex;
pub mod derived;
pub mod diagram;
pub mod gen;
pub mod json;
pub mod k_theory;
pub mod linalg;
pub mod sconst;

mod error;

pub use error::{Error, Result};
pub use linalg::{Mat, Ring, Scalar};
