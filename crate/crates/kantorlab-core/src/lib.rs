//! Exact-arithmetic constructions and verification for Kantor pairs and the
//! graded Lie algebras that envelop them.
//!
//! The crate is organised bottom-up:
//!
//! * [`field`] — scalars of `Q` or `GF(p)`, `p >= 5`, all arithmetic exact;
//! * [`linalg`] — dense row reduction, solving, kernels and subspace arithmetic;
//! * [`pairs`] — trilinear pairs, D/K operators, centroids, gradings;
//! * [`lie`] — structure-constant Lie algebras with `Z^2` degree maps;
//! * [`kantor`] — the Kantor construction, tight envelopes and the
//!   characteristic-zero central-simplicity oracle;
//! * [`bc2`] — the BC2 root system, its Weyl group and Weyl images of
//!   short-Peirce-graded pairs;
//! * [`skew`] — pairs of skew transformations of a hyperbolic form;
//! * [`e6`] — the exterior-algebra construction of a Lie algebra of type E6
//!   and the pairs living on degree-3 exterior powers;
//! * [`jsonio`] — byte-stable JSON import/export of pairs and algebras.

pub mod bc2;
pub mod e6;
pub mod field;
pub mod jsonio;
pub mod kantor;
pub mod lie;
pub mod linalg;
pub mod pairs;
pub mod skew;

pub use field::{Field, Scalar};

/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Shape(String),
    #[error("field mismatch or unsupported field: {0}")]
    Field(String),
    #[error("grading violation: {0}")]
    Grading(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal closure failure: {0}")]
    Closure(String),
    #[error("io: {0}")]
    Io(String),
    #[error("parse: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
