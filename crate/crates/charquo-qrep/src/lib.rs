//! Braid group representations on highest-weight spaces of tensor powers of
//! a two-parameter module over the integral quantum `sl_2`.
//!
//! Scalars live in `Z[q^{±1}, s^{±1}]` ([`LaurentPoly2`]). The weight space
//! `V_{n,ℓ}` of `V^{⊗n}` carries the braid action through the R-matrix and the
//! highest-weight subspace `W_{n,ℓ} = ker E` has an integral basis in which the
//! braid generators are Laurent matrices.

pub mod export;
pub mod form;
pub mod highest;
pub mod laurent;
pub mod matrix;
pub mod module;
pub mod qnum;
pub mod special;
pub mod verify;

pub use highest::{highest_weight_basis, HighestWeight, RepMatrices};
pub use laurent::{LaurentPoly2, RationalFn2, Term};
pub use matrix::{LMatrix, ModMatrix};
pub use module::WeightBasis;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum QrepError {
    #[error("bad specialization point: {0}")]
    BadPoint(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("parameters out of range: {0}")]
    Range(String),
    #[error("verification failed: {0}")]
    Check(String),
}
