//! Finite-dimensional linear algebra of quadratic Wick algebras.
//!
//! The crate builds the coefficient operator `T` of a Wick algebra, its lifts
//! `T_i` to `H^{⊗n}`, the operator families `R_n` and `P_n`, and uses them to
//! compute homogeneous Wick ideals, check Fock-space positivity and verify
//! explicit oscillator representations of the Wick CCR algebra.
//!
//! Basis vectors of `H^{⊗n}` are ordered lexicographically by multi-index with
//! the leftmost tensor factor most significant.

pub mod cli;
pub mod error;
pub mod fock;
pub mod ideals;
mod linalg;
pub mod model;
pub mod oscrep;
pub mod report;
pub mod subspace;
pub mod tensor_ops;

pub use error::{Result, WickError};
pub use model::{ModelKind, ModelSpec, WickCoefficients};
pub use subspace::Subspace;
pub use tensor_ops::TensorOperator;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
