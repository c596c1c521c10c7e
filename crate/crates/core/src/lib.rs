//! Exact computations for three-qubit entanglement, finite matrix groups
//! generated by entangling gates, and the Lie algebras spanned by them.
//!
//! Everything is done over ℚ or a quadratic field ℚ(√d), so every identity
//! checked by the crate is an exact equality rather than a floating-point
//! comparison. Floating point only appears on explicitly tagged fallback
//! paths.

pub mod gates;
pub mod liealg;
pub mod linalg;
pub mod matgroup;
pub mod qubits;
pub mod scalar;

pub use linalg::{Matrix, Polynomial};
pub use scalar::{Field, Rational, Scalar};
