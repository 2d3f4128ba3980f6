//! Spectral norms of submatrices of the discrete Fourier transform.
//!
//! The crate computes `||F_OT||` for explicit and random index sets,
//! evaluates the classical uncertainty bounds on it, checks small cases
//! exhaustively and runs seeded Monte Carlo experiments.
//!
//! Numeric code is generic over [`Real`] (`f32` or `f64`); the aliases at the
//! crate root fix the scalar for the common cases.

pub mod bounds;
pub mod cli;
pub mod error;
pub mod linalg;
pub mod matrix;
pub mod montecarlo;
pub mod random_sets;
pub mod scalar;
pub mod stats;
pub mod verify;

pub use error::{Error, Result};
pub use matrix::{BoundedMatrix, DenseComplexMatrix, Dft, GramMatrix, Hadamard, IndexSet};
pub use scalar::Real;

pub type Dft64 = Dft<f64>;
pub type Dft32 = Dft<f32>;
pub type Hadamard64 = Hadamard<f64>;
pub type Dense64 = DenseComplexMatrix<f64>;
pub type Dense32 = DenseComplexMatrix<f32>;
pub type Gram64 = GramMatrix<f64>;
