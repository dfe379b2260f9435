//! Critical functions of the convolution-square equation `f⋆f(2t) = λ·f(t)²`
//! on the cyclic groups `ℤ/dℤ` with `d` odd.
//!
//! The crate is organised bottom-up:
//!
//! * [`group`]: functions on `ℤ/dℤ`, convolution, the Fourier and conjugate
//!   Fourier transforms, and the criticality residual.
//! * [`arith`]: factorization, the Jacobi symbol and the unit group.
//! * [`characters`]: Dirichlet characters, Gauss and Jacobi sums, `λ_χ`.
//! * [`gaussians`]: the quadratic-phase family `f_{u,v}`.
//! * [`theta`]: Jacobi theta functions with characteristics and the sampled
//!   critical functions built from them.
//! * [`solver`]: multistart Levenberg–Marquardt search, membership probes,
//!   polynomial roots and Weil-number checks.
//! * [`catalog`]: the built-in table of known critical values with their
//!   reproduction procedures.

pub mod arith;
pub mod catalog;
pub mod characters;
mod error;
pub mod gaussians;
pub mod group;
pub mod solver;
pub mod theta;
pub mod tol;

pub use error::{Error, Result};
pub use group::{GroupFunction, Pairing, Symmetry};
pub use num_complex::Complex64;
