//! Randomized benchmarking (RB) under Markovian noise.
//!
//! Channels are handled in the Liouville (transfer-matrix) representation
//! over a fixed trace-orthonormal Hermitian operator basis. On top of that the
//! crate provides:
//!
//! - [`liouville`]: channel algebra, Choi matrices and physicality checks.
//! - [`clifford`]: the 24-element single-qubit Clifford group, exact twirls and
//!   the irrep decomposition of its tensor-square representation.
//! - [`rbsim`]: RB sequences, survival probabilities, exact moments of the RB
//!   distribution, an exhaustive enumeration oracle and Monte Carlo sampling.
//! - [`stats`]: variance bounds, Hoeffding sample sizes, decay fitting and
//!   time-dependent fidelity estimation.
//! - [`noisegen`]: parametric noise channels and schedule builders.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod clifford;
pub mod error;
pub mod liouville;
mod math;
pub mod noisegen;
pub mod rbsim;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};

/// Dense real matrix used for Liouville representations.
pub type RMatrix = nalgebra::DMatrix<f64>;
/// Dense real vector.
pub type RVector = nalgebra::DVector<f64>;
/// Dense complex matrix used for operators and Choi matrices.
pub type CMatrix = nalgebra::DMatrix<num_complex::Complex64>;
pub use num_complex::Complex64;
