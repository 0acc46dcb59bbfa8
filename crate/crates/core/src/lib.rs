//! Delayed multiplier-accelerator model of national income.
//!
//! Consumption depends on the two previous incomes and investment on
//! consumption changes, which turns national income into a third-order
//! linear recurrence. This crate simulates that recurrence (and the classic
//! second-order variant), recasts it as a first-order companion system,
//! computes the equilibrium in the regular case, falls back to a
//! Tikhonov-regularized optimal equilibrium on the rank-deficient boundary
//! `c1 + c2 = 1`, and classifies stability from the characteristic cubic.
//!
//! Everything is generic over the floating-point scalar through [`Scalar`];
//! the aliases at the crate root fix `f64`, which the CLI and the test
//! suites use throughout.
//!
//! ```
//! use samuelson::equilibrium::build_problem;
//! use samuelson::model::{ModelParams, ValidationMode};
//!
//! let params = ModelParams::<f64>::new(0.5, 0.3, 0.2, 100.0, ValidationMode::Strict).unwrap();
//! let equilibrium = build_problem(&params).unique_equilibrium().unwrap();
//! assert!((equilibrium.income - 500.0).abs() < 1e-8);
//! ```

pub mod equilibrium;
pub mod error;
pub mod linalg;
pub mod model;
pub mod spectral;

mod compensated;
mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Double-precision 3x3 matrix.
pub type Mat3 = linalg::Matrix3<f64>;
/// Double-precision 3-vector.
pub type Vec3 = linalg::Vector3<f64>;
/// Double-precision companion state.
pub type State = model::StateVector<f64>;
