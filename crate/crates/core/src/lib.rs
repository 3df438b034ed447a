//! Quantum dynamics of the hydrogen molecular ion and two 1D companion
//! models driven by white shot noise.
//!
//! The engine propagates wavefunctions with second-order split-operator
//! schemes (Fourier grids in Cartesian coordinates, a discrete Bessel basis in
//! the cylindrical radius), applies delta kicks at their exact Poisson times,
//! and averages observables over seeded noise realizations.
//!
//! Everything is in atomic units internally; [`units`] holds the femtosecond
//! conversion used at the I/O boundary.

pub mod ensemble;
pub mod error;
pub mod h2plus;
pub mod observables;
pub mod propagation;
pub mod qdyn1d;
pub mod shotnoise;
pub mod spectral;
pub mod units;

pub use error::{Error, Result};

/// Crate version, stamped into run directories and checkpoints.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
