//! Gauss sums, quadratic reciprocity, Gaussian-regularized theta sums and
//! p-adic Gauss integrals, each paired with an independent oracle.

#[cfg(feature = "cli")]
pub mod cli;
pub mod error;
pub mod exact_arith;
pub mod gauss_sums;
pub mod padic;
pub mod padic_integral;
pub mod regularized;
pub mod summation;
pub mod verify;

pub use error::{Error, Result};
pub use exact_arith::{LegendreValue, ResidueClass, ValidatedPrime};
pub use padic::PAdicNumber;
