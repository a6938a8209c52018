//! Maximal equilateral sets in `ℓp` spaces and `ℓq`-direct sums.
//!
//! The crate is `no_std` (it needs `alloc`) and contains the pure numeric
//! parts: norm evaluation for nested `ℓp`/`ℓq` specs, the scalar equations
//! behind the explicit constructions, Hadamard matrices and simplices, the
//! constructions themselves, fixed-point solvers for perturbed norms, and
//! the extension / maximality verification routines.
//!
//! File formats and the command line live in the `eqsets` crate.

#![cfg_attr(not(any(test, feature = "std")), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod constructions;
pub mod error;
pub mod fixed_point;
pub mod hadamard;
mod optim;
mod rng;
pub mod scalar_solve;
pub mod space;
pub mod verification;

pub use error::{Error, Result};
pub use space::{EquilateralCertificate, Exponent, SpaceSpec, Vector};

/// Absolute tolerance on distances used when callers do not supply one.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;
