//! Exact Cantor-Bendixson and Szlenk index computations for spaces of
//! continuous functions on compact ordinal spaces `[0, z]`, `z < epsilon_0`.
//!
//! The crate is organised bottom-up:
//!
//! * [`ordinal`]: Cantor-normal-form arithmetic, parsing and formatting.
//! * [`topology`]: closed subsets of `[0, z]` and their Cantor-Bendixson
//!   derivatives, computed in closed form.
//! * [`grasberg`]: step functions, the Grasberg norm, critical sets and
//!   executable checks of its two key estimates.
//! * [`trees`]: finite trees, rank, and weakly null families.
//! * [`szlenk`]: Szlenk indices of `C(K)` and the small-convex-combination
//!   extractor.
//! * [`fuzz`]: seeded fuzz harness with shrinking for the norm estimates.
//!
//! Function values are generic over a [`Scalar`]; the [`Rational`] aliases
//! below are the exact instantiation used everywhere norms are compared.

pub mod error;
pub mod fuzz;
pub mod grasberg;
pub mod ordinal;
pub mod sample;
mod scalar;
pub mod szlenk;
pub mod topology;
pub mod trees;

pub use error::{Error, Result};
pub use ordinal::Ordinal;
pub use scalar::Scalar;
pub use topology::{Atom, ClosedSet};

/// Exact arbitrary-precision rationals.
pub type Rational = num_rational::BigRational;

pub type RationalStep = grasberg::StepFunction<Rational>;
pub type RationalQueenReport = grasberg::QueenReport<Rational>;
pub type RationalCertificate = szlenk::ExtractionCertificate<Rational>;
pub type F64Step = grasberg::StepFunction<f64>;
