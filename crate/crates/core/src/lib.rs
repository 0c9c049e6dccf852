//! Numerical laboratory for complete sets of mutually unbiased bases (MUBs)
//! in dimensions 4 and 5.
//!
//! The crate builds the standard complete MUB catalogs, evaluates entropic and
//! variance uncertainty functionals over tuples of bases, certifies their lower
//! bounds by multistart simplex minimization, samples Haar-random states at
//! scale, classifies the d = 5 triplets into their two inequivalence classes,
//! and simulates imperfect (cross-talk) detectors.
//!
//! Dimensions are const generics; only `D = 4` and `D = 5` have catalogs.

// NaN must fail these checks, so comparisons are negated on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod detector;
pub mod error;
pub mod exec;
pub mod functionals;
pub mod linalg;
pub mod montecarlo;
pub mod mub;
pub mod optimizer;
pub mod record;
pub mod rng;
pub mod symmetry;
pub mod tolerance;

pub use error::{Error, Result};
pub use exec::Execution;
pub use functionals::{FunctionalKind, TripletId};
pub use linalg::{ProbabilityVector, StateVector, UnitaryMatrix, C64};
pub use mub::{Basis, BasisLabel, MubSet};
