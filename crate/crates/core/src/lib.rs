//! Workbench for random constraint satisfaction problems drawn from Model GB.
//!
//! Instances have `t` constraints, each over `k` distinct variables out of `n`,
//! each forbidding exactly `q` of the `d^k` value tuples. The crate provides
//!
//! * a seeded, platform-stable instance [`generator`],
//! * an all-solutions chronological [`backtrack`]er reporting exact search-tree
//!   node counts,
//! * the unit-constraint heuristic in [`uc`],
//! * closed-form expected-cost [`analytics`] (exact sum and its asymptotic
//!   estimate), generic over the scalar type,
//! * brute-force ground truth in [`oracle`],
//! * Monte Carlo sweeps and CSV output in [`harness`].
//!
//! Variables are 0-indexed: the `j`-th variable of the search order (1-based)
//! is index `j - 1`.

pub mod analytics;
pub mod backtrack;
pub mod error;
pub mod generator;
pub mod harness;
pub mod model;
pub mod oracle;
pub mod rng;
pub mod scalar;
pub mod uc;
pub mod verify;

pub use error::{Error, Result};
pub use model::{ConstraintSpec, Instance, Params, PartialAssignment, ValidParams, Value};
pub use rng::SeedSpec;

/// Exact rational scalar used by the oracle paths.
pub type Rational = num_rational::BigRational;

/// Continuous-parameter view in double precision.
pub type AnalyticParams64 = analytics::AnalyticParams<f64>;
/// Continuous-parameter view in single precision.
pub type AnalyticParams32 = analytics::AnalyticParams<f32>;
/// Double-precision prediction record.
pub type Prediction64 = analytics::Prediction<f64>;
