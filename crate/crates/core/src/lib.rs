//! Rodent-complaint risk modelling with designed field validation.
//!
//! The crate covers the full loop of a municipal "predict where the rats are"
//! pipeline built on complaint-driven inspection data:
//!
//! * [`city`] / [`synth`]: a synthetic city with known per-block infestation
//!   risk and a report-arrival process whose intensity can be biased by ward,
//!   so that model validity claims can be checked against ground truth;
//! * [`notes`]: rule-based coding of free-text inspector notes into binary
//!   found/not-found outcomes;
//! * [`data`]: observation records, window aggregation into labelled
//!   training instances, and the feature matrix builder;
//! * [`model`]: logistic regression, random forests, and gradient boosting,
//!   implemented directly at desk scale;
//! * [`eval`]: precision-at-N, ROC-AUC, decile calibration tables, temporal
//!   cross-validation, and per-ward error analysis;
//! * [`design`]: Beta-Bernoulli posteriors, the probability that one group's
//!   rate exceeds another's, power simulation for planned field assessments,
//!   and stratified selection of field samples.
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the [`Real`]
//! alias fixes the scalar used by the command-line pipeline and the tests.

pub mod city;
pub mod data;
pub mod design;
pub mod error;
pub mod eval;
pub mod model;
pub mod notes;
pub mod scalar;
pub mod seed;
pub mod stats;
pub mod synth;

pub use error::{Error, Result};
pub use scalar::Scalar;
pub use seed::RandomSeed;

/// Scalar type used by the CLI, the demo configuration, and the test suite.
pub type Real = f64;

/// A city instantiated at the default scalar type.
pub type RealCity = city::City<Real>;

/// A prediction set at the default scalar type.
pub type RealPredictions = data::PredictionSet<Real>;
