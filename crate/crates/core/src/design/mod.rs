//! Designing and analyzing proactive field assessments: Beta posteriors,
//! group comparison probabilities, power simulation, stratified sampling.

pub mod beta;
pub mod field;
pub mod power;

pub use beta::{prob_less, BetaPosterior, ProbMethod};
pub use field::{
    compare_field, select_field_sample, FieldComparison, FieldEntry, FieldSample,
};
pub use power::{power_simulation, PowerConfig, PowerReport};
