//! Ranking metrics, calibration tables, temporal cross-validation, and
//! error breakdowns.

pub mod calibration;
pub mod cv;
pub mod error_analysis;
pub mod metrics;

pub use calibration::{calibration_slope, decile_table, DecileBin, DecileTable};
pub use cv::{temporal_cv, window_labels, CvParams, CvReport, FoldReport};
pub use error_analysis::{analyze_errors, ClassCounts, ErrorAnalysis, ErrorClass};
pub use metrics::{precision_at_n, roc_auc, PrecisionAtN};
