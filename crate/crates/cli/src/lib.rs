//! Command implementations behind the `burrowcast` binary.
//!
//! Every command reads and writes files inside one artifact directory, so
//! a full run is a sequence of commands over the same `--out` target:
//! `synth` makes the city and its report stream, `code-notes` turns notes
//! into outcomes, `cv` measures the classifier across months, `train` and
//! `predict` produce deployment scores, `design` sizes the field
//! assessment, `select` draws it, and `assess` compares field outcomes
//! with the new-report holdout.

pub mod commands;
pub mod config;
pub mod io;
pub mod svg;

/// File names inside the artifact directory.
pub mod artifacts {
    pub const CONFIG: &str = "config.json";
    pub const CITY: &str = "city.json";
    pub const RECORDS: &str = "records.csv";
    pub const TRUTH: &str = "truth.csv";
    pub const CODED: &str = "records_coded.csv";
    pub const MODEL: &str = "model.json";
    pub const PREDICTIONS: &str = "predictions.json";
    pub const CV_REPORT: &str = "cv_report.json";
    pub const CV_POOLED_SVG: &str = "cv_pooled.svg";
    pub const POWER: &str = "power.json";
    pub const FIELD_SAMPLE: &str = "field_sample.csv";
    pub const FIELD_RECORDS: &str = "field_records.csv";
    pub const ASSESS_REPORT: &str = "assess_report.json";
    pub const ASSESS_HOLDOUT_SVG: &str = "assess_holdout.svg";
    pub const ASSESS_FIELD_SVG: &str = "assess_field.svg";

    /// Per-fold calibration chart for one evaluation month.
    pub fn cv_fold_svg(month: u32) -> String {
        format!("cv_fold_{month:02}.svg")
    }
}
