//! Confusion breakdown of scored outcomes, with per-ward detail.

use serde::{Deserialize, Serialize};

use crate::city::{BlockId, City};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::stats::skewness_g1;

/// Outcome of comparing a thresholded prediction with what happened.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorClass {
    TruePositive,
    FalsePositive,
    TrueNegative,
    FalseNegative,
}

/// Classifies one pair. Predicted positive means probability strictly
/// above one half.
pub fn classify(probability: f64, outcome: u8) -> ErrorClass {
    let predicted_positive = probability > 0.5;
    match (outcome > 0, predicted_positive) {
        (true, true) => ErrorClass::TruePositive,
        (false, true) => ErrorClass::FalsePositive,
        (false, false) => ErrorClass::TrueNegative,
        (true, false) => ErrorClass::FalseNegative,
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub true_positive: u64,
    pub false_positive: u64,
    pub true_negative: u64,
    pub false_negative: u64,
}

impl ClassCounts {
    fn bump(&mut self, class: ErrorClass) {
        match class {
            ErrorClass::TruePositive => self.true_positive += 1,
            ErrorClass::FalsePositive => self.false_positive += 1,
            ErrorClass::TrueNegative => self.true_negative += 1,
            ErrorClass::FalseNegative => self.false_negative += 1,
        }
    }

    pub fn total(&self) -> u64 {
        self.true_positive + self.false_positive + self.true_negative + self.false_negative
    }
}

/// Counts for one ward. Wards with no scored blocks still appear, so the
/// breakdown always lists the whole city.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WardCounts {
    pub ward: u32,
    pub counts: ClassCounts,
}

/// Full error breakdown of one scored set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorAnalysis {
    pub total: ClassCounts,
    pub per_ward: Vec<WardCounts>,
    /// Histogram of `probability - outcome` over 20 bins spanning [-1, 1].
    pub error_histogram: Vec<u64>,
    /// Sample skewness of the errors; absent when they carry no spread.
    pub error_skewness: Option<f64>,
}

/// Bin of the signed error `e` in a 20-cell histogram over [-1, 1].
fn error_bin(e: f64) -> usize {
    (((e + 1.0) * 10.0).floor() as i64).clamp(0, 19) as usize
}

/// Breaks `(block, probability, outcome)` triples down by error class,
/// ward, and signed-error shape.
pub fn analyze_errors<F: Scalar>(
    city: &City<F>,
    scored: &[(BlockId, f64, u8)],
) -> Result<ErrorAnalysis> {
    let mut total = ClassCounts::default();
    let mut per_ward: Vec<WardCounts> = (0..city.config.n_wards)
        .map(|w| WardCounts {
            ward: w,
            counts: ClassCounts::default(),
        })
        .collect();
    let mut histogram = vec![0u64; 20];
    let mut errors = Vec::with_capacity(scored.len());

    for &(block, p, y) in scored {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!(
                "probability {p} for block {block} outside [0, 1]"
            )));
        }
        let ward = city.block(block)?.ward as usize;
        let class = classify(p, y);
        total.bump(class);
        per_ward[ward].counts.bump(class);
        let e = p - f64::from(y.min(1));
        histogram[error_bin(e)] += 1;
        errors.push(e);
    }

    Ok(ErrorAnalysis {
        total,
        per_ward,
        error_histogram: histogram,
        error_skewness: skewness_g1(&errors),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::city::CityConfig;
    use crate::synth::generate_city;

    fn tiny_city() -> City<f64> {
        let cfg = CityConfig {
            n_blocks: 40,
            n_wards: 4,
            n_features: 2,
            risk_weights: vec![0.3, 0.1],
            risk_intercept: 0.0,
            report_base_rate: 0.5,
            bias_strength: 0.0,
            detection_prob: 0.5,
            false_request_rate: 1.0,
        };
        generate_city(&cfg, crate::seed::RandomSeed(17)).unwrap()
    }

    #[test]
    fn classification_matches_the_half_threshold() {
        assert_eq!(classify(0.9, 1), ErrorClass::TruePositive);
        assert_eq!(classify(0.9, 0), ErrorClass::FalsePositive);
        assert_eq!(classify(0.1, 0), ErrorClass::TrueNegative);
        assert_eq!(classify(0.1, 1), ErrorClass::FalseNegative);
        // Exactly one half is not a positive call.
        assert_eq!(classify(0.5, 1), ErrorClass::FalseNegative);
        assert_eq!(classify(0.5, 0), ErrorClass::TrueNegative);
        // The boundary cases where prediction and outcome agree exactly.
        assert_eq!(classify(0.0, 0), ErrorClass::TrueNegative);
        assert_eq!(classify(1.0, 1), ErrorClass::TruePositive);
    }

    #[test]
    fn error_bins_tile_the_signed_range() {
        assert_eq!(error_bin(-1.0), 0);
        assert_eq!(error_bin(-0.95), 0);
        assert_eq!(error_bin(-0.85), 1);
        assert_eq!(error_bin(0.0), 10);
        assert_eq!(error_bin(0.5), 15);
        assert_eq!(error_bin(0.95), 19);
        assert_eq!(error_bin(1.0), 19);
    }

    #[test]
    fn totals_and_wards_reconcile() {
        let city = tiny_city();
        let scored: Vec<(BlockId, f64, u8)> = (0..40)
            .map(|b| (b, (b as f64) / 39.0, u8::from(b % 3 == 0)))
            .collect();
        let a = analyze_errors(&city, &scored).unwrap();
        assert_eq!(a.total.total(), 40);
        assert_eq!(a.per_ward.len(), 4);
        let ward_sum: u64 = a.per_ward.iter().map(|w| w.counts.total()).sum();
        assert_eq!(ward_sum, 40);
        let hist_sum: u64 = a.error_histogram.iter().sum();
        assert_eq!(hist_sum, 40);
        assert!(a.error_skewness.is_some());
    }

    #[test]
    fn empty_wards_still_appear() {
        let city = tiny_city();
        let scored = [(0u32, 0.2, 0u8)];
        let a = analyze_errors(&city, &scored).unwrap();
        assert_eq!(a.per_ward.len(), 4);
        assert_eq!(a.total.total(), 1);
        assert!(a.error_skewness.is_none());
    }

    #[test]
    fn unknown_blocks_are_rejected() {
        let city = tiny_city();
        let err = analyze_errors(&city, &[(999, 0.5, 0)]).unwrap_err();
        assert!(matches!(err, Error::UnknownBlock(999)));
    }

    #[test]
    fn skewed_errors_report_positive_skewness() {
        let city = tiny_city();
        // Mostly small negative errors with a few large positive ones.
        let mut scored = Vec::new();
        for b in 0..30u32 {
            scored.push((b, 0.1, u8::from(b < 3)));
        }
        let a = analyze_errors(&city, &scored).unwrap();
        // Errors are 27 at +0.1 and 3 at -0.9: long left tail.
        assert!(a.error_skewness.unwrap() < -1.0);
    }
}
