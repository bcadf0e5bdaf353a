//! Forward-chaining monthly cross-validation.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::city::{BlockId, City, PeriodIndex};
use crate::data::{
    aggregate_outcomes, aggregate_windows, build_training_matrix, LabeledInstance,
    ObservationRecord, PeriodOutcome, PredictionSet,
};
use crate::error::{Error, Result};
use crate::eval::calibration::{calibration_slope, decile_table, DecileTable};
use crate::eval::metrics::{precision_at_n, roc_auc};
use crate::model::{ClassifierSpec, TrainedModel};
use crate::scalar::Scalar;
use crate::seed::RandomSeed;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CvParams {
    /// First month evaluated as a fold.
    pub eval_start: u32,
    /// Last month evaluated, inclusive.
    pub eval_end: u32,
    /// Length of the outcome window, in months, for training and testing.
    pub horizon: u32,
    /// Cut size for precision at the top.
    pub top_n: usize,
}

impl CvParams {
    pub fn validate(&self) -> Result<()> {
        if self.horizon == 0 {
            return Err(Error::InvalidConfig("horizon must be positive".into()));
        }
        if self.eval_end < self.eval_start {
            return Err(Error::InvalidConfig(
                "eval_end must not precede eval_start".into(),
            ));
        }
        if self.top_n == 0 {
            return Err(Error::InvalidConfig("top_n must be positive".into()));
        }
        Ok(())
    }
}

/// One evaluation month.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FoldReport {
    pub month: u32,
    pub train_size: usize,
    /// Latest month boundary any training window reaches; never past
    /// `month` by construction.
    pub train_window_max_end: u32,
    pub test_size: usize,
    pub p_at_n: Option<f64>,
    pub roc_auc: Option<f64>,
    /// Set when the AUC could not be computed for this fold.
    pub auc_skipped: bool,
    pub decile: DecileTable,
}

/// Aggregate over all folds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CvReport {
    pub params: CvParams,
    pub folds: Vec<FoldReport>,
    pub mean_p_at_n: Option<f64>,
    pub mean_auc: Option<f64>,
    /// Decile table pooled over every fold's test pairs.
    pub pooled_decile: DecileTable,
    pub pooled_slope: Option<f64>,
}

/// Labels for the window `[start, start + len)`, one instance per block
/// that had at least one report outcome inside it.
pub fn window_labels(
    outcomes: &BTreeMap<(BlockId, PeriodIndex), PeriodOutcome>,
    start: PeriodIndex,
    len: u32,
) -> Vec<LabeledInstance> {
    let mut labels: BTreeMap<BlockId, u8> = BTreeMap::new();
    for (&(block, period), counts) in outcomes {
        if period < start || period >= start + len {
            continue;
        }
        let slot = labels.entry(block).or_insert(0);
        if counts.found > 0 {
            *slot = 1;
        }
    }
    labels
        .into_iter()
        .map(|(block, label)| LabeledInstance {
            block,
            window_start: start,
            window_len: len,
            label,
        })
        .collect()
}

/// Runs one fold per month: train on every complete window before the
/// month, score all blocks, test on the window starting at the month.
///
/// Fold `m` derives its own training seed, so adding folds never changes
/// earlier ones.
pub fn temporal_cv<F: Scalar>(
    city: &City<F>,
    records: &[ObservationRecord],
    spec: &ClassifierSpec<F>,
    params: &CvParams,
    seed: RandomSeed,
) -> Result<CvReport> {
    params.validate()?;
    let outcomes = aggregate_outcomes(records)?;
    let all_windows = aggregate_windows(&outcomes, params.horizon)?;

    let mut folds = Vec::new();
    let mut pooled_pairs: Vec<(f64, u8)> = Vec::new();
    for month in params.eval_start..=params.eval_end {
        let train: Vec<LabeledInstance> = all_windows
            .iter()
            .filter(|w| w.window_start + w.window_len <= month)
            .cloned()
            .collect();
        if train.is_empty() {
            return Err(Error::NoTrainingData {
                eval_start: month,
                earliest_feasible: params.horizon,
            });
        }
        let train_window_max_end = train
            .iter()
            .map(|w| w.window_start + w.window_len)
            .max()
            .unwrap_or(0);

        let (x, y) = build_training_matrix(&train, city)?;
        let model = TrainedModel::train(&x.view(), &y, spec, seed.child("fold", month as u64))?;
        let scores = model.predict_matrix(&city.feature_matrix().view());
        let entries: BTreeMap<BlockId, F> = scores
            .iter()
            .enumerate()
            .map(|(i, &p)| (i as BlockId, p))
            .collect();
        let preds = PredictionSet::new(month, entries)?;

        let test = window_labels(&outcomes, month, params.horizon);
        let scored: Vec<(BlockId, f64, u8)> = test
            .iter()
            .map(|inst| {
                let p = preds
                    .get(inst.block)
                    .ok_or(Error::UnknownBlock(inst.block))?;
                Ok((inst.block, p.into64(), inst.label))
            })
            .collect::<Result<_>>()?;

        let pairs: Vec<(f64, u8)> = scored.iter().map(|&(_, p, y)| (p, y)).collect();
        pooled_pairs.extend(&pairs);
        let p_at_n = if scored.is_empty() {
            None
        } else {
            Some(precision_at_n(&scored, params.top_n, true)?.precision)
        };
        let (auc, auc_skipped) = match roc_auc(&pairs) {
            Ok(v) => (Some(v), false),
            Err(Error::SingleClass) => (None, true),
            Err(e) => return Err(e),
        };

        folds.push(FoldReport {
            month,
            train_size: train.len(),
            train_window_max_end,
            test_size: test.len(),
            p_at_n,
            roc_auc: auc,
            auc_skipped,
            decile: decile_table(&pairs),
        });
    }

    let mean_of = |xs: Vec<f64>| {
        if xs.is_empty() {
            None
        } else {
            Some(xs.iter().sum::<f64>() / xs.len() as f64)
        }
    };
    let mean_p_at_n = mean_of(folds.iter().filter_map(|f| f.p_at_n).collect());
    let mean_auc = mean_of(folds.iter().filter_map(|f| f.roc_auc).collect());
    let pooled_decile = decile_table(&pooled_pairs);
    let pooled_slope = calibration_slope(&pooled_decile).ok();

    Ok(CvReport {
        params: *params,
        folds,
        mean_p_at_n,
        mean_auc,
        pooled_decile,
        pooled_slope,
    })
}
