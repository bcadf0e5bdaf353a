//! Run configuration shared by every subcommand.

use std::path::Path;

use serde::{Deserialize, Serialize};

use burrowcast_core::city::CityConfig;
use burrowcast_core::design::PowerConfig;
use burrowcast_core::error::{Error, Result};
use burrowcast_core::eval::CvParams;
use burrowcast_core::model::{ClassifierSpec, ForestConfig};
use burrowcast_core::Real;

/// Cross-validation window of a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CvSection {
    /// First month scored as a fold.
    pub eval_start: u32,
    /// Last month scored, inclusive.
    pub eval_end: u32,
    /// Cut size for precision at the top.
    pub top_n: usize,
}

/// Field assessment design of a run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldSection {
    /// Blocks to inspect.
    pub sample_size: usize,
    /// Eligible predicted probabilities, as the half-open `(lo, hi]`.
    pub range: (f64, f64),
}

/// Everything one reproducible run needs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    /// Master seed; every stage derives its own streams from it.
    pub seed: u64,
    pub city: CityConfig<Real>,
    /// Simulated months.
    pub periods: u32,
    /// Outcome window length in months, used for training and testing.
    pub window_len: u32,
    pub classifier: ClassifierSpec<Real>,
    pub cv: CvSection,
    /// Month the deployed model is trained up to; it scores the window
    /// starting here, and the field assessment inspects this month.
    pub train_end: u32,
    pub field: FieldSection,
    pub power: PowerConfig,
}

impl RunConfig {
    /// The frozen demonstration run.
    pub fn demo() -> Self {
        RunConfig {
            seed: 7,
            city: CityConfig::demo(),
            periods: 24,
            window_len: 3,
            classifier: ClassifierSpec::RandomForest(ForestConfig {
                n_trees: 300,
                max_depth: 4,
                min_leaf: 100,
                mtry: Some(2),
            }),
            cv: CvSection {
                eval_start: 9,
                eval_end: 21,
                top_n: 100,
            },
            train_end: 21,
            field: FieldSection {
                sample_size: 100,
                range: (0.5, 0.9),
            },
            power: PowerConfig {
                n_per_group: 25,
                range1: (0.5, 0.6),
                range2: (0.8, 0.9),
                decision_threshold: 0.95,
                reps: 5000,
            },
        }
    }

    /// Structural checks that hold for every command.
    ///
    /// `periods` is deliberately unconstrained: generating zero months is a
    /// legitimate degenerate run, and evaluation stages report their own
    /// errors when the records they read cannot support the requested folds.
    pub fn validate(&self) -> Result<()> {
        self.city.validate()?;
        self.classifier.validate()?;
        self.power.validate()?;
        self.cv_params().validate()?;
        if self.field.sample_size == 0 {
            return Err(Error::InvalidConfig(
                "field.sample_size must be positive".into(),
            ));
        }
        let (lo, hi) = self.field.range;
        if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo > hi {
            return Err(Error::InvalidConfig(format!(
                "field.range must satisfy 0 <= lo <= hi <= 1, got ({lo}, {hi})"
            )));
        }
        Ok(())
    }

    pub fn cv_params(&self) -> CvParams {
        CvParams {
            eval_start: self.cv.eval_start,
            eval_end: self.cv.eval_end,
            horizon: self.window_len,
            top_n: self.cv.top_n,
        }
    }

    pub fn load<P: AsRef<Path>>(path: P) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        let cfg: RunConfig = serde_json::from_reader(std::io::BufReader::new(file))?;
        cfg.validate()?;
        Ok(cfg)
    }
}
