//! Classifiers: logistic regression, random forest, gradient boosting.

pub mod boost;
pub mod forest;
pub mod logistic;
pub mod tree;

use std::io::{Read, Write};
use std::path::Path;

use ndarray::ArrayView2;
use serde::{Deserialize, Serialize};

pub use boost::{BoostConfig, BoostModel};
pub use forest::{ForestConfig, ForestModel};
pub use logistic::{LogisticConfig, LogisticModel};
pub use tree::Tree;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::seed::RandomSeed;

/// Numerically stable logistic function.
pub fn sigmoid<F: Scalar>(z: F) -> F {
    if z >= F::zero() {
        let e = (-z).exp();
        F::one() / (F::one() + e)
    } else {
        let e = z.exp();
        e / (F::one() + e)
    }
}

/// Inverse of [`sigmoid`]; callers must keep `p` strictly inside (0, 1).
pub fn logit<F: Scalar>(p: F) -> F {
    (p / (F::one() - p)).ln()
}

/// Which classifier family to train, with its tuning parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", bound = "F: Scalar")]
pub enum ClassifierSpec<F> {
    Logistic(LogisticConfig<F>),
    RandomForest(ForestConfig),
    GradientBoosting(BoostConfig<F>),
}

impl<F: Scalar> ClassifierSpec<F> {
    pub fn validate(&self) -> Result<()> {
        match self {
            ClassifierSpec::Logistic(c) => c.validate(),
            ClassifierSpec::RandomForest(c) => c.validate(),
            ClassifierSpec::GradientBoosting(c) => c.validate(),
        }
    }
}

/// A trained classifier of any family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum TrainedModel<F> {
    Logistic(LogisticModel<F>),
    RandomForest(ForestModel<F>),
    GradientBoosting(BoostModel<F>),
}

impl<F: Scalar> TrainedModel<F> {
    /// Trains the configured family on a labeled design matrix.
    ///
    /// Labels must contain both classes. Only the forest consumes
    /// randomness; the seed is ignored by the other families.
    pub fn train(
        x: &ArrayView2<F>,
        y: &[u8],
        spec: &ClassifierSpec<F>,
        seed: RandomSeed,
    ) -> Result<Self> {
        spec.validate()?;
        if x.nrows() != y.len() {
            return Err(Error::ShapeMismatch {
                expected: x.nrows(),
                actual: y.len(),
            });
        }
        if x.nrows() == 0 {
            return Err(Error::InvalidParameter("empty training set".into()));
        }
        let has_pos = y.iter().any(|&v| v > 0);
        let has_neg = y.iter().any(|&v| v == 0);
        if !has_pos || !has_neg {
            return Err(Error::SingleClass);
        }
        Ok(match spec {
            ClassifierSpec::Logistic(c) => TrainedModel::Logistic(logistic::train(x, y, c)),
            ClassifierSpec::RandomForest(c) => {
                TrainedModel::RandomForest(forest::train(x, y, c, seed))
            }
            ClassifierSpec::GradientBoosting(c) => {
                TrainedModel::GradientBoosting(boost::train(x, y, c))
            }
        })
    }

    /// Probability of the positive class for one feature vector.
    pub fn predict_one(&self, features: &[F]) -> F {
        match self {
            TrainedModel::Logistic(m) => m.predict_one(features),
            TrainedModel::RandomForest(m) => m.predict_one(features),
            TrainedModel::GradientBoosting(m) => m.predict_one(features),
        }
    }

    /// Probabilities for every row of a feature matrix.
    pub fn predict_matrix(&self, x: &ArrayView2<F>) -> Vec<F> {
        (0..x.nrows())
            .map(|i| {
                let row: Vec<F> = x.row(i).iter().copied().collect();
                self.predict_one(&row)
            })
            .collect()
    }
}

/// Format version written into model files.
pub const MODEL_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct ModelFile<F> {
    version: u32,
    model: TrainedModel<F>,
}

/// Writes a model as versioned JSON.
pub fn save_model<F: Scalar, W: Write>(model: &TrainedModel<F>, writer: W) -> Result<()> {
    let file = ModelFile {
        version: MODEL_VERSION,
        model: model.clone(),
    };
    serde_json::to_writer_pretty(writer, &file)?;
    Ok(())
}

/// Reads a versioned model file, rejecting unknown versions up front.
pub fn load_model<F: Scalar, R: Read>(reader: R) -> Result<TrainedModel<F>> {
    let value: serde_json::Value = serde_json::from_reader(reader)?;
    let version = value
        .get("version")
        .and_then(|v| v.as_u64())
        .ok_or_else(|| Error::InvalidParameter("model file lacks a version".into()))?;
    if version != MODEL_VERSION as u64 {
        return Err(Error::UnsupportedModelVersion {
            found: version,
            supported: u64::from(MODEL_VERSION),
        });
    }
    let file: ModelFile<F> = serde_json::from_value(value)?;
    Ok(file.model)
}

pub fn save_model_file<F: Scalar, P: AsRef<Path>>(
    model: &TrainedModel<F>,
    path: P,
) -> Result<()> {
    save_model(model, std::io::BufWriter::new(std::fs::File::create(path)?))
}

pub fn load_model_file<F: Scalar, P: AsRef<Path>>(path: P) -> Result<TrainedModel<F>> {
    load_model(std::io::BufReader::new(std::fs::File::open(path)?))
}
