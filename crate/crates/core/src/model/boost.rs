//! Gradient boosting on the logistic loss with regression-tree steps.

use ndarray::ArrayView2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::tree::{self, GrowConfig, Tree};
use crate::model::{logit, sigmoid};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, bound = "F: Scalar")]
pub struct BoostConfig<F> {
    pub n_rounds: u32,
    pub shrinkage: F,
    pub max_depth: u32,
    pub min_leaf: u32,
}

impl<F: Scalar> Default for BoostConfig<F> {
    fn default() -> Self {
        BoostConfig {
            n_rounds: 100,
            shrinkage: F::from64(0.3),
            max_depth: 3,
            min_leaf: 20,
        }
    }
}

impl<F: Scalar> BoostConfig<F> {
    pub fn validate(&self) -> Result<()> {
        if !(self.shrinkage > F::zero()) || !self.shrinkage.is_finite() {
            return Err(Error::InvalidConfig("shrinkage must be positive".into()));
        }
        if self.min_leaf == 0 {
            return Err(Error::InvalidConfig("min_leaf must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoostModel<F> {
    /// Positive-class fraction of the training labels, kept untransformed
    /// so a zero-round model reproduces it exactly.
    pub base: F,
    pub shrinkage: F,
    pub trees: Vec<Tree<F>>,
}

impl<F: Scalar> BoostModel<F> {
    pub fn predict_one(&self, features: &[F]) -> F {
        if self.trees.is_empty() {
            return self.base;
        }
        let mut score = logit(clamp_prob(self.base));
        for t in &self.trees {
            score = score + self.shrinkage * t.predict(features);
        }
        sigmoid(score)
    }
}

fn clamp_prob<F: Scalar>(p: F) -> F {
    let eps = F::from64(1e-12);
    p.max(eps).min(F::one() - eps)
}

/// Fits trees to the probability residuals `y - p`, the negative gradient
/// of the logistic loss with respect to the score.
pub fn train<F: Scalar>(x: &ArrayView2<F>, y: &[u8], cfg: &BoostConfig<F>) -> BoostModel<F> {
    let n = x.nrows();
    let d = x.ncols();
    let features: Vec<usize> = (0..d).collect();
    let rows: Vec<usize> = (0..n).collect();
    let grow_cfg = GrowConfig {
        max_depth: cfg.max_depth,
        min_leaf: cfg.min_leaf,
    };

    let pos = y.iter().filter(|&&v| v > 0).count();
    let base = F::from64(pos as f64 / n as f64);

    let mut scores = vec![logit(clamp_prob(base)); n];
    let mut trees = Vec::with_capacity(cfg.n_rounds as usize);
    let mut residuals = vec![F::zero(); n];
    for _ in 0..cfg.n_rounds {
        for i in 0..n {
            let target = if y[i] > 0 { F::one() } else { F::zero() };
            residuals[i] = target - sigmoid(scores[i]);
        }
        let t = tree::grow_regression(x, &residuals, &rows, &features, grow_cfg);
        for i in 0..n {
            let row: Vec<F> = x.row(i).iter().copied().collect();
            scores[i] = scores[i] + cfg.shrinkage * t.predict(&row);
        }
        trees.push(t);
    }
    BoostModel {
        base,
        shrinkage: cfg.shrinkage,
        trees,
    }
}
