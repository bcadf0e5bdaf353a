//! Random forest of smoothed classification trees.

use ndarray::ArrayView2;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::tree::{self, GrowConfig, Tree};
use crate::scalar::Scalar;
use crate::seed::RandomSeed;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ForestConfig {
    pub n_trees: u32,
    pub max_depth: u32,
    pub min_leaf: u32,
    /// Features considered per split; `None` means all of them.
    pub mtry: Option<u32>,
}

impl Default for ForestConfig {
    fn default() -> Self {
        ForestConfig {
            n_trees: 300,
            max_depth: 4,
            min_leaf: 100,
            mtry: None,
        }
    }
}

impl ForestConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_trees == 0 {
            return Err(Error::InvalidConfig("n_trees must be positive".into()));
        }
        if self.min_leaf == 0 {
            return Err(Error::InvalidConfig("min_leaf must be positive".into()));
        }
        if self.mtry == Some(0) {
            return Err(Error::InvalidConfig("mtry must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForestModel<F> {
    pub trees: Vec<Tree<F>>,
}

impl<F: Scalar> ForestModel<F> {
    /// Unweighted mean of the per-tree leaf fractions.
    pub fn predict_one(&self, features: &[F]) -> F {
        let sum = self
            .trees
            .iter()
            .fold(F::zero(), |a, t| a + t.predict(features));
        sum / F::from64(self.trees.len() as f64)
    }
}

/// Trains one tree per bootstrap resample.
///
/// Tree `t` derives its own stream from the seed, draws its bootstrap
/// first and any per-node feature subsets after, so results do not depend
/// on how the loop is scheduled across threads.
pub fn train<F: Scalar>(
    x: &ArrayView2<F>,
    y: &[u8],
    cfg: &ForestConfig,
    seed: RandomSeed,
) -> ForestModel<F> {
    let n = x.nrows();
    let d = x.ncols();
    let features: Vec<usize> = (0..d).collect();
    let grow_cfg = GrowConfig {
        max_depth: cfg.max_depth,
        min_leaf: cfg.min_leaf,
    };
    let trees: Vec<Tree<F>> = (0..cfg.n_trees as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = seed.child("tree", t).rng();
            let rows: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
            match cfg.mtry {
                Some(m) => tree::grow_classification_sampled(
                    x,
                    y,
                    &rows,
                    &features,
                    grow_cfg,
                    m as usize,
                    &mut rng,
                ),
                None => tree::grow_classification(x, y, &rows, &features, grow_cfg),
            }
        })
        .collect();
    ForestModel { trees }
}
