//! City layout: blocks, wards, and the risk surface.

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Identifier of a city block. Blocks are numbered densely from zero.
pub type BlockId = u32;

/// Zero-based month index.
pub type PeriodIndex = u32;

/// A city block: the unit every model scores.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Block<F> {
    pub id: BlockId,
    pub ward: u32,
    pub features: Vec<F>,
}

/// Parameters of the synthetic city generator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CityConfig<F> {
    pub n_blocks: u32,
    pub n_wards: u32,
    pub n_features: u32,
    /// Coefficients of the log-odds of monthly infestation per feature.
    pub risk_weights: Vec<F>,
    pub risk_intercept: F,
    /// Report arrival probability per block and month before ward bias.
    pub report_base_rate: F,
    /// Strength of the ward-level reporting bias; zero means uniform arrival.
    pub bias_strength: F,
    /// Probability that an inspection of an infested block finds evidence.
    pub detection_prob: F,
    /// Arrival multiplier for blocks that are not infested that month.
    pub false_request_rate: F,
}

impl<F: Scalar> CityConfig<F> {
    pub fn validate(&self) -> Result<()> {
        if self.n_blocks == 0 {
            return Err(Error::InvalidConfig("n_blocks must be positive".into()));
        }
        if self.n_wards == 0 || self.n_wards > self.n_blocks {
            return Err(Error::InvalidConfig(
                "n_wards must be in 1..=n_blocks".into(),
            ));
        }
        if self.risk_weights.len() != self.n_features as usize {
            return Err(Error::InvalidConfig(format!(
                "risk_weights has {} entries for {} features",
                self.risk_weights.len(),
                self.n_features
            )));
        }
        let unit = |name: &str, v: F| -> Result<()> {
            if v < F::zero() || v > F::one() || !v.is_finite() {
                return Err(Error::InvalidConfig(format!(
                    "{name} must lie in [0, 1], got {v}"
                )));
            }
            Ok(())
        };
        unit("report_base_rate", self.report_base_rate)?;
        unit("false_request_rate", self.false_request_rate)?;
        if self.detection_prob <= F::zero() || self.detection_prob > F::one() {
            return Err(Error::InvalidConfig(format!(
                "detection_prob must lie in (0, 1], got {}",
                self.detection_prob
            )));
        }
        if self.bias_strength < F::zero() || !self.bias_strength.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "bias_strength must be finite and non-negative, got {}",
                self.bias_strength
            )));
        }
        if self.risk_weights.iter().any(|w| !w.is_finite()) || !self.risk_intercept.is_finite() {
            return Err(Error::InvalidConfig("risk surface must be finite".into()));
        }
        Ok(())
    }

    /// The frozen demonstration city.
    ///
    /// Constants were tuned so that, under the default seed, report find
    /// rates sit a little under one half, report-holdout calibration is
    /// good, and the bias knob produces a flat field-assessment curve while
    /// leaving the unbiased variant well calibrated everywhere.
    pub fn demo() -> Self {
        CityConfig {
            n_blocks: 3000,
            n_wards: 8,
            n_features: 6,
            risk_weights: [-0.35, 0.33, -0.28, 0.24, 0.20, -0.16]
                .iter()
                .map(|&w| F::from64(w))
                .collect(),
            risk_intercept: F::from64(0.90),
            report_base_rate: F::from64(0.40),
            bias_strength: F::one(),
            detection_prob: F::from64(0.75),
            false_request_rate: F::one(),
        }
    }

    /// Copy of this configuration with a different bias strength.
    pub fn with_bias(mut self, bias_strength: F) -> Self {
        self.bias_strength = bias_strength;
        self
    }
}

/// A fully generated city: blocks plus the ward-level report propensities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct City<F> {
    pub config: CityConfig<F>,
    pub blocks: Vec<Block<F>>,
    /// Report arrival probability by ward, already clipped to at most one.
    pub ward_propensity: Vec<F>,
}

impl<F: Scalar> City<F> {
    /// Checks internal consistency, for cities read back from disk.
    pub fn validate(&self) -> Result<()> {
        self.config.validate()?;
        if self.blocks.len() != self.config.n_blocks as usize {
            return Err(Error::InvalidConfig(format!(
                "city has {} blocks, config says {}",
                self.blocks.len(),
                self.config.n_blocks
            )));
        }
        if self.ward_propensity.len() != self.config.n_wards as usize {
            return Err(Error::InvalidConfig(
                "one propensity per ward is required".into(),
            ));
        }
        for (i, block) in self.blocks.iter().enumerate() {
            if block.id != i as BlockId {
                return Err(Error::InvalidConfig(format!(
                    "blocks must be numbered densely; position {i} holds id {}",
                    block.id
                )));
            }
            if block.ward >= self.config.n_wards {
                return Err(Error::InvalidConfig(format!(
                    "block {} assigned to ward {} of {}",
                    block.id, block.ward, self.config.n_wards
                )));
            }
            if block.features.len() != self.config.n_features as usize {
                return Err(Error::ShapeMismatch {
                    expected: self.config.n_features as usize,
                    actual: block.features.len(),
                });
            }
        }
        for &p in &self.ward_propensity {
            if p < F::zero() || p > F::one() {
                return Err(Error::InvalidConfig(format!(
                    "ward propensity {p} outside [0, 1]"
                )));
            }
        }
        Ok(())
    }

    pub fn n_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn block(&self, id: BlockId) -> Result<&Block<F>> {
        self.blocks.get(id as usize).ok_or(Error::UnknownBlock(id))
    }

    /// Probability that the block is infested in any given month.
    pub fn true_risk(&self, id: BlockId) -> Result<F> {
        let block = self.block(id)?;
        let mut logit = self.config.risk_intercept;
        for (w, x) in self.config.risk_weights.iter().zip(&block.features) {
            logit = logit + *w * *x;
        }
        Ok(crate::model::sigmoid(logit))
    }

    /// Report arrival probability for the block's ward.
    pub fn propensity(&self, id: BlockId) -> Result<F> {
        let block = self.block(id)?;
        Ok(self.ward_propensity[block.ward as usize])
    }

    /// Feature matrix over all blocks, one row per block in id order.
    pub fn feature_matrix(&self) -> Array2<F> {
        let d = self.config.n_features as usize;
        let mut x = Array2::zeros((self.blocks.len(), d));
        for (i, block) in self.blocks.iter().enumerate() {
            for (j, &v) in block.features.iter().enumerate() {
                x[(i, j)] = v;
            }
        }
        x
    }
}
