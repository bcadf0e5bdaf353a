//! Regularized logistic regression fit by full-batch gradient descent.

use ndarray::ArrayView2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::sigmoid;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, bound = "F: Scalar")]
pub struct LogisticConfig<F> {
    pub learning_rate: F,
    pub epochs: u32,
    /// Ridge penalty on the weights; the intercept is never penalized.
    pub l2: F,
}

impl<F: Scalar> Default for LogisticConfig<F> {
    fn default() -> Self {
        LogisticConfig {
            learning_rate: F::from64(0.1),
            epochs: 500,
            l2: F::zero(),
        }
    }
}

impl<F: Scalar> LogisticConfig<F> {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > F::zero()) || !self.learning_rate.is_finite() {
            return Err(Error::InvalidConfig(
                "learning_rate must be positive".into(),
            ));
        }
        if self.epochs == 0 {
            return Err(Error::InvalidConfig("epochs must be positive".into()));
        }
        if self.l2 < F::zero() || !self.l2.is_finite() {
            return Err(Error::InvalidConfig("l2 must be non-negative".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogisticModel<F> {
    pub weights: Vec<F>,
    pub bias: F,
}

impl<F: Scalar> LogisticModel<F> {
    pub fn predict_one(&self, features: &[F]) -> F {
        let mut z = self.bias;
        for (w, x) in self.weights.iter().zip(features) {
            z = z + *w * *x;
        }
        sigmoid(z)
    }
}

/// Mean log-loss plus the ridge term `l2/2 * ||w||^2`.
pub fn loss<F: Scalar>(
    weights: &[F],
    bias: F,
    x: &ArrayView2<F>,
    y: &[u8],
    l2: F,
) -> F {
    let n = x.nrows();
    let mut total = F::zero();
    for i in 0..n {
        let mut z = bias;
        for (j, w) in weights.iter().enumerate() {
            z = z + *w * x[(i, j)];
        }
        // softplus(z) - y*z, with softplus computed stably
        let softplus = z.max(F::zero()) + (F::one() + (-z.abs()).exp()).ln();
        let yz = if y[i] > 0 { z } else { F::zero() };
        total = total + softplus - yz;
    }
    let mut penalty = F::zero();
    for w in weights {
        penalty = penalty + *w * *w;
    }
    let half = F::from64(0.5);
    total / F::from64(n as f64) + half * l2 * penalty
}

/// Gradient of [`loss`] with respect to the weights and bias.
///
/// The data term is `(1/n) * X^T (p - y)`; the ridge term adds `l2 * w`
/// to each weight and nothing to the bias.
pub fn gradient<F: Scalar>(
    weights: &[F],
    bias: F,
    x: &ArrayView2<F>,
    y: &[u8],
    l2: F,
) -> (Vec<F>, F) {
    let n = x.nrows();
    let d = weights.len();
    let mut grad_w = vec![F::zero(); d];
    let mut grad_b = F::zero();
    for i in 0..n {
        let mut z = bias;
        for (j, w) in weights.iter().enumerate() {
            z = z + *w * x[(i, j)];
        }
        let p = sigmoid(z);
        let resid = p - if y[i] > 0 { F::one() } else { F::zero() };
        for j in 0..d {
            grad_w[j] = grad_w[j] + resid * x[(i, j)];
        }
        grad_b = grad_b + resid;
    }
    let inv_n = F::one() / F::from64(n as f64);
    for j in 0..d {
        grad_w[j] = grad_w[j] * inv_n + l2 * weights[j];
    }
    (grad_w, grad_b * inv_n)
}

/// Fits from a zero start with a fixed step size, so the result is a pure
/// function of the data and the configuration.
pub fn train<F: Scalar>(x: &ArrayView2<F>, y: &[u8], cfg: &LogisticConfig<F>) -> LogisticModel<F> {
    let d = x.ncols();
    let mut weights = vec![F::zero(); d];
    let mut bias = F::zero();
    for _ in 0..cfg.epochs {
        let (gw, gb) = gradient(&weights, bias, x, y, cfg.l2);
        for j in 0..d {
            weights[j] = weights[j] - cfg.learning_rate * gw[j];
        }
        bias = bias - cfg.learning_rate * gb;
    }
    LogisticModel { weights, bias }
}
