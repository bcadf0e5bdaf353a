//! Beta posteriors over find rates and the probability that one group's
//! rate is below another's.

use rand_distr::{Beta as BetaDist, Distribution};
use serde::{Deserialize, Serialize};
use statrs::function::beta::beta_reg;
use statrs::function::gamma::ln_gamma;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::seed::RandomSeed;

/// A Beta distribution over a proportion, parameterized by evidence.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BetaPosterior {
    alpha: f64,
    beta: f64,
}

impl BetaPosterior {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0) || !(beta > 0.0) || !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "beta parameters must be positive and finite, got ({alpha}, {beta})"
            )));
        }
        Ok(BetaPosterior { alpha, beta })
    }

    /// The flat prior, Beta(1, 1).
    pub fn uniform() -> Self {
        BetaPosterior { alpha: 1.0, beta: 1.0 }
    }

    /// Posterior after observing `successes` and `failures` more trials.
    pub fn update(&self, successes: u64, failures: u64) -> Self {
        BetaPosterior {
            alpha: self.alpha + successes as f64,
            beta: self.beta + failures as f64,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn mean(&self) -> f64 {
        self.alpha / (self.alpha + self.beta)
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else if x >= 1.0 {
            1.0
        } else {
            beta_reg(self.alpha, self.beta, x)
        }
    }

    fn ln_pdf(&self, x: f64) -> f64 {
        let ln_b = ln_gamma(self.alpha) + ln_gamma(self.beta) - ln_gamma(self.alpha + self.beta);
        (self.alpha - 1.0) * x.ln() + (self.beta - 1.0) * (1.0 - x).ln() - ln_b
    }
}

/// How to evaluate `Pr(p_a < p_b)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum ProbMethod {
    /// Closed-form sum; requires integer parameters.
    Exact,
    /// Panel Gauss-Legendre integration; any parameters.
    Quadrature,
    /// Paired sampling; any parameters, noisy but simple.
    MonteCarlo { samples: u64, seed: RandomSeed },
}

/// Probability that a draw from `a` falls below a draw from `b`.
pub fn prob_less(a: &BetaPosterior, b: &BetaPosterior, method: ProbMethod) -> Result<f64> {
    match method {
        ProbMethod::Exact => exact(a, b),
        ProbMethod::Quadrature => Ok(quadrature(a, b)),
        ProbMethod::MonteCarlo { samples, seed } => monte_carlo(a, b, samples, seed),
    }
}

fn as_integer(x: f64) -> Option<u64> {
    let r = x.round();
    if (x - r).abs() < 1e-9 && r >= 1.0 {
        Some(r as u64)
    } else {
        None
    }
}

/// Closed-form evaluation by summing over the second shape parameter:
///
/// `Pr(p_a < p_b) = sum_{i=0}^{alpha_b - 1}
///     B(alpha_a + i, beta_a + beta_b) /
///     ((beta_b + i) * B(1 + i, beta_b) * B(alpha_a, beta_a))`
///
/// Each term is evaluated in log space.
fn exact(a: &BetaPosterior, b: &BetaPosterior) -> Result<f64> {
    if a == b {
        return Ok(0.5);
    }
    let (Some(_), Some(_), Some(ab), Some(_)) = (
        as_integer(a.alpha),
        as_integer(a.beta),
        as_integer(b.alpha),
        as_integer(b.beta),
    ) else {
        return Err(Error::InvalidParameter(
            "exact comparison needs integer parameters; use quadrature".into(),
        ));
    };
    let ln_beta =
        |x: f64, y: f64| ln_gamma(x) + ln_gamma(y) - ln_gamma(x + y);
    let ln_b_a = ln_beta(a.alpha, a.beta);
    let mut total = 0.0;
    for i in 0..ab {
        let i_f = i as f64;
        let ln_term = ln_beta(a.alpha + i_f, a.beta + b.beta)
            - (b.beta + i_f).ln()
            - ln_beta(1.0 + i_f, b.beta)
            - ln_b_a;
        total += ln_term.exp();
    }
    Ok(total)
}

const PANELS: usize = 32;
const NODES: usize = 64;

/// Gauss-Legendre nodes and weights on [-1, 1], found by Newton
/// iteration on the Legendre polynomial.
fn legendre_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = NODES;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for k in 0..n {
            // Tricomi-style starting guess for the k-th root.
            let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                // Evaluate P_n and its derivative by upward recurrence.
                let mut p0 = 1.0;
                let mut p1 = x;
                for m in 2..=n {
                    let m_f = m as f64;
                    let p2 = ((2.0 * m_f - 1.0) * x * p1 - (m_f - 1.0) * p0) / m_f;
                    p0 = p1;
                    p1 = p2;
                }
                let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let step = p1 / dp;
                x -= step;
                if step.abs() < 1e-15 {
                    break;
                }
            }
            // Recompute the derivative at the converged root.
            let mut p0 = 1.0;
            let mut p1 = x;
            for m in 2..=n {
                let m_f = m as f64;
                let p2 = ((2.0 * m_f - 1.0) * x * p1 - (m_f - 1.0) * p0) / m_f;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            nodes[k] = x;
            weights[k] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        (nodes, weights)
    })
}

/// Composite Gauss-Legendre evaluation of
/// `integral over [0,1] of CDF_a(y) * pdf_b(y) dy`.
fn quadrature(a: &BetaPosterior, b: &BetaPosterior) -> f64 {
    let (nodes, weights) = legendre_rule();
    let width = 1.0 / PANELS as f64;
    let mut total = 0.0;
    for panel in 0..PANELS {
        let lo = panel as f64 * width;
        let mid = lo + width / 2.0;
        let half = width / 2.0;
        for (x, w) in nodes.iter().zip(weights) {
            let y = mid + half * x;
            total += w * half * a.cdf(y) * b.ln_pdf(y).exp();
        }
    }
    total.clamp(0.0, 1.0)
}

fn monte_carlo(a: &BetaPosterior, b: &BetaPosterior, samples: u64, seed: RandomSeed) -> Result<f64> {
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be positive".into()));
    }
    let da = BetaDist::new(a.alpha, a.beta)
        .map_err(|e| Error::InvalidParameter(format!("bad beta parameters: {e}")))?;
    let db = BetaDist::new(b.alpha, b.beta)
        .map_err(|e| Error::InvalidParameter(format!("bad beta parameters: {e}")))?;
    let mut rng = seed.child("prob-less-mc", 0).rng();
    let mut below = 0u64;
    for _ in 0..samples {
        let xa: f64 = da.sample(&mut rng);
        let xb: f64 = db.sample(&mut rng);
        if xa < xb {
            below += 1;
        }
    }
    Ok(below as f64 / samples as f64)
}
