//! Monte Carlo power analysis for two-group field assessments.

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::design::beta::{prob_less, BetaPosterior, ProbMethod};
use crate::error::{Error, Result};
use crate::seed::RandomSeed;

/// Scenario for a planned comparison of two groups of blocks.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerConfig {
    /// Inspections per group.
    pub n_per_group: u32,
    /// True find-rate range of the lower group, sampled uniformly.
    pub range1: (f64, f64),
    /// True find-rate range of the higher group.
    pub range2: (f64, f64),
    /// Posterior probability needed to call the difference.
    pub decision_threshold: f64,
    /// Simulated assessments.
    pub reps: u32,
}

impl PowerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_per_group == 0 {
            return Err(Error::InvalidConfig("n_per_group must be positive".into()));
        }
        if self.reps == 0 {
            return Err(Error::InvalidConfig("reps must be positive".into()));
        }
        for (name, (lo, hi)) in [("range1", self.range1), ("range2", self.range2)] {
            if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo > hi {
                return Err(Error::InvalidConfig(format!(
                    "{name} must satisfy 0 <= lo <= hi <= 1, got ({lo}, {hi})"
                )));
            }
        }
        if !(0.0..1.0).contains(&self.decision_threshold) {
            return Err(Error::InvalidConfig(
                "decision_threshold must lie in [0, 1)".into(),
            ));
        }
        Ok(())
    }
}

/// Estimated power of the planned comparison.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerReport {
    /// Fraction of simulations where the difference was called.
    pub power: f64,
    /// Binomial standard error of that fraction.
    pub std_error: f64,
    pub detected: u64,
    pub reps: u32,
    pub n_per_group: u32,
}

/// Simulates the assessment end to end: draw true rates from their
/// ranges, observe binomial finds, update flat priors, and test whether
/// `Pr(rate1 < rate2)` clears the threshold.
///
/// Each repetition derives its own stream, so results do not depend on
/// thread scheduling.
pub fn power_simulation(cfg: &PowerConfig, seed: RandomSeed) -> Result<PowerReport> {
    cfg.validate()?;
    let n = cfg.n_per_group as u64;
    let detected: u64 = (0..cfg.reps as u64)
        .into_par_iter()
        .map(|rep| {
            let mut rng = seed.child("rep", rep).rng();
            let p1 = sample_range(&mut rng, cfg.range1);
            let p2 = sample_range(&mut rng, cfg.range2);
            let s1 = Binomial::new(n, p1).expect("validated rate").sample(&mut rng);
            let s2 = Binomial::new(n, p2).expect("validated rate").sample(&mut rng);
            let post1 = BetaPosterior::uniform().update(s1, n - s1);
            let post2 = BetaPosterior::uniform().update(s2, n - s2);
            let pr = prob_less(&post1, &post2, ProbMethod::Exact)
                .expect("integer posteriors");
            u64::from(pr > cfg.decision_threshold)
        })
        .sum();
    let power = detected as f64 / cfg.reps as f64;
    Ok(PowerReport {
        power,
        std_error: (power * (1.0 - power) / cfg.reps as f64).sqrt(),
        detected,
        reps: cfg.reps,
        n_per_group: cfg.n_per_group,
    })
}

fn sample_range(rng: &mut rand_chacha::ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    if lo == hi {
        // Consume a draw anyway so the stream layout stays fixed.
        let _: f64 = rng.gen();
        lo
    } else {
        lo + (hi - lo) * rng.gen::<f64>()
    }
}
