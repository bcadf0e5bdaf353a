//! Ranking metrics over scored blocks.

use serde::{Deserialize, Serialize};

use crate::city::BlockId;
use crate::error::{Error, Result};
use crate::stats::average_ranks;

/// Precision among the top-ranked blocks.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrecisionAtN {
    pub precision: f64,
    /// How many blocks were asked for.
    pub requested: usize,
    /// How many were actually ranked, when fewer were available.
    pub effective: usize,
}

/// Precision at the top `n` of `(block, probability, outcome)` triples.
///
/// Ranking is by probability descending with block id breaking ties, so
/// the cut is reproducible. With `allow_short`, fewer than `n` available
/// blocks shrinks the cut instead of failing.
pub fn precision_at_n(
    scored: &[(BlockId, f64, u8)],
    n: usize,
    allow_short: bool,
) -> Result<PrecisionAtN> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    if scored.len() < n && !allow_short {
        return Err(Error::NotEnoughScored {
            requested: n,
            available: scored.len(),
        });
    }
    let effective = n.min(scored.len());
    if effective == 0 {
        return Err(Error::NotEnoughScored {
            requested: n,
            available: 0,
        });
    }
    let mut order: Vec<usize> = (0..scored.len()).collect();
    order.sort_by(|&a, &b| {
        scored[b]
            .1
            .partial_cmp(&scored[a].1)
            .expect("finite probabilities")
            .then(scored[a].0.cmp(&scored[b].0))
    });
    let hits = order[..effective]
        .iter()
        .filter(|&&i| scored[i].2 > 0)
        .count();
    Ok(PrecisionAtN {
        precision: hits as f64 / effective as f64,
        requested: n,
        effective,
    })
}

/// Area under the ROC curve via the rank-sum identity, ties counted half.
pub fn roc_auc(scored: &[(f64, u8)]) -> Result<f64> {
    let n_pos = scored.iter().filter(|(_, y)| *y > 0).count();
    let n_neg = scored.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::SingleClass);
    }
    let probs: Vec<f64> = scored.iter().map(|(p, _)| *p).collect();
    let ranks = average_ranks(&probs);
    let rank_sum: f64 = scored
        .iter()
        .zip(&ranks)
        .filter(|((_, y), _)| *y > 0)
        .map(|(_, r)| *r)
        .sum();
    let n_pos_f = n_pos as f64;
    Ok((rank_sum - n_pos_f * (n_pos_f + 1.0) / 2.0) / (n_pos_f * n_neg as f64))
}
