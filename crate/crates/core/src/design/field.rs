//! Stratified selection of blocks for proactive inspection, and the
//! comparison of field outcomes against model predictions.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::city::BlockId;
use crate::data::{ObservationRecord, PredictionSet, Source};
use crate::error::{Error, Result};
use crate::eval::calibration::{calibration_slope, decile_index, decile_table, DecileTable};
use crate::scalar::Scalar;
use crate::seed::RandomSeed;

/// One block chosen for inspection.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldEntry {
    pub block: BlockId,
    pub predicted: f64,
    /// Decile of the predicted probability.
    pub bin: usize,
}

/// A designed inspection sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldSample {
    /// Chosen blocks, ordered by bin then block id.
    pub entries: Vec<FieldEntry>,
    /// Blocks drawn from each decile.
    pub allocations: Vec<usize>,
    pub requested: usize,
    pub eligible: usize,
}

/// Draws a stratified sample of scored blocks for field inspection.
///
/// Blocks are eligible when their score lies in `(range.0, range.1]`.
/// The sample is spread evenly over the ten deciles; when a decile has
/// too few eligible blocks, its shortfall moves to the others in
/// proportion to their spare capacity (largest remainder, ties to the
/// lower decile). Within a decile, blocks are drawn without replacement
/// from its own child stream.
pub fn select_field_sample<F: Scalar>(
    preds: &PredictionSet<F>,
    n: usize,
    range: (f64, f64),
    seed: RandomSeed,
    allow_short: bool,
) -> Result<FieldSample> {
    if n == 0 {
        return Err(Error::InvalidParameter("sample size must be positive".into()));
    }
    if !(0.0..=1.0).contains(&range.0) || !(0.0..=1.0).contains(&range.1) || range.0 > range.1 {
        return Err(Error::InvalidParameter(format!(
            "range must satisfy 0 <= lo <= hi <= 1, got ({}, {})",
            range.0, range.1
        )));
    }

    let mut by_bin: Vec<Vec<(BlockId, f64)>> = vec![Vec::new(); 10];
    for (&block, &p) in &preds.entries {
        let p = p.into64();
        if p > range.0 && p <= range.1 {
            by_bin[decile_index(p)].push((block, p));
        }
    }
    let avail: Vec<usize> = by_bin.iter().map(|b| b.len()).collect();
    let eligible: usize = avail.iter().sum();

    if eligible < n && !allow_short {
        return Err(Error::InsufficientEligible {
            requested: n,
            eligible,
            per_bin: format!("{avail:?}"),
        });
    }

    let target = n.min(eligible);
    let mut take: Vec<usize> = (0..10)
        .map(|b| {
            let quota = target / 10 + usize::from(b < target % 10);
            quota.min(avail[b])
        })
        .collect();
    let taken: usize = take.iter().sum();
    let shortfall = target - taken;
    if shortfall > 0 {
        let spare: Vec<usize> = (0..10).map(|b| avail[b] - take[b]).collect();
        let total_spare: usize = spare.iter().sum();
        let mut residual = shortfall;
        let mut remainders: Vec<(usize, usize)> = Vec::new();
        for b in 0..10 {
            let exact = shortfall * spare[b];
            let extra = exact / total_spare;
            take[b] += extra;
            residual -= extra;
            let rem = exact % total_spare;
            if rem > 0 {
                remainders.push((b, rem));
            }
        }
        remainders.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        for &(b, _) in remainders.iter().take(residual) {
            take[b] += 1;
        }
    }

    let mut entries = Vec::with_capacity(target);
    for b in 0..10 {
        let mut pool = by_bin[b].clone();
        pool.sort_by_key(|&(block, _)| block);
        let mut rng = seed.child("bin", b as u64).rng();
        let k = take[b];
        for i in 0..k {
            let j = rng.gen_range(i..pool.len());
            pool.swap(i, j);
        }
        let mut chosen: Vec<(BlockId, f64)> = pool[..k].to_vec();
        chosen.sort_by_key(|&(block, _)| block);
        for (block, predicted) in chosen {
            entries.push(FieldEntry { block, predicted, bin: b });
        }
    }

    Ok(FieldSample {
        entries,
        allocations: take,
        requested: n,
        eligible,
    })
}

/// Field outcomes laid against the predictions that chose them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldComparison {
    pub decile: DecileTable,
    pub overall_rate: f64,
    /// Calibration slope over the occupied deciles, when defined.
    pub slope: Option<f64>,
}

/// Tabulates field inspection outcomes by predicted decile.
///
/// Every record must be a field record with a coded outcome and a scored
/// block, and no block may appear twice.
pub fn compare_field<F: Scalar>(
    preds: &PredictionSet<F>,
    records: &[ObservationRecord],
) -> Result<FieldComparison> {
    if records.is_empty() {
        return Err(Error::InvalidParameter(
            "no field records to compare".into(),
        ));
    }
    let mut seen = std::collections::BTreeSet::new();
    let mut pairs = Vec::with_capacity(records.len());
    for rec in records {
        if rec.source != Source::Field {
            return Err(Error::InvalidParameter(format!(
                "record for block {} in period {} is not a field record",
                rec.block_id, rec.period
            )));
        }
        let outcome = rec.outcome.ok_or(Error::MissingOutcome {
            block: rec.block_id,
            period: rec.period,
        })?;
        let p = preds
            .get(rec.block_id)
            .ok_or(Error::UnknownBlock(rec.block_id))?;
        if !seen.insert(rec.block_id) {
            return Err(Error::InvalidParameter(format!(
                "block {} appears twice in the field records",
                rec.block_id
            )));
        }
        pairs.push((p.into64(), outcome));
    }
    let decile = decile_table(&pairs);
    let overall_rate = decile.overall_rate().expect("nonempty records");
    let slope = calibration_slope(&decile).ok();
    Ok(FieldComparison {
        decile,
        overall_rate,
        slope,
    })
}
