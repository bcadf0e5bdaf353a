//! Decile calibration tables and the calibration slope.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::stats::wls_slope;

/// One probability decile `(lower, upper]` with its observed outcomes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecileBin {
    pub lower: f64,
    pub upper: f64,
    pub count: u64,
    pub found: u64,
    /// Observed find rate; absent for an empty bin.
    pub rate: Option<f64>,
}

/// Predicted probability deciles against observed find rates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecileTable {
    pub bins: Vec<DecileBin>,
}

/// Index of the decile holding `p`: bins are `(l, u]`, except that an
/// exact zero lands in the first bin.
pub fn decile_index(p: f64) -> usize {
    ((p * 10.0).ceil() as i64 - 1).clamp(0, 9) as usize
}

/// Tabulates `(probability, outcome)` pairs into the ten deciles.
pub fn decile_table(pairs: &[(f64, u8)]) -> DecileTable {
    let mut bins: Vec<DecileBin> = (0..10)
        .map(|i| DecileBin {
            lower: i as f64 / 10.0,
            upper: (i + 1) as f64 / 10.0,
            count: 0,
            found: 0,
            rate: None,
        })
        .collect();
    for &(p, y) in pairs {
        let b = &mut bins[decile_index(p)];
        b.count += 1;
        b.found += u64::from(y > 0);
    }
    for b in &mut bins {
        if b.count > 0 {
            b.rate = Some(b.found as f64 / b.count as f64);
        }
    }
    DecileTable { bins }
}

impl DecileTable {
    pub fn total_count(&self) -> u64 {
        self.bins.iter().map(|b| b.count).sum()
    }

    pub fn total_found(&self) -> u64 {
        self.bins.iter().map(|b| b.found).sum()
    }

    /// Overall find rate across every bin; absent when the table is empty.
    pub fn overall_rate(&self) -> Option<f64> {
        let n = self.total_count();
        if n == 0 {
            None
        } else {
            Some(self.total_found() as f64 / n as f64)
        }
    }
}

/// Slope of observed rate against bin midpoint, weighted by bin count.
///
/// A slope near one means the probabilities track the outcomes; near zero
/// means the ranking carries no calibrated signal. Fails when fewer than
/// two bins are occupied.
pub fn calibration_slope(table: &DecileTable) -> Result<f64> {
    let points: Vec<(f64, f64, f64)> = table
        .bins
        .iter()
        .filter_map(|b| {
            b.rate
                .map(|r| ((b.lower + b.upper) / 2.0, r, b.count as f64))
        })
        .collect();
    wls_slope(&points)
}
