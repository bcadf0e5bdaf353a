//! Observation records, window aggregation, and prediction containers.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::city::{BlockId, City, PeriodIndex};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Where an observation came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    /// Resident-initiated report followed by an inspection.
    Report,
    /// Proactive inspection from a designed assessment.
    Field,
}

impl std::fmt::Display for Source {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Source::Report => write!(f, "report"),
            Source::Field => write!(f, "field"),
        }
    }
}

/// One inspection record, as stored in the observation CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObservationRecord {
    pub block_id: BlockId,
    pub period: PeriodIndex,
    pub source: Source,
    /// Free-text inspector note, when the outcome still needs coding.
    pub note: Option<String>,
    /// Coded outcome: 1 when evidence was found, 0 when not.
    pub outcome: Option<u8>,
}

/// A block-window pair with its aggregated label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledInstance {
    pub block: BlockId,
    pub window_start: PeriodIndex,
    pub window_len: u32,
    /// 1 when any record in the window found evidence.
    pub label: u8,
}

/// Per-block outcome counts for one period, report records only.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodOutcome {
    pub found: u32,
    pub clear: u32,
}

/// Collapses report records into per-(block, period) outcome counts.
///
/// Field records are left out so that designed assessments never leak into
/// training labels. Records whose outcome has not been coded are an error.
pub fn aggregate_outcomes(
    records: &[ObservationRecord],
) -> Result<BTreeMap<(BlockId, PeriodIndex), PeriodOutcome>> {
    let mut out: BTreeMap<(BlockId, PeriodIndex), PeriodOutcome> = BTreeMap::new();
    for rec in records {
        if rec.source != Source::Report {
            continue;
        }
        let outcome = rec.outcome.ok_or(Error::MissingOutcome {
            block: rec.block_id,
            period: rec.period,
        })?;
        let entry = out.entry((rec.block_id, rec.period)).or_default();
        if outcome > 0 {
            entry.found += 1;
        } else {
            entry.clear += 1;
        }
    }
    Ok(out)
}

/// Rolls per-period outcomes into fixed-length windows.
///
/// A window covers periods `[start, start + window_len)` aligned to multiples
/// of `window_len`. The label is 1 when any covered period found evidence.
/// Instances come back sorted by block, then window start.
pub fn aggregate_windows(
    outcomes: &BTreeMap<(BlockId, PeriodIndex), PeriodOutcome>,
    window_len: u32,
) -> Result<Vec<LabeledInstance>> {
    if window_len == 0 {
        return Err(Error::InvalidParameter("window_len must be positive".into()));
    }
    let mut labels: BTreeMap<(BlockId, PeriodIndex), u8> = BTreeMap::new();
    for (&(block, period), counts) in outcomes {
        let start = (period / window_len) * window_len;
        let slot = labels.entry((block, start)).or_insert(0);
        if counts.found > 0 {
            *slot = 1;
        }
    }
    Ok(labels
        .into_iter()
        .map(|((block, window_start), label)| LabeledInstance {
            block,
            window_start,
            window_len,
            label,
        })
        .collect())
}

/// Builds the design matrix and label vector for a set of instances.
///
/// Row order follows the instance order. Every instance must refer to a
/// block of the city.
pub fn build_training_matrix<F: Scalar>(
    instances: &[LabeledInstance],
    city: &City<F>,
) -> Result<(Array2<F>, Vec<u8>)> {
    let d = city.config.n_features as usize;
    let mut x = Array2::zeros((instances.len(), d));
    let mut y = Vec::with_capacity(instances.len());
    for (i, inst) in instances.iter().enumerate() {
        let block = city.block(inst.block)?;
        for (j, &v) in block.features.iter().enumerate() {
            x[(i, j)] = v;
        }
        y.push(inst.label);
    }
    Ok((x, y))
}

/// Risk scores for every block at one point in time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PredictionSet<F> {
    /// First period of the window the scores are aimed at.
    pub window_start: PeriodIndex,
    pub entries: BTreeMap<BlockId, F>,
}

impl<F: Scalar> PredictionSet<F> {
    pub fn new(window_start: PeriodIndex, entries: BTreeMap<BlockId, F>) -> Result<Self> {
        let set = PredictionSet {
            window_start,
            entries,
        };
        set.validate()?;
        Ok(set)
    }

    pub fn validate(&self) -> Result<()> {
        for (&block, &p) in &self.entries {
            if !(p >= F::zero() && p <= F::one()) {
                return Err(Error::InvalidParameter(format!(
                    "prediction for block {block} is {p}, outside [0, 1]"
                )));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, block: BlockId) -> Option<F> {
        self.entries.get(&block).copied()
    }
}

const CSV_HEADER: &str = "block_id,period,source,note,outcome";

/// Writes observation records as CSV with a fixed header.
pub fn write_records_csv<W: Write>(records: &[ObservationRecord], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["block_id", "period", "source", "note", "outcome"])?;
    for rec in records {
        w.write_record([
            rec.block_id.to_string(),
            rec.period.to_string(),
            rec.source.to_string(),
            rec.note.clone().unwrap_or_default(),
            rec.outcome.map(|o| o.to_string()).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads observation records, insisting on the exact header.
pub fn read_records_csv<R: Read>(reader: R) -> Result<Vec<ObservationRecord>> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let header = r.headers()?.iter().collect::<Vec<_>>().join(",");
    if header != CSV_HEADER {
        return Err(Error::CsvHeader {
            expected: CSV_HEADER.into(),
            actual: header,
        });
    }
    let mut out = Vec::new();
    for row in r.records() {
        let row = row?;
        let field = |i: usize| row.get(i).unwrap_or("");
        let source = match field(2) {
            "report" => Source::Report,
            "field" => Source::Field,
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown source {other:?} in records CSV"
                )))
            }
        };
        let note = match field(3) {
            "" => None,
            s => Some(s.to_string()),
        };
        let outcome = match field(4) {
            "" => None,
            s => Some(s.parse::<u8>().map_err(|_| {
                Error::InvalidParameter(format!("outcome {s:?} is not 0 or 1"))
            })?),
        };
        if let Some(o) = outcome {
            if o > 1 {
                return Err(Error::InvalidParameter(format!(
                    "outcome {o} is not 0 or 1"
                )));
            }
        }
        out.push(ObservationRecord {
            block_id: field(0)
                .parse()
                .map_err(|_| Error::InvalidParameter("bad block_id in records CSV".into()))?,
            period: field(1)
                .parse()
                .map_err(|_| Error::InvalidParameter("bad period in records CSV".into()))?,
            source,
            note,
            outcome,
        });
    }
    Ok(out)
}

/// Convenience wrapper writing records to a file path.
pub fn write_records_file<P: AsRef<Path>>(records: &[ObservationRecord], path: P) -> Result<()> {
    let file = std::fs::File::create(path)?;
    write_records_csv(records, std::io::BufWriter::new(file))
}

/// Convenience wrapper reading records from a file path.
pub fn read_records_file<P: AsRef<Path>>(path: P) -> Result<Vec<ObservationRecord>> {
    let file = std::fs::File::open(path)?;
    read_records_csv(std::io::BufReader::new(file))
}
