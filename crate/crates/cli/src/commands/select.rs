use std::path::Path;

use anyhow::{Context, Result};

use burrowcast_core::city::BlockId;
use burrowcast_core::design::select_field_sample;
use burrowcast_core::synth::field_inspect;
use burrowcast_core::{data, RandomSeed, RealCity, RealPredictions};

use crate::artifacts;
use crate::config::RunConfig;
use crate::io;

/// Draws the stratified inspection sample from `predictions.json` and
/// writes `field_sample.csv`.
///
/// With `simulate`, the sampled blocks are also inspected inside the
/// synthetic city at the prediction window's first month, producing the
/// completed `field_records.csv` a real deployment would collect in the
/// field.
pub fn cmd_select(cfg: &RunConfig, out: &Path, simulate: bool, allow_short: bool) -> Result<()> {
    let preds: RealPredictions = io::read_json(&out.join(artifacts::PREDICTIONS))?;
    preds.validate()?;

    let sample = select_field_sample(
        &preds,
        cfg.field.sample_size,
        cfg.field.range,
        RandomSeed::new(cfg.seed),
        allow_short,
    )?;

    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["block_id", "predicted_prob", "bin"])
        .context("writing sample header")?;
    for entry in &sample.entries {
        writer
            .write_record([
                entry.block.to_string(),
                format!("{:.6}", entry.predicted),
                entry.bin.to_string(),
            ])
            .context("writing sample row")?;
    }
    let bytes = writer.into_inner().context("flushing sample rows")?;
    io::write_atomic(&out.join(artifacts::FIELD_SAMPLE), &bytes)?;

    println!(
        "select: {} of {} requested blocks from {} eligible, allocations {:?}",
        sample.entries.len(),
        sample.requested,
        sample.eligible,
        sample.allocations
    );

    if simulate {
        let city: RealCity = io::read_json(&out.join(artifacts::CITY))?;
        city.validate()?;
        let blocks: Vec<BlockId> = sample.entries.iter().map(|e| e.block).collect();
        let records = field_inspect(
            &city,
            &blocks,
            preds.window_start,
            RandomSeed::new(cfg.seed),
        );
        let mut buf = Vec::new();
        data::write_records_csv(&records, &mut buf)?;
        io::write_atomic(&out.join(artifacts::FIELD_RECORDS), &buf)?;
        let found = records.iter().filter(|r| r.outcome == Some(1)).count();
        println!(
            "select: simulated {} inspections in month {}, {} found evidence",
            records.len(),
            preds.window_start,
            found
        );
    }
    Ok(())
}
