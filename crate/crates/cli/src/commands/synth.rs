use std::path::Path;

use anyhow::{Context, Result};

use burrowcast_core::synth::{flatten_records, generate_city, simulate_periods};
use burrowcast_core::{data, RandomSeed, Real};

use crate::artifacts;
use crate::config::RunConfig;
use crate::io;

/// Generates the city, simulates every period, and writes the raw
/// artifacts: `city.json`, the uncoded `records.csv`, and the per-period
/// ground truth `truth.csv`.
pub fn cmd_synth(cfg: &RunConfig, out: &Path) -> Result<()> {
    let seed = RandomSeed::new(cfg.seed);
    let city = generate_city::<Real>(&cfg.city, seed)?;
    let periods = simulate_periods(&city, cfg.periods, seed);
    let records = flatten_records(&periods);

    io::write_json(&out.join(artifacts::CITY), &city)?;

    let mut buf = Vec::new();
    data::write_records_csv(&records, &mut buf)?;
    io::write_atomic(&out.join(artifacts::RECORDS), &buf)?;

    let mut truth = csv::Writer::from_writer(Vec::new());
    truth
        .write_record(["block_id", "period", "infested"])
        .context("writing truth header")?;
    for p in &periods {
        for (block, &flag) in p.infested.iter().enumerate() {
            truth
                .write_record([
                    block.to_string(),
                    p.period.to_string(),
                    flag.to_string(),
                ])
                .context("writing truth row")?;
        }
    }
    let truth_bytes = truth.into_inner().context("flushing truth rows")?;
    io::write_atomic(&out.join(artifacts::TRUTH), &truth_bytes)?;

    println!(
        "synth: {} blocks, {} periods, {} report records",
        city.n_blocks(),
        cfg.periods,
        records.len()
    );
    Ok(())
}
