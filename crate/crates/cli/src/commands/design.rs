use std::path::Path;

use anyhow::Result;
use serde::Serialize;

use burrowcast_core::design::{power_simulation, PowerConfig, PowerReport};
use burrowcast_core::RandomSeed;

use crate::artifacts;
use crate::config::RunConfig;
use crate::io;

#[derive(Serialize)]
struct PowerArtifact<'a> {
    config: &'a PowerConfig,
    report: &'a PowerReport,
}

/// Simulates the planned field assessment and writes `power.json` with
/// the design echoed next to the estimate.
pub fn cmd_design(cfg: &RunConfig, out: &Path) -> Result<()> {
    let report = power_simulation(&cfg.power, RandomSeed::new(cfg.seed))?;
    io::write_json(
        &out.join(artifacts::POWER),
        &PowerArtifact {
            config: &cfg.power,
            report: &report,
        },
    )?;

    println!(
        "design: power {:.3} +/- {:.3} ({} of {} runs detected, N={} per group)",
        report.power, report.std_error, report.detected, report.reps, report.n_per_group
    );
    Ok(())
}
