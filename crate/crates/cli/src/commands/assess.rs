use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;

use burrowcast_core::design::compare_field;
use burrowcast_core::eval::{calibration_slope, decile_table, window_labels, DecileTable};
use burrowcast_core::data::aggregate_outcomes;
use burrowcast_core::{data, RealPredictions};

use crate::artifacts;
use crate::config::RunConfig;
use crate::io;
use crate::svg;

#[derive(Serialize)]
struct SideReport {
    n: u64,
    overall_rate: Option<f64>,
    slope: Option<f64>,
    decile: DecileTable,
}

impl SideReport {
    fn from_table(decile: DecileTable, slope: Option<f64>) -> Self {
        SideReport {
            n: decile.total_count(),
            overall_rate: decile.overall_rate(),
            slope,
            decile,
        }
    }
}

#[derive(Serialize)]
struct AssessReport {
    window_start: u32,
    window_len: u32,
    holdout: SideReport,
    field: SideReport,
    /// Holdout slope minus field slope, when both are defined. Large
    /// positive values mean the scores look calibrated on new reports
    /// but not on the ground the inspectors actually walked.
    slope_gap: Option<f64>,
}

/// Compares predictions against both validation routes: the new-report
/// holdout window and the completed field inspections. Writes
/// `assess_report.json` and one calibration chart per route.
pub fn cmd_assess(cfg: &RunConfig, out: &Path) -> Result<()> {
    let preds: RealPredictions = io::read_json(&out.join(artifacts::PREDICTIONS))?;
    preds.validate()?;

    let field_records = data::read_records_file(out.join(artifacts::FIELD_RECORDS))
        .context("reading field records")?;
    let missing: Vec<u32> = field_records
        .iter()
        .filter(|r| r.outcome.is_none())
        .map(|r| r.block_id)
        .collect();
    if !missing.is_empty() {
        bail!(
            "{} field records still lack outcomes, blocks {:?}",
            missing.len(),
            missing
        );
    }
    let field = compare_field(&preds, &field_records)?;

    let coded = data::read_records_file(out.join(artifacts::CODED))
        .context("reading coded records")?;
    let outcomes = aggregate_outcomes(&coded)?;
    let holdout = window_labels(&outcomes, preds.window_start, cfg.window_len);
    let mut pairs = Vec::with_capacity(holdout.len());
    for inst in &holdout {
        match preds.get(inst.block) {
            Some(p) => pairs.push((p, inst.label)),
            None => bail!("holdout block {} has no prediction", inst.block),
        }
    }
    let holdout_decile = decile_table(&pairs);
    let holdout_slope = calibration_slope(&holdout_decile).ok();

    let report = AssessReport {
        window_start: preds.window_start,
        window_len: cfg.window_len,
        slope_gap: match (holdout_slope, field.slope) {
            (Some(h), Some(f)) => Some(h - f),
            _ => None,
        },
        holdout: SideReport::from_table(holdout_decile, holdout_slope),
        field: SideReport::from_table(field.decile, field.slope),
    };
    io::write_json(&out.join(artifacts::ASSESS_REPORT), &report)?;

    let holdout_chart = svg::decile_chart(&report.holdout.decile, "new-report holdout calibration");
    io::write_atomic(
        &out.join(artifacts::ASSESS_HOLDOUT_SVG),
        holdout_chart.as_bytes(),
    )?;
    let field_chart = svg::decile_chart(&report.field.decile, "field assessment calibration");
    io::write_atomic(
        &out.join(artifacts::ASSESS_FIELD_SVG),
        field_chart.as_bytes(),
    )?;

    let fmt = |v: Option<f64>| match v {
        Some(v) => format!("{v:.3}"),
        None => "n/a".to_string(),
    };
    println!(
        "assess: holdout slope {} over {} blocks, field slope {} over {} blocks, gap {}",
        fmt(report.holdout.slope),
        report.holdout.n,
        fmt(report.field.slope),
        report.field.n,
        fmt(report.slope_gap)
    );
    Ok(())
}
