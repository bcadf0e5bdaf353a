use std::path::Path;

use anyhow::{Context, Result};

use burrowcast_core::eval::temporal_cv;
use burrowcast_core::{data, RandomSeed, RealCity};

use crate::artifacts;
use crate::config::RunConfig;
use crate::io;
use crate::svg;

/// Runs monthly temporal cross-validation, writing `cv_report.json`, one
/// calibration chart per requested trailing fold, and the pooled chart.
pub fn cmd_cv(cfg: &RunConfig, out: &Path, svg_folds: usize) -> Result<()> {
    let city: RealCity = io::read_json(&out.join(artifacts::CITY))?;
    city.validate()?;
    let records = data::read_records_file(out.join(artifacts::CODED))
        .context("reading coded records")?;

    let report = temporal_cv(
        &city,
        &records,
        &cfg.classifier,
        &cfg.cv_params(),
        RandomSeed::new(cfg.seed),
    )?;
    io::write_json(&out.join(artifacts::CV_REPORT), &report)?;

    let first_chart = report.folds.len().saturating_sub(svg_folds);
    for fold in &report.folds[first_chart..] {
        let chart = svg::decile_chart(
            &fold.decile,
            &format!("month {} test window calibration", fold.month),
        );
        io::write_atomic(
            &out.join(artifacts::cv_fold_svg(fold.month)),
            chart.as_bytes(),
        )?;
    }
    let pooled = svg::decile_chart(&report.pooled_decile, "pooled calibration, all folds");
    io::write_atomic(&out.join(artifacts::CV_POOLED_SVG), pooled.as_bytes())?;

    let fmt = |v: Option<f64>| match v {
        Some(v) => format!("{v:.3}"),
        None => "n/a".to_string(),
    };
    println!(
        "cv: {} folds, mean P@{} {}, mean AUC {}, pooled slope {}",
        report.folds.len(),
        cfg.cv.top_n,
        fmt(report.mean_p_at_n),
        fmt(report.mean_auc),
        fmt(report.pooled_slope)
    );
    Ok(())
}
