use std::path::Path;

use anyhow::{bail, Context, Result};

use burrowcast_core::data::{aggregate_outcomes, aggregate_windows, build_training_matrix};
use burrowcast_core::model::{save_model, TrainedModel};
use burrowcast_core::{data, RandomSeed, Real, RealCity};

use crate::artifacts;
use crate::config::RunConfig;
use crate::io;

/// Trains the configured classifier on every complete outcome window
/// ending by `train_end` and writes `model.json`.
///
/// The training seed is the same one cross-validation would derive for a
/// fold at that month, so the deployed model matches the corresponding
/// fold exactly.
pub fn cmd_train(cfg: &RunConfig, out: &Path, train_end: Option<u32>) -> Result<()> {
    let train_end = train_end.unwrap_or(cfg.train_end);
    let city: RealCity = io::read_json(&out.join(artifacts::CITY))?;
    city.validate()?;
    let records = data::read_records_file(out.join(artifacts::CODED))
        .context("reading coded records")?;

    let outcomes = aggregate_outcomes(&records)?;
    let windows = aggregate_windows(&outcomes, cfg.window_len)?;
    let train: Vec<_> = windows
        .into_iter()
        .filter(|w| w.window_start + w.window_len <= train_end)
        .collect();
    if train.is_empty() {
        bail!(
            "no complete {}-month window ends by month {}; the first one ends at month {}",
            cfg.window_len,
            train_end,
            cfg.window_len
        );
    }
    let positives = train.iter().filter(|w| w.label > 0).count();

    let (x, y) = build_training_matrix(&train, &city)?;
    let seed = RandomSeed::new(cfg.seed).child("fold", u64::from(train_end));
    let model = TrainedModel::<Real>::train(&x.view(), &y, &cfg.classifier, seed)?;

    let mut buf = Vec::new();
    save_model(&model, &mut buf)?;
    io::write_atomic(&out.join(artifacts::MODEL), &buf)?;

    println!(
        "train: {} instances ({} positive) through month {}",
        train.len(),
        positives,
        train_end
    );
    Ok(())
}
