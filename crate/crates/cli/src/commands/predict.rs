use std::collections::BTreeMap;
use std::path::Path;

use anyhow::Result;

use burrowcast_core::city::BlockId;
use burrowcast_core::data::PredictionSet;
use burrowcast_core::model::load_model_file;
use burrowcast_core::{Real, RealCity};

use crate::artifacts;
use crate::config::RunConfig;
use crate::io;

/// Scores every block with the trained model and writes
/// `predictions.json` aimed at the window starting at `window_start`
/// (the configured `train_end` by default).
pub fn cmd_predict(cfg: &RunConfig, out: &Path, window_start: Option<u32>) -> Result<()> {
    let start = window_start.unwrap_or(cfg.train_end);
    let city: RealCity = io::read_json(&out.join(artifacts::CITY))?;
    city.validate()?;
    let model = load_model_file::<Real, _>(out.join(artifacts::MODEL))?;

    let x = city.feature_matrix();
    let scores = model.predict_matrix(&x.view());
    let entries: BTreeMap<BlockId, Real> = city
        .blocks
        .iter()
        .map(|b| (b.id, scores[b.id as usize]))
        .collect();
    let preds = PredictionSet::new(start, entries)?;
    io::write_json(&out.join(artifacts::PREDICTIONS), &preds)?;

    println!(
        "predict: scored {} blocks for the window starting at month {}",
        preds.len(),
        start
    );
    Ok(())
}
