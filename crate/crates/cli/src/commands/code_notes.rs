use std::path::Path;

use anyhow::{Context, Result};

use burrowcast_core::data::{read_records_file, write_records_csv};
use burrowcast_core::notes::{RuleTable, UnmatchedPolicy};

use crate::artifacts;
use crate::io;

/// Applies the rule table to every uncoded note in `records.csv` and
/// writes `records_coded.csv`.
pub fn cmd_code_notes(out: &Path, rules: Option<&Path>, policy: UnmatchedPolicy) -> Result<()> {
    let records = read_records_file(out.join(artifacts::RECORDS))
        .context("reading report records")?;
    let table = match rules {
        Some(path) => RuleTable::from_json_file(path)
            .with_context(|| format!("loading rules from {}", path.display()))?,
        None => RuleTable::builtin(),
    };
    let coded = table.code_all(&records, policy)?;

    let mut buf = Vec::new();
    write_records_csv(&coded, &mut buf)?;
    io::write_atomic(&out.join(artifacts::CODED), &buf)?;

    let found: usize = coded
        .iter()
        .filter(|r| r.outcome == Some(1))
        .count();
    println!(
        "code-notes: {} of {} records coded, {} positive",
        coded.len(),
        records.len(),
        found
    );
    Ok(())
}
