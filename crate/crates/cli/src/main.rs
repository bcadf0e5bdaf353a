use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};

use burrowcast_cli::commands;
use burrowcast_cli::config::RunConfig;
use burrowcast_cli::{artifacts, io};
use burrowcast_core::notes::UnmatchedPolicy;

/// Rat-risk modelling pipeline over synthetic report data.
#[derive(Parser)]
#[command(name = "burrowcast", version, propagate_version = true)]
struct Cli {
    /// Run configuration JSON; the built-in demo run when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Master seed, overriding the configured one.
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,

    /// Artifact directory every command reads from and writes to.
    #[arg(long, global = true, value_name = "DIR", default_value = "out")]
    out: PathBuf,

    /// Worker threads for parallel stages; 0 means one per core.
    #[arg(long, global = true, value_name = "N", default_value_t = 0)]
    workers: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum UnmatchedArg {
    /// Leave unmatched records out of the coded file.
    Drop,
    /// Code unmatched records as not found.
    Zero,
    /// Fail on the first unmatched record.
    Error,
}

impl From<UnmatchedArg> for UnmatchedPolicy {
    fn from(v: UnmatchedArg) -> Self {
        match v {
            UnmatchedArg::Drop => UnmatchedPolicy::Drop,
            UnmatchedArg::Zero => UnmatchedPolicy::Zero,
            UnmatchedArg::Error => UnmatchedPolicy::Error,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate the synthetic city, its report stream, and ground truth.
    Synth,
    /// Code free-text inspection notes into outcomes.
    CodeNotes {
        /// Rule table JSON; the built-in rules when omitted.
        #[arg(long, value_name = "PATH")]
        rules: Option<PathBuf>,
        /// What to do with records no rule matches.
        #[arg(long, value_enum, default_value_t = UnmatchedArg::Drop)]
        unmatched: UnmatchedArg,
    },
    /// Train the configured classifier on coded records.
    Train {
        /// Train on windows ending by this month instead of the configured one.
        #[arg(long, value_name = "MONTH")]
        train_end: Option<u32>,
    },
    /// Cross-validate the classifier month by month.
    Cv {
        /// How many trailing folds get their own calibration chart.
        #[arg(long, value_name = "N", default_value_t = 4)]
        svg_folds: usize,
    },
    /// Score every block with the trained model.
    Predict {
        /// First month of the target window; the configured train_end when omitted.
        #[arg(long, value_name = "MONTH")]
        window_start: Option<u32>,
    },
    /// Estimate the power of the planned field assessment.
    Design,
    /// Draw the stratified field inspection sample.
    Select {
        /// Also inspect the sampled blocks inside the synthetic city.
        #[arg(long)]
        simulate_inspections: bool,
        /// Accept a sample smaller than requested when too few blocks are eligible.
        #[arg(long)]
        allow_short: bool,
    },
    /// Compare predictions against field outcomes and the new-report holdout.
    Assess,
    /// Write the built-in demo configuration for editing.
    DemoConfig {
        /// Override the reporting bias strength.
        #[arg(long, value_name = "BETA")]
        bias: Option<f64>,
    },
}

fn load_config(cli: &Cli) -> anyhow::Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)
            .with_context(|| format!("loading config {}", path.display()))?,
        None => RunConfig::demo(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    if cli.workers > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.workers)
            .build_global()?;
    }
    let out = cli.out.as_path();
    match &cli.command {
        Command::Synth => commands::cmd_synth(&load_config(cli)?, out),
        Command::CodeNotes { rules, unmatched } => {
            commands::cmd_code_notes(out, rules.as_deref(), (*unmatched).into())
        }
        Command::Train { train_end } => commands::cmd_train(&load_config(cli)?, out, *train_end),
        Command::Cv { svg_folds } => commands::cmd_cv(&load_config(cli)?, out, *svg_folds),
        Command::Predict { window_start } => {
            commands::cmd_predict(&load_config(cli)?, out, *window_start)
        }
        Command::Design => commands::cmd_design(&load_config(cli)?, out),
        Command::Select {
            simulate_inspections,
            allow_short,
        } => commands::cmd_select(
            &load_config(cli)?,
            out,
            *simulate_inspections,
            *allow_short,
        ),
        Command::Assess => commands::cmd_assess(&load_config(cli)?, out),
        Command::DemoConfig { bias } => {
            let mut cfg = load_config(cli)?;
            if let Some(beta) = bias {
                cfg.city.bias_strength = *beta;
            }
            cfg.validate()?;
            let path = out.join(artifacts::CONFIG);
            io::write_json(&path, &cfg)?;
            println!("demo-config: wrote {}", path.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
