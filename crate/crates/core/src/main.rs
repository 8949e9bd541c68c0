use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use teachgram::pipeline::{self, Aspect, RunConfig};

#[derive(Parser)]
#[command(name = "teachgram", version, about = "Mine teachable grammar points from parsed and parallel corpora")]
struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true, default_value = "teachgram.toml")]
    config: PathBuf,
    /// Overrides the seed in the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory; overrides the config.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse the inputs and write ingest.json.
    Ingest,
    /// Mine one aspect into partial/<aspect>.json.
    Mine {
        /// general, vocabulary, wordorder, suffixes or agreement.
        aspect: String,
    },
    /// Write evaluation.json from the mined aspects.
    Evaluate,
    /// Write bundle.json and the static site.
    Render,
    /// Run every stage.
    All,
}

fn run(cli: Cli) -> teachgram::Result<()> {
    let mut config = RunConfig::load(&cli.config)?;
    if let Some(seed) = cli.seed {
        config = config.with_seed(seed);
    }
    if cli.out.is_some() {
        config.out = cli.out;
    }
    if cli.jobs.is_some() {
        config.jobs = cli.jobs;
    }
    config.validate()?;
    match cli.command {
        Command::Ingest => {
            let report = pipeline::cmd_ingest(&config)?;
            for (name, s) in &report.stats {
                println!("{name}: {} sentences, {} tokens", s.sentences, s.tokens);
            }
            for n in &report.notices {
                println!("note: {n}");
            }
        }
        Command::Mine { aspect } => {
            let aspect: Aspect = aspect.parse()?;
            pipeline::cmd_mine(&config, aspect)?;
            println!("{}", pipeline::partial_path(&config, aspect).display());
        }
        Command::Evaluate => {
            for row in pipeline::cmd_evaluate(&config)? {
                println!("{:<14} {:<18} {:>14} {:>8}", row.concept, row.task, row.model_cell, row.baseline_cell);
            }
        }
        Command::Render => {
            pipeline::cmd_render(&config)?;
            println!("{}", pipeline::site_dir(&config).join("index.html").display());
        }
        Command::All => {
            let bundle = pipeline::cmd_all(&config)?;
            for row in &bundle.evaluation {
                println!("{:<14} {:<18} {:>14} {:>8}", row.concept, row.task, row.model_cell, row.baseline_cell);
            }
            println!("{}", pipeline::bundle_path(&config).display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
