//! Run every stage on a synthetic input set: bundle.json, the evaluation
//! table and the static site.
//!
//! cargo run --example full_pipeline -- /tmp/teachgram-run

use std::path::PathBuf;

use teachgram::pipeline::{bundle_path, cmd_all, site_dir, RunConfig};
use teachgram::synth::write_fixture_dir;

fn main() -> teachgram::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "teachgram-run".into()));
    std::fs::create_dir_all(&dir).map_err(|e| teachgram::Error::io(&dir, e))?;
    let config = RunConfig::load(&write_fixture_dir(&dir, 1500, 42)?)?;
    let bundle = cmd_all(&config)?;

    println!("{:<14} {:<20} {:>12} {:>9}", "Concept", "Task", "Model", "Baseline");
    for row in &bundle.evaluation {
        println!("{:<14} {:<20} {:>12} {:>9}", row.concept, row.task, row.model_cell, row.baseline_cell);
    }
    println!("\n{}\n{}", bundle_path(&config).display(), site_dir(&config).join("index.html").display());
    Ok(())
}
