//! Write a synthetic input set and run configuration to a directory.
//!
//! cargo run --example write_fixtures -- /tmp/teachgram-demo 2000 7

use std::path::PathBuf;

fn main() -> teachgram::Result<()> {
    let mut args = std::env::args().skip(1);
    let dir = PathBuf::from(args.next().unwrap_or_else(|| "teachgram-demo".into()));
    let sentences: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(2000);
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(7);
    std::fs::create_dir_all(&dir).map_err(|e| teachgram::Error::io(&dir, e))?;
    let config = teachgram::synth::write_fixture_dir(&dir, sentences, seed)?;
    println!("{}", config.display());
    Ok(())
}
