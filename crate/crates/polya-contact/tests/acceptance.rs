//! Acceptance suite: runs every battery check at full scale and prints one
//! pass/fail line per criterion. Exits non-zero if any check fails.
//!
//! `ACCEPTANCE_ONLY=3,7` restricts the run to the listed criteria and
//! `ACCEPTANCE_SEED` overrides the master seed.

use std::process::ExitCode;
use std::time::Instant;

use polya_contact::battery::{run_check, Scale, CHECK_IDS, DEFAULT_SEED};

fn selected() -> Vec<u32> {
    match std::env::var("ACCEPTANCE_ONLY") {
        Ok(list) if !list.trim().is_empty() => list
            .split(',')
            .map(|s| s.trim().parse().unwrap_or_else(|_| panic!("bad criterion id {s:?}")))
            .collect(),
        _ => CHECK_IDS.collect(),
    }
}

fn main() -> ExitCode {
    let seed = std::env::var("ACCEPTANCE_SEED").ok().map_or(DEFAULT_SEED, |s| s.parse().expect("numeric seed"));
    let ids = selected();
    println!("acceptance: {} criteria, seed {seed}", ids.len());
    let mut failed = Vec::new();
    for id in ids {
        let start = Instant::now();
        let result = run_check(id, seed, Scale::Full, None);
        let secs = start.elapsed().as_secs_f64();
        println!("{} ({secs:.1} s)", result.summary_line());
        for note in &result.notes {
            println!("       {note}");
        }
        if !result.passed {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
