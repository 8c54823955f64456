use std::process::ExitCode;

use clap::Parser;
use minsurf::cli::{run, CliArgs, CliError, RunOutcome};

fn main() -> ExitCode {
    match CliArgs::parse().into_config().and_then(|cfg| run(&cfg)) {
        Ok(outcome) => report(&outcome),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}

fn report(outcome: &RunOutcome) -> ExitCode {
    for w in outcome.warnings.iter().take(20) {
        eprintln!("warning: {w}");
    }
    if outcome.warnings.len() > 20 {
        eprintln!("warning: ... {} more", outcome.warnings.len() - 20);
    }
    if let Some(summary) = &outcome.summary {
        match serde_json::to_string_pretty(summary) {
            Ok(s) => println!("{s}"),
            Err(e) => eprintln!("error: {}", CliError::from(e)),
        }
    }
    for f in &outcome.files {
        eprintln!("wrote {}", f.display());
    }
    ExitCode::from(outcome.exit_code() as u8)
}
