mod commands;
mod config;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use serde::Serialize;
use serde_json::Value;

use crate::config::{resolve, Cli, Command, Settings};

const EXIT_VIOLATION: u8 = 1;
const EXIT_MALFORMED: u8 = 2;

#[derive(Serialize)]
struct Report<'a> {
    command: Command,
    construction: &'a str,
    version: &'static str,
    status: &'static str,
    seed: u64,
    tolerances: BTreeMap<&'a str, f64>,
    settings: &'a Settings,
    results: Value,
    violations: Vec<String>,
    wall_time_ms: u128,
}

fn run(cli: Cli) -> Result<bool, String> {
    let start = Instant::now();
    let settings = resolve(cli.command, cli.flags)?;
    let outcome = commands::run(cli.command, &settings)?;
    let ok = outcome.violations.is_empty();
    let report = Report {
        command: cli.command,
        construction: outcome.construction,
        version: env!("CARGO_PKG_VERSION"),
        status: if ok { "ok" } else { "violation" },
        seed: settings.seed,
        tolerances: outcome.tolerances.into_iter().collect(),
        settings: &settings,
        results: outcome.results,
        violations: outcome.violations,
        wall_time_ms: start.elapsed().as_millis(),
    };
    let text = serde_json::to_string_pretty(&report).map_err(|e| e.to_string())? + "\n";
    if let Some(path) = &settings.output {
        let data = outcome.artifact.as_deref().unwrap_or(&text);
        std::fs::write(path, data).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }
    print!("{text}");
    Ok(ok)
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors.
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_VIOLATION),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_MALFORMED)
        }
    }
}
