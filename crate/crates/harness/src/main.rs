use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use qrucible::{default_suite_dir, exit_code, load_dir, load_files, reports_to_json, run_suite, RunOptions, Status};

#[derive(Parser)]
#[command(name = "qrucible", version, about = "Exact verification of q-series identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check identities from suite files
    Verify {
        /// Suite file; repeatable. Defaults to every file in the suite directory.
        #[arg(long = "suite", value_name = "FILE")]
        suites: Vec<PathBuf>,
        /// Glob over case names and groups
        #[arg(long)]
        filter: Option<String>,
        /// Compare up to q^N instead of each case's order
        #[arg(long, value_name = "N")]
        order: Option<i64>,
        /// Exponent grid denominator override
        #[arg(long, value_name = "D")]
        denom: Option<u32>,
        /// Write the JSON report here
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
        /// Treat skipped cases as failures
        #[arg(long)]
        strict: bool,
        /// Worker threads (0 = all CPUs)
        #[arg(long, value_name = "K", default_value_t = 0)]
        jobs: usize,
    },
}

fn main() -> Result<ExitCode> {
    let Command::Verify { suites, filter, order, denom, json, strict, jobs } = Cli::parse().command;
    let cases = if suites.is_empty() { load_dir(&default_suite_dir())? } else { load_files(&suites)? };
    let opts = RunOptions { filter, order, denom, jobs };
    let reports = run_suite(&cases, &opts)?;
    for r in &reports {
        let detail = match (&r.status, &r.first_mismatch) {
            (Status::Skip(why), _) => format!("  {why}"),
            (_, Some(m)) => format!("  first mismatch at q^{}: {} vs {}", m.exponent, m.lhs, m.rhs),
            _ => String::new(),
        };
        println!("{:4} {:<28} {:>8.2}s{}", r.status.label(), r.name, r.elapsed.as_secs_f64(), detail);
    }
    let passed = reports.iter().filter(|r| r.status == Status::Pass).count();
    println!("{passed}/{} passed", reports.len());
    if let Some(path) = json {
        let text = serde_json::to_string_pretty(&reports_to_json(&reports))?;
        std::fs::write(&path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(ExitCode::from(exit_code(&reports, strict) as u8))
}
