// Copyright 2026 The emdyn Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use emdyn_cli::{run_file, RunOptions, Task};

/// Open-system dynamics of dissipatively coupled subsystems.
#[derive(Debug, Parser)]
#[command(name = "emdyn", version)]
struct Args {
    /// Analysis to run; must match the scenario's `task`.
    #[arg(value_enum)]
    task: Task,

    /// TOML scenario file.
    #[arg(long)]
    scenario: PathBuf,

    /// Output directory (overrides `output.dir`).
    #[arg(long)]
    out: Option<PathBuf>,

    /// Seed for randomized suites (overrides `seed`).
    #[arg(long)]
    seed: Option<u64>,

    /// Safety margin for the γ threshold.
    #[arg(long)]
    margin: Option<f64>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let opts = RunOptions {
        out: args.out,
        seed: args.seed,
        margin: args.margin,
    };
    match run_file(args.task, &args.scenario, &opts) {
        Ok(summary) => {
            for p in summary
                .outputs
                .iter()
                .chain(std::iter::once(&summary.manifest))
            {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
