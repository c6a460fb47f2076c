// Copyright 2026 The emdyn Authors
// SPDX-License-Identifier: Apache-2.0

//! Scenario-driven front end: parse a TOML scenario, run one analysis task,
//! write `results.csv` or `report.json` plus `manifest.json`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod opspec;
pub mod output;
pub mod scenario;
pub mod tasks;

pub use error::{CliError, CliResult};
pub use scenario::{emit_scenario, parse_scenario, Scenario, Task};
pub use tasks::{run, RunOptions, RunSummary};

/// Reads, parses and runs a scenario file.
pub fn run_file(task: Task, path: &std::path::Path, opts: &RunOptions) -> CliResult<RunSummary> {
    let bytes = std::fs::read(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let text = std::str::from_utf8(&bytes)
        .map_err(|e| CliError::Parse(format!("scenario is not UTF-8: {e}")))?;
    let scenario = parse_scenario(text)?;
    run(task, &scenario, &bytes, opts)
}
