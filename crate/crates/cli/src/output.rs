// Copyright 2026 The emdyn Authors
// SPDX-License-Identifier: Apache-2.0

//! Result files and the run manifest.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

fn io(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// `{:.16e}`, i.e. 17 significant digits.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else {
        format!("{x:.16e}")
    }
}

pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<f64>]) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        source: e.into(),
    })?;
    let wrap = |e: csv::Error| CliError::Io {
        path: path.to_path_buf(),
        source: e.into(),
    };
    w.write_record(header).map_err(wrap)?;
    for r in rows {
        w.write_record(r.iter().map(|x| format_float(*x)))
            .map_err(wrap)?;
    }
    w.flush().map_err(io(path))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Validation(format!("cannot serialize report: {e}")))?;
    text.push('\n');
    fs::write(path, text).map_err(io(path))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Serialize)]
struct OutputEntry {
    file: String,
    sha256: String,
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    scenario_name: &'a str,
    task: String,
    scenario_sha256: String,
    seed: u64,
    margin: f64,
    versions: Versions,
    outputs: Vec<OutputEntry>,
}

#[derive(Debug, Serialize)]
struct Versions {
    emdyn_cli: &'static str,
    emdyn_core: &'static str,
}

/// Writes `manifest.json` listing hashes of `outputs` (file names inside `dir`).
pub fn write_manifest(
    dir: &Path,
    scenario_name: &str,
    task: &str,
    scenario_bytes: &[u8],
    seed: u64,
    margin: f64,
    outputs: &[PathBuf],
) -> CliResult<PathBuf> {
    let mut entries = Vec::with_capacity(outputs.len());
    for p in outputs {
        let bytes = fs::read(p).map_err(io(p))?;
        entries.push(OutputEntry {
            file: p
                .file_name()
                .map_or_else(String::new, |f| f.to_string_lossy().into_owned()),
            sha256: sha256_hex(&bytes),
        });
    }
    entries.sort_by(|a, b| a.file.cmp(&b.file));
    let manifest = Manifest {
        scenario_name,
        task: task.to_string(),
        scenario_sha256: sha256_hex(scenario_bytes),
        seed,
        margin,
        versions: Versions {
            emdyn_cli: env!("CARGO_PKG_VERSION"),
            emdyn_core: emdyn_core::VERSION,
        },
        outputs: entries,
    };
    let path = dir.join("manifest.json");
    write_json(&path, &manifest)?;
    Ok(path)
}
