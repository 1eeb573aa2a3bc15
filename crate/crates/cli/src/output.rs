use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use fockkernel::report::{format_f64, to_json_string, SCHEMA_VERSION};
use fockkernel::KernelSpec;
use serde::Serialize;

use crate::CliError;

/// Common envelope of every JSON report.
#[derive(Serialize)]
pub struct Report<'a, T: Serialize> {
    pub schema_version: u32,
    pub command: &'a str,
    pub kernel: Option<&'a KernelSpec>,
    pub kernel_label: Option<String>,
    pub seed: Option<u64>,
    pub inputs: Vec<String>,
    pub expect: Option<&'a str>,
    pub matches_expectation: Option<bool>,
    pub result: T,
}

impl<'a, T: Serialize> Report<'a, T> {
    pub fn new(command: &'a str, kernel: Option<&'a KernelSpec>, result: T) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command,
            kernel,
            kernel_label: kernel.map(KernelSpec::label),
            seed: None,
            inputs: Vec::new(),
            expect: None,
            matches_expectation: None,
            result,
        }
    }
}

pub fn report_json<T: Serialize>(report: &Report<'_, T>) -> Result<String, CliError> {
    to_json_string(report).map_err(|e| CliError::io(format!("serializing report: {e}")))
}

/// Writes to `path` through a sibling temporary file and a rename, or to
/// stdout when no path is given.
pub fn emit(path: Option<&Path>, contents: &str) -> Result<(), CliError> {
    let Some(path) = path else {
        let mut out = io::stdout().lock();
        return out
            .write_all(contents.as_bytes())
            .and_then(|_| out.flush())
            .map_err(|e| CliError::io(format!("writing stdout: {e}")));
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(&dir)
        .map_err(|e| CliError::io(format!("creating temporary file in {}: {e}", dir.display())))?;
    tmp.write_all(contents.as_bytes())
        .and_then(|_| tmp.flush())
        .map_err(|e| CliError::io(format!("writing {}: {e}", path.display())))?;
    tmp.persist(path)
        .map_err(|e| CliError::io(format!("renaming into {}: {}", path.display(), e.error)))?;
    Ok(())
}

/// Joins CSV fields, quoting any that contain separators or quotes.
pub fn csv_row(fields: &[String]) -> String {
    let mut line = fields
        .iter()
        .map(|f| {
            if f.contains([',', '"', '\n']) {
                format!("\"{}\"", f.replace('"', "\"\""))
            } else {
                f.clone()
            }
        })
        .collect::<Vec<_>>()
        .join(",");
    line.push('\n');
    line
}

pub fn csv_float(v: f64) -> String {
    format_f64(v)
}

/// Rejects an output path that names one of the inputs.
pub fn check_distinct_output(output: Option<&Path>, inputs: &[&Path]) -> Result<(), CliError> {
    let Some(out) = output else { return Ok(()) };
    let Ok(out) = fs::canonicalize(out) else {
        return Ok(());
    };
    for input in inputs {
        if fs::canonicalize(input).is_ok_and(|p| p == out) {
            return Err(CliError::usage(format!(
                "output {} would overwrite an input",
                out.display()
            )));
        }
    }
    Ok(())
}
