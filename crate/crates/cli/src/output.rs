use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// One table of results; written as CSV rows or as a JSON value.
pub struct Dataset {
    pub name: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub json: Value,
}

impl Dataset {
    pub fn new(name: impl Into<String>, columns: Vec<&'static str>, json: Value) -> Self {
        Self {
            name: name.into(),
            columns,
            rows: Vec::new(),
            json,
        }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    fn to_csv(&self) -> Result<Vec<u8>, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).map_err(csv_error)?;
        for r in &self.rows {
            w.write_record(r).map_err(csv_error)?;
        }
        w.into_inner()
            .map_err(|e| CliError::Internal(format!("csv: {e}")))
    }
}

fn csv_error(e: csv::Error) -> CliError {
    CliError::Internal(format!("csv: {e}"))
}

/// What produced a set of data files. Holds nothing that varies between
/// runs with the same inputs.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    /// Arguments after the program name.
    pub command: Vec<String>,
    /// `sha256:` of the canonical scoring-model config, if the command uses one.
    pub config_digest: Option<String>,
    pub arithmetic: &'static str,
    pub seeds: Vec<u64>,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(command: Vec<String>, arithmetic: &'static str) -> Self {
        Self {
            tool: "shootout",
            version: env!("CARGO_PKG_VERSION"),
            command,
            config_digest: None,
            arithmetic,
            seeds: Vec::new(),
            outputs: Vec::new(),
        }
    }
}

pub fn digest(text: &str) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(text.as_bytes())))
}

/// File-name-safe form of a dataset name.
pub fn file_stem(name: &str) -> String {
    name.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect::<String>()
        .trim_matches('_')
        .to_string()
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

fn pretty(v: &impl Serialize) -> Result<Vec<u8>, CliError> {
    let mut out =
        serde_json::to_vec_pretty(v).map_err(|e| CliError::Internal(format!("json: {e}")))?;
    out.push(b'\n');
    Ok(out)
}

/// Writes every dataset into `out` (or to stdout) and returns the paths.
///
/// CSV files get a `<file>.manifest.json` sidecar; JSON files carry the
/// manifest inline.
pub fn emit(
    datasets: &[Dataset],
    format: Format,
    out: Option<&Path>,
    mut manifest: RunManifest,
) -> Result<Vec<PathBuf>, CliError> {
    let ext = match format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    let names: Vec<String> = datasets
        .iter()
        .map(|d| format!("{}.{ext}", file_stem(&d.name)))
        .collect();
    manifest.outputs = names.clone();

    let Some(dir) = out else {
        let mut stdout = io::stdout().lock();
        for d in datasets {
            let bytes = match format {
                Format::Csv if datasets.len() > 1 => {
                    let mut b = format!("# {}\n", d.name).into_bytes();
                    b.extend(d.to_csv()?);
                    b
                }
                Format::Csv => d.to_csv()?,
                Format::Json => pretty(&json!({
                    "manifest": manifest,
                    "name": d.name,
                    "data": d.json,
                }))?,
            };
            stdout
                .write_all(&bytes)
                .map_err(|e| CliError::io(Path::new("<stdout>"), e))?;
        }
        return Ok(Vec::new());
    };

    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut written = Vec::new();
    for (d, name) in datasets.iter().zip(&names) {
        let path = dir.join(name);
        match format {
            Format::Csv => {
                write_file(&path, &d.to_csv()?)?;
                let side = dir.join(format!("{name}.manifest.json"));
                write_file(&side, &pretty(&manifest)?)?;
                written.push(side);
            }
            Format::Json => write_file(
                &path,
                &pretty(&json!({
                    "manifest": manifest,
                    "name": d.name,
                    "data": d.json,
                }))?,
            )?,
        }
        written.push(path);
    }
    Ok(written)
}
