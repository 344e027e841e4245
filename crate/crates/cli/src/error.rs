use std::io;
use std::path::Path;

use serde_json::json;

#[derive(Debug)]
pub enum CliError {
    /// A file could not be read or written.
    Io {
        path: String,
        message: String,
    },
    /// Arguments that parse but do not make sense together.
    Usage(String),
    /// Rejected by the analysis library.
    Engine(shootout::Error),
    /// `--check` found values outside tolerance, or nothing to compare.
    Check(Vec<String>),
    Internal(String),
}

impl CliError {
    pub fn io(path: &Path, e: io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Check(_) => 1,
            CliError::Io { .. } | CliError::Usage(_) => 2,
            CliError::Engine(_) => 3,
            CliError::Internal(_) => 4,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "io",
            CliError::Usage(_) => "usage",
            CliError::Engine(_) => "engine",
            CliError::Check(_) => "check",
            CliError::Internal(_) => "internal",
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = json!({
            "error": {
                "kind": self.kind(),
                "message": self.to_string(),
                "exit_code": self.exit_code(),
            }
        });
        if let CliError::Check(failures) = self {
            v["error"]["failures"] = json!(failures);
        }
        v
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Io { path, message } => write!(f, "{path}: {message}"),
            CliError::Usage(m) | CliError::Internal(m) => f.write_str(m),
            CliError::Engine(e) => write!(f, "{e}"),
            CliError::Check(failures) => {
                write!(f, "check failed ({} mismatches)", failures.len())
            }
        }
    }
}

impl From<shootout::Error> for CliError {
    fn from(e: shootout::Error) -> Self {
        CliError::Engine(e)
    }
}
