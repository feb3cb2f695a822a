use std::path::PathBuf;

use serde::Serialize;
use thiserror::Error;

/// One rejected config field, e.g. `graph.rho`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldError {
    pub field: String,
    pub reason: String,
}

impl FieldError {
    pub fn new(field: impl Into<String>, reason: impl Into<String>) -> Self {
        FieldError {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config failed validation: {}", list(.0))]
    Schema(Vec<FieldError>),
    #[error("cannot parse {path}: {source}")]
    Parse {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("graph file line {line}: {reason}")]
    GraphFormat { line: usize, reason: String },
    #[error(transparent)]
    Model(#[from] podsim_core::Error),
    #[error("{0}")]
    Usage(String),
}

fn list(fields: &[FieldError]) -> String {
    fields
        .iter()
        .map(|f| format!("{} ({})", f.field, f.reason))
        .collect::<Vec<_>>()
        .join(", ")
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Schema(_) | CliError::Parse { .. } => "schema",
            CliError::Io { .. } => "io",
            CliError::GraphFormat { .. } => "format",
            CliError::Model(_) => "model",
            CliError::Usage(_) => "usage",
        }
    }

    /// Process exit code: 2 for bad input, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema(_) | CliError::Parse { .. } | CliError::Usage(_) => 2,
            _ => 1,
        }
    }

    /// Single-line JSON report for stderr.
    pub fn to_json_line(&self) -> String {
        let fields = match self {
            CliError::Schema(f) => f.clone(),
            _ => Vec::new(),
        };
        serde_json::json!({
            "error": self.kind(),
            "message": self.to_string(),
            "fields": fields,
        })
        .to_string()
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
