use std::path::PathBuf;

use crate::format::FieldError;

/// Everything that makes a command fail before it can report a result.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}:{line}:{column}: {message}", .path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{}: {}{}", .path.display(), field_prefix(.error), .error.message)]
    Invalid { path: PathBuf, error: FieldError },
    #[error("{0}")]
    Core(#[from] dpo_core::Error),
    #[error("{0}")]
    Usage(String),
}

fn field_prefix(e: &FieldError) -> String {
    match e.field.is_empty() {
        true => String::new(),
        false => format!("{}: ", e.field),
    }
}

impl CliError {
    pub fn invalid(path: impl Into<PathBuf>, error: FieldError) -> Self {
        CliError::Invalid {
            path: path.into(),
            error,
        }
    }

    pub fn parse(path: impl Into<PathBuf>, e: &serde_json::Error) -> Self {
        let message = e.to_string();
        // serde_json appends " at line L column C"; the position is kept
        // in its own fields
        let message = match message.rfind(" at line ") {
            Some(at) => message[..at].to_string(),
            None => message,
        };
        CliError::Parse {
            path: path.into(),
            line: e.line(),
            column: e.column(),
            message,
        }
    }
}
