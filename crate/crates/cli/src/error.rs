use std::path::PathBuf;

use bogocert_core::Error as CoreError;

pub const EXIT_PARSE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_IO: i32 = 4;
pub const EXIT_INTERNAL: i32 = 5;
pub const EXIT_MISMATCH: i32 = 6;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {message}")]
    JobFile { path: PathBuf, message: String },
    #[error("certificate does not verify: {0}")]
    Mismatch(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    pub fn category(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.category(),
            CliError::Usage(_) | CliError::JobFile { .. } => "parse",
            CliError::Io { .. } => "io",
            CliError::Mismatch(_) => "verify",
        }
    }

    pub fn module(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.module(),
            _ => "cli",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.category() {
            "parse" => EXIT_PARSE,
            "io" => EXIT_IO,
            "verify" => EXIT_MISMATCH,
            "internal" => EXIT_INTERNAL,
            _ => EXIT_PRECONDITION,
        }
    }

    /// One-line JSON record for stderr.
    pub fn to_json(&self, job: Option<&str>) -> String {
        let mut v = serde_json::json!({
            "category": self.category(),
            "module": self.module(),
            "message": self.to_string(),
        });
        if let Some(j) = job {
            v["job"] = serde_json::Value::String(j.to_string());
        }
        v.to_string()
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
