use serde_json::json;

/// Failure of a command, with the process exit status it maps to.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Json { message: String, line: usize, column: usize },
    #[error("{0}")]
    Precondition(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Precondition(_) => 2,
            _ => 1,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Input(_) => "input",
            CliError::Json { .. } => "json",
            CliError::Precondition(_) => "precondition",
            CliError::Io { .. } => "io",
        }
    }

    /// The machine-readable object written to stderr.
    pub fn to_json(&self) -> serde_json::Value {
        let mut error = json!({ "kind": self.kind(), "message": self.to_string() });
        if let CliError::Json { line, column, .. } = self {
            error["line"] = json!(line);
            error["column"] = json!(column);
        }
        json!({ "error": error, "exit_code": self.exit_code() })
    }

    pub fn io(path: impl Into<String>, source: std::io::Error) -> CliError {
        CliError::Io { path: path.into(), source }
    }
}

impl From<polystab_core::Error> for CliError {
    fn from(e: polystab_core::Error) -> CliError {
        if e.is_precondition() {
            CliError::Precondition(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> CliError {
        CliError::Json {
            message: e.to_string(),
            line: e.line(),
            column: e.column(),
        }
    }
}
