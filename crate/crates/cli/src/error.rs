//! CLI error type with a stable exit-code table:
//!
//! | code | meaning                    |
//! |------|----------------------------|
//! | 0    | success                    |
//! | 1    | I/O failure                |
//! | 2    | validation error           |
//! | 3    | no scorable groups         |
//! | 4    | configuration mismatch     |
//! | 64   | usage (bad flags/args)     |

use fairaudit::AuditError;
use std::fmt;
use std::io;
use std::path::Path;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io { context: String, source: io::Error },
    Validation(String),
    NoScorableGroups(String),
    ConfigMismatch(String),
}

impl CliError {
    pub fn io(context: impl Into<String>, source: io::Error) -> Self {
        CliError::Io {
            context: context.into(),
            source,
        }
    }

    pub fn io_at(path: &Path, source: io::Error) -> Self {
        Self::io(path.display().to_string(), source)
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 64,
            CliError::Io { .. } => 1,
            CliError::Validation(_) => 2,
            CliError::NoScorableGroups(_) => 3,
            CliError::ConfigMismatch(_) => 4,
        }
    }

    /// Single-line machine-parseable diagnostic, `error: <kind>: <message>`.
    pub fn diagnostic(&self) -> String {
        let (kind, message) = match self {
            CliError::Usage(m) => ("usage", m.clone()),
            CliError::Io { context, source } => ("io", format!("{context}: {source}")),
            CliError::Validation(m) => ("validation", m.clone()),
            CliError::NoScorableGroups(m) => ("no-scorable-groups", m.clone()),
            CliError::ConfigMismatch(m) => ("config-mismatch", m.clone()),
        };
        let message = message.replace('\n', "; ");
        format!("error: {kind}: {message}")
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.diagnostic())
    }
}

impl std::error::Error for CliError {}

impl From<AuditError> for CliError {
    fn from(err: AuditError) -> Self {
        match err {
            AuditError::NoScorableGroups { .. } => CliError::NoScorableGroups(err.to_string()),
            AuditError::ConfigMismatch(_) => CliError::ConfigMismatch(err.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}
