//! Declarative audit config file: model name, input format, and the
//! audit configuration (axes with attribute dictionaries, column
//! bindings, measure kinds, grids, and knobs).

use crate::error::CliError;
use fairaudit::audit::AuditConfig;
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputFormat {
    Csv,
    Jsonl,
}

fn default_model() -> String {
    "model".to_string()
}

/// The JSON config file. Everything except the column bindings and the
/// axis dictionaries has a default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigFile {
    #[serde(default = "default_model")]
    pub model: String,
    /// Input format; inferred from the file extension when omitted.
    #[serde(default)]
    pub format: Option<InputFormat>,
    #[serde(flatten)]
    pub audit: AuditConfig,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io_at(path, e))?;
        let config: ConfigFile = serde_json::from_str(&text).map_err(|e| {
            CliError::Validation(format!("config {}: {e}", path.display()))
        })?;
        config.audit.validate().map_err(CliError::from)?;
        Ok(config)
    }

    pub fn resolve_format(&self, input: &Path) -> InputFormat {
        if let Some(format) = self.format {
            return format;
        }
        match input.extension().and_then(|e| e.to_str()) {
            Some("jsonl") | Some("ndjson") => InputFormat::Jsonl,
            _ => InputFormat::Csv,
        }
    }
}
