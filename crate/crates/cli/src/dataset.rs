//! Prediction-file ingestion: CSV with header or JSON-lines.
//!
//! Every row is validated; unknown attribute labels are hard errors
//! naming the row, never silently registered, since growing an axis
//! would change the lattice and every score.

use crate::error::CliError;
use crate::schema::InputFormat;
use fairaudit::audit::AuditConfig;
use fairaudit::lattice::GroupAssignment;
use fairaudit::measures::LabeledPredictions;
use std::fs;
use std::path::Path;

fn parse_binary(value: &str, row: usize, column: &str) -> Result<bool, CliError> {
    match value.trim() {
        "0" => Ok(false),
        "1" => Ok(true),
        other => Err(CliError::Validation(format!(
            "row {row}: column `{column}`: expected 0 or 1, got `{other}`"
        ))),
    }
}

fn resolve_attribute(
    config: &AuditConfig,
    axis_index: usize,
    value: &str,
    row: usize,
) -> Result<usize, CliError> {
    let axis = &config.axes[axis_index];
    axis.attribute_index(value.trim()).ok_or_else(|| {
        CliError::Validation(format!(
            "row {row}: unknown attribute label `{}` for axis `{}`",
            value.trim(),
            axis.name
        ))
    })
}

fn load_csv(path: &Path, config: &AuditConfig) -> Result<LabeledPredictions, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    let headers = reader
        .headers()
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?
        .clone();
    let column = |name: &str| -> Result<usize, CliError> {
        headers.iter().position(|h| h == name).ok_or_else(|| {
            CliError::Validation(format!("missing column `{name}` in {}", path.display()))
        })
    };
    let label_at = column(&config.label_column)?;
    let prediction_at = column(&config.prediction_column)?;
    let axes_at: Vec<usize> = config
        .axes
        .iter()
        .map(|axis| column(&axis.name))
        .collect::<Result<_, _>>()?;

    let mut labels = Vec::new();
    let mut predictions = Vec::new();
    let mut assignments = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record =
            record.map_err(|e| CliError::Validation(format!("row {row}: {e}")))?;
        let field = |at: usize, name: &str| -> Result<&str, CliError> {
            record.get(at).ok_or_else(|| {
                CliError::Validation(format!("row {row}: missing value for column `{name}`"))
            })
        };
        labels.push(parse_binary(
            field(label_at, &config.label_column)?,
            row,
            &config.label_column,
        )?);
        predictions.push(parse_binary(
            field(prediction_at, &config.prediction_column)?,
            row,
            &config.prediction_column,
        )?);
        let mut values = Vec::with_capacity(axes_at.len());
        for (axis_index, &at) in axes_at.iter().enumerate() {
            let raw = field(at, &config.axes[axis_index].name)?;
            values.push(resolve_attribute(config, axis_index, raw, row)?);
        }
        assignments.push(GroupAssignment::new(values));
    }
    finish(labels, predictions, assignments, path)
}

fn json_field_string(
    value: &serde_json::Value,
    row: usize,
    column: &str,
) -> Result<String, CliError> {
    match value {
        serde_json::Value::String(s) => Ok(s.clone()),
        serde_json::Value::Number(n) if n.is_i64() || n.is_u64() => Ok(n.to_string()),
        other => Err(CliError::Validation(format!(
            "row {row}: column `{column}` must be a string or integer, got {other}"
        ))),
    }
}

fn load_jsonl(path: &Path, config: &AuditConfig) -> Result<LabeledPredictions, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io_at(path, e))?;
    let mut labels = Vec::new();
    let mut predictions = Vec::new();
    let mut assignments = Vec::new();
    let mut row = 0usize;
    for line in text.lines() {
        if line.trim().is_empty() {
            continue;
        }
        row += 1;
        let value: serde_json::Value = serde_json::from_str(line)
            .map_err(|e| CliError::Validation(format!("row {row}: invalid JSON: {e}")))?;
        let object = value.as_object().ok_or_else(|| {
            CliError::Validation(format!("row {row}: expected a JSON object"))
        })?;
        let fetch = |column: &str| -> Result<String, CliError> {
            let v = object.get(column).ok_or_else(|| {
                CliError::Validation(format!("row {row}: missing column `{column}`"))
            })?;
            json_field_string(v, row, column)
        };
        labels.push(parse_binary(
            &fetch(&config.label_column)?,
            row,
            &config.label_column,
        )?);
        predictions.push(parse_binary(
            &fetch(&config.prediction_column)?,
            row,
            &config.prediction_column,
        )?);
        let mut values = Vec::with_capacity(config.axes.len());
        for (axis_index, axis) in config.axes.iter().enumerate() {
            values.push(resolve_attribute(config, axis_index, &fetch(&axis.name)?, row)?);
        }
        assignments.push(GroupAssignment::new(values));
    }
    finish(labels, predictions, assignments, path)
}

fn finish(
    labels: Vec<bool>,
    predictions: Vec<bool>,
    assignments: Vec<GroupAssignment>,
    path: &Path,
) -> Result<LabeledPredictions, CliError> {
    if labels.is_empty() {
        return Err(CliError::Validation(format!(
            "empty input: no data rows in {}",
            path.display()
        )));
    }
    LabeledPredictions::new(labels, predictions, assignments).map_err(CliError::from)
}

/// Loads and validates an input file against the audit config.
pub fn load_dataset(
    path: &Path,
    format: InputFormat,
    config: &AuditConfig,
) -> Result<LabeledPredictions, CliError> {
    match format {
        InputFormat::Csv => load_csv(path, config),
        InputFormat::Jsonl => load_jsonl(path, config),
    }
}
