//! Report serialization: canonical JSON with fixed-precision numbers,
//! plus the flat CSV emissions.
//!
//! All floating point numbers are rendered with 12 significant digits
//! (scientific notation), which makes reports byte-stable across runs
//! and platforms at the declared precision: parsing a rendered report
//! and re-serializing it reproduces the bytes exactly.

use crate::error::CliError;
use fairaudit::audit::AuditReport;
use fairaudit::comparison::ComparisonVerdict;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::fs;
use std::path::Path;

/// 12 significant digits, scientific notation.
pub fn format_sig12(value: f64) -> String {
    format!("{value:.11e}")
}

fn write_indent(out: &mut String, depth: usize) {
    for _ in 0..depth {
        out.push_str("  ");
    }
}

fn write_value(value: &Value, depth: usize, out: &mut String) {
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                out.push_str(&format_sig12(n.as_f64().expect("checked f64")));
            } else {
                out.push_str(&n.to_string());
            }
        }
        Value::String(s) => {
            out.push_str(&Value::String(s.clone()).to_string());
        }
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                write_indent(out, depth + 1);
                write_value(item, depth + 1, out);
                if i + 1 < items.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            write_indent(out, depth);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            // serde_json's default map is ordered by key, which is the
            // stable ordering the report format promises.
            out.push_str("{\n");
            for (i, (key, item)) in map.iter().enumerate() {
                write_indent(out, depth + 1);
                out.push_str(&Value::String(key.clone()).to_string());
                out.push_str(": ");
                write_value(item, depth + 1, out);
                if i + 1 < map.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            write_indent(out, depth);
            out.push('}');
        }
    }
}

/// Serializes any report object into the canonical JSON document.
pub fn to_canonical_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let value = serde_json::to_value(value)
        .map_err(|e| CliError::Validation(format!("cannot serialize report: {e}")))?;
    let mut out = String::new();
    write_value(&value, 0, &mut out);
    out.push('\n');
    Ok(out)
}

/// Parses a JSON document written by [`to_canonical_json`].
pub fn parse_json_file<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io_at(path, e))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

pub fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    fs::write(path, content).map_err(|e| CliError::io_at(path, e))
}

/// Output of a `compare` run: one verdict per shared measure kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonDocument {
    pub format_version: String,
    pub baseline_model: String,
    pub candidate_model: String,
    pub tau: f64,
    pub verdicts: Vec<ComparisonVerdict>,
}

fn csv_to_string(writer: csv::Writer<Vec<u8>>) -> Result<String, CliError> {
    let bytes = writer
        .into_inner()
        .map_err(|e| CliError::Validation(format!("csv buffer: {e}")))?;
    String::from_utf8(bytes).map_err(|e| CliError::Validation(format!("csv encoding: {e}")))
}

fn opt_sig12(value: Option<f64>) -> String {
    value.map(format_sig12).unwrap_or_default()
}

/// Alpha column label: `IF_0`, `IF_0.5`, `IF_1`, ...
fn alpha_column(alpha: f64) -> String {
    format!("IF_{alpha}")
}

/// One summary row per measure kind, mirroring the headline table of a
/// benchmark report: utility, worst-group rate, and both fairness scores.
pub fn summary_csv(report: &AuditReport) -> Result<String, CliError> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let mut header = vec![
        "model".to_string(),
        "measure".to_string(),
        "balanced_accuracy".to_string(),
        "worst_group_rate".to_string(),
        "DF".to_string(),
    ];
    header.extend(report.config.alpha_grid.iter().map(|&a| alpha_column(a)));
    writer
        .write_record(&header)
        .map_err(|e| CliError::Validation(format!("csv: {e}")))?;
    for result in &report.results {
        let mut row = vec![
            report.model.clone(),
            result.kind.name().to_string(),
            opt_sig12(report.balanced_accuracy),
            format_sig12(result.worst_group_rate),
            format_sig12(result.scores.df),
        ];
        row.extend(result.scores.if_curve.iter().map(|p| format_sig12(p.value)));
        writer
            .write_record(&row)
            .map_err(|e| CliError::Validation(format!("csv: {e}")))?;
    }
    csv_to_string(writer)
}

/// Per-group table for one measure kind, excluded groups included with
/// their reason.
pub fn groups_csv(report: &AuditReport, kind_index: usize) -> Result<String, CliError> {
    let result = &report.results[kind_index];
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record([
            "group",
            "concrete",
            "size",
            "positives",
            "negatives",
            "tp",
            "fp",
            "tn",
            "fn",
            "rate",
            "deficiency",
            "excluded",
            "exclusion_reason",
        ])
        .map_err(|e| CliError::Validation(format!("csv: {e}")))?;
    for row in &result.table.rows {
        let reason = match row.exclusion {
            Some(fairaudit::measures::ExclusionReason::TooSmall) => "too_small",
            Some(fairaudit::measures::ExclusionReason::UndefinedRate) => "undefined_rate",
            None => "",
        };
        writer
            .write_record([
                row.group.clone(),
                row.concrete.to_string(),
                row.size.to_string(),
                row.positives.to_string(),
                row.negatives.to_string(),
                row.counts.tpc.to_string(),
                row.counts.fpc.to_string(),
                row.counts.tnc.to_string(),
                row.counts.fnc.to_string(),
                opt_sig12(row.rate),
                opt_sig12(row.deficiency),
                row.exclusion.is_some().to_string(),
                reason.to_string(),
            ])
            .map_err(|e| CliError::Validation(format!("csv: {e}")))?;
    }
    csv_to_string(writer)
}

/// Alpha-curve points for one measure kind: `alpha,if_alpha,df`, one row
/// per grid point, with the constant `df` repeated for plotting.
pub fn curve_csv(report: &AuditReport, kind_index: usize) -> Result<String, CliError> {
    let result = &report.results[kind_index];
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["alpha", "if_alpha", "df"])
        .map_err(|e| CliError::Validation(format!("csv: {e}")))?;
    for point in &result.scores.if_curve {
        writer
            .write_record([
                format_sig12(point.alpha),
                format_sig12(point.value),
                format_sig12(result.scores.df),
            ])
            .map_err(|e| CliError::Validation(format!("csv: {e}")))?;
    }
    csv_to_string(writer)
}

/// Axis-sweep summary: worst-group rate per prefix length `k`, one row
/// per (k, measure kind).
pub fn sweep_summary_csv(reports: &[AuditReport]) -> Result<String, CliError> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["model", "measure", "k", "n_groups", "worst_group_rate"])
        .map_err(|e| CliError::Validation(format!("csv: {e}")))?;
    for (i, report) in reports.iter().enumerate() {
        for result in &report.results {
            writer
                .write_record([
                    report.model.clone(),
                    result.kind.name().to_string(),
                    (i + 1).to_string(),
                    result.table.rows.len().to_string(),
                    format_sig12(result.worst_group_rate),
                ])
                .map_err(|e| CliError::Validation(format!("csv: {e}")))?;
        }
    }
    csv_to_string(writer)
}
