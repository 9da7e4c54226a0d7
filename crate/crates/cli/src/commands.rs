//! Subcommand implementations. Each returns `Result<(), CliError>`; the
//! binary maps errors to exit codes and one-line diagnostics.

use crate::dataset::load_dataset;
use crate::error::CliError;
use crate::report::{
    curve_csv, groups_csv, parse_json_file, summary_csv, sweep_summary_csv, to_canonical_json,
    write_file, ComparisonDocument,
};
use crate::schema::ConfigFile;
use fairaudit::audit::{axis_sweep, run_audit, AuditReport, FORMAT_VERSION};
use fairaudit::comparison::{compare_evaluations, CompareOptions, ModelEvaluation};
use fairaudit::lattice::enumerate_groups;
use fairaudit::measures::MeasureKind;
use fairaudit::synth::efficiency_case_explorer;
use std::fs;
use std::path::Path;

pub fn cmd_audit(
    input: &Path,
    config_path: &Path,
    out: &Path,
    csv_dir: Option<&Path>,
) -> Result<(), CliError> {
    let config = ConfigFile::load(config_path)?;
    let data = load_dataset(input, config.resolve_format(input), &config.audit)?;
    let report = run_audit(&config.model, &data, &config.audit).map_err(CliError::from)?;
    write_file(out, &to_canonical_json(&report)?)?;
    if let Some(dir) = csv_dir {
        emit_csv_bundle(&report, dir)?;
    }
    Ok(())
}

fn emit_csv_bundle(report: &AuditReport, dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io_at(dir, e))?;
    write_file(&dir.join("summary.csv"), &summary_csv(report)?)?;
    for (i, result) in report.results.iter().enumerate() {
        let kind = result.kind.name();
        write_file(&dir.join(format!("groups_{kind}.csv")), &groups_csv(report, i)?)?;
        write_file(&dir.join(format!("curve_{kind}.csv")), &curve_csv(report, i)?)?;
    }
    Ok(())
}

pub fn cmd_compare(
    baseline_path: &Path,
    candidate_path: &Path,
    out: &Path,
    tau: f64,
    strict: bool,
) -> Result<(), CliError> {
    let baseline: AuditReport = parse_json_file(baseline_path)?;
    let candidate: AuditReport = parse_json_file(candidate_path)?;
    if baseline.config != candidate.config {
        return Err(CliError::ConfigMismatch(format!(
            "{} and {} were produced with different audit configurations",
            baseline_path.display(),
            candidate_path.display()
        )));
    }
    let options = CompareOptions { tau, strict };
    let mut verdicts = Vec::with_capacity(baseline.results.len());
    for result in &baseline.results {
        let base_eval = ModelEvaluation::from_report(&baseline, result.kind)
            .expect("kind taken from the report itself");
        let cand_eval =
            ModelEvaluation::from_report(&candidate, result.kind).ok_or_else(|| {
                CliError::ConfigMismatch(format!(
                    "candidate report lacks measure `{}`",
                    result.kind.name()
                ))
            })?;
        verdicts.push(compare_evaluations(&base_eval, &cand_eval, &options).map_err(CliError::from)?);
    }
    let document = ComparisonDocument {
        format_version: FORMAT_VERSION.to_string(),
        baseline_model: baseline.model.clone(),
        candidate_model: candidate.model.clone(),
        tau,
        verdicts,
    };
    write_file(out, &to_canonical_json(&document)?)
}

pub fn cmd_sweep_axes(input: &Path, config_path: &Path, out_dir: &Path) -> Result<(), CliError> {
    let config = ConfigFile::load(config_path)?;
    let data = load_dataset(input, config.resolve_format(input), &config.audit)?;
    let reports = axis_sweep(&config.model, &data, &config.audit).map_err(CliError::from)?;
    fs::create_dir_all(out_dir).map_err(|e| CliError::io_at(out_dir, e))?;
    for (i, report) in reports.iter().enumerate() {
        let path = out_dir.join(format!("report_k{}.json", i + 1));
        write_file(&path, &to_canonical_json(report)?)?;
    }
    write_file(&out_dir.join("summary.csv"), &sweep_summary_csv(&reports)?)
}

pub fn cmd_sweep_alpha(
    report_path: &Path,
    out: &Path,
    measure: Option<MeasureKind>,
) -> Result<(), CliError> {
    let report: AuditReport = parse_json_file(report_path)?;
    let index = match measure {
        Some(kind) => report
            .results
            .iter()
            .position(|r| r.kind == kind)
            .ok_or_else(|| {
                CliError::Validation(format!(
                    "report has no measure `{}`",
                    kind.name()
                ))
            })?,
        None if report.results.len() == 1 => 0,
        None => {
            return Err(CliError::Validation(
                "report has multiple measures; pass --measure".to_string(),
            ))
        }
    };
    write_file(out, &curve_csv(&report, index)?)
}

pub fn cmd_validate(input: &Path, config_path: &Path) -> Result<(), CliError> {
    let config = ConfigFile::load(config_path)?;
    let data = load_dataset(input, config.resolve_format(input), &config.audit)?;
    let lattice = enumerate_groups(&config.audit.axes).map_err(CliError::from)?;
    println!(
        "ok: rows={} axes={} groups={} concrete={}",
        data.len(),
        config.audit.axes.len(),
        lattice.len(),
        lattice.concrete_count()
    );
    Ok(())
}

pub fn cmd_explore(samples: u32, seed: u64) -> Result<(), CliError> {
    if samples == 0 {
        return Err(CliError::Validation("samples must be >= 1".to_string()));
    }
    let report = efficiency_case_explorer(samples, seed);
    println!(
        "explorer seed={} samples_per_case={} grid_points={}",
        report.seed, report.samples_per_case, report.grid_points
    );
    let case = |name: &str, stats: &fairaudit::synth::CaseDominanceStats| {
        println!(
            "{name}: samples={} condition_holds={} confirmed={} condition_violations={} \
             complement_confirmed={} complement_violations={}",
            stats.samples,
            stats.condition_holds,
            stats.condition_confirmed,
            stats.condition_violations,
            stats.complement_confirmed,
            stats.complement_violations
        );
    };
    case("both_worse", &report.both_worse);
    case("both_better", &report.both_better);
    println!(
        "mixed: samples={} opposite_deltas={} crossover_found={} crossover_missing={}",
        report.mixed.samples,
        report.mixed.opposite_deltas,
        report.mixed.crossover_found,
        report.mixed.crossover_missing
    );
    println!("violations={}", report.violations());
    Ok(())
}
