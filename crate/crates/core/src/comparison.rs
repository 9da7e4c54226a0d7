//! Model-vs-model comparison on a shared dataset and measure kind.
//!
//! Deltas are taken on the extreme groups' clamped deficiencies:
//! `x = a' - a` on the best-off value and `y = b' - b` on the worst-off
//! value. Leveling down is flagged when the best-off group is harmed
//! (`x > tau`) while the worst-off group is not improved (`y >= -tau`).

use crate::audit::{AuditConfig, AuditReport};
use crate::error::{AuditError, Result};
use crate::measures::{GroupMeasureTable, MeasureKind};
use crate::metrics::{clamped_extremes, pair_components, AlphaPoint, FairnessScores};
use serde::{Deserialize, Serialize};

/// One model's scored audit for a single measure kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelEvaluation {
    pub model: String,
    pub kind: MeasureKind,
    pub table: GroupMeasureTable,
    pub scores: FairnessScores,
    pub balanced_accuracy: Option<f64>,
    pub config: AuditConfig,
}

impl ModelEvaluation {
    /// Extracts the evaluation for one measure kind out of a full report.
    pub fn from_report(report: &AuditReport, kind: MeasureKind) -> Option<Self> {
        report.results.iter().find(|r| r.kind == kind).map(|r| Self {
            model: report.model.clone(),
            kind,
            table: r.table.clone(),
            scores: r.scores.clone(),
            balanced_accuracy: report.balanced_accuracy,
            config: report.config.clone(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompareOptions {
    /// Tolerance for delta sign classification.
    pub tau: f64,
    /// Also evaluate the all-groups leveling-down variant.
    pub strict: bool,
}

impl Default for CompareOptions {
    fn default() -> Self {
        Self {
            tau: 1e-9,
            strict: false,
        }
    }
}

/// The paper-style efficiency classification of an extreme-value move
/// from `(a, b)` to `(a', b')`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EfficiencyCaseKind {
    /// `y >= x >= 0`: the candidate degrades both extremes (or neither).
    BothWorseDominant,
    /// `y <= x <= 0`: the candidate improves both extremes (or neither).
    BothBetterDominant,
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EfficiencyCase {
    pub kind: EfficiencyCaseKind,
    /// Best-off delta `a' - a`.
    pub x: f64,
    /// Worst-off delta `b' - b`.
    pub y: f64,
    /// Whether the classified direction holds at every alpha:
    /// `x*b <= y*a` for the both-worse case (candidate scores at least
    /// the baseline for all alpha), `x*b >= y*a` for the both-better
    /// case (candidate scores at most the baseline for all alpha).
    /// `None` for mixed moves.
    pub uniform_dominance: Option<bool>,
}

/// Classifies the move of the (best m, worst m) extremes between two
/// models. Case boundaries are compared with tolerance `tau` so that
/// analytically equal deltas do not fall into the mixed case through
/// rounding; `x = y = 0` degenerates to the both-worse case with
/// equality everywhere.
pub fn classify_efficiency_case(
    a: f64,
    b: f64,
    a2: f64,
    b2: f64,
    tau: f64,
) -> Result<EfficiencyCase> {
    if !tau.is_finite() || tau < 0.0 {
        return Err(AuditError::InvalidConfig(format!(
            "tau must be finite and >= 0, got {tau}"
        )));
    }
    for (lo, hi, which) in [(a, b, "baseline"), (a2, b2, "candidate")] {
        if !(lo.is_finite() && hi.is_finite()) || lo < 0.0 || hi < lo {
            return Err(AuditError::OrderingViolation(format!(
                "{which} extremes must satisfy 0 <= best <= worst, got ({lo}, {hi})"
            )));
        }
    }
    let x = a2 - a;
    let y = b2 - b;
    let (kind, uniform_dominance) = if y >= x - tau && x >= -tau {
        (EfficiencyCaseKind::BothWorseDominant, Some(x * b <= y * a))
    } else if y <= x + tau && x <= tau {
        (EfficiencyCaseKind::BothBetterDominant, Some(x * b >= y * a))
    } else {
        (EfficiencyCaseKind::Mixed, None)
    };
    Ok(EfficiencyCase {
        kind,
        x,
        y,
        uniform_dominance,
    })
}

/// Solves `alpha*abs + (1-alpha)*rel = alpha*abs' + (1-alpha)*rel'` and
/// returns the root when it lies strictly inside (0, 1). `None` when the
/// two affine curves are parallel or coincide, or the root falls outside.
pub fn crossover_alpha(
    baseline: (f64, f64),
    candidate: (f64, f64),
) -> Option<f64> {
    let (abs_b, rel_b) = baseline;
    let (abs_c, rel_c) = candidate;
    let slope_delta = (abs_c - rel_c) - (abs_b - rel_b);
    if slope_delta == 0.0 {
        return None;
    }
    let alpha = (rel_b - rel_c) / slope_delta;
    if alpha > 0.0 && alpha < 1.0 {
        Some(alpha)
    } else {
        None
    }
}

/// The outcome of comparing a candidate model against a baseline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonVerdict {
    pub baseline_model: String,
    pub candidate_model: String,
    pub kind: MeasureKind,
    pub tau: f64,
    /// Clamped (best m, worst m) of the baseline.
    pub baseline_extremes: (f64, f64),
    /// Clamped (best m, worst m) of the candidate.
    pub candidate_extremes: (f64, f64),
    /// Change of the best-off group's deficiency (`x`).
    pub best_off_delta: f64,
    /// Change of the worst-off group's deficiency (`y`).
    pub worst_off_delta: f64,
    pub df_delta: f64,
    /// Per-alpha `IF` deltas, candidate minus baseline.
    pub if_delta: Vec<AlphaPoint>,
    /// Best-off harmed while the worst-off did not improve.
    pub leveling_down: bool,
    /// All-groups variant: some defined group harmed and none improved.
    /// `None` unless requested.
    pub strict_leveling_down: Option<bool>,
    pub efficiency: EfficiencyCase,
    /// Alpha where the two models' extreme-pair scores cross, if any.
    pub crossover_alpha: Option<f64>,
}

fn check_same_setup(baseline: &ModelEvaluation, candidate: &ModelEvaluation) -> Result<()> {
    if baseline.kind != candidate.kind {
        return Err(AuditError::ConfigMismatch(format!(
            "measure kinds differ: {} vs {}",
            baseline.kind.name(),
            candidate.kind.name()
        )));
    }
    if baseline.config.axes != candidate.config.axes {
        return Err(AuditError::ConfigMismatch(
            "sensitive axes differ".to_string(),
        ));
    }
    if baseline.config != candidate.config {
        return Err(AuditError::ConfigMismatch(
            "audit configurations differ".to_string(),
        ));
    }
    Ok(())
}

/// Compares two evaluations sharing axes, measure kind, and config.
pub fn compare_evaluations(
    baseline: &ModelEvaluation,
    candidate: &ModelEvaluation,
    options: &CompareOptions,
) -> Result<ComparisonVerdict> {
    if !options.tau.is_finite() || options.tau < 0.0 {
        return Err(AuditError::InvalidConfig(format!(
            "tau must be finite and >= 0, got {}",
            options.tau
        )));
    }
    check_same_setup(baseline, candidate)?;
    let epsilon = baseline.config.clamp_epsilon;
    let base = clamped_extremes(&baseline.table, epsilon)?;
    let cand = clamped_extremes(&candidate.table, epsilon)?;

    let x = cand.min_m - base.min_m;
    let y = cand.max_m - base.max_m;
    let tau = options.tau;

    let df_delta = candidate.scores.df - baseline.scores.df;
    if candidate.scores.if_curve.len() != baseline.scores.if_curve.len() {
        return Err(AuditError::ConfigMismatch(
            "alpha grids differ between reports".to_string(),
        ));
    }
    let if_delta = baseline
        .scores
        .if_curve
        .iter()
        .zip(&candidate.scores.if_curve)
        .map(|(b, c)| AlphaPoint {
            alpha: b.alpha,
            value: c.value - b.value,
        })
        .collect();

    let strict_leveling_down = if options.strict {
        let mut harmed = false;
        let mut improved = false;
        for (b_row, c_row) in baseline.table.rows.iter().zip(&candidate.table.rows) {
            if let (Some(b_m), Some(c_m)) = (b_row.deficiency, c_row.deficiency) {
                let delta = c_m - b_m;
                if delta > tau {
                    harmed = true;
                }
                if delta < -tau {
                    improved = true;
                }
            }
        }
        Some(harmed && !improved)
    } else {
        None
    };

    Ok(ComparisonVerdict {
        baseline_model: baseline.model.clone(),
        candidate_model: candidate.model.clone(),
        kind: baseline.kind,
        tau,
        baseline_extremes: (base.min_m, base.max_m),
        candidate_extremes: (cand.min_m, cand.max_m),
        best_off_delta: x,
        worst_off_delta: y,
        df_delta,
        if_delta,
        leveling_down: x > tau && y >= -tau,
        strict_leveling_down,
        efficiency: classify_efficiency_case(base.min_m, base.max_m, cand.min_m, cand.max_m, tau)?,
        crossover_alpha: crossover_alpha(
            pair_components(base.min_m, base.max_m),
            pair_components(cand.min_m, cand.max_m),
        ),
    })
}
