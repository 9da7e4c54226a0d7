//! Per-group confusion counts, rates, and the oriented deficiency table.
//!
//! Every measure kind is oriented so that 0 is the best attainable value
//! and larger is worse; the table's `deficiency` column is what all
//! fairness scores consume.

use crate::error::{AuditError, Result};
use crate::lattice::{GroupAssignment, GroupLattice};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Binary labels, binary predictions, and a concrete group assignment
/// per example. Features are never consumed; a row is identified only
/// by its position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledPredictions {
    labels: Vec<bool>,
    predictions: Vec<bool>,
    assignments: Vec<GroupAssignment>,
}

impl LabeledPredictions {
    pub fn new(
        labels: Vec<bool>,
        predictions: Vec<bool>,
        assignments: Vec<GroupAssignment>,
    ) -> Result<Self> {
        if predictions.len() != labels.len() {
            return Err(AuditError::LengthMismatch {
                expected: labels.len(),
                got: predictions.len(),
            });
        }
        if assignments.len() != labels.len() {
            return Err(AuditError::LengthMismatch {
                expected: labels.len(),
                got: assignments.len(),
            });
        }
        Ok(Self {
            labels,
            predictions,
            assignments,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[bool] {
        &self.labels
    }

    pub fn predictions(&self) -> &[bool] {
        &self.predictions
    }

    pub fn assignments(&self) -> &[GroupAssignment] {
        &self.assignments
    }

    /// New dataset holding the rows at `indices`, in the given order.
    /// Indices may repeat (bootstrap resampling).
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        let mut labels = Vec::with_capacity(indices.len());
        let mut predictions = Vec::with_capacity(indices.len());
        let mut assignments = Vec::with_capacity(indices.len());
        for &i in indices {
            if i >= self.len() {
                return Err(AuditError::IndexOutOfRange {
                    index: i,
                    len: self.len(),
                });
            }
            labels.push(self.labels[i]);
            predictions.push(self.predictions[i]);
            assignments.push(self.assignments[i].clone());
        }
        Self::new(labels, predictions, assignments)
    }
}

/// Binary confusion counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tpc: u64,
    pub fpc: u64,
    pub tnc: u64,
    pub fnc: u64,
}

impl ConfusionCounts {
    pub fn record(&mut self, label: bool, prediction: bool) {
        match (label, prediction) {
            (true, true) => self.tpc += 1,
            (true, false) => self.fnc += 1,
            (false, true) => self.fpc += 1,
            (false, false) => self.tnc += 1,
        }
    }

    pub fn merge(&mut self, other: &ConfusionCounts) {
        self.tpc += other.tpc;
        self.fpc += other.fpc;
        self.tnc += other.tnc;
        self.fnc += other.fnc;
    }

    pub fn total(&self) -> u64 {
        self.tpc + self.fpc + self.tnc + self.fnc
    }

    pub fn positives(&self) -> u64 {
        self.tpc + self.fnc
    }

    pub fn negatives(&self) -> u64 {
        self.fpc + self.tnc
    }
}

/// Counts confusion outcomes over exactly the rows listed in `members`.
pub fn confusion_counts(data: &LabeledPredictions, members: &[usize]) -> Result<ConfusionCounts> {
    let mut counts = ConfusionCounts::default();
    for &i in members {
        if i >= data.len() {
            return Err(AuditError::IndexOutOfRange {
                index: i,
                len: data.len(),
            });
        }
        counts.record(data.labels[i], data.predictions[i]);
    }
    Ok(counts)
}

/// Which per-group rate is measured and how it is oriented into a
/// deficiency where 0 is best.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureKind {
    /// 1 - TPR; undefined when a group has no positives (at kappa = 0).
    TprDeficiency,
    /// FPR as-is; undefined when a group has no negatives (at kappa = 0).
    Fpr,
    /// 1 - accuracy; undefined for empty groups (at kappa = 0).
    AccuracyDeficiency,
}

impl MeasureKind {
    pub const ALL: [MeasureKind; 3] = [
        MeasureKind::TprDeficiency,
        MeasureKind::Fpr,
        MeasureKind::AccuracyDeficiency,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            MeasureKind::TprDeficiency => "tpr_deficiency",
            MeasureKind::Fpr => "fpr",
            MeasureKind::AccuracyDeficiency => "accuracy_deficiency",
        }
    }

    /// Human name of the underlying rate.
    pub fn rate_name(&self) -> &'static str {
        match self {
            MeasureKind::TprDeficiency => "tpr",
            MeasureKind::Fpr => "fpr",
            MeasureKind::AccuracyDeficiency => "accuracy",
        }
    }

    /// Additively smoothed rate, `(num + kappa) / (den + 2 kappa)`.
    /// `None` when kappa is 0 and the denominator is empty.
    pub fn rate(&self, counts: &ConfusionCounts, kappa: f64) -> Option<f64> {
        let (num, den) = match self {
            MeasureKind::TprDeficiency => (counts.tpc, counts.positives()),
            MeasureKind::Fpr => (counts.fpc, counts.negatives()),
            MeasureKind::AccuracyDeficiency => (counts.tpc + counts.tnc, counts.total()),
        };
        if den == 0 && kappa == 0.0 {
            return None;
        }
        Some((num as f64 + kappa) / (den as f64 + 2.0 * kappa))
    }

    /// Orients a rate into a deficiency: 0 best, 1 worst.
    pub fn deficiency(&self, rate: f64) -> f64 {
        match self {
            MeasureKind::TprDeficiency => 1.0 - rate,
            MeasureKind::Fpr => rate,
            MeasureKind::AccuracyDeficiency => 1.0 - rate,
        }
    }

    /// Inverse of [`MeasureKind::deficiency`], used to report worst-group
    /// values back in rate units (min TPR, max FPR, min accuracy).
    pub fn rate_from_deficiency(&self, m: f64) -> f64 {
        match self {
            MeasureKind::TprDeficiency => 1.0 - m,
            MeasureKind::Fpr => m,
            MeasureKind::AccuracyDeficiency => 1.0 - m,
        }
    }
}

/// Balanced accuracy (TPR + TNR) / 2; `None` when either class is absent.
pub fn balanced_accuracy(counts: &ConfusionCounts) -> Option<f64> {
    if counts.positives() == 0 || counts.negatives() == 0 {
        return None;
    }
    let tpr = counts.tpc as f64 / counts.positives() as f64;
    let tnr = counts.tnc as f64 / counts.negatives() as f64;
    Some((tpr + tnr) / 2.0)
}

/// Knobs echoed into every measure table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureConfig {
    /// Additive smoothing on confusion counts. 0 means raw rates with
    /// explicit exclusion of undefined groups.
    pub kappa: f64,
    /// Lower clamp applied to deficiencies before log-ratio scoring.
    pub clamp_epsilon: f64,
    /// Groups smaller than this are excluded from scoring.
    pub min_group_size: u64,
}

impl Default for MeasureConfig {
    fn default() -> Self {
        Self {
            kappa: 0.0,
            clamp_epsilon: 1e-6,
            min_group_size: 1,
        }
    }
}

impl MeasureConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.kappa.is_finite() || self.kappa < 0.0 {
            return Err(AuditError::InvalidConfig(format!(
                "kappa must be finite and >= 0, got {}",
                self.kappa
            )));
        }
        if !self.clamp_epsilon.is_finite() || self.clamp_epsilon <= 0.0 || self.clamp_epsilon > 1.0
        {
            return Err(AuditError::InvalidConfig(format!(
                "clamp_epsilon must be in (0, 1], got {}",
                self.clamp_epsilon
            )));
        }
        if self.min_group_size < 1 {
            return Err(AuditError::InvalidConfig(
                "min_group_size must be >= 1".to_string(),
            ));
        }
        Ok(())
    }
}

/// Why a group is excluded from fairness scoring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExclusionReason {
    TooSmall,
    UndefinedRate,
}

/// One enumerated group's counts, rate, and deficiency.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupRow {
    /// Canonical key string, `axis=label|...`.
    pub group: String,
    pub concrete: bool,
    pub size: u64,
    pub positives: u64,
    pub negatives: u64,
    pub counts: ConfusionCounts,
    pub rate: Option<f64>,
    pub deficiency: Option<f64>,
    pub exclusion: Option<ExclusionReason>,
}

/// Per-group measure values for one kind, rows in lattice order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupMeasureTable {
    pub kind: MeasureKind,
    pub config: MeasureConfig,
    pub rows: Vec<GroupRow>,
}

impl GroupMeasureTable {
    /// Scorable rows: `(row index, deficiency)` in lattice order.
    pub fn defined(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .filter_map(|(i, row)| row.deficiency.map(|m| (i, m)))
    }

    pub fn defined_count(&self) -> usize {
        self.defined().count()
    }
}

/// Builds the per-group measure table over every enumerated group.
///
/// Groups below `min_group_size` or with an undefined rate are flagged
/// excluded and never enter fairness scoring. Errors when every group
/// is excluded.
pub fn build_measure_table(
    data: &LabeledPredictions,
    lattice: &GroupLattice,
    kind: MeasureKind,
    config: &MeasureConfig,
) -> Result<GroupMeasureTable> {
    config.validate()?;
    for (row, assignment) in data.assignments().iter().enumerate() {
        lattice.validate_assignment(assignment, row + 1)?;
    }

    // One pass over examples into per-concrete-pattern counts; every
    // enumerated group is then a sum over the concrete patterns it matches.
    let mut concrete_counts: HashMap<&[usize], ConfusionCounts> = HashMap::new();
    for ((assignment, &label), &prediction) in data
        .assignments()
        .iter()
        .zip(data.labels())
        .zip(data.predictions())
    {
        concrete_counts
            .entry(assignment.values())
            .or_default()
            .record(label, prediction);
    }

    let mut rows = Vec::with_capacity(lattice.len());
    let mut defined = 0usize;
    for key in lattice.groups() {
        let mut counts = ConfusionCounts::default();
        for (pattern, c) in &concrete_counts {
            let matches = key
                .entries()
                .iter()
                .zip(pattern.iter())
                .all(|(entry, &attr)| match entry {
                    crate::lattice::KeyEntry::Wildcard => true,
                    crate::lattice::KeyEntry::Attr(i) => *i == attr,
                });
            if matches {
                counts.merge(c);
            }
        }
        let size = counts.total();
        let rate = kind.rate(&counts, config.kappa);
        let (rate, deficiency, exclusion) = if size < config.min_group_size {
            (rate, None, Some(ExclusionReason::TooSmall))
        } else if let Some(r) = rate {
            (Some(r), Some(kind.deficiency(r)), None)
        } else {
            (None, None, Some(ExclusionReason::UndefinedRate))
        };
        if deficiency.is_some() {
            defined += 1;
        }
        rows.push(GroupRow {
            group: lattice.format_key(key),
            concrete: key.is_concrete(),
            size,
            positives: counts.positives(),
            negatives: counts.negatives(),
            counts,
            rate,
            deficiency,
            exclusion,
        });
    }

    if defined == 0 {
        return Err(AuditError::NoScorableGroups { defined: 0 });
    }
    Ok(GroupMeasureTable {
        kind,
        config: *config,
        rows,
    })
}
