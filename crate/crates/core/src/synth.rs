//! Synthetic generators and independent oracles.
//!
//! The brute-force scorer here deliberately re-derives the pairwise
//! formula inline instead of calling into [`crate::metrics`]; it exists
//! to check the fast paths, not to share code with them. Planted
//! datasets are constructed with exact counts rather than sampled, so
//! measured per-group rates equal the planted rates with no noise.

use crate::comparison::crossover_alpha;
use crate::error::{AuditError, Result};
use crate::lattice::{enumerate_groups, GroupAssignment, GroupKey, GroupLattice, SensitiveAxis};
use crate::measures::LabeledPredictions;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// A bag of per-group deficiency values for metric-behavior exploration.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticProfile {
    pub values: Vec<f64>,
    /// Positions of a deliberately planted (argmin, argmax) pair.
    pub planted_extremes: Option<(usize, usize)>,
}

impl SyntheticProfile {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        for &v in &values {
            if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                return Err(AuditError::InvalidDeficiency(v));
            }
        }
        Ok(Self {
            values,
            planted_extremes: None,
        })
    }

    /// Uniform values in `[lo, hi]`.
    pub fn random<R: Rng>(rng: &mut R, len: usize, lo: f64, hi: f64) -> Self {
        let values = (0..len).map(|_| lo + rng.random::<f64>() * (hi - lo)).collect();
        Self {
            values,
            planted_extremes: None,
        }
    }

    /// Profile whose true extremes are planted at known positions: one
    /// entry is exactly `min_value`, one exactly `max_value`, everything
    /// else strictly between them.
    pub fn with_planted_extremes<R: Rng>(
        rng: &mut R,
        len: usize,
        min_value: f64,
        max_value: f64,
    ) -> Result<Self> {
        if len < 2 {
            return Err(AuditError::InvalidConfig(
                "a planted profile needs at least 2 values".to_string(),
            ));
        }
        if !(0.0..=1.0).contains(&min_value) || !(min_value..=1.0).contains(&max_value) {
            return Err(AuditError::InvalidConfig(format!(
                "planted extremes must satisfy 0 <= min < max <= 1, got ({min_value}, {max_value})"
            )));
        }
        if min_value >= max_value {
            return Err(AuditError::InvalidConfig(
                "planted extremes must be distinct".to_string(),
            ));
        }
        let span = max_value - min_value;
        let mut values: Vec<f64> = (0..len)
            .map(|_| min_value + span * (0.01 + 0.98 * rng.random::<f64>()))
            .collect();
        let min_at = rng.random_range(0..len);
        let mut max_at = rng.random_range(0..len - 1);
        if max_at >= min_at {
            max_at += 1;
        }
        values[min_at] = min_value;
        values[max_at] = max_value;
        Ok(Self {
            values,
            planted_extremes: Some((min_at, max_at)),
        })
    }
}

/// Exact O(n^2) maximum of the pairwise alpha score over all unordered
/// pairs. Reference implementation for the extreme-pair fast path.
pub fn brute_force_if_alpha(values: &[f64], alpha: f64) -> Result<f64> {
    if !alpha.is_finite() || !(0.0..=1.0).contains(&alpha) {
        return Err(AuditError::InvalidAlpha(alpha));
    }
    if values.len() < 2 {
        return Err(AuditError::NoScorableGroups {
            defined: values.len(),
        });
    }
    let mut best = f64::NEG_INFINITY;
    for i in 0..values.len() {
        for j in (i + 1)..values.len() {
            let hi = values[i].max(values[j]);
            let lo = values[i].min(values[j]);
            let rel = if hi == 0.0 { 0.0 } else { 1.0 - lo / hi };
            best = best.max(alpha * hi + (1.0 - alpha) * rel);
        }
    }
    Ok(best)
}

/// Exact per-concrete-group composition of a planted dataset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlantedGroup {
    pub positives: u64,
    pub negatives: u64,
    pub tpr: f64,
    pub fpr: f64,
}

/// Planted datasets list one [`PlantedGroup`] per concrete group, in
/// lattice order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedDatasetSpec {
    pub axes: Vec<SensitiveAxis>,
    pub groups: Vec<PlantedGroup>,
}

#[derive(Debug, Clone)]
pub struct PlantedDataset {
    pub data: LabeledPredictions,
    pub lattice: GroupLattice,
    /// Concrete keys in the same order as the spec's group list.
    pub concrete_keys: Vec<GroupKey>,
}

fn exact_count(rate: f64, n: u64, what: &str) -> Result<u64> {
    if !(0.0..=1.0).contains(&rate) {
        return Err(AuditError::InvalidConfig(format!(
            "{what} rate {rate} outside [0, 1]"
        )));
    }
    let x = rate * n as f64;
    let rounded = x.round();
    if (x - rounded).abs() > 1e-9 {
        return Err(AuditError::NonRepresentableRate { rate, count: n });
    }
    Ok(rounded as u64)
}

/// Builds a dataset whose measured per-group TPR/FPR equal the planted
/// rates exactly. Construction is deterministic; rows are emitted per
/// concrete group in lattice order as TP, FN, FP, TN blocks.
pub fn generate_planted_dataset(spec: &PlantedDatasetSpec) -> Result<PlantedDataset> {
    let lattice = enumerate_groups(&spec.axes)?;
    let concrete_keys: Vec<GroupKey> = lattice
        .concrete_indices()
        .map(|i| lattice.groups()[i].clone())
        .collect();
    if spec.groups.len() != concrete_keys.len() {
        return Err(AuditError::InvalidConfig(format!(
            "expected {} concrete group specs, got {}",
            concrete_keys.len(),
            spec.groups.len()
        )));
    }

    let mut labels = Vec::new();
    let mut predictions = Vec::new();
    let mut assignments = Vec::new();
    for (key, group) in concrete_keys.iter().zip(&spec.groups) {
        let tp = exact_count(group.tpr, group.positives, "tpr")?;
        let fp = exact_count(group.fpr, group.negatives, "fpr")?;
        let assignment = GroupAssignment::new(
            key.entries()
                .iter()
                .map(|e| match e {
                    crate::lattice::KeyEntry::Attr(i) => *i,
                    crate::lattice::KeyEntry::Wildcard => unreachable!("concrete key"),
                })
                .collect(),
        );
        let mut push = |count: u64, label: bool, prediction: bool| {
            for _ in 0..count {
                labels.push(label);
                predictions.push(prediction);
                assignments.push(assignment.clone());
            }
        };
        push(tp, true, true);
        push(group.positives - tp, true, false);
        push(fp, false, true);
        push(group.negatives - fp, false, false);
    }

    Ok(PlantedDataset {
        data: LabeledPredictions::new(labels, predictions, assignments)?,
        lattice,
        concrete_keys,
    })
}

/// Per-case tallies of the dominance behavior of extreme-value moves.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseDominanceStats {
    pub samples: u32,
    /// Samples where the sharpened product condition holds.
    pub condition_holds: u32,
    /// ... and dominance was observed at every grid alpha.
    pub condition_confirmed: u32,
    /// ... but dominance failed somewhere (violations of the condition).
    pub condition_violations: u32,
    /// Samples where the condition fails and dominance indeed breaks.
    pub complement_confirmed: u32,
    /// Samples where the condition fails yet dominance held everywhere.
    pub complement_violations: u32,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixedCrossoverStats {
    pub samples: u32,
    /// Samples whose extreme-pair component deltas have strictly
    /// opposite signs.
    pub opposite_deltas: u32,
    /// ... for which a crossover alpha in (0, 1) was found.
    pub crossover_found: u32,
    pub crossover_missing: u32,
}

/// Empirical dominance statistics over random extreme-value moves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExplorerReport {
    pub seed: u64,
    pub samples_per_case: u32,
    pub grid_points: usize,
    pub both_worse: CaseDominanceStats,
    pub both_better: CaseDominanceStats,
    pub mixed: MixedCrossoverStats,
}

impl ExplorerReport {
    /// Count of observations contradicting the sharpened conditions or
    /// the mixed-case crossover claim.
    pub fn violations(&self) -> u64 {
        u64::from(self.both_worse.condition_violations)
            + u64::from(self.both_worse.complement_violations)
            + u64::from(self.both_better.condition_violations)
            + u64::from(self.both_better.complement_violations)
            + u64::from(self.mixed.crossover_missing)
    }
}

const DOMINANCE_TOLERANCE: f64 = 1e-12;

fn if_of_extremes(lo: f64, hi: f64, alpha: f64) -> f64 {
    let rel = if hi == 0.0 { 0.0 } else { 1.0 - lo / hi };
    alpha * hi + (1.0 - alpha) * rel
}

fn uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    lo + rng.random::<f64>() * (hi - lo)
}

/// Draws random extreme-value moves `(a, b) -> (a + x, b + y)`, sorts
/// them into the three efficiency cases, and checks each observed
/// dominance pattern against the sharpened product condition
/// (`x*b` vs `y*a`) and, for mixed moves with strictly opposite
/// component deltas, against the existence of a crossover alpha.
pub fn efficiency_case_explorer(samples: u32, seed: u64) -> ExplorerReport {
    let grid: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut both_worse = CaseDominanceStats::default();
    let mut both_better = CaseDominanceStats::default();
    let mut mixed = MixedCrossoverStats {
        samples: 0,
        opposite_deltas: 0,
        crossover_found: 0,
        crossover_missing: 0,
    };

    while both_worse.samples < samples
        || both_better.samples < samples
        || mixed.samples < samples
    {
        let a = uniform(&mut rng, 0.0, 1.0);
        let b = uniform(&mut rng, a, 1.0);
        let a2 = uniform(&mut rng, 0.0, 1.0);
        let b2 = uniform(&mut rng, a2, 1.0);
        let x = a2 - a;
        let y = b2 - b;

        if y >= x && x >= 0.0 {
            if both_worse.samples >= samples {
                continue;
            }
            both_worse.samples += 1;
            let condition = x * b <= y * a;
            let dominant = grid
                .iter()
                .all(|&al| if_of_extremes(a2, b2, al) >= if_of_extremes(a, b, al) - DOMINANCE_TOLERANCE);
            match (condition, dominant) {
                (true, true) => {
                    both_worse.condition_holds += 1;
                    both_worse.condition_confirmed += 1;
                }
                (true, false) => {
                    both_worse.condition_holds += 1;
                    both_worse.condition_violations += 1;
                }
                (false, false) => both_worse.complement_confirmed += 1,
                (false, true) => both_worse.complement_violations += 1,
            }
        } else if y <= x && x <= 0.0 {
            if both_better.samples >= samples {
                continue;
            }
            both_better.samples += 1;
            let condition = x * b >= y * a;
            let dominated = grid
                .iter()
                .all(|&al| if_of_extremes(a2, b2, al) <= if_of_extremes(a, b, al) + DOMINANCE_TOLERANCE);
            match (condition, dominated) {
                (true, true) => {
                    both_better.condition_holds += 1;
                    both_better.condition_confirmed += 1;
                }
                (true, false) => {
                    both_better.condition_holds += 1;
                    both_better.condition_violations += 1;
                }
                (false, false) => both_better.complement_confirmed += 1,
                (false, true) => both_better.complement_violations += 1,
            }
        } else {
            if mixed.samples >= samples {
                continue;
            }
            mixed.samples += 1;
            let rel = |lo: f64, hi: f64| if hi == 0.0 { 0.0 } else { 1.0 - lo / hi };
            let d_abs = b2 - b;
            let d_rel = rel(a2, b2) - rel(a, b);
            if d_abs * d_rel < 0.0 {
                mixed.opposite_deltas += 1;
                match crossover_alpha((b, rel(a, b)), (b2, rel(a2, b2))) {
                    Some(alpha) => {
                        debug_assert!(alpha > 0.0 && alpha < 1.0);
                        mixed.crossover_found += 1;
                    }
                    None => mixed.crossover_missing += 1,
                }
            }
        }
    }

    ExplorerReport {
        seed,
        samples_per_case: samples,
        grid_points: grid.len(),
        both_worse,
        both_better,
        mixed,
    }
}
