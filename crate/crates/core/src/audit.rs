//! End-to-end audit orchestration: lattice, tables, scores, bootstrap
//! confidence intervals, and axis-count sweeps.
//!
//! Everything here is deterministic: identical data and config produce
//! identical reports, including the bootstrap, whose replicas each draw
//! from an independent stream of a seeded generator.

use crate::error::{AuditError, Result};
use crate::lattice::{enumerate_groups, GroupLattice, SensitiveAxis};
use crate::measures::{
    balanced_accuracy, build_measure_table, confusion_counts, GroupMeasureTable, LabeledPredictions,
    MeasureConfig, MeasureKind,
};
use crate::metrics::{fairness_scores, validate_alpha_grid, FairnessScores};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Report schema version.
pub const FORMAT_VERSION: &str = "1";

fn default_alpha_grid() -> Vec<f64> {
    (0..=10).map(|i| i as f64 / 10.0).collect()
}

fn default_measures() -> Vec<MeasureKind> {
    vec![MeasureKind::TprDeficiency, MeasureKind::Fpr]
}

fn default_kappa() -> f64 {
    0.0
}

fn default_clamp_epsilon() -> f64 {
    1e-6
}

fn default_min_group_size() -> u64 {
    1
}

fn default_lo_percentile() -> f64 {
    2.5
}

fn default_hi_percentile() -> f64 {
    97.5
}

/// Bootstrap resampling settings. The seed is mandatory so runs are
/// reproducible by construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapConfig {
    pub replicas: u32,
    pub seed: u64,
    #[serde(default = "default_lo_percentile")]
    pub lo_percentile: f64,
    #[serde(default = "default_hi_percentile")]
    pub hi_percentile: f64,
    /// Resample within each concrete group instead of over all rows.
    #[serde(default)]
    pub stratified: bool,
}

impl BootstrapConfig {
    pub fn validate(&self) -> Result<()> {
        if self.replicas < 1 {
            return Err(AuditError::InvalidConfig(
                "bootstrap replicas must be >= 1".to_string(),
            ));
        }
        let (lo, hi) = (self.lo_percentile, self.hi_percentile);
        if !lo.is_finite() || !hi.is_finite() || lo < 0.0 || hi > 100.0 || lo >= hi {
            return Err(AuditError::InvalidConfig(format!(
                "bootstrap percentiles must satisfy 0 <= lo < hi <= 100, got ({lo}, {hi})"
            )));
        }
        Ok(())
    }
}

/// Full audit configuration. Attribute labels map to indices by their
/// declaration order here, independent of data row order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditConfig {
    pub axes: Vec<SensitiveAxis>,
    pub label_column: String,
    pub prediction_column: String,
    #[serde(default = "default_measures")]
    pub measures: Vec<MeasureKind>,
    #[serde(default = "default_alpha_grid")]
    pub alpha_grid: Vec<f64>,
    #[serde(default = "default_kappa")]
    pub kappa: f64,
    #[serde(default = "default_clamp_epsilon")]
    pub clamp_epsilon: f64,
    #[serde(default = "default_min_group_size")]
    pub min_group_size: u64,
    #[serde(default)]
    pub bootstrap: Option<BootstrapConfig>,
    /// Marks configs intended for axis sweeps; echoed, not interpreted.
    #[serde(default)]
    pub axis_sweep: bool,
}

impl AuditConfig {
    pub fn validate(&self) -> Result<()> {
        if self.axes.is_empty() {
            return Err(AuditError::EmptyAxes);
        }
        for (i, axis) in self.axes.iter().enumerate() {
            axis.validate()?;
            if self.axes[..i].iter().any(|a| a.name == axis.name) {
                return Err(AuditError::InvalidConfig(format!(
                    "duplicate axis name `{}`",
                    axis.name
                )));
            }
        }
        if self.label_column.is_empty() || self.prediction_column.is_empty() {
            return Err(AuditError::InvalidConfig(
                "label and prediction column names must be non-empty".to_string(),
            ));
        }
        if self.measures.is_empty() {
            return Err(AuditError::InvalidConfig(
                "at least one measure kind is required".to_string(),
            ));
        }
        for (i, kind) in self.measures.iter().enumerate() {
            if self.measures[..i].contains(kind) {
                return Err(AuditError::InvalidConfig(format!(
                    "duplicate measure kind `{}`",
                    kind.name()
                )));
            }
        }
        validate_alpha_grid(&self.alpha_grid)?;
        self.measure_config().validate()?;
        if let Some(bootstrap) = &self.bootstrap {
            bootstrap.validate()?;
        }
        Ok(())
    }

    pub fn measure_config(&self) -> MeasureConfig {
        MeasureConfig {
            kappa: self.kappa,
            clamp_epsilon: self.clamp_epsilon,
            min_group_size: self.min_group_size,
        }
    }
}

/// A percentile interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

/// A percentile interval for one alpha grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaInterval {
    pub alpha: f64,
    pub lo: f64,
    pub hi: f64,
}

/// Bootstrap percentile intervals for one measure kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapSummary {
    pub replicas: u32,
    /// Replicas that produced scores.
    pub kept: u32,
    /// Replicas dropped for having fewer than 2 defined groups.
    pub dropped: u32,
    /// Set when more than half of the replicas were dropped.
    pub unreliable: bool,
    pub lo_percentile: f64,
    pub hi_percentile: f64,
    /// `None` when every replica was dropped.
    pub df: Option<Interval>,
    pub if_curve: Option<Vec<AlphaInterval>>,
}

/// One measure kind's audited results.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub kind: MeasureKind,
    /// Worst-group value in rate units (min TPR, max FPR, or min accuracy).
    pub worst_group_rate: f64,
    pub table: GroupMeasureTable,
    pub scores: FairnessScores,
    pub bootstrap: Option<BootstrapSummary>,
}

/// One model's complete audit output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub format_version: String,
    pub model: String,
    pub config: AuditConfig,
    pub n_examples: u64,
    /// Balanced accuracy over the full dataset; `None` if a class is absent.
    pub balanced_accuracy: Option<f64>,
    pub results: Vec<MeasureReport>,
}

fn max_deficiency(table: &GroupMeasureTable) -> f64 {
    table
        .defined()
        .map(|(_, m)| m)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Runs the full audit of one model's predictions.
pub fn run_audit(
    model: &str,
    data: &LabeledPredictions,
    config: &AuditConfig,
) -> Result<AuditReport> {
    config.validate()?;
    let lattice = enumerate_groups(&config.axes)?;
    let all_rows: Vec<usize> = (0..data.len()).collect();
    let global_counts = confusion_counts(data, &all_rows)?;

    let mut results = Vec::with_capacity(config.measures.len());
    for &kind in &config.measures {
        let table = build_measure_table(data, &lattice, kind, &config.measure_config())?;
        let scores = fairness_scores(&table, &config.alpha_grid, config.clamp_epsilon)?;
        let worst_group_rate = kind.rate_from_deficiency(max_deficiency(&table));
        let bootstrap = match &config.bootstrap {
            Some(_) => Some(bootstrap_ci(data, &lattice, kind, config)?),
            None => None,
        };
        results.push(MeasureReport {
            kind,
            worst_group_rate,
            table,
            scores,
            bootstrap,
        });
    }

    Ok(AuditReport {
        format_version: FORMAT_VERSION.to_string(),
        model: model.to_string(),
        config: config.clone(),
        n_examples: data.len() as u64,
        balanced_accuracy: balanced_accuracy(&global_counts),
        results,
    })
}

/// Linear-interpolation percentile over a sorted slice.
fn percentile(sorted: &[f64], p: f64) -> f64 {
    let h = p / 100.0 * (sorted.len() - 1) as f64;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

fn interval_of(values: &mut Vec<f64>, lo_p: f64, hi_p: f64) -> Interval {
    values.sort_by(f64::total_cmp);
    Interval {
        lo: percentile(values, lo_p),
        hi: percentile(values, hi_p),
    }
}

/// Bootstrap percentile intervals for `df` and the `IF_alpha` curve.
///
/// Rows are resampled with replacement (within concrete groups when
/// `stratified` is set). Each replica draws from stream `replica + 1`
/// of a generator keyed on the configured seed, so results do not
/// depend on evaluation order. Replicas with fewer than 2 defined
/// groups are dropped and counted; intervals are flagged unreliable
/// when more than half are dropped.
pub fn bootstrap_ci(
    data: &LabeledPredictions,
    lattice: &GroupLattice,
    kind: MeasureKind,
    config: &AuditConfig,
) -> Result<BootstrapSummary> {
    let bootstrap = config.bootstrap.as_ref().ok_or_else(|| {
        AuditError::InvalidConfig("bootstrap_ci requires a bootstrap config".to_string())
    })?;
    bootstrap.validate()?;
    if data.is_empty() {
        return Err(AuditError::InvalidConfig(
            "cannot bootstrap an empty dataset".to_string(),
        ));
    }

    let strata: Option<Vec<Vec<usize>>> = if bootstrap.stratified {
        let mut strata = Vec::new();
        for i in lattice.concrete_indices() {
            let members = lattice.group_members(data.assignments(), &lattice.groups()[i])?;
            if !members.is_empty() {
                strata.push(members);
            }
        }
        Some(strata)
    } else {
        None
    };

    let n = data.len();
    let measure_config = config.measure_config();
    let mut df_values: Vec<f64> = Vec::new();
    let mut if_values: Vec<Vec<f64>> = vec![Vec::new(); config.alpha_grid.len()];
    let mut dropped = 0u32;

    for replica in 0..bootstrap.replicas {
        let mut rng = ChaCha8Rng::seed_from_u64(bootstrap.seed);
        rng.set_stream(replica as u64 + 1);
        let indices: Vec<usize> = match &strata {
            None => (0..n).map(|_| rng.random_range(0..n)).collect(),
            Some(strata) => {
                let mut indices = Vec::with_capacity(n);
                for members in strata {
                    for _ in 0..members.len() {
                        indices.push(members[rng.random_range(0..members.len())]);
                    }
                }
                indices
            }
        };
        let sample = data.subset(&indices)?;
        let replica_scores = build_measure_table(&sample, lattice, kind, &measure_config)
            .and_then(|table| fairness_scores(&table, &config.alpha_grid, config.clamp_epsilon));
        match replica_scores {
            Ok(scores) => {
                df_values.push(scores.df);
                for (slot, point) in if_values.iter_mut().zip(&scores.if_curve) {
                    slot.push(point.value);
                }
            }
            Err(AuditError::NoScorableGroups { .. }) => dropped += 1,
            Err(e) => return Err(e),
        }
    }

    let kept = bootstrap.replicas - dropped;
    let (df, if_curve) = if kept == 0 {
        (None, None)
    } else {
        let df = interval_of(&mut df_values, bootstrap.lo_percentile, bootstrap.hi_percentile);
        let curve = config
            .alpha_grid
            .iter()
            .zip(if_values.iter_mut())
            .map(|(&alpha, values)| {
                let iv = interval_of(values, bootstrap.lo_percentile, bootstrap.hi_percentile);
                AlphaInterval {
                    alpha,
                    lo: iv.lo,
                    hi: iv.hi,
                }
            })
            .collect();
        (Some(df), Some(curve))
    };

    Ok(BootstrapSummary {
        replicas: bootstrap.replicas,
        kept,
        dropped,
        unreliable: u64::from(dropped) * 2 > u64::from(bootstrap.replicas),
        lo_percentile: bootstrap.lo_percentile,
        hi_percentile: bootstrap.hi_percentile,
        df,
        if_curve,
    })
}

/// Re-audits on every prefix of the configured axis order: report `k`
/// uses only the first `k` axes. The last report equals a plain audit
/// of the full config.
pub fn axis_sweep(
    model: &str,
    data: &LabeledPredictions,
    config: &AuditConfig,
) -> Result<Vec<AuditReport>> {
    config.validate()?;
    let p = config.axes.len();
    let mut reports = Vec::with_capacity(p);
    for k in 1..=p {
        let mut config_k = config.clone();
        config_k.axes.truncate(k);
        let assignments = data
            .assignments()
            .iter()
            .map(|a| crate::lattice::GroupAssignment::new(a.values()[..k].to_vec()))
            .collect();
        let data_k = LabeledPredictions::new(
            data.labels().to_vec(),
            data.predictions().to_vec(),
            assignments,
        )?;
        reports.push(run_audit(model, &data_k, &config_k)?);
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::GroupAssignment;
    use crate::synth::{generate_planted_dataset, PlantedDatasetSpec, PlantedGroup};

    fn binary_axes(names: &[&str]) -> Vec<SensitiveAxis> {
        names
            .iter()
            .map(|n| SensitiveAxis::new(*n, ["0", "1"]).unwrap())
            .collect()
    }

    fn base_config(axes: Vec<SensitiveAxis>) -> AuditConfig {
        AuditConfig {
            axes,
            label_column: "y".to_string(),
            prediction_column: "yhat".to_string(),
            measures: vec![MeasureKind::TprDeficiency],
            alpha_grid: default_alpha_grid(),
            kappa: 0.0,
            clamp_epsilon: 1e-6,
            min_group_size: 1,
            bootstrap: None,
            axis_sweep: false,
        }
    }

    fn planted_two_axis() -> (LabeledPredictions, AuditConfig) {
        // Per-group TPRs 0.9 / 0.6 / 0.8 / 0.7 and FPRs 0.1 / 0.4 / 0.2 / 0.3.
        let spec = PlantedDatasetSpec {
            axes: binary_axes(&["gender", "race"]),
            groups: vec![
                PlantedGroup { positives: 10, negatives: 10, tpr: 0.9, fpr: 0.1 },
                PlantedGroup { positives: 10, negatives: 10, tpr: 0.6, fpr: 0.4 },
                PlantedGroup { positives: 10, negatives: 10, tpr: 0.8, fpr: 0.2 },
                PlantedGroup { positives: 10, negatives: 10, tpr: 0.7, fpr: 0.3 },
            ],
        };
        let planted = generate_planted_dataset(&spec).unwrap();
        let config = base_config(binary_axes(&["gender", "race"]));
        (planted.data, config)
    }

    #[test]
    fn planted_audit_reproduces_hand_arithmetic() {
        let (data, config) = planted_two_axis();
        let report = run_audit("planted", &data, &config).unwrap();
        let result = &report.results[0];
        // Worst TPR is 0.6, extremes are m = 0.1 and m = 0.4.
        assert!((result.worst_group_rate - 0.6).abs() < 1e-12);
        assert!((result.scores.df - 4f64.ln()).abs() < 1e-12);
        let if05 = result
            .scores
            .if_curve
            .iter()
            .find(|p| p.alpha == 0.5)
            .unwrap();
        assert!((if05.value - 0.575).abs() < 1e-12);
        assert_eq!(result.scores.extreme_min_group, "gender=0|race=0");
        assert_eq!(result.scores.extreme_max_group, "gender=0|race=1");
        assert_eq!(report.n_examples, 80);
        assert!((report.balanced_accuracy.unwrap() - 0.75).abs() < 1e-12);
    }

    #[test]
    fn perfect_predictor_scores_through_the_clamp() {
        let labels = vec![true, false, true, false, true, false, true, false];
        let assignments = vec![
            GroupAssignment::new(vec![0]),
            GroupAssignment::new(vec![0]),
            GroupAssignment::new(vec![0]),
            GroupAssignment::new(vec![0]),
            GroupAssignment::new(vec![1]),
            GroupAssignment::new(vec![1]),
            GroupAssignment::new(vec![1]),
            GroupAssignment::new(vec![1]),
        ];
        let data = LabeledPredictions::new(labels.clone(), labels, assignments).unwrap();
        let config = base_config(binary_axes(&["g"]));
        let report = run_audit("perfect", &data, &config).unwrap();
        let scores = &report.results[0].scores;
        assert_eq!(scores.df, 0.0);
        for p in &scores.if_curve {
            assert!((p.value - p.alpha * config.clamp_epsilon).abs() < 1e-18);
        }
        assert_eq!(report.balanced_accuracy, Some(1.0));
    }

    #[test]
    fn single_defined_group_is_not_scorable() {
        // One axis; all rows fall in group 0, so group 1 is empty.
        let data = LabeledPredictions::new(
            vec![true, false, true],
            vec![true, false, false],
            vec![GroupAssignment::new(vec![0]); 3],
        )
        .unwrap();
        let config = base_config(binary_axes(&["g"]));
        let err = run_audit("m", &data, &config).unwrap_err();
        assert!(matches!(err, AuditError::NoScorableGroups { defined: 1 }));
    }

    #[test]
    fn bootstrap_is_deterministic_and_order_free() {
        let (data, mut config) = planted_two_axis();
        config.bootstrap = Some(BootstrapConfig {
            replicas: 50,
            seed: 7,
            lo_percentile: 2.5,
            hi_percentile: 97.5,
            stratified: false,
        });
        let a = run_audit("m", &data, &config).unwrap();
        let b = run_audit("m", &data, &config).unwrap();
        assert_eq!(a, b);
        let summary = a.results[0].bootstrap.as_ref().unwrap();
        assert_eq!(summary.kept + summary.dropped, 50);
        assert!(!summary.unreliable);
        let df = summary.df.unwrap();
        assert!(df.lo <= df.hi);
    }

    #[test]
    fn bootstrap_single_replica_degenerates_to_point() {
        let (data, mut config) = planted_two_axis();
        config.bootstrap = Some(BootstrapConfig {
            replicas: 1,
            seed: 3,
            lo_percentile: 2.5,
            hi_percentile: 97.5,
            stratified: false,
        });
        let report = run_audit("m", &data, &config).unwrap();
        let summary = report.results[0].bootstrap.as_ref().unwrap();
        let df = summary.df.unwrap();
        assert_eq!(df.lo, df.hi);
    }

    #[test]
    fn stratified_bootstrap_preserves_group_sizes() {
        let (data, mut config) = planted_two_axis();
        config.bootstrap = Some(BootstrapConfig {
            replicas: 20,
            seed: 11,
            lo_percentile: 2.5,
            hi_percentile: 97.5,
            stratified: true,
        });
        // Every concrete group keeps its 20 rows under stratification, so
        // no replica can lose a group: nothing is dropped.
        let report = run_audit("m", &data, &config).unwrap();
        let summary = report.results[0].bootstrap.as_ref().unwrap();
        assert_eq!(summary.dropped, 0);
    }

    #[test]
    fn bootstrap_interval_usually_covers_the_point_estimate() {
        use rand::Rng;

        // Repeated trials on noisy balanced data: the percentile interval
        // should cover the trial's own point estimate in >= 90% of runs.
        let trials = 25u64;
        let mut covered = 0u64;
        for t in 0..trials {
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + t);
            let mut labels = Vec::new();
            let mut predictions = Vec::new();
            let mut assignments = Vec::new();
            for (g, tpr, fpr) in [(0usize, 0.7, 0.2), (1usize, 0.85, 0.1)] {
                for _ in 0..200 {
                    labels.push(true);
                    predictions.push(rng.random::<f64>() < tpr);
                    assignments.push(GroupAssignment::new(vec![g]));
                }
                for _ in 0..200 {
                    labels.push(false);
                    predictions.push(rng.random::<f64>() < fpr);
                    assignments.push(GroupAssignment::new(vec![g]));
                }
            }
            let data = LabeledPredictions::new(labels, predictions, assignments).unwrap();
            let mut config = base_config(binary_axes(&["g"]));
            config.bootstrap = Some(BootstrapConfig {
                replicas: 200,
                seed: 9000 + t,
                lo_percentile: 2.5,
                hi_percentile: 97.5,
                stratified: false,
            });
            let report = run_audit("m", &data, &config).unwrap();
            let result = &report.results[0];
            let interval = result.bootstrap.as_ref().unwrap().df.unwrap();
            if result.scores.df >= interval.lo && result.scores.df <= interval.hi {
                covered += 1;
            }
        }
        assert!(
            covered * 10 >= trials * 9,
            "point estimate covered in only {covered}/{trials} trials"
        );
    }

    #[test]
    fn unreliable_flag_fires_when_most_replicas_drop() {
        // Two one-axis groups, one with a single positive example: any
        // resample missing that row leaves a single defined group.
        let data = LabeledPredictions::new(
            vec![true, true, true, true, true],
            vec![true, false, true, true, false],
            vec![
                GroupAssignment::new(vec![0]),
                GroupAssignment::new(vec![0]),
                GroupAssignment::new(vec![0]),
                GroupAssignment::new(vec![0]),
                GroupAssignment::new(vec![1]),
            ],
        )
        .unwrap();
        let mut config = base_config(binary_axes(&["g"]));
        config.bootstrap = Some(BootstrapConfig {
            replicas: 100,
            seed: 5,
            lo_percentile: 2.5,
            hi_percentile: 97.5,
            stratified: false,
        });
        let lattice = enumerate_groups(&config.axes).unwrap();
        let summary = bootstrap_ci(&data, &lattice, MeasureKind::TprDeficiency, &config).unwrap();
        // P(row 4 absent from a resample) = (4/5)^5 ~ 0.33, and group g=1
        // is also undefined whenever its only sampled rows... it only has
        // one row, so dropping happens whenever row 4 is not drawn.
        assert!(summary.dropped > 0);
        assert_eq!(summary.unreliable, summary.dropped * 2 > 100);
    }

    #[test]
    fn axis_sweep_matches_lattice_sizes_and_full_audit() {
        // Three axes; plant the same rates in every cell split.
        let spec = PlantedDatasetSpec {
            axes: binary_axes(&["a", "b", "c"]),
            groups: (0..8)
                .map(|i| PlantedGroup {
                    positives: 20,
                    negatives: 20,
                    tpr: 0.5 + 0.05 * i as f64,
                    fpr: 0.1,
                })
                .collect(),
        };
        let planted = generate_planted_dataset(&spec).unwrap();
        let config = base_config(binary_axes(&["a", "b", "c"]));
        let reports = axis_sweep("m", &planted.data, &config).unwrap();
        assert_eq!(reports.len(), 3);
        let sizes: Vec<usize> = reports
            .iter()
            .map(|r| r.results[0].table.rows.len())
            .collect();
        assert_eq!(sizes, vec![2, 8, 26]);
        // k = p equals the plain audit on the full config.
        let full = run_audit("m", &planted.data, &config).unwrap();
        assert_eq!(reports[2], full);
        // k = 1 equals a plain audit configured with the first axis only.
        let mut config_1 = config.clone();
        config_1.axes.truncate(1);
        let data_1 = LabeledPredictions::new(
            planted.data.labels().to_vec(),
            planted.data.predictions().to_vec(),
            planted
                .data
                .assignments()
                .iter()
                .map(|a| GroupAssignment::new(vec![a.values()[0]]))
                .collect(),
        )
        .unwrap();
        assert_eq!(reports[0], run_audit("m", &data_1, &config_1).unwrap());
    }

    #[test]
    fn planted_intersection_worsens_with_more_axes() {
        // Margins look fine; the (0,1) cell is planted much worse.
        let spec = PlantedDatasetSpec {
            axes: binary_axes(&["a", "b"]),
            groups: vec![
                PlantedGroup { positives: 20, negatives: 20, tpr: 0.9, fpr: 0.1 },
                PlantedGroup { positives: 20, negatives: 20, tpr: 0.5, fpr: 0.1 },
                PlantedGroup { positives: 20, negatives: 20, tpr: 0.7, fpr: 0.1 },
                PlantedGroup { positives: 20, negatives: 20, tpr: 0.9, fpr: 0.1 },
            ],
        };
        let planted = generate_planted_dataset(&spec).unwrap();
        let config = base_config(binary_axes(&["a", "b"]));
        let reports = axis_sweep("m", &planted.data, &config).unwrap();
        let worst_m = |r: &AuditReport| max_deficiency(&r.results[0].table);
        // Worst-group deficiency is non-decreasing in k.
        assert!(worst_m(&reports[1]) >= worst_m(&reports[0]));
        // Min TPR at k = 2 is the planted 0.5, below both margins.
        assert!((reports[1].results[0].worst_group_rate - 0.5).abs() < 1e-12);
        assert!(reports[0].results[0].worst_group_rate > 0.5);
    }

    #[test]
    fn negative_example_in_excluded_group_leaves_tpr_scores_unchanged() {
        let (data, mut config) = planted_two_axis();
        config.min_group_size = 5;
        let before = run_audit("m", &data, &config).unwrap();

        // Append one negative example: group counts change, but no
        // TPR-deficiency value moves.
        let mut labels = data.labels().to_vec();
        let mut predictions = data.predictions().to_vec();
        let mut assignments = data.assignments().to_vec();
        labels.push(false);
        predictions.push(true);
        assignments.push(GroupAssignment::new(vec![1, 1]));
        let grown = LabeledPredictions::new(labels, predictions, assignments).unwrap();
        let after = run_audit("m", &grown, &config).unwrap();

        assert_eq!(before.results[0].scores, after.results[0].scores);
        assert_eq!(
            before.results[0].worst_group_rate,
            after.results[0].worst_group_rate
        );
    }

    #[test]
    fn config_validation_rejects_bad_grids_and_duplicates() {
        let mut config = base_config(binary_axes(&["a", "b"]));
        config.alpha_grid = vec![0.5, 0.2];
        assert!(config.validate().is_err());

        let mut config = base_config(binary_axes(&["a", "a"]));
        config.alpha_grid = default_alpha_grid();
        assert!(config.validate().is_err());

        let mut config = base_config(binary_axes(&["a", "b"]));
        config.measures = vec![MeasureKind::Fpr, MeasureKind::Fpr];
        assert!(config.validate().is_err());

        let mut config = base_config(binary_axes(&["a", "b"]));
        config.bootstrap = Some(BootstrapConfig {
            replicas: 0,
            seed: 1,
            lo_percentile: 2.5,
            hi_percentile: 97.5,
            stratified: false,
        });
        assert!(config.validate().is_err());
    }
}
