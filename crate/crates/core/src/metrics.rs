//! Fairness scores over a deficiency table.
//!
//! Two families are computed over the same enumerated group set:
//!
//! - the differential fairness score `df`: the natural log of the ratio
//!   between the worst and best group deficiency, after clamping every
//!   deficiency to `[epsilon, 1]` to keep the ratio finite;
//! - the alpha-weighted intersectional score `IF_alpha`: the maximum
//!   over group pairs of `alpha * delta_abs + (1 - alpha) * delta_rel`,
//!   where `delta_abs` is the worse deficiency of the pair and
//!   `delta_rel = 1 - min/max` is the pair's relative disparity.
//!
//! Both components of the pairwise score are maximized simultaneously by
//! the (argmin, argmax) deficiency pair, so the maximizing pair is the
//! same for every alpha; the fast paths below exploit that and are
//! checked against a brute-force pairwise oracle in the test suite.

use crate::error::{AuditError, Result};
use crate::measures::GroupMeasureTable;
use serde::{Deserialize, Serialize};

/// A trade-off weight in `[0, 1]`: 1 weighs only absolute harm, 0 only
/// relative disparity.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Alpha(f64);

impl Alpha {
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() || !(0.0..=1.0).contains(&value) {
            return Err(AuditError::InvalidAlpha(value));
        }
        Ok(Self(value))
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Alpha {
    type Error = AuditError;

    fn try_from(value: f64) -> Result<Self> {
        Alpha::new(value)
    }
}

/// Pairwise fairness components between two deficiencies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairScore {
    /// The worse (larger) deficiency of the pair.
    pub delta_abs: f64,
    /// `1 - min/max`; 0 when both deficiencies are 0.
    pub delta_rel: f64,
    /// `alpha * delta_abs + (1 - alpha) * delta_rel`.
    pub i_alpha: f64,
}

fn check_deficiency(m: f64) -> Result<f64> {
    if !m.is_finite() || !(0.0..=1.0).contains(&m) {
        return Err(AuditError::InvalidDeficiency(m));
    }
    Ok(m)
}

/// Raw pair components, no validation. `delta_rel` is 0 when both values
/// are 0: equal perfect performance is maximally fair.
pub(crate) fn pair_components(m_a: f64, m_b: f64) -> (f64, f64) {
    let hi = m_a.max(m_b);
    let lo = m_a.min(m_b);
    let delta_rel = if hi == 0.0 { 0.0 } else { 1.0 - lo / hi };
    (hi, delta_rel)
}

/// Scores one unordered pair of deficiencies at a given alpha.
/// Symmetric in its first two arguments.
pub fn pair_score(m_a: f64, m_b: f64, alpha: Alpha) -> Result<PairScore> {
    check_deficiency(m_a)?;
    check_deficiency(m_b)?;
    let (delta_abs, delta_rel) = pair_components(m_a, m_b);
    let a = alpha.value();
    Ok(PairScore {
        delta_abs,
        delta_rel,
        i_alpha: a * delta_abs + (1.0 - a) * delta_rel,
    })
}

/// Indices of the minimum and maximum value; earlier index wins ties,
/// which is the lexicographic tie-break when values come in lattice order.
fn extreme_indices(values: &[f64]) -> Option<(usize, usize)> {
    let mut iter = values.iter().enumerate();
    let (_, &first) = iter.next()?;
    let (mut min_i, mut min_v) = (0, first);
    let (mut max_i, mut max_v) = (0, first);
    for (i, &v) in iter {
        if v < min_v {
            min_i = i;
            min_v = v;
        }
        if v > max_v {
            max_i = i;
            max_v = v;
        }
    }
    Some((min_i, max_i))
}

/// `IF_alpha` over a slice of deficiencies: the maximum pairwise score,
/// computed through the extreme pair. Returns the value and the
/// (argmin, argmax) positions.
pub fn if_alpha_values(values: &[f64], alpha: Alpha) -> Result<(f64, (usize, usize))> {
    if values.len() < 2 {
        return Err(AuditError::NoScorableGroups {
            defined: values.len(),
        });
    }
    for &v in values {
        check_deficiency(v)?;
    }
    let (min_i, max_i) = extreme_indices(values).expect("len checked above");
    let score = pair_score(values[min_i], values[max_i], alpha)?;
    Ok((score.i_alpha, (min_i, max_i)))
}

/// `IF_alpha` and its maximizing pair over the defined rows of a table.
pub fn if_alpha(table: &GroupMeasureTable, alpha: Alpha) -> Result<(f64, (String, String))> {
    let (rows, values) = defined_rows(table);
    let (value, (a, b)) = if_alpha_values(&values, alpha)?;
    Ok((
        value,
        (
            table.rows[rows[a]].group.clone(),
            table.rows[rows[b]].group.clone(),
        ),
    ))
}

/// The best (argmin deficiency) and worst (argmax) defined groups, with
/// lexicographic tie-breaking. Coincide when all deficiencies are equal.
pub fn extreme_groups(table: &GroupMeasureTable) -> Result<(String, String)> {
    let (rows, values) = defined_rows(table);
    let (min_i, max_i) =
        extreme_indices(&values).ok_or(AuditError::NoScorableGroups { defined: 0 })?;
    Ok((
        table.rows[rows[min_i]].group.clone(),
        table.rows[rows[max_i]].group.clone(),
    ))
}

/// Natural log of (max deficiency / min deficiency) with every
/// deficiency clamped to `[epsilon, 1]` first.
pub fn df_score(table: &GroupMeasureTable, epsilon: f64) -> Result<f64> {
    let extremes = clamped_extremes(table, epsilon)?;
    Ok((extremes.max_m / extremes.min_m).ln())
}

/// One point of an alpha curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaPoint {
    pub alpha: f64,
    pub value: f64,
}

/// Validates an alpha grid: non-empty, strictly increasing, inside [0, 1].
pub fn validate_alpha_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(AuditError::InvalidConfig(
            "alpha grid must not be empty".to_string(),
        ));
    }
    for &a in grid {
        if !a.is_finite() || !(0.0..=1.0).contains(&a) {
            return Err(AuditError::InvalidAlpha(a));
        }
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(AuditError::InvalidConfig(
            "alpha grid must be strictly increasing".to_string(),
        ));
    }
    Ok(())
}

/// `IF_alpha` per grid point. The curve is affine in alpha with slope
/// `delta_abs - delta_rel` of the extreme pair.
pub fn alpha_sweep(table: &GroupMeasureTable, grid: &[f64]) -> Result<Vec<AlphaPoint>> {
    validate_alpha_grid(grid)?;
    let (_, values) = defined_rows(table);
    if values.len() < 2 {
        return Err(AuditError::NoScorableGroups {
            defined: values.len(),
        });
    }
    let (min_i, max_i) = extreme_indices(&values).expect("len checked above");
    let (delta_abs, delta_rel) = pair_components(values[min_i], values[max_i]);
    Ok(grid
        .iter()
        .map(|&a| AlphaPoint {
            alpha: a,
            value: a * delta_abs + (1.0 - a) * delta_rel,
        })
        .collect())
}

/// The complete fairness scoring of one measure table, computed on
/// deficiencies clamped to `[epsilon, 1]` so that the log-ratio score
/// stays finite and the curve is consistent with it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FairnessScores {
    /// Log-ratio score, natural log, on clamped deficiencies.
    pub df: f64,
    /// `IF_alpha` per grid point, on clamped deficiencies.
    pub if_curve: Vec<AlphaPoint>,
    /// Best-performing defined group (argmin deficiency).
    pub extreme_min_group: String,
    /// Worst-performing defined group (argmax deficiency).
    pub extreme_max_group: String,
    /// `delta_abs` of the extreme pair.
    pub delta_abs: f64,
    /// `delta_rel` of the extreme pair.
    pub delta_rel: f64,
    /// Clamp used for both scores.
    pub clamp_epsilon: f64,
}

pub(crate) struct ClampedExtremes {
    pub min_m: f64,
    pub max_m: f64,
    pub min_group: String,
    pub max_group: String,
}

fn defined_rows(table: &GroupMeasureTable) -> (Vec<usize>, Vec<f64>) {
    let mut rows = Vec::new();
    let mut values = Vec::new();
    for (i, m) in table.defined() {
        rows.push(i);
        values.push(m);
    }
    (rows, values)
}

pub(crate) fn clamped_extremes(table: &GroupMeasureTable, epsilon: f64) -> Result<ClampedExtremes> {
    if !epsilon.is_finite() || epsilon <= 0.0 || epsilon > 1.0 {
        return Err(AuditError::InvalidConfig(format!(
            "clamp epsilon must be in (0, 1], got {epsilon}"
        )));
    }
    let (rows, values) = defined_rows(table);
    if values.len() < 2 {
        return Err(AuditError::NoScorableGroups {
            defined: values.len(),
        });
    }
    let clamped: Vec<f64> = values.iter().map(|&m| m.max(epsilon)).collect();
    let (min_i, max_i) = extreme_indices(&clamped).expect("len checked above");
    Ok(ClampedExtremes {
        min_m: clamped[min_i],
        max_m: clamped[max_i],
        min_group: table.rows[rows[min_i]].group.clone(),
        max_group: table.rows[rows[max_i]].group.clone(),
    })
}

/// Computes `df`, the `IF_alpha` curve, and the extreme pair for a table.
pub fn fairness_scores(
    table: &GroupMeasureTable,
    grid: &[f64],
    epsilon: f64,
) -> Result<FairnessScores> {
    validate_alpha_grid(grid)?;
    let extremes = clamped_extremes(table, epsilon)?;
    let (delta_abs, delta_rel) = pair_components(extremes.min_m, extremes.max_m);
    let if_curve = grid
        .iter()
        .map(|&a| AlphaPoint {
            alpha: a,
            value: a * delta_abs + (1.0 - a) * delta_rel,
        })
        .collect();
    Ok(FairnessScores {
        df: (extremes.max_m / extremes.min_m).ln(),
        if_curve,
        extreme_min_group: extremes.min_group,
        extreme_max_group: extremes.max_group,
        delta_abs,
        delta_rel,
        clamp_epsilon: epsilon,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{enumerate_groups, SensitiveAxis};
    use crate::measures::{ConfusionCounts, GroupMeasureTable, GroupRow, MeasureConfig, MeasureKind};

    fn alpha(a: f64) -> Alpha {
        Alpha::new(a).unwrap()
    }

    /// Table with the given deficiencies attached to the first groups of
    /// a wide lattice, in lattice order. Counts are synthetic; only the
    /// deficiency column matters to the scorers.
    pub(crate) fn table_from_deficiencies(values: &[f64]) -> GroupMeasureTable {
        let axes = vec![
            SensitiveAxis::new("x", (0..9).map(|i| i.to_string()).collect::<Vec<_>>()).unwrap(),
            SensitiveAxis::new("y", (0..9).map(|i| i.to_string()).collect::<Vec<_>>()).unwrap(),
        ];
        let lattice = enumerate_groups(&axes).unwrap();
        assert!(values.len() <= lattice.len());
        let rows = lattice
            .groups()
            .iter()
            .take(values.len())
            .enumerate()
            .map(|(i, key)| GroupRow {
                group: lattice.format_key(key),
                concrete: key.is_concrete(),
                size: 10,
                positives: 10,
                negatives: 0,
                counts: ConfusionCounts {
                    tpc: 10,
                    fpc: 0,
                    tnc: 0,
                    fnc: 0,
                },
                rate: Some(1.0 - values[i]),
                deficiency: Some(values[i]),
                exclusion: None,
            })
            .collect();
        GroupMeasureTable {
            kind: MeasureKind::TprDeficiency,
            config: MeasureConfig::default(),
            rows,
        }
    }

    #[test]
    fn pair_score_examples() {
        // TPR pair (0.60, 0.80).
        let s = pair_score(0.40, 0.20, alpha(0.5)).unwrap();
        assert!((s.delta_abs - 0.40).abs() < 1e-12);
        assert!((s.delta_rel - 0.50).abs() < 1e-12);
        assert!((s.i_alpha - 0.45).abs() < 1e-12);

        // TPR pair (0.70, 0.94).
        let s = pair_score(0.30, 0.06, alpha(0.5)).unwrap();
        assert!((s.delta_abs - 0.30).abs() < 1e-12);
        assert!((s.delta_rel - 0.80).abs() < 1e-12);
        assert!((s.i_alpha - 0.55).abs() < 1e-12);

        // Equal groups: delta_rel 0, i_alpha = alpha * c.
        for a in [0.0, 0.3, 1.0] {
            let s = pair_score(0.25, 0.25, alpha(a)).unwrap();
            assert_eq!(s.delta_rel, 0.0);
            assert!((s.i_alpha - a * 0.25).abs() < 1e-12);
        }

        // Both perfect: delta_rel defined as 0.
        let s = pair_score(0.0, 0.0, alpha(0.5)).unwrap();
        assert_eq!(s.delta_rel, 0.0);
        assert_eq!(s.i_alpha, 0.0);
    }

    #[test]
    fn pair_score_is_symmetric_and_validates() {
        let a = pair_score(0.1, 0.7, alpha(0.3)).unwrap();
        let b = pair_score(0.7, 0.1, alpha(0.3)).unwrap();
        assert_eq!(a, b);
        assert!(pair_score(1.2, 0.1, alpha(0.5)).is_err());
        assert!(pair_score(0.2, -0.1, alpha(0.5)).is_err());
        assert!(Alpha::new(1.5).is_err());
        assert!(Alpha::new(f64::NAN).is_err());
    }

    #[test]
    fn if_alpha_matches_hand_enumeration() {
        let table = table_from_deficiencies(&[0.2, 0.4, 0.3]);
        // All three pairs at alpha 0.5: (0.2,0.4) -> 0.45, (0.2,0.3) -> ~0.3167,
        // (0.4,0.3) -> 0.325. Max is the extreme pair.
        let (v, (a, b)) = if_alpha(&table, alpha(0.5)).unwrap();
        assert!((v - 0.45).abs() < 1e-12);
        assert_eq!(a, "x=0|y=0");
        assert_eq!(b, "x=0|y=1");
        let (v, _) = if_alpha(&table, alpha(0.0)).unwrap();
        assert!((v - 0.5).abs() < 1e-12);
        let (v, _) = if_alpha(&table, alpha(1.0)).unwrap();
        assert!((v - 0.4).abs() < 1e-12);
    }

    #[test]
    fn if_alpha_requires_two_defined_groups() {
        let table = table_from_deficiencies(&[0.2]);
        assert!(matches!(
            if_alpha(&table, alpha(0.5)),
            Err(AuditError::NoScorableGroups { defined: 1 })
        ));
    }

    #[test]
    fn df_examples() {
        let table = table_from_deficiencies(&[0.2, 0.4]);
        assert!((df_score(&table, 1e-6).unwrap() - 2f64.ln()).abs() < 1e-12);

        let table = table_from_deficiencies(&[0.06, 0.30]);
        assert!((df_score(&table, 1e-6).unwrap() - 5f64.ln()).abs() < 1e-12);

        // Clamping keeps a zero deficiency finite.
        let table = table_from_deficiencies(&[0.0, 0.5]);
        let df = df_score(&table, 1e-6).unwrap();
        assert!((df - (0.5f64 / 1e-6).ln()).abs() < 1e-9);
        assert!((df - 13.122).abs() < 1e-3);
    }

    #[test]
    fn extreme_groups_and_tie_breaking() {
        let table = table_from_deficiencies(&[0.2, 0.4, 0.3]);
        let (min_g, max_g) = extreme_groups(&table).unwrap();
        assert_eq!(min_g, "x=0|y=0");
        assert_eq!(max_g, "x=0|y=1");

        // All equal: both extremes are the lexicographically first group.
        let table = table_from_deficiencies(&[0.3, 0.3, 0.3]);
        let (min_g, max_g) = extreme_groups(&table).unwrap();
        assert_eq!(min_g, "x=0|y=0");
        assert_eq!(max_g, "x=0|y=0");

        // Tie at the max: lexicographically smaller key wins.
        let table = table_from_deficiencies(&[0.1, 0.4, 0.4]);
        let (_, max_g) = extreme_groups(&table).unwrap();
        assert_eq!(max_g, "x=0|y=1");
    }

    #[test]
    fn alpha_sweep_is_affine_between_endpoints() {
        let table = table_from_deficiencies(&[0.2, 0.4]);
        let curve = alpha_sweep(&table, &[0.0, 0.5, 1.0]).unwrap();
        let values: Vec<f64> = curve.iter().map(|p| p.value).collect();
        assert!((values[0] - 0.5).abs() < 1e-12);
        assert!((values[1] - 0.45).abs() < 1e-12);
        assert!((values[2] - 0.4).abs() < 1e-12);

        // Equal deficiencies: the curve is alpha * c.
        let table = table_from_deficiencies(&[0.3, 0.3]);
        let curve = alpha_sweep(&table, &[0.0, 0.25, 1.0]).unwrap();
        for p in curve {
            assert!((p.value - p.alpha * 0.3).abs() < 1e-12);
        }
    }

    #[test]
    fn grid_validation() {
        assert!(validate_alpha_grid(&[]).is_err());
        assert!(validate_alpha_grid(&[0.0, 0.5, 0.5]).is_err());
        assert!(validate_alpha_grid(&[0.5, 0.2]).is_err());
        assert!(validate_alpha_grid(&[0.0, 1.1]).is_err());
        assert!(validate_alpha_grid(&[0.0, 0.5, 1.0]).is_ok());
    }

    #[test]
    fn fairness_scores_assemble_clamped_results() {
        let table = table_from_deficiencies(&[0.1, 0.4, 0.25]);
        let grid = [0.0, 0.5, 1.0];
        let scores = fairness_scores(&table, &grid, 1e-6).unwrap();
        assert!((scores.df - 4f64.ln()).abs() < 1e-12);
        assert_eq!(scores.extreme_min_group, "x=0|y=0");
        assert_eq!(scores.extreme_max_group, "x=0|y=1");
        assert!((scores.delta_abs - 0.4).abs() < 1e-12);
        assert!((scores.delta_rel - 0.75).abs() < 1e-12);
        assert!((scores.if_curve[1].value - (0.5 * 0.4 + 0.5 * 0.75)).abs() < 1e-12);

        // All-zero deficiencies clamp to epsilon: df 0, IF = alpha * eps.
        let table = table_from_deficiencies(&[0.0, 0.0, 0.0]);
        let scores = fairness_scores(&table, &grid, 1e-6).unwrap();
        assert_eq!(scores.df, 0.0);
        for p in &scores.if_curve {
            assert!((p.value - p.alpha * 1e-6).abs() < 1e-18);
        }
    }
}
