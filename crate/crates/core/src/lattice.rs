//! Sensitive axes, group keys, and the enumerated group lattice.
//!
//! A *sensitive axis* is one categorical demographic dimension (e.g.
//! `gender`) with at least two attribute labels. A *group key* selects,
//! for every axis, either one attribute or the `+` wildcard standing for
//! the union over that axis. Keys without wildcards are *concrete* and
//! partition any example set; keys with wildcards are *abstract* and
//! denote the union of the concrete groups they subsume.
//!
//! The lattice enumerates every key in the product of
//! `attributes ∪ {+}` per axis except the all-wildcard key, in a
//! deterministic lexicographic order where `+` sorts after every
//! attribute index.

use crate::error::{AuditError, Result};
use serde::{Deserialize, Serialize};

/// Reserved wildcard label denoting the union over an axis.
pub const WILDCARD: &str = "+";

/// One demographic dimension: a named, ordered set of attribute labels.
///
/// Attribute order is the declaration order and defines the numeric
/// index used in group keys and assignments.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SensitiveAxis {
    pub name: String,
    #[serde(alias = "labels")]
    pub attributes: Vec<String>,
}

impl SensitiveAxis {
    pub fn new<N, I, S>(name: N, attributes: I) -> Result<Self>
    where
        N: Into<String>,
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let axis = Self {
            name: name.into(),
            attributes: attributes.into_iter().map(Into::into).collect(),
        };
        axis.validate()?;
        Ok(axis)
    }

    /// Checks the axis invariants. Deserialized axes must be validated
    /// explicitly, construction through [`SensitiveAxis::new`] already is.
    pub fn validate(&self) -> Result<()> {
        let fail = |reason: &str| {
            Err(AuditError::InvalidAxis {
                axis: self.name.clone(),
                reason: reason.to_string(),
            })
        };
        if self.name.is_empty() {
            return fail("axis name is empty");
        }
        if self.name.contains('=') || self.name.contains('|') {
            return fail("axis name must not contain `=` or `|`");
        }
        if self.attributes.len() < 2 {
            return fail("axis needs at least 2 attribute labels");
        }
        for (i, label) in self.attributes.iter().enumerate() {
            if label.is_empty() {
                return fail("attribute label is empty");
            }
            if label == WILDCARD {
                return fail("`+` is reserved for the wildcard and cannot be declared");
            }
            if label.contains('=') || label.contains('|') {
                return fail("attribute labels must not contain `=` or `|`");
            }
            if self.attributes[..i].contains(label) {
                return fail(&format!("duplicate attribute label `{label}`"));
            }
        }
        Ok(())
    }

    pub fn arity(&self) -> usize {
        self.attributes.len()
    }

    pub fn attribute_index(&self, label: &str) -> Option<usize> {
        self.attributes.iter().position(|a| a == label)
    }
}

/// One position of a group key: a concrete attribute index or the wildcard.
///
/// The derived order puts `Attr(i)` below `Wildcard` for every `i`, which
/// gives the lattice its "wildcard sorts last" lexicographic order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum KeyEntry {
    Attr(usize),
    Wildcard,
}

/// A sensitive group: one [`KeyEntry`] per axis.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupKey {
    entries: Vec<KeyEntry>,
}

impl GroupKey {
    pub fn new(entries: Vec<KeyEntry>) -> Self {
        Self { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[KeyEntry] {
        &self.entries
    }

    pub fn is_concrete(&self) -> bool {
        self.entries.iter().all(|e| matches!(e, KeyEntry::Attr(_)))
    }

    pub fn is_all_wildcard(&self) -> bool {
        self.entries.iter().all(|e| matches!(e, KeyEntry::Wildcard))
    }

    /// True iff every non-wildcard entry equals the assignment entry.
    pub fn matches(&self, assignment: &GroupAssignment) -> Result<bool> {
        if assignment.len() != self.len() {
            return Err(AuditError::LengthMismatch {
                expected: self.len(),
                got: assignment.len(),
            });
        }
        Ok(self
            .entries
            .iter()
            .zip(assignment.values())
            .all(|(entry, &attr)| match entry {
                KeyEntry::Wildcard => true,
                KeyEntry::Attr(i) => *i == attr,
            }))
    }
}

/// A concrete per-example attribute selection, one index per axis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupAssignment {
    values: Vec<usize>,
}

impl GroupAssignment {
    pub fn new(values: Vec<usize>) -> Self {
        Self { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }
}

/// Enumeration ceiling; beyond this the lattice is not materialized.
const MAX_GROUPS: u128 = 1_000_000;

/// The enumerated set of sensitive groups over a fixed list of axes.
///
/// Immutable after construction; group order is deterministic and safe
/// to use as a tie-breaking order downstream.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupLattice {
    axes: Vec<SensitiveAxis>,
    groups: Vec<GroupKey>,
    concrete: Vec<bool>,
}

/// Enumerates all group keys over `axes` except the all-wildcard key,
/// in lexicographic order with the wildcard sorting after every
/// attribute index of its axis.
pub fn enumerate_groups(axes: &[SensitiveAxis]) -> Result<GroupLattice> {
    if axes.is_empty() {
        return Err(AuditError::EmptyAxes);
    }
    let mut total: u128 = 1;
    for axis in axes {
        axis.validate()?;
        total = total.saturating_mul(axis.arity() as u128 + 1);
        if total > MAX_GROUPS {
            return Err(AuditError::InvalidConfig(format!(
                "group lattice exceeds {MAX_GROUPS} groups"
            )));
        }
    }

    let p = axes.len();
    let mut groups = Vec::with_capacity((total - 1) as usize);
    let mut concrete = Vec::with_capacity((total - 1) as usize);
    // Odometer over per-axis option counts; option `arity` is the wildcard.
    let mut counters = vec![0usize; p];
    loop {
        let entries: Vec<KeyEntry> = counters
            .iter()
            .zip(axes)
            .map(|(&c, axis)| {
                if c < axis.arity() {
                    KeyEntry::Attr(c)
                } else {
                    KeyEntry::Wildcard
                }
            })
            .collect();
        let key = GroupKey::new(entries);
        if !key.is_all_wildcard() {
            concrete.push(key.is_concrete());
            groups.push(key);
        }

        // Advance, last axis fastest, so output stays lexicographic.
        let mut axis = p;
        loop {
            if axis == 0 {
                return Ok(GroupLattice {
                    axes: axes.to_vec(),
                    groups,
                    concrete,
                });
            }
            axis -= 1;
            counters[axis] += 1;
            if counters[axis] <= axes[axis].arity() {
                break;
            }
            counters[axis] = 0;
        }
    }
}

impl GroupLattice {
    pub fn axes(&self) -> &[SensitiveAxis] {
        &self.axes
    }

    pub fn num_axes(&self) -> usize {
        self.axes.len()
    }

    pub fn groups(&self) -> &[GroupKey] {
        &self.groups
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn is_concrete(&self, index: usize) -> bool {
        self.concrete[index]
    }

    pub fn concrete_count(&self) -> usize {
        self.concrete.iter().filter(|&&c| c).count()
    }

    /// Indices of the concrete groups, in lattice order.
    pub fn concrete_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.groups.len()).filter(|&i| self.concrete[i])
    }

    /// Position of `key` in the enumeration, if present.
    pub fn position(&self, key: &GroupKey) -> Option<usize> {
        // Groups are sorted by construction.
        self.groups.binary_search(key).ok()
    }

    /// Checks that an assignment has the right arity and in-range indices.
    pub fn validate_assignment(&self, assignment: &GroupAssignment, row: usize) -> Result<()> {
        if assignment.len() != self.num_axes() {
            return Err(AuditError::InvalidAssignment {
                row,
                reason: format!(
                    "expected {} axis values, got {}",
                    self.num_axes(),
                    assignment.len()
                ),
            });
        }
        for (axis, &value) in self.axes.iter().zip(assignment.values()) {
            if value >= axis.arity() {
                return Err(AuditError::InvalidAssignment {
                    row,
                    reason: format!(
                        "attribute index {} out of range for axis `{}` (arity {})",
                        value,
                        axis.name,
                        axis.arity()
                    ),
                });
            }
        }
        Ok(())
    }

    /// Indices of all examples whose assignment matches `key`, in input order.
    pub fn group_members(
        &self,
        assignments: &[GroupAssignment],
        key: &GroupKey,
    ) -> Result<Vec<usize>> {
        let mut members = Vec::new();
        for (i, assignment) in assignments.iter().enumerate() {
            if key.matches(assignment)? {
                members.push(i);
            }
        }
        Ok(members)
    }

    /// Canonical string form, `axis1=label|axis2=+|...`.
    pub fn format_key(&self, key: &GroupKey) -> String {
        key.entries()
            .iter()
            .zip(&self.axes)
            .map(|(entry, axis)| match entry {
                KeyEntry::Wildcard => format!("{}={}", axis.name, WILDCARD),
                KeyEntry::Attr(i) => format!("{}={}", axis.name, axis.attributes[*i]),
            })
            .collect::<Vec<_>>()
            .join("|")
    }

    /// Parses the canonical string form back into a key.
    ///
    /// Rejects wrong arity, unknown or misordered axis names, unknown
    /// attribute labels, and the all-wildcard key.
    pub fn parse_key(&self, input: &str) -> Result<GroupKey> {
        let fail = |reason: String| {
            Err(AuditError::KeyParse {
                input: input.to_string(),
                reason,
            })
        };
        let segments: Vec<&str> = input.split('|').collect();
        if segments.len() != self.num_axes() {
            return fail(format!(
                "expected {} axis segments, got {}",
                self.num_axes(),
                segments.len()
            ));
        }
        let mut entries = Vec::with_capacity(segments.len());
        for (segment, axis) in segments.iter().zip(&self.axes) {
            let Some((name, label)) = segment.split_once('=') else {
                return fail(format!("segment `{segment}` is not of the form axis=label"));
            };
            if name != axis.name {
                return fail(format!(
                    "unknown axis name `{name}` (expected `{}`)",
                    axis.name
                ));
            }
            if label == WILDCARD {
                entries.push(KeyEntry::Wildcard);
            } else if let Some(index) = axis.attribute_index(label) {
                entries.push(KeyEntry::Attr(index));
            } else {
                return fail(format!(
                    "unknown attribute label `{label}` for axis `{name}`"
                ));
            }
        }
        let key = GroupKey::new(entries);
        if key.is_all_wildcard() {
            return fail("the all-wildcard key is not a member of the lattice".to_string());
        }
        Ok(key)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binary_axes(n: usize) -> Vec<SensitiveAxis> {
        (0..n)
            .map(|i| SensitiveAxis::new(format!("axis{i}"), ["0", "1"]).unwrap())
            .collect()
    }

    fn key(entries: &[Option<usize>]) -> GroupKey {
        GroupKey::new(
            entries
                .iter()
                .map(|e| match e {
                    Some(i) => KeyEntry::Attr(*i),
                    None => KeyEntry::Wildcard,
                })
                .collect(),
        )
    }

    #[test]
    fn one_binary_axis_yields_two_concrete_groups() {
        let lattice = enumerate_groups(&binary_axes(1)).unwrap();
        assert_eq!(lattice.len(), 2);
        assert_eq!(lattice.concrete_count(), 2);
        assert_eq!(lattice.groups()[0], key(&[Some(0)]));
        assert_eq!(lattice.groups()[1], key(&[Some(1)]));
    }

    #[test]
    fn two_binary_axes_enumerate_in_wildcard_last_order() {
        let lattice = enumerate_groups(&binary_axes(2)).unwrap();
        let expected = vec![
            key(&[Some(0), Some(0)]),
            key(&[Some(0), Some(1)]),
            key(&[Some(0), None]),
            key(&[Some(1), Some(0)]),
            key(&[Some(1), Some(1)]),
            key(&[Some(1), None]),
            key(&[None, Some(0)]),
            key(&[None, Some(1)]),
        ];
        assert_eq!(lattice.groups(), expected.as_slice());
        assert_eq!(lattice.concrete_count(), 4);
    }

    #[test]
    fn four_binary_axes_count() {
        let lattice = enumerate_groups(&binary_axes(4)).unwrap();
        assert_eq!(lattice.len(), 80);
        assert_eq!(lattice.concrete_count(), 16);
    }

    #[test]
    fn enumeration_is_sorted_and_deterministic() {
        let axes = vec![
            SensitiveAxis::new("gender", ["m", "f"]).unwrap(),
            SensitiveAxis::new("age", ["young", "mid", "old"]).unwrap(),
        ];
        let a = enumerate_groups(&axes).unwrap();
        let b = enumerate_groups(&axes).unwrap();
        assert_eq!(a, b);
        let mut sorted = a.groups().to_vec();
        sorted.sort();
        assert_eq!(sorted.as_slice(), a.groups());
        assert_eq!(a.len(), 3 * 4 - 1);
    }

    #[test]
    fn rejects_empty_axes_and_small_axes() {
        assert!(matches!(enumerate_groups(&[]), Err(AuditError::EmptyAxes)));
        let bad = SensitiveAxis {
            name: "solo".to_string(),
            attributes: vec!["only".to_string()],
        };
        assert!(matches!(
            enumerate_groups(&[bad]),
            Err(AuditError::InvalidAxis { .. })
        ));
    }

    #[test]
    fn axis_validation_rejects_reserved_and_duplicate_labels() {
        assert!(SensitiveAxis::new("a", ["x", "+"]).is_err());
        assert!(SensitiveAxis::new("a", ["x", "x"]).is_err());
        assert!(SensitiveAxis::new("a", ["x", ""]).is_err());
        assert!(SensitiveAxis::new("a", ["x", "y=z"]).is_err());
        assert!(SensitiveAxis::new("", ["x", "y"]).is_err());
    }

    #[test]
    fn matches_handles_wildcards_and_mismatch() {
        let a01 = GroupAssignment::new(vec![0, 1]);
        assert!(key(&[Some(0), Some(1)]).matches(&a01).unwrap());
        assert!(key(&[Some(0), None]).matches(&a01).unwrap());
        assert!(!key(&[Some(1), None]).matches(&a01).unwrap());
        assert!(key(&[Some(0)])
            .matches(&a01)
            .is_err_and(|e| matches!(e, AuditError::LengthMismatch { .. })));
    }

    #[test]
    fn group_members_and_union_identity() {
        let lattice = enumerate_groups(&binary_axes(2)).unwrap();
        let assignments = vec![
            GroupAssignment::new(vec![0, 0]),
            GroupAssignment::new(vec![0, 1]),
            GroupAssignment::new(vec![1, 1]),
        ];
        let members = |k: &GroupKey| lattice.group_members(&assignments, k).unwrap();
        assert_eq!(members(&key(&[Some(0), None])), vec![0, 1]);
        assert_eq!(members(&key(&[None, Some(1)])), vec![1, 2]);
        // Abstract membership equals the union over matching concrete keys.
        assert_eq!(
            members(&key(&[Some(0), None])).len(),
            members(&key(&[Some(0), Some(0)])).len() + members(&key(&[Some(0), Some(1)])).len()
        );
    }

    #[test]
    fn codec_round_trips_and_rejects_bad_input() {
        let axes = vec![
            SensitiveAxis::new("gender", ["0", "1"]).unwrap(),
            SensitiveAxis::new("race", ["0", "1"]).unwrap(),
            SensitiveAxis::new("age", ["0", "1"]).unwrap(),
        ];
        let lattice = enumerate_groups(&axes).unwrap();
        let k = key(&[Some(1), None, Some(0)]);
        let formatted = lattice.format_key(&k);
        assert_eq!(formatted, "gender=1|race=+|age=0");
        assert_eq!(lattice.parse_key(&formatted).unwrap(), k);

        for k in lattice.groups() {
            assert_eq!(&lattice.parse_key(&lattice.format_key(k)).unwrap(), k);
        }

        assert!(lattice.parse_key("gender=2|race=+|age=0").is_err());
        assert!(lattice.parse_key("sex=1|race=+|age=0").is_err());
        assert!(lattice.parse_key("gender=1|race=+").is_err());
        assert!(lattice.parse_key("gender=+|race=+|age=+").is_err());
        assert!(lattice.parse_key("gender1|race=+|age=0").is_err());
    }

    #[test]
    fn position_finds_every_group() {
        let lattice = enumerate_groups(&binary_axes(3)).unwrap();
        for (i, k) in lattice.groups().iter().enumerate() {
            assert_eq!(lattice.position(k), Some(i));
        }
        assert_eq!(lattice.position(&key(&[None, None, None])), None);
    }
}
