//! Intersectional group fairness auditing for binary classifier predictions.
//!
//! The crate builds the lattice of sensitive groups over one or more
//! categorical axes (including abstract `+` wildcard groups), computes
//! per-group confusion rates, and scores a model with two fairness
//! families: the log-ratio differential fairness score and the
//! alpha-weighted intersectional fairness score that mixes absolute and
//! relative group performance. It also compares two scored models,
//! classifying efficiency cases and detecting leveling down.
//!
//! Modules:
//! - [`lattice`]: sensitive axes, group keys, wildcard enumeration.
//! - [`measures`]: confusion counts, rates, and the oriented deficiency
//!   table that fairness scores consume.
//! - [`metrics`]: pairwise and aggregate fairness scores, alpha sweeps.
//! - [`comparison`]: model-vs-model verdicts, leveling-down detection.
//! - [`audit`]: end-to-end audits, bootstrap intervals, axis sweeps.
//! - [`synth`]: synthetic profiles, planted datasets, and brute-force
//!   oracles used for verification.

pub mod audit;
pub mod comparison;
pub mod error;
pub mod lattice;
pub mod measures;
pub mod metrics;
pub mod synth;

pub use error::{AuditError, Result};
