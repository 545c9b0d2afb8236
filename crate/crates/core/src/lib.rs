//! Discrimination auditing for binary tabular data and classifier predictions.
//!
//! Rows carry an outcome attribute, one or more protected attributes, and
//! explanatory attributes that define the strata (E-groups) in which
//! outcomes are compared. A group's score is the risk difference
//! `Pr(D=1|P=1) - Pr(D=1|P=0)`; a dataset's score for one protected
//! attribute is the size-weighted average over its E-groups; the global
//! score takes the protected attribute with the largest magnitude.
//!
//! ```
//! use discaudit::{fixtures, scoring};
//!
//! let data = fixtures::example_one();
//! let fair_overall = scoring::dataset_score(&data, "G", &[]).unwrap();
//! let by_sector = scoring::dataset_score(&data, "G", &["S".to_string()]).unwrap();
//! assert_eq!(fair_overall.value, 0.0);
//! assert!((by_sector.value + 0.011160).abs() < 1e-6);
//! ```

pub mod audit;
pub mod classifiers;
pub mod cli;
pub mod data;
pub mod error;
pub mod fixtures;
pub mod ingest;
pub mod report;
pub mod scoring;
pub mod synthesis;

pub use audit::{
    audit_dataset, audit_predictions, sweep_explanatory, AuditConfig, AuditReport, PredictionAudit,
    SweepResult,
};
pub use classifiers::{predict, train_naive_bayes, train_tree, Model, TreeParams};
pub use data::{
    counts, prediction_counts, stratify, Attribute, CountsTable, Dataset, EGroup, OutcomeKind,
    PredictionCountsTable, Role, Schema,
};
pub use error::{Error, Result};
pub use scoring::{
    dataset_score, global_score, group_score, model_group_score, model_quality, odds_ratio,
    ModelQuality, OddsRatio, Score,
};
