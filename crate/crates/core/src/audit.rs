//! Dataset and prediction audits, and the explanatory-attribute sweep.
//!
//! An audit stratifies the data once, scores every (E-group, protected
//! attribute) pair, and summarizes:
//!
//! * `glbds`: the global score and the protected attribute attaining it;
//! * `wgds` / `wg_pct`: the largest per-group magnitude and that group's
//!   share of rows;
//! * `ogds` / `og_pct`: the size-weighted mean score and row share of the
//!   over-limit groups (`|score| > alpha`) of the `glbds` attribute;
//! * the top protected attributes ranked by magnitude.

use itertools::Itertools;
use serde::Serialize;

use crate::data::{
    check_aligned, counts_at, explanatory_indices, prediction_counts_at, stratify, CountsTable,
    Dataset, EGroup, PredictionCountsTable, Role, Schema,
};
use crate::error::{Error, Result};
use crate::scoring::{
    group_score, model_group_score, model_quality, rank_by_magnitude, weighted_score, ModelQuality,
    Score,
};

#[derive(Debug, Clone, PartialEq)]
pub struct AuditConfig {
    pub alpha: f64,
    pub explanatory: Vec<String>,
    pub protected: Vec<String>,
    pub top_k: usize,
    /// Groups smaller than this are flagged in the detail table.
    pub min_group_size: usize,
}

impl Default for AuditConfig {
    fn default() -> Self {
        Self {
            alpha: 0.05,
            explanatory: Vec::new(),
            protected: Vec::new(),
            top_k: 3,
            min_group_size: 1,
        }
    }
}

impl AuditConfig {
    /// Protected and explanatory sets taken from the schema roles.
    pub fn from_schema(schema: &Schema) -> Self {
        Self {
            explanatory: schema.names_with_role(Role::Explanatory),
            protected: schema.names_with_role(Role::Protected),
            ..Self::default()
        }
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_explanatory(mut self, names: Vec<String>) -> Self {
        self.explanatory = names;
        self
    }

    fn validate(&self, schema: &Schema) -> Result<Vec<usize>> {
        if self.alpha.is_nan() || self.alpha <= 0.0 {
            return Err(Error::Config(format!(
                "alpha must be positive, got {}",
                self.alpha
            )));
        }
        if self.protected.is_empty() {
            return Err(Error::Config("no protected attributes to audit".into()));
        }
        explanatory_indices(schema, &self.explanatory)?;
        self.protected
            .iter()
            .map(|p| schema.require_role(p, Role::Protected))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttributeScore {
    pub attribute: String,
    pub score: f64,
    pub defined_by_convention: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupDetail {
    pub signature: String,
    pub size: usize,
    pub attribute: String,
    pub counts: CountsTable,
    pub score: f64,
    pub defined_by_convention: bool,
    pub over_limit: bool,
    /// Below the configured minimum group size.
    pub small: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub alpha: f64,
    pub rows: usize,
    pub explanatory: Vec<String>,
    pub glbds: f64,
    pub glbds_attribute: String,
    pub glbds_by_convention: bool,
    /// Largest `|score|` over all groups and protected attributes.
    pub wgds: f64,
    /// The group attaining `wgds`, with its signed score.
    pub worst_group: GroupDetail,
    pub wg_pct: f64,
    /// Absent when no group of the `glbds` attribute is over the limit.
    pub ogds: Option<f64>,
    pub og_pct: f64,
    pub over_limit_groups: usize,
    pub attribute_scores: Vec<AttributeScore>,
    pub top_attributes: Vec<AttributeScore>,
    pub groups: Vec<GroupDetail>,
}

impl AuditReport {
    pub fn group_count(&self) -> usize {
        let attrs = self.attribute_scores.len().max(1);
        self.groups.len() / attrs
    }
}

/// Audit with a caller-supplied per-group scorer returning the counts to
/// report and the score.
fn audit_with<F>(data: &Dataset, cfg: &AuditConfig, mut score_group: F) -> Result<AuditReport>
where
    F: FnMut(&EGroup, usize) -> (CountsTable, Score),
{
    let protected_idx = cfg.validate(data.schema())?;
    if data.is_empty() {
        return Err(Error::EmptyInput("cannot audit an empty dataset".into()));
    }
    let groups = stratify(data, &cfg.explanatory)?;
    let n = data.len();

    let mut details = Vec::with_capacity(groups.len() * protected_idx.len());
    let mut attribute_scores = Vec::with_capacity(protected_idx.len());
    for (name, &p) in cfg.protected.iter().zip(&protected_idx) {
        let start = details.len();
        for g in &groups {
            let (counts, s) = score_group(g, p);
            details.push(GroupDetail {
                signature: g.signature_label(),
                size: g.size(),
                attribute: name.clone(),
                counts,
                score: s.value,
                defined_by_convention: s.defined_by_convention,
                over_limit: s.exceeds(cfg.alpha),
                small: g.size() < cfg.min_group_size,
            });
        }
        let s = weighted_score(
            details[start..].iter().map(|d| {
                (
                    Score {
                        value: d.score,
                        defined_by_convention: d.defined_by_convention,
                    },
                    d.size,
                )
            }),
            n,
        );
        attribute_scores.push((name.clone(), s));
    }

    let mut ranked = attribute_scores.clone();
    rank_by_magnitude(&mut ranked);
    let (glbds_attribute, glbds) = ranked[0].clone();
    let glbds_by_convention = ranked.iter().all(|(_, s)| s.defined_by_convention);

    // worst group: largest |score|, then larger size, then signature order
    // (details are already in signature order per attribute)
    let worst = details
        .iter()
        .enumerate()
        .max_by(|(ia, a), (ib, b)| {
            a.score
                .abs()
                .total_cmp(&b.score.abs())
                .then(a.size.cmp(&b.size))
                .then(ib.cmp(ia))
        })
        .map(|(_, d)| d.clone())
        .expect("nonempty dataset has at least one group");

    let over: Vec<&GroupDetail> = details
        .iter()
        .filter(|d| d.attribute == glbds_attribute && d.over_limit)
        .collect();
    let over_rows: usize = over.iter().map(|d| d.size).sum();
    let ogds = (over_rows > 0)
        .then(|| over.iter().map(|d| d.score * d.size as f64).sum::<f64>() / over_rows as f64);

    let to_attr = |(attribute, s): &(String, Score)| AttributeScore {
        attribute: attribute.clone(),
        score: s.value,
        defined_by_convention: s.defined_by_convention,
    };
    Ok(AuditReport {
        alpha: cfg.alpha,
        rows: n,
        explanatory: {
            let mut e = cfg.explanatory.clone();
            let schema = data.schema();
            e.sort_by_key(|name| schema.index_of(name).unwrap_or(usize::MAX));
            e.dedup();
            e
        },
        glbds: glbds.value,
        glbds_attribute,
        glbds_by_convention,
        wgds: worst.score.abs(),
        wg_pct: worst.size as f64 / n as f64,
        worst_group: worst,
        ogds,
        og_pct: over_rows as f64 / n as f64,
        over_limit_groups: over.len(),
        attribute_scores: attribute_scores.iter().map(to_attr).collect(),
        top_attributes: ranked.iter().take(cfg.top_k).map(to_attr).collect(),
        groups: details,
    })
}

/// Audit the observed outcomes of `data`.
pub fn audit_dataset(data: &Dataset, cfg: &AuditConfig) -> Result<AuditReport> {
    audit_with(data, cfg, |g, p| {
        let c = counts_at(g, data, p);
        (c, group_score(&c))
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PredictionAudit {
    #[serde(flatten)]
    pub report: AuditReport,
    /// `None` when the observed outcome has a single class, which leaves
    /// the balanced classification rate undefined.
    pub quality: Option<ModelQuality>,
}

/// Audit the predicted outcomes in `predicted` against the observed rows.
///
/// Group scores use the right/wrong split of the observed divisions; the
/// reported counts are those of the predicted outcomes.
pub fn audit_predictions(
    observed: &Dataset,
    predicted: &Dataset,
    cfg: &AuditConfig,
) -> Result<PredictionAudit> {
    check_aligned(observed, predicted)?;
    let report = audit_with(observed, cfg, |g, p| {
        let pc = prediction_counts_at(g, observed, predicted, p);
        (pc.predicted(), model_group_score(&pc))
    })?;
    let all = EGroup {
        signature: Vec::new(),
        row_indices: (0..observed.len()).collect(),
    };
    // the protected column is irrelevant to the totals; any index works
    let totals: PredictionCountsTable = prediction_counts_at(&all, observed, predicted, 0);
    let quality = match model_quality(&totals) {
        Ok(q) => Some(q),
        Err(Error::UndefinedBcr(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(PredictionAudit { report, quality })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepEntry {
    pub k: usize,
    /// Mean of `|glbds|` over all size-`k` subsets.
    pub avg_abs_score: f64,
    pub n_subsets: usize,
    pub mean_group_count: f64,
    pub min_group_size: usize,
    pub median_group_size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub explanatory: Vec<String>,
    pub entries: Vec<SweepEntry>,
}

/// For each `k` in `0..=|E|`, average `|glbds|` over every size-`k` subset
/// of the configured explanatory attributes.
pub fn sweep_explanatory(data: &Dataset, cfg: &AuditConfig) -> Result<SweepResult> {
    sweep_explanatory_up_to(data, cfg, cfg.explanatory.len())
}

/// Like [`sweep_explanatory`], stopping at subsets of size `max_k`.
pub fn sweep_explanatory_up_to(
    data: &Dataset,
    cfg: &AuditConfig,
    max_k: usize,
) -> Result<SweepResult> {
    if cfg.explanatory.is_empty() {
        return Err(Error::Config(
            "sweep needs at least one explanatory attribute".into(),
        ));
    }
    let mut entries = Vec::new();
    for k in 0..=max_k.min(cfg.explanatory.len()) {
        let mut total = 0.0;
        let mut runs = 0usize;
        let mut group_counts = 0usize;
        let mut sizes = Vec::new();
        for subset in cfg.explanatory.iter().cloned().combinations(k) {
            let sub_cfg = AuditConfig {
                explanatory: subset,
                ..cfg.clone()
            };
            let report = audit_dataset(data, &sub_cfg)?;
            total += report.glbds.abs();
            runs += 1;
            let attr = &report.glbds_attribute;
            let these: Vec<usize> = report
                .groups
                .iter()
                .filter(|g| &g.attribute == attr)
                .map(|g| g.size)
                .collect();
            group_counts += these.len();
            sizes.extend(these);
        }
        sizes.sort_unstable();
        entries.push(SweepEntry {
            k,
            avg_abs_score: total / runs as f64,
            n_subsets: runs,
            mean_group_count: group_counts as f64 / runs as f64,
            min_group_size: sizes.first().copied().unwrap_or(0),
            median_group_size: sizes
                .get(sizes.len().saturating_sub(1) / 2)
                .copied()
                .unwrap_or(0),
        });
    }
    Ok(SweepResult {
        explanatory: cfg.explanatory.clone(),
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{Attribute, OutcomeKind};
    use crate::fixtures;
    use crate::synthesis::{gen_simpson_split, materialize_groups};

    fn cfg_for(data: &Dataset) -> AuditConfig {
        AuditConfig::from_schema(data.schema())
    }

    #[test]
    fn single_fair_group() {
        let data = materialize_groups(("D", "P", "E"), &[(0, CountsTable::new(10, 15, 40, 60))]);
        let r = audit_dataset(&data, &cfg_for(&data)).unwrap();
        assert_eq!(r.glbds, 0.0);
        assert_eq!(r.wgds, 0.0);
        assert_eq!(r.og_pct, 0.0);
        assert_eq!(r.ogds, None);
        assert_eq!(r.over_limit_groups, 0);
    }

    #[test]
    fn opposite_extreme_groups() {
        let data = gen_simpson_split(10).unwrap().materialize();
        let r = audit_dataset(&data, &cfg_for(&data)).unwrap();
        assert_eq!(r.glbds, 0.0);
        assert_eq!(r.wgds, 1.0);
        // hand oracle: (1*20 + -1*20) / 40
        assert_eq!(r.ogds, Some(0.0));
        assert_eq!(r.og_pct, 1.0);
        assert_eq!(r.over_limit_groups, 2);
        // equal sizes: signature order breaks the tie, E=0 sorts first
        assert_eq!(r.worst_group.signature, "E=0");
        assert_eq!(r.worst_group.score, -1.0);
    }

    #[test]
    fn small_extreme_group_is_the_worst() {
        // balanced groups plus one 5-row group with counts (3,0,0,2)
        let data = materialize_groups(
            ("D", "P", "E"),
            &[
                (0, CountsTable::new(100, 100, 150, 150)),
                (1, CountsTable::new(3, 0, 0, 2)),
            ],
        );
        let r = audit_dataset(&data, &cfg_for(&data)).unwrap();
        assert_eq!(r.wgds, 1.0);
        assert_eq!(r.wg_pct, 5.0 / 505.0);
        assert_eq!(r.worst_group.counts, CountsTable::new(3, 0, 0, 2));
        assert!((r.glbds - 5.0 / 505.0).abs() < 1e-15);
    }

    #[test]
    fn worst_group_tie_prefers_larger_group() {
        let data = materialize_groups(
            ("D", "P", "E"),
            &[
                (0, CountsTable::new(1, 0, 0, 1)),
                (1, CountsTable::new(4, 0, 0, 4)),
            ],
        );
        let r = audit_dataset(&data, &cfg_for(&data)).unwrap();
        assert_eq!(r.worst_group.signature, "E=1");
    }

    #[test]
    fn high_alpha_empties_over_limit_set() {
        let data = fixtures::example_one();
        let r = audit_dataset(&data, &cfg_for(&data).with_alpha(0.5)).unwrap();
        assert_eq!(r.ogds, None);
        assert_eq!(r.og_pct, 0.0);
        assert!(r.groups.iter().all(|g| !g.over_limit));
        assert!((r.glbds + 0.011160).abs() < 1e-6);
        assert!(r.wgds >= r.glbds.abs());
    }

    #[test]
    fn config_errors() {
        let data = fixtures::example_one();
        let mut cfg = cfg_for(&data);
        cfg.alpha = 0.0;
        assert!(matches!(audit_dataset(&data, &cfg), Err(Error::Config(_))));
        let cfg = AuditConfig {
            protected: vec!["S".into()],
            ..cfg_for(&data)
        };
        assert!(matches!(audit_dataset(&data, &cfg), Err(Error::Role(_))));
        let cfg = AuditConfig {
            protected: vec![],
            ..cfg_for(&data)
        };
        assert!(matches!(audit_dataset(&data, &cfg), Err(Error::Config(_))));
        let empty = Dataset::new(data.schema().clone(), vec![], OutcomeKind::Observed).unwrap();
        assert!(matches!(
            audit_dataset(&empty, &cfg_for(&data)),
            Err(Error::EmptyInput(_))
        ));
    }

    #[test]
    fn table_two_prediction_audit() {
        let (obs, pred) = fixtures::table_two();
        let cfg = AuditConfig {
            protected: vec!["G".into()],
            ..AuditConfig::default()
        };
        let a = audit_predictions(&obs, &pred, &cfg).unwrap();
        assert_eq!(a.report.glbds, 0.5);
        assert_eq!(a.quality.unwrap().err, 0.25);
        assert_eq!(audit_dataset(&obs, &cfg).unwrap().glbds, 0.0);
    }

    #[test]
    fn perfect_predictions_reproduce_data_audit() {
        let data = fixtures::example_one();
        let pred = data.with_predictions(&data.outcomes()).unwrap();
        let cfg = cfg_for(&data);
        let a = audit_predictions(&data, &pred, &cfg).unwrap();
        assert_eq!(a.report, audit_dataset(&data, &cfg).unwrap());
        assert_eq!(a.quality, Some(ModelQuality { bcr: 1.0, err: 0.0 }));
    }

    #[test]
    fn majority_predictor_has_zero_score() {
        // 70% approved; everything predicted approved
        let data = materialize_groups(
            ("D", "P", "E"),
            &[
                (0, CountsTable::new(30, 40, 20, 10)),
                (1, CountsTable::new(0, 0, 0, 0)),
            ],
        );
        let pred = data.with_predictions(&vec![1; data.len()]).unwrap();
        let a = audit_predictions(&data, &pred, &cfg_for(&data)).unwrap();
        assert_eq!(a.report.glbds, 0.0);
        assert!((a.quality.unwrap().err - 0.30).abs() < 1e-15);
        assert_eq!(a.quality.unwrap().bcr, 0.5);
    }

    #[test]
    fn single_class_observed_leaves_quality_undefined() {
        let data = materialize_groups(("D", "P", "E"), &[(0, CountsTable::new(4, 3, 0, 0))]);
        let pred = data.with_predictions(&[1, 0, 1, 1, 0, 1, 1]).unwrap();
        let a = audit_predictions(&data, &pred, &cfg_for(&data)).unwrap();
        assert_eq!(a.quality, None);
        let perfect = data.with_predictions(&data.outcomes()).unwrap();
        let b = audit_predictions(&data, &perfect, &cfg_for(&data)).unwrap();
        assert_eq!(b.report, audit_dataset(&data, &cfg_for(&data)).unwrap());
    }

    #[test]
    fn top_attributes_sorted_with_name_tiebreak() {
        let schema = Schema::new(vec![
            Attribute::new("D", Role::Outcome),
            Attribute::new("B", Role::Protected),
            Attribute::new("A", Role::Protected),
            Attribute::new("C", Role::Protected),
        ])
        .unwrap();
        // B and A identical columns, C constant (convention zero)
        let rows = vec![
            vec![1, 1, 1, 0],
            vec![0, 0, 0, 0],
            vec![1, 0, 0, 0],
            vec![0, 0, 0, 0],
        ];
        let data = Dataset::new(schema, rows, OutcomeKind::Observed).unwrap();
        let mut cfg = cfg_for(&data);
        cfg.top_k = 2;
        let r = audit_dataset(&data, &cfg).unwrap();
        let names: Vec<&str> = r
            .top_attributes
            .iter()
            .map(|a| a.attribute.as_str())
            .collect();
        assert_eq!(names, ["A", "B"]);
        assert_eq!(r.glbds_attribute, "A");
    }

    #[test]
    fn sweep_counts_subsets() {
        let schema = Schema::new(vec![
            Attribute::new("D", Role::Outcome),
            Attribute::new("P", Role::Protected),
            Attribute::new("E1", Role::Explanatory),
            Attribute::new("E2", Role::Explanatory),
            Attribute::new("E3", Role::Explanatory),
            Attribute::new("E4", Role::Explanatory),
        ])
        .unwrap();
        let rows: Vec<Vec<u8>> = (0..64u32)
            .map(|i| (0..6).map(|b| ((i * 37 + 11) >> b) as u8 & 1).collect())
            .collect();
        let data = Dataset::new(schema, rows, OutcomeKind::Observed).unwrap();
        let cfg = cfg_for(&data);
        let s = sweep_explanatory(&data, &cfg).unwrap();
        let n: Vec<usize> = s.entries.iter().map(|e| e.n_subsets).collect();
        assert_eq!(n, [1, 4, 6, 4, 1]);
        let base = audit_dataset(&data, &cfg.clone().with_explanatory(vec![])).unwrap();
        assert_eq!(s.entries[0].avg_abs_score, base.glbds.abs());
        assert_eq!(s.entries[0].median_group_size, 64);
    }

    #[test]
    fn sweep_drops_when_attribute_explains_disparity() {
        // E1 fully explains the outcome gap; E2 is noise
        let data = {
            let schema = Schema::new(vec![
                Attribute::new("D", Role::Outcome),
                Attribute::new("P", Role::Protected),
                Attribute::new("E1", Role::Explanatory),
                Attribute::new("E2", Role::Explanatory),
            ])
            .unwrap();
            let mut rows = Vec::new();
            // E1=1: mostly P=0, positive rate 0.8 for both P values
            // E1=0: mostly P=1, positive rate 0.2 for both P values
            for (e1, n_p1, n_p0, rate10) in [(1u8, 10, 40, 8), (0, 40, 10, 2)] {
                for (p, n) in [(1u8, n_p1), (0, n_p0)] {
                    for i in 0..n {
                        let d = ((i % 10) < rate10) as u8;
                        rows.push(vec![d, p, e1, (i % 2) as u8]);
                    }
                }
            }
            Dataset::new(schema, rows, OutcomeKind::Observed).unwrap()
        };
        let cfg = cfg_for(&data);
        let s = sweep_explanatory_up_to(&data, &cfg, 1).unwrap();
        // k=0 oracle: P=1 rate (8*1+2*4)/50 = 0.32, P=0 rate (8*4+2)/50 = 0.68
        assert!((s.entries[0].avg_abs_score - 0.36).abs() < 1e-12);
        assert!(s.entries[1].avg_abs_score < s.entries[0].avg_abs_score);
        assert_eq!(s.entries.len(), 2);
    }
}
