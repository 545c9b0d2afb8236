//! Discrimination scores, odds ratio and model quality.
//!
//! All scores are risk differences `Pr(D=1|P=1) - Pr(D=1|P=0)` computed in
//! `f64` from exact integer counts. A group with no rows on one side of the
//! protected attribute scores 0 by convention and is flagged as such.

use serde::Serialize;

use crate::data::{
    counts_at, explanatory_indices, stratify, CountsTable, Dataset, PredictionCountsTable, Role,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Score {
    pub value: f64,
    /// Set when an empty contrast division forced the value to 0.
    pub defined_by_convention: bool,
}

impl Score {
    pub fn new(value: f64) -> Self {
        Self {
            value,
            defined_by_convention: false,
        }
    }

    pub fn convention_zero() -> Self {
        Self {
            value: 0.0,
            defined_by_convention: true,
        }
    }

    pub fn abs(&self) -> f64 {
        self.value.abs()
    }

    /// `|score| > alpha`.
    pub fn exceeds(&self, alpha: f64) -> bool {
        self.value.abs() > alpha
    }
}

fn risk_difference(pos_protected: u64, n_protected: u64, pos_other: u64, n_other: u64) -> Score {
    if n_protected == 0 || n_other == 0 {
        return Score::convention_zero();
    }
    Score::new(pos_protected as f64 / n_protected as f64 - pos_other as f64 / n_other as f64)
}

/// Risk difference of one group: `f11/(f11+f01) - f10/(f10+f00)`.
pub fn group_score(c: &CountsTable) -> Score {
    risk_difference(c.f11, c.protected_total(), c.f10, c.unprotected_total())
}

/// Risk difference of the predicted outcomes of one group:
/// `(fr11+fw01)/(f11+f01) - (fr10+fw00)/(f10+f00)`.
pub fn model_group_score(pc: &PredictionCountsTable) -> Score {
    let f = pc.observed();
    risk_difference(
        pc.fr11 + pc.fw01,
        f.protected_total(),
        pc.fr10 + pc.fw00,
        f.unprotected_total(),
    )
}

/// Group-size weighted average of per-group scores over `groups`.
///
/// Convention-zero groups keep their weight. The result carries the
/// convention flag only when every group was convention-zero.
pub(crate) fn weighted_score<I>(groups: I, total_rows: usize) -> Score
where
    I: IntoIterator<Item = (Score, usize)>,
{
    let mut sum = 0.0;
    let mut all_convention = true;
    for (s, size) in groups {
        sum += s.value * size as f64 / total_rows as f64;
        all_convention &= s.defined_by_convention;
    }
    Score {
        value: sum,
        defined_by_convention: all_convention,
    }
}

/// Score of `protected` in `data`: the size-weighted average of its E-group
/// scores over `explanatory`.
pub fn dataset_score(data: &Dataset, protected: &str, explanatory: &[String]) -> Result<Score> {
    if data.is_empty() {
        return Err(Error::EmptyInput("cannot score an empty dataset".into()));
    }
    let p = data.schema().require_role(protected, Role::Protected)?;
    let groups = stratify(data, explanatory)?;
    Ok(weighted_score(
        groups
            .iter()
            .map(|g| (group_score(&counts_at(g, data, p)), g.size())),
        data.len(),
    ))
}

/// Rank `(name, score)` pairs by descending `|score|`, names ascending on ties.
pub(crate) fn rank_by_magnitude(scores: &mut [(String, Score)]) {
    scores.sort_by(|a, b| b.1.abs().total_cmp(&a.1.abs()).then_with(|| a.0.cmp(&b.0)));
}

/// Global score: the protected attribute whose dataset score has the largest
/// magnitude, with its signed score.
///
/// Ties go to the lexicographically smallest name. If every attribute scores
/// 0 by convention, the returned score carries the flag.
pub fn global_score(
    data: &Dataset,
    protected_set: &[String],
    explanatory: &[String],
) -> Result<(String, Score)> {
    if protected_set.is_empty() {
        return Err(Error::Config("protected attribute set is empty".into()));
    }
    explanatory_indices(data.schema(), explanatory)?;
    let mut scores = protected_set
        .iter()
        .map(|p| Ok((p.clone(), dataset_score(data, p, explanatory)?)))
        .collect::<Result<Vec<_>>>()?;
    rank_by_magnitude(&mut scores);
    let all_convention = scores.iter().all(|(_, s)| s.defined_by_convention);
    let (name, mut score) = scores.swap_remove(0);
    score.defined_by_convention = all_convention;
    Ok((name, score))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OddsRatio {
    /// Nonnegative; `f64::INFINITY` when only the denominator vanishes.
    pub value: f64,
    /// Set when the value 1 was assigned because the ratio is 0/0 or one of
    /// the margins is empty.
    pub convention_case: bool,
}

/// Odds ratio `f11*f00 / (f10*f01)`.
///
/// Tables with an empty protected or unprotected group, or with no
/// favourable or no unfavourable outcomes, have no meaningful correlation
/// and are assigned 1 with `convention_case` set.
pub fn odds_ratio(c: &CountsTable) -> OddsRatio {
    let degenerate = c.protected_total() == 0
        || c.unprotected_total() == 0
        || c.f11 + c.f10 == 0
        || c.f01 + c.f00 == 0;
    let num = c.f11 as f64 * c.f00 as f64;
    let den = c.f10 as f64 * c.f01 as f64;
    if degenerate || (num == 0.0 && den == 0.0) {
        return OddsRatio {
            value: 1.0,
            convention_case: true,
        };
    }
    let value = if den == 0.0 { f64::INFINITY } else { num / den };
    OddsRatio {
        value,
        convention_case: false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelQuality {
    /// Mean of true positive rate and true negative rate.
    pub bcr: f64,
    /// Fraction of wrong predictions.
    pub err: f64,
}

/// BCR and error rate from right/wrong counts aggregated over all rows.
pub fn model_quality(pc: &PredictionCountsTable) -> Result<ModelQuality> {
    let tp = pc.fr11 + pc.fr10;
    let fneg = pc.fw11 + pc.fw10;
    let tn = pc.fr01 + pc.fr00;
    let fpos = pc.fw01 + pc.fw00;
    let positives = tp + fneg;
    let negatives = tn + fpos;
    if positives == 0 || negatives == 0 {
        return Err(Error::UndefinedBcr(format!(
            "observed outcomes hold a single class ({positives} positive, {negatives} negative)"
        )));
    }
    let tpr = tp as f64 / positives as f64;
    let tnr = tn as f64 / negatives as f64;
    Ok(ModelQuality {
        bcr: (tpr + tnr) / 2.0,
        err: pc.wrong() as f64 / pc.total() as f64,
    })
}
