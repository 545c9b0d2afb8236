//! Constructive count tables for Simpson-paradox splits and merges, the
//! correlation-versus-discrimination counterexample, and the small
//! two-dimensional figure fixtures.
//!
//! Every generator produces exact integer counts and closed-form expected
//! scores. [`ParadoxInstance::materialize`] and
//! [`CorrelationInstance::materialize`] turn them into datasets with
//! attributes `D` (outcome), `P` (protected) and `E` (explanatory), where
//! `E=1` marks the first subset.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::data::{Attribute, CountsTable, Dataset, OutcomeKind, Role, Schema};
use crate::error::{Error, Result};

/// A nonnegative rational `num/den`, parsed from `"1/50"` or `"0.02"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fraction {
    num: u64,
    den: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Fraction {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Parameter("fraction with zero denominator".into()));
        }
        let g = gcd(num, den).max(1);
        Ok(Self {
            num: num / g,
            den: den / g,
        })
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `self * n` when it is an integer.
    pub fn times(&self, n: u64) -> Option<u64> {
        let p = self.num.checked_mul(n)?;
        (p % self.den == 0).then_some(p / self.den)
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Fraction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parameter(format!("`{s}` is not a nonnegative fraction"));
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n = n.trim().parse().map_err(|_| bad())?;
            let d = d.trim().parse().map_err(|_| bad())?;
            return Fraction::new(n, d);
        }
        // exact decimal: "0.02" -> 2/100
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if int.is_empty() && frac.is_empty() {
            return Err(bad());
        }
        if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) || frac.len() > 18 {
            return Err(bad());
        }
        let den = 10u64.pow(frac.len() as u32);
        let int: u64 = if int.is_empty() {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        let frac: u64 = if frac.is_empty() {
            0
        } else {
            frac.parse().map_err(|_| bad())?
        };
        let num = int
            .checked_mul(den)
            .and_then(|v| v.checked_add(frac))
            .ok_or_else(bad)?;
        Fraction::new(num, den)
    }
}

impl Serialize for Fraction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpectedScores {
    pub e: f64,
    pub e_prime: f64,
    pub e_double_prime: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParadoxParams {
    pub k: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_prime: Option<Fraction>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
}

/// A group `e` and two subsets with `e = e' + e''` fieldwise.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParadoxInstance {
    pub e_counts: CountsTable,
    pub e1_counts: CountsTable,
    pub e2_counts: CountsTable,
    pub params: ParadoxParams,
    pub expected: ExpectedScores,
    /// For merge instances: whether the merged score exceeds `alpha`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub merged_over_limit: Option<bool>,
}

impl ParadoxInstance {
    /// Rows of `e'` (with `E=1`) followed by rows of `e''` (with `E=0`).
    pub fn materialize(&self) -> Dataset {
        materialize_groups(("D", "P", "E"), &[(1, self.e1_counts), (0, self.e2_counts)])
    }
}

fn require_positive(name: &str, v: u64) -> Result<()> {
    if v == 0 {
        return Err(Error::Parameter(format!(
            "{name} must be a positive integer"
        )));
    }
    Ok(())
}

/// A fair group that splits into two maximally discriminatory halves:
/// `e=(K,K,K,K)`, `e'=(K,0,0,K)`, `e''=(0,K,K,0)`.
pub fn gen_simpson_split(k: u64) -> Result<ParadoxInstance> {
    require_positive("K", k)?;
    let e1 = CountsTable::new(k, 0, 0, k);
    let e2 = CountsTable::new(0, k, k, 0);
    Ok(ParadoxInstance {
        e_counts: e1 + e2,
        e1_counts: e1,
        e2_counts: e2,
        params: ParadoxParams {
            k,
            m: None,
            alpha_prime: None,
            alpha: None,
        },
        expected: ExpectedScores {
            e: 0.0,
            e_prime: 1.0,
            e_double_prime: -1.0,
        },
        merged_over_limit: None,
    })
}

/// Two subsets scoring 0 and `alpha_prime` whose union scores
/// `m * alpha_prime / 3`.
///
/// ```text
/// e'  = (2a'mK, a'mK,  2K - 2a'mK, K - a'mK)
/// e'' = (2a'K,  2a'K,  K - 2a'K,   2K - 2a'K)
/// ```
///
/// Both subsets hold `2K`+`K` and `K`+`2K` rows on the protected and
/// unprotected side, so the union has `3K` on each. `e''` scores
/// `2a' - a' = a'`. The products `a'mK` and `2a'K` must be integers and
/// every count nonnegative, which needs `a'm <= 1` and `a' <= 1/2`.
pub fn gen_simpson_merge(
    k: u64,
    m: u64,
    alpha_prime: Fraction,
    alpha: f64,
) -> Result<ParadoxInstance> {
    require_positive("K", k)?;
    require_positive("m", m)?;
    if alpha.is_nan() || alpha <= 0.0 {
        return Err(Error::Parameter(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    if alpha_prime.to_f64() >= alpha {
        return Err(Error::Parameter(format!(
            "alpha' = {alpha_prime} must be below alpha = {alpha}"
        )));
    }
    let mk = m
        .checked_mul(k)
        .ok_or_else(|| Error::Parameter("m*K overflows".into()))?;
    let amk = alpha_prime.times(mk).ok_or_else(|| {
        Error::Integrality(format!(
            "alpha'*m*K = {alpha_prime}*{m}*{k} is not an integer"
        ))
    })?;
    let ak2 = alpha_prime.times(2 * k).ok_or_else(|| {
        Error::Integrality(format!(
            "2*alpha'*K = 2*{alpha_prime}*{k} is not an integer"
        ))
    })?;

    let sub = |a: u64, b: u64, what: &str| {
        a.checked_sub(b)
            .ok_or_else(|| Error::Parameter(format!("count {what} would be negative")))
    };
    let e1 = CountsTable::new(
        2 * amk,
        amk,
        sub(2 * k, 2 * amk, "f'01 = 2K - 2a'mK")?,
        sub(k, amk, "f'00 = K - a'mK")?,
    );
    let e2 = CountsTable::new(
        ak2,
        ak2,
        sub(k, ak2, "f''01 = K - 2a'K")?,
        sub(2 * k, ak2, "f''00 = 2K - 2a'K")?,
    );
    let merged = (m * alpha_prime.num()) as f64 / (3 * alpha_prime.den()) as f64;
    Ok(ParadoxInstance {
        e_counts: e1 + e2,
        e1_counts: e1,
        e2_counts: e2,
        params: ParadoxParams {
            k,
            m: Some(m),
            alpha_prime: Some(alpha_prime),
            alpha: Some(alpha),
        },
        expected: ExpectedScores {
            e: merged,
            e_prime: 0.0,
            e_double_prime: alpha_prime.to_f64(),
        },
        merged_over_limit: Some(merged > alpha),
    })
}

/// Two groups where the less correlated one is the more discriminatory:
/// `e1 = (mK, K, K, K)` and `e2 = (K, wK, K, K)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationInstance {
    pub e1_counts: CountsTable,
    pub e2_counts: CountsTable,
    pub m: u64,
    pub w: Fraction,
    pub k: u64,
    /// `oz1 - oz2 = m - 1/w`.
    pub dz: f64,
    /// `|delta1| - |delta2|` with `delta1 = m/(m+1) - 1/2` and
    /// `delta2 = 1/2 - w/(w+1)`.
    pub ddelta: f64,
    /// The parameter condition `1/w > m > max(w, 1)`.
    pub counterexample_regime: bool,
    /// Whether the two tables actually show lower correlation together
    /// with higher discrimination: `|oz1-1| < |oz2-1|` and `|d1| > |d2|`.
    ///
    /// Within this family both comparisons reduce to the sign of `m*w - 1`,
    /// so this is never true.
    pub less_correlated_more_discriminatory: bool,
}

impl CorrelationInstance {
    /// Rows of `e1` (with `E=1`) followed by rows of `e2` (with `E=0`).
    pub fn materialize(&self) -> Dataset {
        materialize_groups(("D", "P", "E"), &[(1, self.e1_counts), (0, self.e2_counts)])
    }
}

pub fn gen_corr_counterexample(m: u64, w: Fraction, k: u64) -> Result<CorrelationInstance> {
    require_positive("m", m)?;
    require_positive("K", k)?;
    if w.num() == 0 {
        return Err(Error::Parameter("w must be positive".into()));
    }
    let wk = w
        .times(k)
        .ok_or_else(|| Error::Integrality(format!("w*K = {w}*{k} is not an integer")))?;
    let mk = m
        .checked_mul(k)
        .ok_or_else(|| Error::Parameter("m*K overflows".into()))?;

    let (wn, wd) = (w.num() as f64, w.den() as f64);
    let mf = m as f64;
    let dz = mf - wd / wn;
    let delta1 = mf / (mf + 1.0) - 0.5;
    let delta2 = 0.5 - wn / (wn + wd);
    let ddelta = delta1.abs() - delta2.abs();
    // 1/w > m  <=>  den > m*num ; m > w  <=>  m*den > num
    let regime = w.den() > m * w.num() && m * w.den() > w.num() && m > 1;
    let oz_gap1 = (mf - 1.0).abs();
    let oz_gap2 = (wd / wn - 1.0).abs();
    let flips = oz_gap1 < oz_gap2 && delta1.abs() > delta2.abs();

    Ok(CorrelationInstance {
        e1_counts: CountsTable::new(mk, k, k, k),
        e2_counts: CountsTable::new(k, wk, k, k),
        m,
        w,
        k,
        dz,
        ddelta,
        counterexample_regime: regime,
        less_correlated_more_discriminatory: flips,
    })
}

/// A named observed dataset with an optional prediction of it.
#[derive(Debug, Clone)]
pub struct FigureFixture {
    pub name: &'static str,
    pub observed: Dataset,
    pub predicted: Option<Dataset>,
}

fn figure_schema() -> Schema {
    Schema::new(vec![
        Attribute::new("D", Role::Outcome),
        Attribute::new("G", Role::Protected),
        Attribute::new("X", Role::Other),
    ])
    .expect("static schema")
}

/// Builds `(D, G, X)` rows; `prediction` is the per-row predicted label.
fn figure_dataset(rows: &[(u8, u8, u8, u8)]) -> (Dataset, Dataset) {
    let obs = Dataset::new(
        figure_schema(),
        rows.iter().map(|&(d, g, x, _)| vec![d, g, x]).collect(),
        OutcomeKind::Observed,
    )
    .expect("static rows");
    let preds: Vec<u8> = rows.iter().map(|r| r.3).collect();
    let pred = obs.with_predictions(&preds).expect("aligned");
    (obs, pred)
}

/// Two-dimensional fixtures with a protected attribute `G` (1 = female)
/// and a feature `X` on which decision boundaries are drawn.
///
/// * `fig1a`: 1 of 6 females and 6 of 8 males positive, scoring `1/6 - 6/8`.
/// * `fig1b`: the one positive female mispredicted, scoring `0/6 - 6/8`.
/// * `fig1c`: predictions identical to the data.
/// * `fig1d`: a boundary on `X` giving `3/6 - 4/8 = 0`.
/// * `fig2a`: half of each gender positive, scoring 0, with a one-error
///   prediction that scores `1/4 - 2/4`.
pub fn gen_figure_fixtures() -> Vec<FigureFixture> {
    // (D, G, X, prediction under the fig1d boundary D^ = X)
    let fig1: Vec<(u8, u8, u8, u8)> = {
        let mut rows = Vec::new();
        // females: one positive, five negatives; X=1 for the positive and two negatives
        rows.push((1, 1, 1, 1));
        for i in 0..5 {
            let x = (i < 2) as u8;
            rows.push((0, 1, x, x));
        }
        // males: six positives (four with X=1), two negatives with X=0
        for i in 0..6 {
            let x = (i < 4) as u8;
            rows.push((1, 0, x, x));
        }
        rows.push((0, 0, 0, 0));
        rows.push((0, 0, 0, 0));
        rows
    };
    let (fig1a, fig1d) = figure_dataset(&fig1);
    let fig1b = fig1a
        .with_predictions(
            &fig1
                .iter()
                .map(|&(d, g, _, _)| if g == 1 { 0 } else { d })
                .collect::<Vec<_>>(),
        )
        .expect("aligned");
    let fig1c = fig1a.with_predictions(&fig1a.outcomes()).expect("aligned");

    // females: 2 of 4 positive; males: 2 of 4 positive. The boundary
    // misclassifies one positive female.
    let fig2 = [
        (1, 1, 1, 1),
        (1, 1, 0, 0),
        (0, 1, 0, 0),
        (0, 1, 0, 0),
        (1, 0, 1, 1),
        (1, 0, 1, 1),
        (0, 0, 0, 0),
        (0, 0, 0, 0),
    ];
    let (fig2a, fig2a1) = figure_dataset(&fig2);

    vec![
        FigureFixture {
            name: "fig1a",
            observed: fig1a.clone(),
            predicted: None,
        },
        FigureFixture {
            name: "fig1b",
            observed: fig1a.clone(),
            predicted: Some(fig1b),
        },
        FigureFixture {
            name: "fig1c",
            observed: fig1a.clone(),
            predicted: Some(fig1c),
        },
        FigureFixture {
            name: "fig1d",
            observed: fig1a,
            predicted: Some(fig1d),
        },
        FigureFixture {
            name: "fig2a",
            observed: fig2a,
            predicted: Some(fig2a1),
        },
    ]
}

/// Dataset with attributes `(outcome, protected, explanatory)` named by
/// `names`, holding one block of rows per `(E value, counts)` pair. Rows
/// within a block are ordered by division `11, 10, 01, 00`.
pub fn materialize_groups(names: (&str, &str, &str), groups: &[(u8, CountsTable)]) -> Dataset {
    let schema = Schema::new(vec![
        Attribute::new(names.0, Role::Outcome),
        Attribute::new(names.1, Role::Protected),
        Attribute::new(names.2, Role::Explanatory),
    ])
    .expect("distinct names");
    let total: u64 = groups.iter().map(|(_, c)| c.total()).sum();
    let mut values = Vec::with_capacity(total as usize * 3);
    for &(e, c) in groups {
        for (d, p, n) in [(1, 1, c.f11), (1, 0, c.f10), (0, 1, c.f01), (0, 0, c.f00)] {
            for _ in 0..n {
                values.extend_from_slice(&[d, p, e]);
            }
        }
    }
    Dataset::from_flat(schema, values, OutcomeKind::Observed).expect("binary values")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{counts, prediction_counts, stratify};
    use crate::scoring::{group_score, model_group_score, odds_ratio};

    fn frac(s: &str) -> Fraction {
        s.parse().unwrap()
    }

    #[test]
    fn fraction_parsing() {
        assert_eq!(frac("1/50"), Fraction::new(1, 50).unwrap());
        assert_eq!(frac("0.02"), Fraction::new(1, 50).unwrap());
        assert_eq!(frac("0.2"), Fraction::new(1, 5).unwrap());
        assert_eq!(frac("3"), Fraction::new(3, 1).unwrap());
        assert!("1/0".parse::<Fraction>().is_err());
        assert!("-0.1".parse::<Fraction>().is_err());
        assert!("abc".parse::<Fraction>().is_err());
        assert_eq!(frac("1/5").times(5), Some(1));
        assert_eq!(frac("1/5").times(7), None);
    }

    #[test]
    fn split_scores_for_k_one_and_seven() {
        for k in [1, 7] {
            let inst = gen_simpson_split(k).unwrap();
            assert_eq!(inst.e_counts, inst.e1_counts + inst.e2_counts);
            assert_eq!(group_score(&inst.e_counts).value, 0.0);
            assert_eq!(group_score(&inst.e1_counts).value, 1.0);
            assert_eq!(group_score(&inst.e2_counts).value, -1.0);
        }
        assert!(matches!(gen_simpson_split(0), Err(Error::Parameter(_))));
    }

    #[test]
    fn merge_instance_from_formulas() {
        let inst = gen_simpson_merge(100, 10, frac("0.02"), 0.05).unwrap();
        // a'mK = 20, 2a'K = 4
        assert_eq!(inst.e1_counts, CountsTable::new(40, 20, 160, 80));
        assert_eq!(inst.e2_counts, CountsTable::new(4, 4, 96, 196));
        assert_eq!(group_score(&inst.e1_counts).value, 0.0);
        assert!((group_score(&inst.e2_counts).value - 0.02).abs() < 1e-12);
        let merged = group_score(&inst.e_counts).value;
        assert!((merged - 10.0 * 0.02 / 3.0).abs() < 1e-12);
        assert!((inst.expected.e - 0.2 / 3.0).abs() < 1e-15);
        assert_eq!(inst.merged_over_limit, Some(true));
    }

    #[test]
    fn merge_boundary_is_not_over_limit() {
        // 3 * alpha / alpha' = 3 * 0.05 * 100 = 15
        let inst = gen_simpson_merge(100, 15, frac("1/100"), 0.05).unwrap();
        assert_eq!(inst.expected.e, 0.05);
        assert_eq!(inst.merged_over_limit, Some(false));
    }

    #[test]
    fn merge_rejects_bad_parameters() {
        assert!(matches!(
            gen_simpson_merge(10, 3, frac("1/7"), 0.5),
            Err(Error::Integrality(_))
        ));
        assert!(matches!(
            gen_simpson_merge(100, 10, frac("0.06"), 0.05),
            Err(Error::Parameter(_))
        ));
        // a'm = 1.2 > 1 makes K - a'mK negative
        assert!(matches!(
            gen_simpson_merge(100, 60, frac("0.02"), 0.05),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn correlation_counterexample_values() {
        let inst = gen_corr_counterexample(2, frac("1/5"), 5).unwrap();
        assert_eq!(inst.e1_counts, CountsTable::new(10, 5, 5, 5));
        assert_eq!(inst.e2_counts, CountsTable::new(5, 1, 5, 5));
        assert!((inst.dz + 3.0).abs() < 1e-12);
        assert!(inst.counterexample_regime);

        let oz1 = odds_ratio(&inst.e1_counts).value;
        let oz2 = odds_ratio(&inst.e2_counts).value;
        let d1 = group_score(&inst.e1_counts).value;
        let d2 = group_score(&inst.e2_counts).value;
        assert!((oz1 - oz2 - inst.dz).abs() < 1e-12);
        // 10/15 - 5/10 and 5/10 - 1/6
        assert!((d1 - 1.0 / 6.0).abs() < 1e-12);
        assert!((d2 - 1.0 / 3.0).abs() < 1e-12);
        assert!((inst.ddelta - (d1.abs() - d2.abs())).abs() < 1e-12);
        assert!((inst.ddelta + 1.0 / 6.0).abs() < 1e-12);
        // e1 is less correlated but also less discriminatory
        assert!((oz1 - 1.0).abs() < (oz2 - 1.0).abs());
        assert!(!inst.less_correlated_more_discriminatory);
    }

    proptest::proptest! {
        #[test]
        fn closed_forms_match_materialized_tables(m in 1u64..12, wn in 1u64..6, wd in 1u64..6, k in 1u64..4) {
            let w = Fraction::new(wn, wd).unwrap();
            let inst = gen_corr_counterexample(m, w, k * w.den()).unwrap();
            let data = inst.materialize();
            let groups = stratify(&data, &["E".into()]).unwrap();
            let c1 = counts(&groups[1], &data, "P").unwrap();
            let c2 = counts(&groups[0], &data, "P").unwrap();
            let dz = odds_ratio(&c1).value - odds_ratio(&c2).value;
            let dd = group_score(&c1).abs() - group_score(&c2).abs();
            proptest::prop_assert!((dz - inst.dz).abs() < 1e-12);
            proptest::prop_assert!((dd - inst.ddelta).abs() < 1e-12);
            if w.to_f64() <= 1.0 {
                let (mf, wf) = (m as f64, w.to_f64());
                proptest::prop_assert!((inst.ddelta - (mf / (mf + 1.0) + wf / (wf + 1.0) - 1.0)).abs() < 1e-12);
            }
        }

        #[test]
        fn family_never_flips_order(m in 1u64..40, wn in 1u64..40, wd in 1u64..40) {
            let inst = gen_corr_counterexample(m, Fraction::new(wn, wd).unwrap(), wd).unwrap();
            proptest::prop_assert!(!inst.less_correlated_more_discriminatory);
        }
    }

    #[test]
    fn less_correlation_with_more_discrimination_exists() {
        // outcome rates near 1/2 versus near 0
        let near_half = CountsTable::new(6, 4, 4, 6);
        let near_zero = CountsTable::new(4, 1, 196, 199);
        let (oz1, oz2) = (odds_ratio(&near_half).value, odds_ratio(&near_zero).value);
        assert!((oz1 - 1.0).abs() < (oz2 - 1.0).abs());
        assert!(group_score(&near_half).abs() > group_score(&near_zero).abs());
    }

    #[test]
    fn symmetric_correlation_instance() {
        let inst = gen_corr_counterexample(1, frac("1"), 4).unwrap();
        assert_eq!(inst.dz, 0.0);
        assert_eq!(inst.ddelta, 0.0);
        assert!(!inst.counterexample_regime);
        assert!(!inst.less_correlated_more_discriminatory);
        assert!(matches!(
            gen_corr_counterexample(2, frac("1/3"), 5),
            Err(Error::Integrality(_))
        ));
    }

    #[test]
    fn materialized_split_reproduces_counts() {
        let inst = gen_simpson_split(3).unwrap();
        let data = inst.materialize();
        assert_eq!(data.len(), 12);
        let groups = stratify(&data, &["E".into()]).unwrap();
        assert_eq!(counts(&groups[1], &data, "P").unwrap(), inst.e1_counts);
        assert_eq!(counts(&groups[0], &data, "P").unwrap(), inst.e2_counts);
    }

    #[test]
    fn figure_fixture_scores() {
        let fx = gen_figure_fixtures();
        let get = |n: &str| fx.iter().find(|f| f.name == n).unwrap();
        let whole = |d: &Dataset| stratify(d, &[]).unwrap().remove(0);

        let a = get("fig1a");
        let g = whole(&a.observed);
        let c = counts(&g, &a.observed, "G").unwrap();
        assert_eq!(c, CountsTable::new(1, 6, 5, 2));
        assert!((group_score(&c).value + 0.583333333333).abs() < 1e-11);

        let model = |n: &str| {
            let f = get(n);
            let pred = f.predicted.as_ref().unwrap();
            let pc = prediction_counts(&whole(&f.observed), &f.observed, pred, "G").unwrap();
            (model_group_score(&pc).value, pc.wrong())
        };
        assert_eq!(model("fig1b"), (-0.75, 1));
        assert!((model("fig1c").0 - group_score(&c).value).abs() < 1e-15);
        let (d, wrong_d) = model("fig1d");
        assert_eq!(d, 0.0);
        assert!(wrong_d > 1, "the fair boundary makes more errors");

        let f2 = get("fig2a");
        let c2 = counts(&whole(&f2.observed), &f2.observed, "G").unwrap();
        assert_eq!(group_score(&c2).value, 0.0);
        let (s, wrong) = model("fig2a");
        assert_eq!(wrong, 1);
        assert_eq!(s, -0.25);
    }
}
