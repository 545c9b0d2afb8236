//! Baseline classifiers over binary attributes: a majority-leaf decision
//! tree, Bernoulli naive Bayes, and a constant majority predictor.
//!
//! Every model records the attribute pool it was trained on. Pools may not
//! contain the outcome, and may only contain protected attributes when the
//! caller opts in with `allow_protected`.

use serde::{Deserialize, Serialize};

use crate::data::{Dataset, Role, Schema};
use crate::error::{Error, Result};

fn validate_pool(schema: &Schema, pool: &[String], allow_protected: bool) -> Result<Vec<usize>> {
    if pool.is_empty() {
        return Err(Error::Config("attribute pool is empty".into()));
    }
    let mut idx = Vec::with_capacity(pool.len());
    for name in pool {
        let i = schema.index_of(name)?;
        match schema.attributes()[i].role {
            Role::Outcome => {
                return Err(Error::Role(format!(
                    "outcome attribute `{name}` cannot be a model input"
                )))
            }
            Role::Protected if !allow_protected => {
                return Err(Error::Role(format!(
                    "protected attribute `{name}` cannot be a model input"
                )))
            }
            _ => {}
        }
        if !idx.contains(&i) {
            idx.push(i);
        }
    }
    // schema order fixes split tie-breaking
    idx.sort_unstable();
    Ok(idx)
}

fn pool_names(schema: &Schema, idx: &[usize]) -> Vec<String> {
    idx.iter()
        .map(|&i| schema.attributes()[i].name.clone())
        .collect()
}

/// Resolve `names` against `data`, failing with a schema error for any
/// name the data lacks.
fn resolve(data: &Dataset, names: &[String]) -> Result<Vec<usize>> {
    names.iter().map(|n| data.schema().index_of(n)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "lowercase")]
pub enum Node {
    Leaf {
        label: u8,
        rows: usize,
    },
    Split {
        attribute: String,
        zero: Box<Node>,
        one: Box<Node>,
    },
}

impl Node {
    pub fn depth(&self) -> usize {
        match self {
            Node::Leaf { .. } => 0,
            Node::Split { zero, one, .. } => 1 + zero.depth().max(one.depth()),
        }
    }

    /// Attributes along each root-to-leaf path.
    pub fn paths(&self) -> Vec<Vec<String>> {
        match self {
            Node::Leaf { .. } => vec![Vec::new()],
            Node::Split {
                attribute,
                zero,
                one,
            } => zero
                .paths()
                .into_iter()
                .chain(one.paths())
                .map(|mut p| {
                    p.insert(0, attribute.clone());
                    p
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecisionTree {
    pub root: Node,
    pub attribute_pool: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeParams {
    /// Defaults to the pool size.
    pub max_depth: Option<usize>,
    pub min_leaf: usize,
    pub allow_protected: bool,
}

impl Default for TreeParams {
    fn default() -> Self {
        Self {
            max_depth: None,
            min_leaf: 1,
            allow_protected: false,
        }
    }
}

fn entropy(pos: usize, n: usize) -> f64 {
    if n == 0 || pos == 0 || pos == n {
        return 0.0;
    }
    let p = pos as f64 / n as f64;
    -(p * p.log2() + (1.0 - p) * (1.0 - p).log2())
}

/// Majority label; ties go to 1.
fn majority(pos: usize, n: usize) -> u8 {
    (2 * pos >= n) as u8
}

struct TreeBuilder<'a> {
    data: &'a Dataset,
    outcome: usize,
    max_depth: usize,
    min_leaf: usize,
}

impl TreeBuilder<'_> {
    fn build(&self, rows: &[usize], available: &[usize], depth: usize) -> Node {
        let n = rows.len();
        let pos = rows
            .iter()
            .filter(|&&r| self.data.value(r, self.outcome) == 1)
            .count();
        let leaf = Node::Leaf {
            label: majority(pos, n),
            rows: n,
        };
        if pos == 0 || pos == n || depth >= self.max_depth || available.is_empty() {
            return leaf;
        }

        let parent = entropy(pos, n);
        let mut best: Option<(f64, usize)> = None;
        for (slot, &a) in available.iter().enumerate() {
            let (mut n1, mut pos1) = (0, 0);
            for &r in rows {
                if self.data.value(r, a) == 1 {
                    n1 += 1;
                    pos1 += self.data.value(r, self.outcome) as usize;
                }
            }
            let (n0, pos0) = (n - n1, pos - pos1);
            if n0 < self.min_leaf.max(1) || n1 < self.min_leaf.max(1) {
                continue;
            }
            let gain = parent
                - (n0 as f64 / n as f64) * entropy(pos0, n0)
                - (n1 as f64 / n as f64) * entropy(pos1, n1);
            // zero-gain splits are allowed so that XOR-like targets can be
            // separated at the next level; strict `>` keeps the first
            // attribute in schema order on ties
            if best.is_none_or(|(g, _)| gain > g + 1e-12) {
                best = Some((gain, slot));
            }
        }
        let Some((_, slot)) = best else {
            return leaf;
        };

        let attr = available[slot];
        let rest: Vec<usize> = available.iter().copied().filter(|&a| a != attr).collect();
        let (ones, zeros): (Vec<usize>, Vec<usize>) =
            rows.iter().partition(|&&r| self.data.value(r, attr) == 1);
        let zero = self.build(&zeros, &rest, depth + 1);
        let one = self.build(&ones, &rest, depth + 1);
        if let (Node::Leaf { label: a, .. }, Node::Leaf { label: b, .. }) = (&zero, &one) {
            if a == b {
                return Node::Leaf { label: *a, rows: n };
            }
        }
        Node::Split {
            attribute: self.data.schema().attributes()[attr].name.clone(),
            zero: Box::new(zero),
            one: Box::new(one),
        }
    }
}

/// Greedy information-gain tree over the binary attributes in `pool`.
pub fn train_tree(data: &Dataset, pool: &[String], params: TreeParams) -> Result<DecisionTree> {
    let idx = validate_pool(data.schema(), pool, params.allow_protected)?;
    let max_depth = params.max_depth.unwrap_or(idx.len());
    if max_depth == 0 {
        return Err(Error::Parameter("max_depth must be at least 1".into()));
    }
    let builder = TreeBuilder {
        data,
        outcome: data.schema().outcome_index(),
        max_depth,
        min_leaf: params.min_leaf,
    };
    let rows: Vec<usize> = (0..data.len()).collect();
    Ok(DecisionTree {
        root: builder.build(&rows, &idx, 0),
        attribute_pool: pool_names(data.schema(), &idx),
    })
}

impl DecisionTree {
    fn predict_row(&self, row: &[u8], lookup: &[(String, usize)]) -> u8 {
        let mut node = &self.root;
        loop {
            match node {
                Node::Leaf { label, .. } => return *label,
                Node::Split {
                    attribute,
                    zero,
                    one,
                } => {
                    let i = lookup
                        .iter()
                        .find(|(n, _)| n == attribute)
                        .map(|(_, i)| *i)
                        .expect("split attributes come from the pool");
                    node = if row[i] == 1 { one } else { zero };
                }
            }
        }
    }
}

/// Per-attribute Bernoulli likelihoods for the two classes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureLikelihood {
    pub attribute: String,
    /// `Pr(attribute=1 | outcome=1)`
    pub p_one_given_positive: f64,
    /// `Pr(attribute=1 | outcome=0)`
    pub p_one_given_negative: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NaiveBayesModel {
    /// Smoothed `Pr(outcome=1)`.
    pub prior_positive: f64,
    pub likelihoods: Vec<FeatureLikelihood>,
    pub smoothing: f64,
    pub attribute_pool: Vec<String>,
}

pub fn train_naive_bayes(
    data: &Dataset,
    pool: &[String],
    smoothing: f64,
    allow_protected: bool,
) -> Result<NaiveBayesModel> {
    if smoothing.is_nan() || smoothing <= 0.0 {
        return Err(Error::Parameter(format!(
            "smoothing must be positive, got {smoothing}"
        )));
    }
    let idx = validate_pool(data.schema(), pool, allow_protected)?;
    let d = data.schema().outcome_index();
    let mut n_class = [0usize; 2];
    let mut ones = vec![[0usize; 2]; idx.len()];
    for row in data.rows() {
        let c = row[d] as usize;
        n_class[c] += 1;
        for (slot, &a) in idx.iter().enumerate() {
            ones[slot][c] += row[a] as usize;
        }
    }
    let smoothed = |k: usize, n: usize| (k as f64 + smoothing) / (n as f64 + 2.0 * smoothing);
    let names = pool_names(data.schema(), &idx);
    Ok(NaiveBayesModel {
        prior_positive: smoothed(n_class[1], n_class[0] + n_class[1]),
        likelihoods: names
            .iter()
            .zip(&ones)
            .map(|(name, o)| FeatureLikelihood {
                attribute: name.clone(),
                p_one_given_positive: smoothed(o[1], n_class[1]),
                p_one_given_negative: smoothed(o[0], n_class[0]),
            })
            .collect(),
        smoothing,
        attribute_pool: names,
    })
}

impl NaiveBayesModel {
    /// `log Pr(1, x) - log Pr(0, x)`.
    pub fn log_odds(&self, values: &[u8]) -> f64 {
        let mut lo = (self.prior_positive / (1.0 - self.prior_positive)).ln();
        for (f, &v) in self.likelihoods.iter().zip(values) {
            let (p1, p0) = if v == 1 {
                (f.p_one_given_positive, f.p_one_given_negative)
            } else {
                (1.0 - f.p_one_given_positive, 1.0 - f.p_one_given_negative)
            };
            lo += p1.ln() - p0.ln();
        }
        lo
    }
}

/// Predicts one label for every row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstantModel {
    pub label: u8,
}

/// The majority outcome of `data`; ties go to 1.
pub fn train_constant_majority(data: &Dataset) -> ConstantModel {
    let pos = data.outcomes().iter().filter(|&&v| v == 1).count();
    ConstantModel {
        label: majority(pos, data.len()),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Model {
    Tree(DecisionTree),
    NaiveBayes(NaiveBayesModel),
    Constant(ConstantModel),
}

impl Model {
    pub fn attribute_pool(&self) -> &[String] {
        match self {
            Model::Tree(t) => &t.attribute_pool,
            Model::NaiveBayes(m) => &m.attribute_pool,
            Model::Constant(_) => &[],
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid model file: {e}")))
    }
}

/// Labels for every row of `data`.
pub fn predict_labels(model: &Model, data: &Dataset) -> Result<Vec<u8>> {
    let idx = resolve(data, model.attribute_pool())?;
    let labels = match model {
        Model::Constant(c) => vec![c.label; data.len()],
        Model::Tree(t) => {
            let lookup: Vec<(String, usize)> = t
                .attribute_pool
                .iter()
                .cloned()
                .zip(idx.iter().copied())
                .collect();
            data.rows().map(|r| t.predict_row(r, &lookup)).collect()
        }
        Model::NaiveBayes(m) => {
            let mut buf = vec![0u8; idx.len()];
            data.rows()
                .map(|r| {
                    for (b, &i) in buf.iter_mut().zip(&idx) {
                        *b = r[i];
                    }
                    (m.log_odds(&buf) >= 0.0) as u8
                })
                .collect()
        }
    };
    Ok(labels)
}

/// The predicted data set: `data` with its outcome column replaced by the
/// model's predictions.
pub fn predict(model: &Model, data: &Dataset) -> Result<Dataset> {
    let labels = predict_labels(model, data)?;
    data.with_predictions(&labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{Attribute, OutcomeKind};
    use crate::fixtures;
    use crate::scoring::group_score;

    fn schema(names: &[(&str, Role)]) -> Schema {
        Schema::new(names.iter().map(|(n, r)| Attribute::new(*n, *r)).collect()).unwrap()
    }

    #[test]
    fn table_two_tree_is_identity_on_m() {
        let (obs, pred) = fixtures::table_two();
        let tree = train_tree(&obs, &["M".into()], TreeParams::default()).unwrap();
        match &tree.root {
            Node::Split {
                attribute,
                zero,
                one,
            } => {
                assert_eq!(attribute, "M");
                assert!(matches!(**zero, Node::Leaf { label: 0, .. }));
                assert!(matches!(**one, Node::Leaf { label: 1, .. }));
            }
            other => panic!("expected a split, got {other:?}"),
        }
        assert_eq!(predict(&Model::Tree(tree), &obs).unwrap(), pred);
    }

    #[test]
    fn pure_outcome_gives_single_leaf() {
        let s = schema(&[("D", Role::Outcome), ("A", Role::Other), ("B", Role::Other)]);
        let data = Dataset::new(
            s,
            vec![vec![1, 0, 1], vec![1, 1, 0], vec![1, 1, 1]],
            OutcomeKind::Observed,
        )
        .unwrap();
        let t = train_tree(&data, &["A".into(), "B".into()], TreeParams::default()).unwrap();
        assert_eq!(t.root, Node::Leaf { label: 1, rows: 3 });
    }

    #[test]
    fn pool_validation() {
        let (obs, _) = fixtures::table_two();
        for bad in [vec!["G".to_string()], vec!["D".to_string()]] {
            assert!(matches!(
                train_tree(&obs, &bad, TreeParams::default()),
                Err(Error::Role(_))
            ));
            assert!(matches!(
                train_naive_bayes(&obs, &bad, 1.0, false),
                Err(Error::Role(_))
            ));
        }
        assert!(matches!(
            train_tree(&obs, &[], TreeParams::default()),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            train_tree(&obs, &["zzz".into()], TreeParams::default()),
            Err(Error::Schema(_))
        ));
        let unsafe_params = TreeParams {
            allow_protected: true,
            ..TreeParams::default()
        };
        assert!(train_tree(&obs, &["G".into()], unsafe_params).is_ok());
    }

    /// Smallest training error of any tree of depth <= 2 over `attrs`.
    fn best_depth_two_error(data: &Dataset, attrs: &[usize]) -> usize {
        let d = data.schema().outcome_index();
        let rows: Vec<&[u8]> = data.rows().collect();
        // error of the best constant label on a row subset
        let leaf_err = |sel: &dyn Fn(&[u8]) -> bool| {
            let (mut n, mut pos) = (0, 0);
            for r in &rows {
                if sel(r) {
                    n += 1;
                    pos += r[d] as usize;
                }
            }
            pos.min(n - pos)
        };
        let mut best = leaf_err(&|_| true);
        for &a in attrs {
            let mut sides = [0usize; 2];
            for side in 0..2u8 {
                let mut side_best = leaf_err(&|r| r[a] == side);
                for &b in attrs {
                    if b != a {
                        let e = leaf_err(&|r| r[a] == side && r[b] == 0)
                            + leaf_err(&|r| r[a] == side && r[b] == 1);
                        side_best = side_best.min(e);
                    }
                }
                // each side of `a` may split again on any other attribute
                sides[side as usize] = side_best;
            }
            best = best.min(sides[0] + sides[1]);
        }
        best
    }

    #[test]
    fn xor_is_learned_at_depth_two() {
        let s = schema(&[("D", Role::Outcome), ("A", Role::Other), ("B", Role::Other)]);
        let rows: Vec<Vec<u8>> = (0..20u8)
            .map(|i| {
                let (a, b) = (i & 1, (i >> 1) & 1);
                vec![a ^ b, a, b]
            })
            .collect();
        let data = Dataset::new(s, rows, OutcomeKind::Observed).unwrap();
        assert_eq!(best_depth_two_error(&data, &[1, 2]), 0);
        let params = TreeParams {
            max_depth: Some(2),
            ..TreeParams::default()
        };
        let t = train_tree(&data, &["A".into(), "B".into()], params).unwrap();
        let model = Model::Tree(t);
        let labels = predict_labels(&model, &data).unwrap();
        let errors = labels
            .iter()
            .zip(data.outcomes())
            .filter(|(p, d)| **p != *d)
            .count();
        assert_eq!(errors, 0);
    }

    #[test]
    fn no_attribute_repeats_on_a_path() {
        let s = schema(&[
            ("D", Role::Outcome),
            ("A", Role::Explanatory),
            ("B", Role::Explanatory),
            ("C", Role::Other),
        ]);
        let rows: Vec<Vec<u8>> = (0..64u32)
            .map(|i| {
                let v = i.wrapping_mul(2654435761u32) >> 7;
                vec![
                    (v & 1) as u8,
                    (v >> 1 & 1) as u8,
                    (v >> 2 & 1) as u8,
                    (v >> 3 & 1) as u8,
                ]
            })
            .collect();
        let data = Dataset::new(s, rows, OutcomeKind::Observed).unwrap();
        let pool: Vec<String> = ["A", "B", "C"].map(String::from).to_vec();
        let t = train_tree(&data, &pool, TreeParams::default()).unwrap();
        for path in t.root.paths() {
            let mut p = path.clone();
            p.sort();
            p.dedup();
            assert_eq!(p.len(), path.len());
            assert!(path.iter().all(|a| pool.contains(a)));
        }
        assert!(t.root.depth() <= 3);
        // deterministic
        assert_eq!(t, train_tree(&data, &pool, TreeParams::default()).unwrap());
    }

    #[test]
    fn constant_model_predicts_one_class() {
        let data = fixtures::example_one();
        let m = train_constant_majority(&data);
        assert_eq!(m.label, 0);
        let pred = predict(&Model::Constant(m), &data).unwrap();
        assert!(pred.outcomes().iter().all(|&v| v == 0));
        assert_eq!(pred.outcome_kind(), OutcomeKind::Predicted);
    }

    #[test]
    fn laplace_smoothing_formula() {
        // 10 positive rows, none with A=1
        let s = schema(&[("D", Role::Outcome), ("A", Role::Other)]);
        let mut rows = vec![vec![1, 0]; 10];
        rows.extend(vec![vec![0, 1]; 6]);
        let data = Dataset::new(s, rows, OutcomeKind::Observed).unwrap();
        let m = train_naive_bayes(&data, &["A".into()], 1.0, false).unwrap();
        assert!((m.likelihoods[0].p_one_given_positive - 1.0 / 12.0).abs() < 1e-15);
        // 6 of 6 negatives with A=1: 7/8
        assert!((m.likelihoods[0].p_one_given_negative - 7.0 / 8.0).abs() < 1e-15);
        assert!((m.prior_positive - 11.0 / 18.0).abs() < 1e-15);
        assert!(matches!(
            train_naive_bayes(&data, &["A".into()], 0.0, false),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn balanced_independent_prior() {
        let s = schema(&[("D", Role::Outcome), ("A", Role::Other)]);
        let rows: Vec<Vec<u8>> = (0..40u8).map(|i| vec![i & 1, (i >> 1) & 1]).collect();
        let data = Dataset::new(s, rows, OutcomeKind::Observed).unwrap();
        let m = train_naive_bayes(&data, &["A".into()], 1.0, false).unwrap();
        assert!((m.prior_positive - 0.5).abs() < 1e-12);
        assert!((m.likelihoods[0].p_one_given_positive - 0.5).abs() < 1e-12);
    }

    #[test]
    fn naive_bayes_matches_posterior_oracle() {
        let s = schema(&[
            ("D", Role::Outcome),
            ("A", Role::Other),
            ("B", Role::Other),
            ("C", Role::Explanatory),
        ]);
        let rows: Vec<Vec<u8>> = (0..20u32)
            .map(|i| {
                let v = i.wrapping_mul(0x9E37_79B9) >> 9;
                let a = (v & 1) as u8;
                let d = if i % 5 == 0 { 1 - a } else { a };
                vec![d, a, (v >> 3 & 1) as u8, (v >> 5 & 1) as u8]
            })
            .collect();
        let data = Dataset::new(s, rows.clone(), OutcomeKind::Observed).unwrap();
        let pool: Vec<String> = ["A", "B", "C"].map(String::from).to_vec();
        let model = Model::NaiveBayes(train_naive_bayes(&data, &pool, 1.0, false).unwrap());
        let labels = predict_labels(&model, &data).unwrap();

        // independent oracle: raw counts, posterior products, no logs
        let count =
            |pred: &dyn Fn(&Vec<u8>) -> bool| rows.iter().filter(|r| pred(r)).count() as f64;
        for (row, &label) in rows.iter().zip(&labels) {
            let mut post = [0.0f64; 2];
            for c in 0..2u8 {
                let nc = count(&|r| r[0] == c);
                let mut p = (nc + 1.0) / (rows.len() as f64 + 2.0);
                for a in 1..4 {
                    let k = count(&|r| r[0] == c && r[a] == row[a]);
                    p *= (k + 1.0) / (nc + 2.0);
                }
                post[c as usize] = p;
            }
            assert_eq!(label, (post[1] >= post[0]) as u8, "row {row:?}");
        }
    }

    #[test]
    fn predictive_attribute_bounded_by_smoothing() {
        let s = schema(&[("D", Role::Outcome), ("A", Role::Other)]);
        let rows: Vec<Vec<u8>> = (0..30u8).map(|i| vec![i % 2, i % 2]).collect();
        let data = Dataset::new(s, rows, OutcomeKind::Observed).unwrap();
        let m = train_naive_bayes(&data, &["A".into()], 0.5, false).unwrap();
        let f = &m.likelihoods[0];
        // 15 of 15 and 0 of 15
        assert_eq!(f.p_one_given_positive, 15.5 / 16.0);
        assert_eq!(f.p_one_given_negative, 0.5 / 16.0);
        let labels = predict_labels(&Model::NaiveBayes(m), &data).unwrap();
        assert_eq!(labels, data.outcomes());
    }

    #[test]
    fn model_json_round_trip_and_schema_mismatch() {
        let (obs, _) = fixtures::table_two();
        let tree = Model::Tree(train_tree(&obs, &["M".into()], TreeParams::default()).unwrap());
        let back = Model::from_json(&tree.to_json().unwrap()).unwrap();
        assert_eq!(back, tree);
        let other = fixtures::example_one();
        assert!(matches!(predict(&tree, &other), Err(Error::Schema(_))));
    }

    #[test]
    fn error_free_tree_preserves_data_score() {
        let (obs, _) = fixtures::table_two();
        // M and G together determine D only with G; M alone cannot
        let tree = train_tree(&obs, &["M".into()], TreeParams::default()).unwrap();
        let pred = predict(&Model::Tree(tree), &obs).unwrap();
        let g = &crate::data::stratify(&pred, &[]).unwrap()[0];
        let c = crate::data::counts(g, &pred, "G").unwrap();
        assert_eq!(group_score(&c).value, 0.5);
    }
}
