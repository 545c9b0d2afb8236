//! Schemas, binary datasets, E-group stratification and DP-division counts.
//!
//! A [`Dataset`] stores rows positionally against its [`Schema`]. Stratifying
//! by a set of explanatory attributes yields [`EGroup`]s that reference rows by
//! index; the four-cell [`CountsTable`] of a group is what every score in
//! [`crate::scoring`] is computed from.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Outcome,
    Protected,
    Explanatory,
    Other,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Role::Outcome => "outcome",
            Role::Protected => "protected",
            Role::Explanatory => "explanatory",
            Role::Other => "other",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attribute {
    pub name: String,
    pub role: Role,
}

impl Attribute {
    pub fn new(name: impl Into<String>, role: Role) -> Self {
        Self {
            name: name.into(),
            role,
        }
    }
}

/// Ordered attribute list with role tags. Exactly one attribute is the outcome.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Schema {
    attributes: Vec<Attribute>,
    outcome: usize,
}

impl Schema {
    pub fn new(attributes: Vec<Attribute>) -> Result<Self> {
        let mut seen = HashSet::new();
        for a in &attributes {
            if !seen.insert(a.name.as_str()) {
                return Err(Error::Schema(format!(
                    "duplicate attribute name `{}`",
                    a.name
                )));
            }
        }
        let outcomes: Vec<usize> = attributes
            .iter()
            .enumerate()
            .filter(|(_, a)| a.role == Role::Outcome)
            .map(|(i, _)| i)
            .collect();
        match outcomes.as_slice() {
            [i] => Ok(Self {
                outcome: *i,
                attributes,
            }),
            [] => Err(Error::Schema("schema has no outcome attribute".into())),
            _ => Err(Error::Schema(format!(
                "schema has {} outcome attributes, expected exactly one",
                outcomes.len()
            ))),
        }
    }

    pub fn attributes(&self) -> &[Attribute] {
        &self.attributes
    }

    pub fn len(&self) -> usize {
        self.attributes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.attributes.is_empty()
    }

    pub fn outcome_index(&self) -> usize {
        self.outcome
    }

    pub fn outcome_name(&self) -> &str {
        &self.attributes[self.outcome].name
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.attributes
            .iter()
            .position(|a| a.name == name)
            .ok_or_else(|| Error::Schema(format!("unknown attribute `{name}`")))
    }

    pub fn role_of(&self, name: &str) -> Result<Role> {
        Ok(self.attributes[self.index_of(name)?].role)
    }

    /// Index of `name`, failing with a role error unless it carries `role`.
    pub fn require_role(&self, name: &str, role: Role) -> Result<usize> {
        let idx = self.index_of(name)?;
        let actual = self.attributes[idx].role;
        if actual != role {
            return Err(Error::Role(format!(
                "attribute `{name}` has role {actual}, expected {role}"
            )));
        }
        Ok(idx)
    }

    /// Names carrying `role`, in schema order.
    pub fn names_with_role(&self, role: Role) -> Vec<String> {
        self.attributes
            .iter()
            .filter(|a| a.role == role)
            .map(|a| a.name.clone())
            .collect()
    }

    /// Same attribute names, with roles replaced for the listed names.
    ///
    /// Used to apply command-line role overrides. Attributes previously holding
    /// `role` but not listed are demoted to [`Role::Other`].
    pub fn with_role_override(&self, role: Role, names: &[String]) -> Result<Self> {
        if role == Role::Outcome {
            return Err(Error::Role(
                "the outcome attribute cannot be overridden".into(),
            ));
        }
        for n in names {
            let idx = self.index_of(n)?;
            if idx == self.outcome {
                return Err(Error::Role(format!("`{n}` is the outcome attribute")));
            }
        }
        let attributes = self
            .attributes
            .iter()
            .map(|a| {
                let listed = names.contains(&a.name);
                let role = if listed {
                    role
                } else if a.role == role {
                    Role::Other
                } else {
                    a.role
                };
                Attribute::new(a.name.clone(), role)
            })
            .collect();
        Schema::new(attributes)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutcomeKind {
    Observed,
    Predicted,
}

/// Binary rows under a schema. Values are stored row-major in one buffer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    schema: Schema,
    values: Vec<u8>,
    outcome_kind: OutcomeKind,
}

impl Dataset {
    pub fn new(schema: Schema, rows: Vec<Vec<u8>>, outcome_kind: OutcomeKind) -> Result<Self> {
        let width = schema.len();
        let mut values = Vec::with_capacity(rows.len() * width);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != width {
                return Err(Error::Schema(format!(
                    "row {i} has {} values, schema has {width} attributes",
                    row.len()
                )));
            }
            values.extend_from_slice(&row);
        }
        Self::from_flat(schema, values, outcome_kind)
    }

    /// Build from a row-major buffer of `rows * schema.len()` values.
    pub fn from_flat(schema: Schema, values: Vec<u8>, outcome_kind: OutcomeKind) -> Result<Self> {
        let width = schema.len();
        if width == 0 || !values.len().is_multiple_of(width) {
            return Err(Error::Schema(format!(
                "buffer of {} values does not divide into rows of {width}",
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|&v| v > 1) {
            return Err(Error::Schema(format!(
                "row {} attribute `{}` has non-binary value {}",
                pos / width,
                schema.attributes[pos % width].name,
                values[pos]
            )));
        }
        Ok(Self {
            schema,
            values,
            outcome_kind,
        })
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn outcome_kind(&self) -> OutcomeKind {
        self.outcome_kind
    }

    pub fn len(&self) -> usize {
        self.values.len() / self.schema.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn row(&self, i: usize) -> &[u8] {
        let w = self.schema.len();
        &self.values[i * w..(i + 1) * w]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u8]> + '_ {
        self.values.chunks_exact(self.schema.len())
    }

    #[inline]
    pub fn value(&self, row: usize, attr: usize) -> u8 {
        self.values[row * self.schema.len() + attr]
    }

    pub fn outcomes(&self) -> Vec<u8> {
        let o = self.schema.outcome_index();
        self.rows().map(|r| r[o]).collect()
    }

    /// The predicted data set: same rows, outcome column replaced.
    pub fn with_predictions(&self, predictions: &[u8]) -> Result<Self> {
        if predictions.len() != self.len() {
            return Err(Error::Alignment(format!(
                "{} predictions for {} rows",
                predictions.len(),
                self.len()
            )));
        }
        let o = self.schema.outcome_index();
        let w = self.schema.len();
        let mut values = self.values.clone();
        for (i, &p) in predictions.iter().enumerate() {
            values[i * w + o] = p;
        }
        Self::from_flat(self.schema.clone(), values, OutcomeKind::Predicted)
    }

    /// Same values under a schema with identical attribute names but other roles.
    pub fn with_schema(&self, schema: Schema) -> Result<Self> {
        let same_names = schema.len() == self.schema.len()
            && schema
                .attributes()
                .iter()
                .zip(self.schema.attributes())
                .all(|(a, b)| a.name == b.name);
        if !same_names {
            return Err(Error::Schema(
                "replacement schema has different attributes".into(),
            ));
        }
        Ok(Self {
            schema,
            values: self.values.clone(),
            outcome_kind: self.outcome_kind,
        })
    }

    pub fn with_outcome_kind(mut self, kind: OutcomeKind) -> Self {
        self.outcome_kind = kind;
        self
    }
}

/// Rows sharing one value assignment over the chosen explanatory attributes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EGroup {
    pub signature: Vec<(String, u8)>,
    pub row_indices: Vec<usize>,
}

impl EGroup {
    pub fn size(&self) -> usize {
        self.row_indices.len()
    }

    /// `name=value` pairs joined with `,`; `*` for the whole-data group.
    pub fn signature_label(&self) -> String {
        if self.signature.is_empty() {
            return "*".to_string();
        }
        self.signature
            .iter()
            .map(|(n, v)| format!("{n}={v}"))
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Resolve explanatory names to schema indices, in schema order.
pub(crate) fn explanatory_indices(schema: &Schema, explanatory: &[String]) -> Result<Vec<usize>> {
    let mut idx = explanatory
        .iter()
        .map(|n| schema.require_role(n, Role::Explanatory))
        .collect::<Result<Vec<_>>>()?;
    idx.sort_unstable();
    idx.dedup();
    Ok(idx)
}

/// Partition `data` into E-groups over `explanatory`.
///
/// Groups come out in lexicographic signature order, with signature
/// attributes in schema order. An empty `explanatory` set gives one group
/// holding every row (none if the dataset is empty).
pub fn stratify(data: &Dataset, explanatory: &[String]) -> Result<Vec<EGroup>> {
    let schema = data.schema();
    let idx = explanatory_indices(schema, explanatory)?;

    let mut buckets: BTreeMap<Vec<u8>, Vec<usize>> = BTreeMap::new();
    for (i, row) in data.rows().enumerate() {
        let key: Vec<u8> = idx.iter().map(|&a| row[a]).collect();
        buckets.entry(key).or_default().push(i);
    }

    Ok(buckets
        .into_iter()
        .map(|(key, row_indices)| EGroup {
            signature: idx
                .iter()
                .zip(key)
                .map(|(&a, v)| (schema.attributes()[a].name.clone(), v))
                .collect(),
            row_indices,
        })
        .collect())
}

/// Tuple counts of the four DP-divisions. The first digit is the outcome
/// value, the second the protected value.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CountsTable {
    pub f11: u64,
    pub f10: u64,
    pub f01: u64,
    pub f00: u64,
}

impl CountsTable {
    pub const fn new(f11: u64, f10: u64, f01: u64, f00: u64) -> Self {
        Self { f11, f10, f01, f00 }
    }

    pub fn total(&self) -> u64 {
        self.f11 + self.f10 + self.f01 + self.f00
    }

    /// Size of the protected (P=1) group.
    pub fn protected_total(&self) -> u64 {
        self.f11 + self.f01
    }

    /// Size of the unprotected (P=0) group.
    pub fn unprotected_total(&self) -> u64 {
        self.f10 + self.f00
    }

    pub(crate) fn tally(&mut self, outcome: u8, protected: u8) {
        match (outcome, protected) {
            (1, 1) => self.f11 += 1,
            (1, _) => self.f10 += 1,
            (_, 1) => self.f01 += 1,
            _ => self.f00 += 1,
        }
    }
}

impl Add for CountsTable {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        Self::new(
            self.f11 + o.f11,
            self.f10 + o.f10,
            self.f01 + o.f01,
            self.f00 + o.f00,
        )
    }
}

impl fmt::Display for CountsTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.f11, self.f10, self.f01, self.f00)
    }
}

/// Counts of right (`fr`) and wrong (`fw`) predictions per DP-division of
/// the observed data.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictionCountsTable {
    pub fr11: u64,
    pub fw11: u64,
    pub fr10: u64,
    pub fw10: u64,
    pub fr01: u64,
    pub fw01: u64,
    pub fr00: u64,
    pub fw00: u64,
}

impl PredictionCountsTable {
    /// Counts of the observed outcomes, `f_ij = fr_ij + fw_ij`.
    pub fn observed(&self) -> CountsTable {
        CountsTable::new(
            self.fr11 + self.fw11,
            self.fr10 + self.fw10,
            self.fr01 + self.fw01,
            self.fr00 + self.fw00,
        )
    }

    /// Counts of the predicted outcomes against the protected attribute.
    pub fn predicted(&self) -> CountsTable {
        CountsTable::new(
            self.fr11 + self.fw01,
            self.fr10 + self.fw00,
            self.fw11 + self.fr01,
            self.fw10 + self.fr00,
        )
    }

    pub fn total(&self) -> u64 {
        self.observed().total()
    }

    pub fn wrong(&self) -> u64 {
        self.fw11 + self.fw10 + self.fw01 + self.fw00
    }

    pub(crate) fn tally(&mut self, outcome: u8, protected: u8, predicted: u8) {
        let right = outcome == predicted;
        let cell = match (outcome, protected, right) {
            (1, 1, true) => &mut self.fr11,
            (1, 1, false) => &mut self.fw11,
            (1, _, true) => &mut self.fr10,
            (1, _, false) => &mut self.fw10,
            (_, 1, true) => &mut self.fr01,
            (_, 1, false) => &mut self.fw01,
            (_, _, true) => &mut self.fr00,
            (_, _, false) => &mut self.fw00,
        };
        *cell += 1;
    }
}

impl Add for PredictionCountsTable {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        Self {
            fr11: self.fr11 + o.fr11,
            fw11: self.fw11 + o.fw11,
            fr10: self.fr10 + o.fr10,
            fw10: self.fw10 + o.fw10,
            fr01: self.fr01 + o.fr01,
            fw01: self.fw01 + o.fw01,
            fr00: self.fr00 + o.fr00,
            fw00: self.fw00 + o.fw00,
        }
    }
}

fn check_group(group: &EGroup, data: &Dataset) -> Result<()> {
    match group.row_indices.iter().find(|&&i| i >= data.len()) {
        Some(i) => Err(Error::Schema(format!(
            "group row index {i} out of range for {} rows",
            data.len()
        ))),
        None => Ok(()),
    }
}

/// DP-division counts of `group` for the protected attribute `protected`.
pub fn counts(group: &EGroup, data: &Dataset, protected: &str) -> Result<CountsTable> {
    let p = data.schema().require_role(protected, Role::Protected)?;
    check_group(group, data)?;
    Ok(counts_at(group, data, p))
}

pub(crate) fn counts_at(group: &EGroup, data: &Dataset, p: usize) -> CountsTable {
    let d = data.schema().outcome_index();
    let mut c = CountsTable::default();
    for &i in &group.row_indices {
        c.tally(data.value(i, d), data.value(i, p));
    }
    c
}

pub(crate) fn check_aligned(observed: &Dataset, predicted: &Dataset) -> Result<()> {
    if observed.len() != predicted.len() {
        return Err(Error::Alignment(format!(
            "observed data has {} rows, predicted data has {}",
            observed.len(),
            predicted.len()
        )));
    }
    if observed.schema() != predicted.schema() {
        return Err(Error::Alignment(
            "observed and predicted data have different schemas".into(),
        ));
    }
    if observed.outcome_kind() != OutcomeKind::Observed
        || predicted.outcome_kind() != OutcomeKind::Predicted
    {
        return Err(Error::Alignment(
            "expected an observed dataset paired with a predicted dataset".into(),
        ));
    }
    Ok(())
}

/// Right/wrong prediction counts for `group`, pairing rows by position.
pub fn prediction_counts(
    group: &EGroup,
    observed: &Dataset,
    predicted: &Dataset,
    protected: &str,
) -> Result<PredictionCountsTable> {
    check_aligned(observed, predicted)?;
    let p = observed.schema().require_role(protected, Role::Protected)?;
    check_group(group, observed)?;
    Ok(prediction_counts_at(group, observed, predicted, p))
}

pub(crate) fn prediction_counts_at(
    group: &EGroup,
    observed: &Dataset,
    predicted: &Dataset,
    p: usize,
) -> PredictionCountsTable {
    let d = observed.schema().outcome_index();
    let mut c = PredictionCountsTable::default();
    for &i in &group.row_indices {
        c.tally(
            observed.value(i, d),
            observed.value(i, p),
            predicted.value(i, d),
        );
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn schema_rejects_duplicates_and_missing_outcome() {
        let dup = Schema::new(vec![
            Attribute::new("D", Role::Outcome),
            Attribute::new("D", Role::Protected),
        ]);
        assert!(matches!(dup, Err(Error::Schema(_))));
        let none = Schema::new(vec![Attribute::new("P", Role::Protected)]);
        assert!(matches!(none, Err(Error::Schema(_))));
        let two = Schema::new(vec![
            Attribute::new("D", Role::Outcome),
            Attribute::new("X", Role::Outcome),
        ]);
        assert!(matches!(two, Err(Error::Schema(_))));
    }

    #[test]
    fn dataset_rejects_non_binary_and_ragged_rows() {
        let schema = Schema::new(vec![
            Attribute::new("D", Role::Outcome),
            Attribute::new("P", Role::Protected),
        ])
        .unwrap();
        assert!(Dataset::new(schema.clone(), vec![vec![0, 2]], OutcomeKind::Observed).is_err());
        assert!(Dataset::new(schema, vec![vec![0]], OutcomeKind::Observed).is_err());
    }

    #[test]
    fn example_one_splits_into_62_and_63() {
        let data = fixtures::example_one();
        assert_eq!(data.len(), 125);
        let groups = stratify(&data, &["S".to_string()]).unwrap();
        let sizes: Vec<usize> = groups.iter().map(EGroup::size).collect();
        // S=0 sorts first
        assert_eq!(sizes, vec![63, 62]);
        assert_eq!(groups[0].signature, vec![("S".to_string(), 0)]);
    }

    #[test]
    fn empty_explanatory_set_gives_one_group() {
        let data = fixtures::example_one();
        let groups = stratify(&data, &[]).unwrap();
        assert_eq!(groups.len(), 1);
        assert_eq!(groups[0].size(), 125);
        assert_eq!(groups[0].signature_label(), "*");
    }

    #[test]
    fn stratify_role_and_name_errors() {
        let data = fixtures::example_one();
        assert!(matches!(
            stratify(&data, &["nope".into()]),
            Err(Error::Schema(_))
        ));
        assert!(matches!(
            stratify(&data, &["G".into()]),
            Err(Error::Role(_))
        ));
    }

    #[test]
    fn all_eight_signatures_found() {
        let schema = Schema::new(vec![
            Attribute::new("D", Role::Outcome),
            Attribute::new("A", Role::Explanatory),
            Attribute::new("B", Role::Explanatory),
            Attribute::new("C", Role::Explanatory),
        ])
        .unwrap();
        let rows: Vec<Vec<u8>> = (0..24u8)
            .map(|i| vec![i % 2, (i >> 2) & 1, (i >> 1) & 1, (i >> 3) & 1 ^ (i & 1)])
            .collect();
        // brute-force oracle: distinct (A,B,C) triples
        let distinct: HashSet<Vec<u8>> = rows.iter().map(|r| r[1..].to_vec()).collect();
        let data = Dataset::new(schema, rows, OutcomeKind::Observed).unwrap();
        let groups = stratify(&data, &["C".into(), "A".into(), "B".into()]).unwrap();
        assert_eq!(distinct.len(), 8);
        assert_eq!(groups.len(), distinct.len());
        // signature attributes follow schema order regardless of argument order
        let names: Vec<&str> = groups[0]
            .signature
            .iter()
            .map(|(n, _)| n.as_str())
            .collect();
        assert_eq!(names, ["A", "B", "C"]);
    }

    #[test]
    fn table_one_whole_counts() {
        let data = fixtures::example_one();
        let g = &stratify(&data, &[]).unwrap()[0];
        assert_eq!(
            counts(g, &data, "G").unwrap(),
            CountsTable::new(10, 15, 40, 60)
        );
        assert!(matches!(counts(g, &data, "S"), Err(Error::Role(_))));
    }

    #[test]
    fn table_two_counts_and_prediction_counts() {
        let (observed, predicted) = fixtures::table_two();
        let g = &stratify(&observed, &[]).unwrap()[0];
        assert_eq!(
            counts(g, &observed, "G").unwrap(),
            CountsTable::new(1, 1, 1, 1)
        );
        let pc = prediction_counts(g, &observed, &predicted, "G").unwrap();
        assert_eq!(
            pc,
            PredictionCountsTable {
                fr11: 1,
                fw11: 0,
                fr10: 0,
                fw10: 1,
                fr01: 1,
                fw01: 0,
                fr00: 1,
                fw00: 0,
            }
        );
        assert_eq!(pc.observed(), CountsTable::new(1, 1, 1, 1));
    }

    #[test]
    fn group_without_protected_members() {
        let schema = Schema::new(vec![
            Attribute::new("D", Role::Outcome),
            Attribute::new("P", Role::Protected),
        ])
        .unwrap();
        let data = Dataset::new(
            schema,
            vec![vec![1, 0], vec![0, 0], vec![1, 0]],
            OutcomeKind::Observed,
        )
        .unwrap();
        let g = &stratify(&data, &[]).unwrap()[0];
        let c = counts(g, &data, "P").unwrap();
        assert_eq!((c.f11, c.f01), (0, 0));
        assert_eq!(c.total(), 3);
    }

    #[test]
    fn perfect_predictions_have_no_wrong_counts() {
        let data = fixtures::example_one();
        let predicted = data.with_predictions(&data.outcomes()).unwrap();
        for g in stratify(&data, &["S".into()]).unwrap() {
            let pc = prediction_counts(&g, &data, &predicted, "G").unwrap();
            assert_eq!(pc.wrong(), 0);
            assert_eq!(pc.observed(), counts(&g, &data, "G").unwrap());
        }
    }

    #[test]
    fn misaligned_predictions_rejected() {
        let (observed, predicted) = fixtures::table_two();
        let g = &stratify(&observed, &[]).unwrap()[0];
        let short = Dataset::new(
            predicted.schema().clone(),
            predicted.rows().take(3).map(<[u8]>::to_vec).collect(),
            OutcomeKind::Predicted,
        )
        .unwrap();
        assert!(matches!(
            prediction_counts(g, &observed, &short, "G"),
            Err(Error::Alignment(_))
        ));
        // swapped kinds are rejected too
        assert!(matches!(
            prediction_counts(g, &predicted, &observed, "G"),
            Err(Error::Alignment(_))
        ));
    }

    #[test]
    fn role_override_demotes_unlisted() {
        let data = fixtures::example_one();
        let s = data
            .schema()
            .with_role_override(Role::Explanatory, &[])
            .unwrap();
        assert_eq!(s.role_of("S").unwrap(), Role::Other);
        assert!(data
            .schema()
            .with_role_override(Role::Protected, &["D".into()])
            .is_err());
    }
}
