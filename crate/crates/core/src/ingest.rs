//! Loading delimited text and turning it into a binary [`Dataset`].
//!
//! A [`SchemaConfig`] names each retained attribute, its role, and the rule
//! that maps raw values to 0/1:
//!
//! ```json
//! {"attributes": [
//!   {"name": "approved", "role": "outcome", "source": "class",
//!    "rule": {"kind": "majority", "category": "1"}},
//!   {"name": "age35", "role": "protected", "source": "age",
//!    "rule": {"kind": "threshold", "value": 35}, "invert": true},
//!   {"name": "amount", "role": "explanatory", "rule": {"kind": "median"}}
//! ]}
//! ```
//!
//! * `median`: value >= lower median of the column maps to 1.
//! * `majority`: the named category (or any of a list) maps to 1.
//! * `threshold`: value >= `value` maps to 1.
//! * `identity`: the column must already hold 0/1.
//!
//! `source` reads a differently named raw column, so one raw column can feed
//! several attributes. `invert` swaps 0 and 1 after the rule is applied.
//! Rows with a missing value (empty, `?` or `NA`) in any configured column
//! are dropped before medians are computed.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::data::{Attribute, Dataset, OutcomeKind, Role, Schema};
use crate::error::{Error, Result};

const MISSING: [&str; 3] = ["", "?", "NA"];

fn is_missing(v: &str) -> bool {
    MISSING.contains(&v.trim())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColumnKind {
    Numeric,
    Categorical,
    Binary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub column_kinds: Vec<ColumnKind>,
}

impl RawTable {
    /// Build a table from in-memory records, inferring column kinds.
    pub fn new(header: Vec<String>, rows: Vec<Vec<String>>) -> Result<Self> {
        if header.is_empty() {
            return Err(Error::EmptyInput("no header row".into()));
        }
        for (i, r) in rows.iter().enumerate() {
            if r.len() != header.len() {
                return Err(Error::Parse {
                    line: i as u64 + 2,
                    message: format!("expected {} fields, found {}", header.len(), r.len()),
                });
            }
        }
        let column_kinds = (0..header.len())
            .map(|c| infer_kind(rows.iter().map(|r| r[c].as_str())))
            .collect();
        Ok(Self {
            header,
            rows,
            column_kinds,
        })
    }

    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Config(format!("column `{name}` is not in the data header")))
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

fn infer_kind<'a>(values: impl Iterator<Item = &'a str>) -> ColumnKind {
    let mut binary = true;
    let mut numeric = true;
    for v in values.map(str::trim).filter(|v| !is_missing(v)) {
        binary &= v == "0" || v == "1";
        numeric &= v.parse::<f64>().is_ok();
        if !numeric {
            return ColumnKind::Categorical;
        }
    }
    if binary {
        ColumnKind::Binary
    } else {
        ColumnKind::Numeric
    }
}

/// Parse delimited text with a header row from a reader.
pub fn parse_raw<R: std::io::Read>(reader: R, delimiter: u8) -> Result<RawTable> {
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut records = rdr.records();
    let header: Vec<String> = match records.next() {
        None => return Err(Error::EmptyInput("file has no header row".into())),
        Some(rec) => rec?.iter().map(str::to_string).collect(),
    };
    let mut rows = Vec::new();
    for rec in records {
        let rec = rec?;
        let line = rec.position().map_or(rows.len() as u64 + 2, |p| p.line());
        if rec.len() != header.len() {
            return Err(Error::Parse {
                line,
                message: format!("expected {} fields, found {}", header.len(), rec.len()),
            });
        }
        rows.push(rec.iter().map(str::to_string).collect());
    }
    RawTable::new(header, rows)
}

/// Load a delimited text file whose first row is the header.
pub fn load_raw(path: &Path, delimiter: u8) -> Result<RawTable> {
    let file = std::fs::File::open(path).map_err(|source| Error::Read {
        path: path.display().to_string(),
        source,
    })?;
    parse_raw(std::io::BufReader::new(file), delimiter)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Categories {
    One(String),
    Many(Vec<String>),
}

impl Categories {
    fn as_slice(&self) -> &[String] {
        match self {
            Categories::One(c) => std::slice::from_ref(c),
            Categories::Many(cs) => cs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Rule {
    Median,
    Majority { category: Categories },
    Threshold { value: f64 },
    Identity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributeConfig {
    pub name: String,
    pub role: Role,
    pub rule: Rule,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub invert: bool,
    /// Which raw condition maps to 1.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

impl AttributeConfig {
    pub fn new(name: impl Into<String>, role: Role, rule: Rule) -> Self {
        Self {
            name: name.into(),
            role,
            rule,
            source: None,
            invert: false,
            description: None,
        }
    }

    pub fn column(&self) -> &str {
        self.source.as_deref().unwrap_or(&self.name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemaConfig {
    pub attributes: Vec<AttributeConfig>,
}

impl SchemaConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)
            .map_err(|e| Error::Config(format!("invalid schema config: {e}")))?;
        cfg.schema()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&read_to_string(path)?)
    }

    /// The data-model schema this config produces.
    pub fn schema(&self) -> Result<Schema> {
        Schema::new(
            self.attributes
                .iter()
                .map(|a| Attribute::new(a.name.clone(), a.role))
                .collect(),
        )
        .map_err(|e| Error::Config(e.to_string()))
    }

    /// Identity rules for every column of an already-binary table, with
    /// roles taken from `roles` and `Other` for unlisted columns.
    pub fn identity(header: &[String], roles: &[(&str, Role)]) -> Self {
        Self {
            attributes: header
                .iter()
                .map(|h| {
                    let role = roles
                        .iter()
                        .find(|(n, _)| n == h)
                        .map_or(Role::Other, |(_, r)| *r);
                    AttributeConfig::new(h.clone(), role, Rule::Identity)
                })
                .collect(),
        }
    }
}

pub(crate) fn read_to_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Read {
        path: path.display().to_string(),
        source,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Binarized {
    pub data: Dataset,
    /// Rows dropped for a missing value in a configured column.
    pub dropped_missing: usize,
    /// Median used by each `median` attribute, in config order.
    pub medians: Vec<(String, f64)>,
}

/// Lower median: element `(n-1)/2` of the sorted values.
pub fn lower_median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    Some(v[(v.len() - 1) / 2])
}

fn parse_number(column: &str, v: &str) -> Result<f64> {
    v.trim().parse::<f64>().map_err(|_| Error::Conversion {
        column: column.to_string(),
        value: v.to_string(),
    })
}

/// Apply the configured rules to `raw`. Columns not named in `config`
/// are dropped.
pub fn binarize(raw: &RawTable, config: &SchemaConfig) -> Result<Binarized> {
    let schema = config.schema()?;
    let cols: Vec<usize> = config
        .attributes
        .iter()
        .map(|a| raw.column_index(a.column()))
        .collect::<Result<_>>()?;

    let kept: Vec<&Vec<String>> = raw
        .rows
        .iter()
        .filter(|r| cols.iter().all(|&c| !is_missing(&r[c])))
        .collect();
    let dropped_missing = raw.rows.len() - kept.len();
    if kept.is_empty() {
        return Err(Error::EmptyInput(
            "no complete rows after dropping missing values".into(),
        ));
    }

    let n = kept.len();
    let width = config.attributes.len();
    let mut values = vec![0u8; n * width];
    let mut medians = Vec::new();
    for (j, (attr, &c)) in config.attributes.iter().zip(&cols).enumerate() {
        let column = attr.column();
        let bits: Vec<u8> = match &attr.rule {
            Rule::Median => {
                let nums: Vec<f64> = kept
                    .iter()
                    .map(|r| parse_number(column, &r[c]))
                    .collect::<Result<_>>()?;
                let m = lower_median(&nums).expect("kept is nonempty");
                medians.push((attr.name.clone(), m));
                nums.iter().map(|&x| (x >= m) as u8).collect()
            }
            Rule::Threshold { value } => kept
                .iter()
                .map(|r| parse_number(column, &r[c]).map(|x| (x >= *value) as u8))
                .collect::<Result<_>>()?,
            Rule::Majority { category } => {
                let cats = category.as_slice();
                let present: BTreeSet<&str> = kept.iter().map(|r| r[c].as_str()).collect();
                if let Some(missing) = cats.iter().find(|c| !present.contains(c.as_str())) {
                    return Err(Error::Config(format!(
                        "category `{missing}` of `{}` does not occur in column `{column}`",
                        attr.name
                    )));
                }
                kept.iter().map(|r| cats.contains(&r[c]) as u8).collect()
            }
            Rule::Identity => kept
                .iter()
                .map(|r| match r[c].as_str() {
                    "0" => Ok(0),
                    "1" => Ok(1),
                    other => Err(Error::Conversion {
                        column: column.to_string(),
                        value: other.to_string(),
                    }),
                })
                .collect::<Result<_>>()?,
        };
        for (i, b) in bits.into_iter().enumerate() {
            values[i * width + j] = if attr.invert { 1 - b } else { b };
        }
    }

    Ok(Binarized {
        data: Dataset::from_flat(schema, values, OutcomeKind::Observed)?,
        dropped_missing,
        medians,
    })
}

/// Load and binarize in one step.
pub fn load_dataset(data: &Path, schema: &Path, delimiter: u8) -> Result<Binarized> {
    let config = SchemaConfig::load(schema)?;
    let raw = load_raw(data, delimiter)?;
    binarize(&raw, &config)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttributeBalance {
    pub attribute: String,
    pub role: Role,
    pub ones: usize,
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub rows: usize,
    pub outcome_positive_rate: f64,
    pub minority_class_rate: f64,
    pub balance: Vec<AttributeBalance>,
    pub warnings: Vec<String>,
}

/// Class balance, per-attribute 0/1 balance and empty-contrast warnings.
pub fn validate(data: &Dataset) -> ValidationReport {
    let n = data.len();
    let schema = data.schema();
    let mut ones = vec![0usize; schema.len()];
    for row in data.rows() {
        for (o, &v) in ones.iter_mut().zip(row) {
            *o += v as usize;
        }
    }
    let rate = |k: usize| if n == 0 { 0.0 } else { k as f64 / n as f64 };
    let balance: Vec<AttributeBalance> = schema
        .attributes()
        .iter()
        .zip(&ones)
        .map(|(a, &k)| AttributeBalance {
            attribute: a.name.clone(),
            role: a.role,
            ones: k,
            rate: rate(k),
        })
        .collect();

    let pos = rate(ones[schema.outcome_index()]);
    let minority = pos.min(1.0 - pos);
    let mut warnings = Vec::new();
    if n == 0 {
        warnings.push("dataset has no rows".to_string());
    } else if minority == 0.0 {
        warnings.push(format!(
            "outcome `{}` has a single class; minority class rate is 0",
            schema.outcome_name()
        ));
    }
    for b in &balance {
        if n > 0 && b.role == Role::Protected && (b.ones == 0 || b.ones == n) {
            warnings.push(format!(
                "protected attribute `{}` has no contrast: every row is {}",
                b.attribute,
                (b.ones == n) as u8
            ));
        }
    }
    ValidationReport {
        rows: n,
        outcome_positive_rate: pos,
        minority_class_rate: minority,
        balance,
        warnings,
    }
}
