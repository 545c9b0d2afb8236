//! Deterministic report serialization.
//!
//! JSON output prints every float with six decimals. CSV output carries
//! the per-group detail of an audit or one row per `k` of a sweep.

use std::fmt::Write as _;
use std::io;
use std::path::Path;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::audit::{AuditReport, SweepResult};
use crate::data::Dataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
    PlotData,
}

impl ReportFormat {
    pub fn extension(&self) -> &'static str {
        match self {
            ReportFormat::Json => "json",
            ReportFormat::Csv => "csv",
            ReportFormat::PlotData => "dat",
        }
    }
}

fn fixed6(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".to_string()
    } else {
        s
    }
}

/// Pretty JSON with floats written as `{:.6}`.
struct FixedFloatFormatter<'a>(PrettyFormatter<'a>);

impl Formatter for FixedFloatFormatter<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            w.write_all(fixed6(value).as_bytes())
        } else {
            w.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(
        &mut buf,
        FixedFloatFormatter(PrettyFormatter::new()),
    );
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// One line per (group, protected attribute).
pub fn audit_csv(report: &AuditReport) -> String {
    let mut out = String::from(
        "signature,size,attribute,f11,f10,f01,f00,score,defined_by_convention,over_limit\n",
    );
    for g in &report.groups {
        let c = g.counts;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            csv_field(&g.signature),
            g.size,
            csv_field(&g.attribute),
            c.f11,
            c.f10,
            c.f01,
            c.f00,
            fixed6(g.score),
            g.defined_by_convention,
            g.over_limit
        );
    }
    out
}

pub fn sweep_csv(sweep: &SweepResult) -> String {
    let mut out = String::from("k,avg_abs_score,n_subsets\n");
    for e in &sweep.entries {
        let _ = writeln!(out, "{},{},{}", e.k, fixed6(e.avg_abs_score), e.n_subsets);
    }
    out
}

/// Whitespace-separated `(k, avg_abs_score)` pairs for plotting.
pub fn sweep_plot_data(sweep: &SweepResult) -> String {
    let mut out = String::from("# k avg_abs_score\n");
    for e in &sweep.entries {
        let _ = writeln!(out, "{} {}", e.k, fixed6(e.avg_abs_score));
    }
    out
}

/// A binary dataset as comma-separated text with a header row.
pub fn dataset_csv(data: &Dataset) -> String {
    let schema = data.schema();
    let header: Vec<String> = schema
        .attributes()
        .iter()
        .map(|a| csv_field(&a.name))
        .collect();
    let mut out = header.join(",");
    out.push('\n');
    for row in data.rows() {
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push(if *v == 1 { '1' } else { '0' });
        }
        out.push('\n');
    }
    out
}

/// Something that can be written in at least one [`ReportFormat`].
pub enum Report<'a> {
    Audit(&'a AuditReport),
    Sweep(&'a SweepResult),
}

pub fn render(report: &Report<'_>, format: ReportFormat) -> Result<String> {
    match (report, format) {
        (Report::Audit(r), ReportFormat::Json) => to_json(r),
        (Report::Audit(r), ReportFormat::Csv) => Ok(audit_csv(r)),
        (Report::Sweep(s), ReportFormat::Json) => to_json(s),
        (Report::Sweep(s), ReportFormat::Csv) => Ok(sweep_csv(s)),
        (Report::Sweep(s), ReportFormat::PlotData) => Ok(sweep_plot_data(s)),
        (Report::Audit(_), ReportFormat::PlotData) => Err(Error::Config(
            "plot data is only available for sweep results".into(),
        )),
    }
}

pub fn write_report(path: &Path, report: &Report<'_>, format: ReportFormat) -> Result<()> {
    let text = render(report, format)?;
    write_text(path, &text)
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| Error::Write {
        path: path.display().to_string(),
        source,
    })
}
