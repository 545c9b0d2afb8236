//! Load, validate and audit the German credit data, writing a JSON report.
//!
//! Run with `cargo run --example german_credit_audit [OUT_DIR]`.

use std::path::{Path, PathBuf};

use discaudit::ingest::{binarize, load_raw, validate, SchemaConfig};
use discaudit::report::{write_report, Report, ReportFormat};
use discaudit::{audit_dataset, AuditConfig};

fn main() -> discaudit::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let config = SchemaConfig::load(&dir.join("german_credit.schema.json"))?;
    let raw = load_raw(&dir.join("german_credit.txt"), b' ')?;
    println!("{} raw rows, {} columns", raw.len(), raw.header.len());

    let binarized = binarize(&raw, &config)?;
    for (name, median) in &binarized.medians {
        println!("median of {name}: {median}");
    }
    let v = validate(&binarized.data);
    println!("minority class rate {:.3}", v.minority_class_rate);
    for w in &v.warnings {
        println!("warning: {w}");
    }

    let data = binarized.data;
    let report = audit_dataset(&data, &AuditConfig::from_schema(data.schema()))?;
    println!("glbds {:+.6} on {}", report.glbds, report.glbds_attribute);
    for a in &report.attribute_scores {
        println!("  {:<8} {:+.6}", a.attribute, a.score);
    }
    println!(
        "worst group: {} rows scoring {:+.3} on {} {}",
        report.worst_group.size,
        report.worst_group.score,
        report.worst_group.attribute,
        report.worst_group.counts
    );
    println!(
        "{} of {} groups over alpha, covering {:.1}% of rows",
        report.over_limit_groups,
        report.group_count(),
        100.0 * report.og_pct
    );

    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(std::env::temp_dir);
    let path = out.join("german_credit_audit.json");
    write_report(&path, &Report::Audit(&report), ReportFormat::Json)?;
    println!("report written to {}", path.display());
    Ok(())
}
