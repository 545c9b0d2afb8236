//! A dataset that looks fair overall but not within sectors.
//!
//! Run with `cargo run --example worked_example`.

use discaudit::{audit_dataset, counts, fixtures, group_score, stratify, AuditConfig};

fn main() -> discaudit::Result<()> {
    let data = fixtures::example_one();
    println!("{} rows, outcome D, protected G, explanatory S", data.len());

    let whole = &stratify(&data, &[])?[0];
    let c = counts(whole, &data, "G")?;
    println!("whole dataset {c}: score {:+.6}", group_score(&c).value);

    for group in stratify(&data, &["S".to_string()])? {
        let c = counts(&group, &data, "G")?;
        println!(
            "group {:<4} size {:>3} {c}: score {:+.6}",
            group.signature_label(),
            group.size(),
            group_score(&c).value
        );
    }

    let report = audit_dataset(&data, &AuditConfig::from_schema(data.schema()))?;
    println!("glbds {:+.6} ({})", report.glbds, report.glbds_attribute);
    println!(
        "wgds {:.6} in {} ({:.1}% of rows)",
        report.wgds,
        report.worst_group.signature,
        100.0 * report.wg_pct
    );
    match report.ogds {
        Some(ogds) => println!(
            "{} over-limit groups, ogds {ogds:+.6}, og% {:.1}",
            report.over_limit_groups,
            100.0 * report.og_pct
        ),
        None => println!("no group exceeds alpha = {}", report.alpha),
    }
    Ok(())
}
