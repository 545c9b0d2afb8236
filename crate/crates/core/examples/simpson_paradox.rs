//! Groups and their union can disagree about discrimination.
//!
//! Run with `cargo run --example simpson_paradox`.

use discaudit::synthesis::{gen_simpson_merge, gen_simpson_split, Fraction};
use discaudit::{counts, group_score, stratify, Dataset};

fn show(label: &str, data: &Dataset) -> discaudit::Result<()> {
    let all = &stratify(data, &[])?[0];
    let c = counts(all, data, "P")?;
    println!("{label}: union {c} scores {:+.4}", group_score(&c).value);
    for g in stratify(data, &["E".to_string()])? {
        let c = counts(&g, data, "P")?;
        println!(
            "    {:<4} {c} scores {:+.4}",
            g.signature_label(),
            group_score(&c).value
        );
    }
    Ok(())
}

fn main() -> discaudit::Result<()> {
    let split = gen_simpson_split(10)?;
    show("split K=10", &split.materialize())?;

    // two groups at or below 0.02 whose union scores m * 0.02 / 3
    let alpha = 0.05;
    let alpha_prime: Fraction = "1/50".parse()?;
    for m in [3, 9, 15] {
        let merge = gen_simpson_merge(300, m, alpha_prime, alpha)?;
        show(&format!("merge m={m}"), &merge.materialize())?;
        println!(
            "    union exceeds alpha={alpha}: {}",
            merge.merged_over_limit.unwrap_or(false)
        );
    }
    Ok(())
}
