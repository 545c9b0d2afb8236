//! Odds ratio and risk difference rank groups differently.
//!
//! Run with `cargo run --example correlation_vs_discrimination`.

use discaudit::synthesis::{gen_corr_counterexample, Fraction};
use discaudit::{group_score, odds_ratio, CountsTable};

fn describe(name: &str, c: &CountsTable) {
    println!(
        "{name:<10} {c:<18} oz {:>8.4}  score {:+.4}",
        odds_ratio(c).value,
        group_score(c).value
    );
}

fn main() -> discaudit::Result<()> {
    let inst = gen_corr_counterexample(2, Fraction::new(1, 5)?, 5)?;
    println!("generated family m=2, w=1/5, K=5");
    describe("e1", &inst.e1_counts);
    describe("e2", &inst.e2_counts);
    println!(
        "dz {:+.4}, |d1|-|d2| {:+.4}, less correlated yet more discriminatory: {}",
        inst.dz, inst.ddelta, inst.less_correlated_more_discriminatory
    );

    println!();
    println!("a pair where the weaker association discriminates more");
    let near_half = CountsTable::new(6, 4, 4, 6);
    let near_zero = CountsTable::new(4, 1, 196, 199);
    describe("near half", &near_half);
    describe("near zero", &near_zero);
    Ok(())
}
