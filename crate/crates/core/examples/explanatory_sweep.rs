//! Average global score as more explanatory attributes are used.
//!
//! Run with `cargo run --example explanatory_sweep`.

use std::path::Path;

use discaudit::audit::sweep_explanatory;
use discaudit::ingest::{binarize, load_raw, SchemaConfig};
use discaudit::report::sweep_plot_data;
use discaudit::AuditConfig;

fn main() -> discaudit::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let config = SchemaConfig::load(&dir.join("german_credit.schema.json"))?;
    let raw = load_raw(&dir.join("german_credit.txt"), b' ')?;
    let data = binarize(&raw, &config)?.data;

    let explanatory: Vec<String> = [
        "chkAccBal",
        "savings500",
        "emp4y",
        "houseOwn",
        "purposeCar",
        "jobSkilled",
    ]
    .map(String::from)
    .to_vec();
    let cfg = AuditConfig::from_schema(data.schema()).with_explanatory(explanatory);
    let sweep = sweep_explanatory(&data, &cfg)?;

    println!(
        "{:>2} {:>9} {:>8} {:>10} {:>9}",
        "k", "avg|glb|", "subsets", "groups", "min size"
    );
    for e in &sweep.entries {
        println!(
            "{:>2} {:>9.6} {:>8} {:>10.1} {:>9}",
            e.k, e.avg_abs_score, e.n_subsets, e.mean_group_count, e.min_group_size
        );
    }
    println!();
    print!("{}", sweep_plot_data(&sweep));
    Ok(())
}
