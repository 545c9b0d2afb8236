//! A model trained on fair data can still discriminate, and a fair decision
//! boundary can cost accuracy.
//!
//! Run with `cargo run --example model_discrimination`.

use discaudit::synthesis::gen_figure_fixtures;
use discaudit::{audit_dataset, audit_predictions, fixtures, AuditConfig};

fn main() -> discaudit::Result<()> {
    let (observed, predicted) = fixtures::table_two();
    let cfg = AuditConfig::from_schema(observed.schema());
    let data_score = audit_dataset(&observed, &cfg)?.glbds;
    let audit = audit_predictions(&observed, &predicted, &cfg)?;
    println!("training data score {data_score:+.3}");
    println!("predictions of D^ = M score {:+.3}", audit.report.glbds);
    if let Some(q) = audit.quality {
        println!("bcr {:.3}, err {:.3}", q.bcr, q.err);
    }

    println!();
    println!(
        "{:<6} {:>10} {:>10} {:>7}",
        "case", "data", "model", "errors"
    );
    for fig in gen_figure_fixtures() {
        let cfg = AuditConfig::from_schema(fig.observed.schema());
        let data = audit_dataset(&fig.observed, &cfg)?.glbds;
        match &fig.predicted {
            Some(pred) => {
                let audit = audit_predictions(&fig.observed, pred, &cfg)?;
                let errors = pred
                    .outcomes()
                    .iter()
                    .zip(fig.observed.outcomes())
                    .filter(|(p, d)| **p != *d)
                    .count();
                println!(
                    "{:<6} {data:>+10.4} {:>+10.4} {errors:>7}",
                    fig.name, audit.report.glbds
                );
            }
            None => println!("{:<6} {data:>+10.4} {:>10} {:>7}", fig.name, "-", "-"),
        }
    }
    Ok(())
}
