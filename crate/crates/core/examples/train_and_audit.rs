//! Train classifiers on German credit data and audit their predictions.
//!
//! Models see every explanatory attribute, while the audit stratifies on
//! two of them only, so attributes outside the audit strata can carry
//! protected-attribute information into the predictions.
//!
//! Run with `cargo run --example train_and_audit`.

use std::path::Path;

use discaudit::classifiers::{train_constant_majority, NaiveBayesModel};
use discaudit::ingest::load_dataset;
use discaudit::{
    audit_dataset, audit_predictions, predict, train_naive_bayes, train_tree, AuditConfig, Model,
    Role, TreeParams,
};

fn main() -> discaudit::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let data = load_dataset(
        &dir.join("german_credit.txt"),
        &dir.join("german_credit.schema.json"),
        b' ',
    )?
    .data;
    let cfg = AuditConfig::from_schema(data.schema())
        .with_explanatory(vec!["chkAccBal".to_string(), "creditHistGood".to_string()]);
    let explanatory = data.schema().names_with_role(Role::Explanatory);
    let mut with_protected = explanatory.clone();
    with_protected.extend(data.schema().names_with_role(Role::Protected));

    let depth4 = TreeParams {
        max_depth: Some(4),
        min_leaf: 10,
        ..TreeParams::default()
    };
    let nb: NaiveBayesModel = train_naive_bayes(&data, &explanatory, 1.0, false)?;
    let models = [
        (
            "tree, explanatory",
            Model::Tree(train_tree(&data, &explanatory, depth4)?),
        ),
        (
            "tree, +protected",
            Model::Tree(train_tree(
                &data,
                &with_protected,
                TreeParams {
                    allow_protected: true,
                    ..depth4
                },
            )?),
        ),
        ("naive bayes", Model::NaiveBayes(nb)),
        ("majority", Model::Constant(train_constant_majority(&data))),
    ];

    let base = audit_dataset(&data, &cfg)?;
    println!(
        "{:<18} {:>9} {:>7} {:>6} {:>6}",
        "source", "glbds", "wgds", "bcr", "err"
    );
    println!(
        "{:<18} {:>+9.4} {:>7.4} {:>6} {:>6}",
        "observed", base.glbds, base.wgds, "-", "-"
    );
    for (name, model) in &models {
        let predicted = predict(model, &data)?;
        let audit = audit_predictions(&data, &predicted, &cfg)?;
        let (bcr, err) = audit
            .quality
            .map_or((f64::NAN, f64::NAN), |q| (q.bcr, q.err));
        println!(
            "{name:<18} {:>+9.4} {:>7.4} {bcr:>6.3} {err:>6.3}",
            audit.report.glbds, audit.report.wgds
        );
    }
    Ok(())
}
