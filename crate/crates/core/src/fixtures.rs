//! Small worked-example datasets used throughout the tests and examples.

use crate::data::{Attribute, CountsTable, Dataset, OutcomeKind, Role, Schema};
use crate::synthesis::materialize_groups;

/// Income example: outcome `D`, protected `G` (1 = female), explanatory
/// sector `S`. 125 rows; sector 1 holds counts (9,3,20,30) and sector 0
/// holds (1,12,20,30), summing to (10,15,40,60) overall.
pub fn example_one() -> Dataset {
    materialize_groups(
        ("D", "G", "S"),
        &[
            (1, CountsTable::new(9, 3, 20, 30)),
            (0, CountsTable::new(1, 12, 20, 30)),
        ],
    )
}

/// Fair training data whose best protected-blind model is `D^ = M`, and the
/// predictions that model makes. Columns are `D`, `G` (1 = female,
/// protected) and `M` (performance, other).
pub fn table_two() -> (Dataset, Dataset) {
    let schema = Schema::new(vec![
        Attribute::new("D", Role::Outcome),
        Attribute::new("G", Role::Protected),
        Attribute::new("M", Role::Other),
    ])
    .expect("static schema");
    let rows = vec![vec![1, 1, 1], vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 0]];
    let observed = Dataset::new(schema, rows, OutcomeKind::Observed).expect("static rows");
    let predicted = observed.with_predictions(&[1, 0, 0, 0]).expect("aligned");
    (observed, predicted)
}
