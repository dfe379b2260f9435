//! The tabulated critical values for `d ≤ 17`, each tagged with its symmetry
//! classes and a way to reproduce a witness.

mod export;
mod expr;
mod records;
mod verify;

pub use export::{csv_rows, write_csv, CatalogDocument, CsvRow, CATALOG_SCHEMA, CATALOG_SCHEMA_VERSION};
pub use expr::{parse_expr, parse_lambda, Expr};
pub use records::{
    character_value_lists, load_catalog, negative_fixtures, records_for, Construction, CriticalValueRecord, Elementary,
    Factor, LambdaValue, SourceTag, ValueClass, VerifyStatus,
};
pub use verify::{
    build_witness, negative_fixture_search, admissible_theta_sweep, verify_record, CheckLine, RecordReport, SweepEntry,
    VerifyBudget,
};
