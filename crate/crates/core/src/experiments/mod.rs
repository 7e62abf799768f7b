//! Table reproduction, the coefficient rule, hierarchy inference and the
//! mixed-state and Dicke checks.

mod catalog;
mod checks;
mod rules;
mod table;

pub use catalog::{
    build_catalog, catalog_basic_ids, catalog_subset, find_entry, BasicId, BasicIdLabel,
    CatalogEntry, PublishedValue, TABLE_COEFFICIENTS, TABLE_PHI,
};
pub use checks::{
    dicke_decomposition_residual, incoherent_ghz_mixture, verify_dicke_decomposition,
    verify_pure_sufficiency, PurityReport, PURITY_TOL,
};
pub use rules::{
    infer_hierarchy, predict_coefficient_rule, HierarchyOrdering, PairRelation, Relation,
    RowEvidence, HIERARCHY_TOL,
};
pub use table::{
    report_from_outcomes, run_table, sig6, to_csv, CaseCell, CaseReport, CSV_HEADER, DECIMAL_SLACK,
    EXACT_TOL, WINNER_TOL,
};
