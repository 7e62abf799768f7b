//! Symmetry ordering inferred from the four-qubit table.

use geoent::experiments::{catalog_subset, infer_hierarchy, run_table};
use geoent::optimize::CaseConfig;

fn main() -> geoent::Result<()> {
    let reports = run_table(&catalog_subset("A")?, &CaseConfig::new(50_000, 42))?;
    for rel in infer_hierarchy(&reports).relations {
        let rows: Vec<String> = rel
            .evidence
            .iter()
            .map(|e| {
                format!(
                    "c={} win {:.4} rule {:?}",
                    e.c, e.winning_lambda, e.prediction
                )
            })
            .collect();
        let flag = if rel.asserted_by_source {
            " [asserted]"
        } else {
            ""
        };
        println!(
            "{}: {}{flag}\n    {}",
            rel.family,
            rel.summary(),
            rows.join("\n    ")
        );
    }
    Ok(())
}
