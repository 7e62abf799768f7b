//! Reproduces one table row (default A2-1, or the label given as first
//! argument) and prints it as CSV next to the published values.

use geoent::experiments::{find_entry, run_table, to_csv};
use geoent::optimize::CaseConfig;

fn main() -> geoent::Result<()> {
    let label = std::env::args().nth(1).unwrap_or_else(|| "A2-1".into());
    let entry = find_entry(&label)?;
    let reports = run_table(&[entry], &CaseConfig::new(100_000, 42))?;
    print!("{}", to_csv(&reports));
    let r = &reports[0];
    for cell in &r.cells {
        println!(
            "{}: classes {} ours {:.6} published {:?} agrees {:?}",
            cell.case,
            cell.classes,
            cell.best(),
            cell.published.value(),
            cell.agrees_with_published()
        );
    }
    println!(
        "winner {} (maximal: {:?}), coefficient rule {:?}",
        r.winner, r.winners, r.prediction
    );
    Ok(())
}
