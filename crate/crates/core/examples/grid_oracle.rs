//! Exhaustive grid search and its evaluation budget.

use geoent::optimize::{grid_oracle, GRID_BUDGET};
use geoent::overlap::{tying_from_seed, TyingPattern};
use geoent::qstate::{make_basic_ti, make_w, SeedPattern};
use geoent::Error;

fn main() -> geoent::Result<()> {
    let w3 = make_w(3)?;
    for r in [20, 100, 1000] {
        let g = grid_oracle(&w3, &TyingPattern::symmetric(3)?, r)?;
        println!(
            "W_3, all equal, r = {r}: {:.8} ({} points)",
            g.lambda, g.samples_used
        );
    }

    let seed: SeedPattern = "100100".parse()?;
    let g = grid_oracle(&make_basic_ti(&seed), &tying_from_seed(&seed), 200)?;
    println!(
        "psi^3_6 under seed classes: {:.8} at a = {:?}",
        g.lambda,
        g.best_params.a()
    );

    match grid_oracle(&make_basic_ti(&seed), &TyingPattern::free(6)?, 50) {
        Err(Error::GridBudget { required, limit }) => {
            println!(
                "free grid on 6 sites needs {required} points, budget {limit} (= {GRID_BUDGET})"
            )
        }
        other => println!("unexpected: {other:?}"),
    }
    Ok(())
}
