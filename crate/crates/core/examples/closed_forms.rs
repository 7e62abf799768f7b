//! Exact maximal overlaps and a check of each at its listed maximizers.

use geoent::closed_form::{lambda_ghz_family, lambda_known_basic, lambda_w, SOLVED_BASIC_STATES};
use geoent::qstate::{make_basic_ti, make_ghz_family, make_w, SeedPattern};

fn main() -> geoent::Result<()> {
    let ghz = lambda_ghz_family(5, 0.3, 1.0)?;
    println!(
        "GHZ_5(c = 0.3): {} (error {:.1e})",
        ghz.lambda_max,
        ghz.self_consistency(&make_ghz_family(5, 0.3, 1.0)?)?
    );

    for n in 2..=8 {
        let w = lambda_w(n)?;
        let exact = w.exact.map(|f| f.to_string()).unwrap_or_default();
        println!(
            "W_{n}: {:.10} = {exact}, error {:.1e}",
            w.lambda_max,
            w.self_consistency(&make_w(n)?)?
        );
    }

    for &(label, bits, _, _) in SOLVED_BASIC_STATES {
        let seed: SeedPattern = bits.parse()?;
        let cf = lambda_known_basic(&seed).expect("listed");
        println!(
            "{label:<9} {bits:<9} {} with {} maximizers, error {:.1e}",
            cf.exact.expect("exact"),
            cf.maximizers.len(),
            cf.self_consistency(&make_basic_ti(&seed))?
        );
    }
    Ok(())
}
