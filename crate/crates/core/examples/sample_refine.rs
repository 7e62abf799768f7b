//! Seeded random sampling followed by local refinement, under the free
//! and the all-equal ansatz.

use geoent::optimize::{refine, sample_top_k, SampleConfig};
use geoent::overlap::{tying_from_seed, TyingPattern};
use geoent::qstate::{make_basic_ti, SeedPattern};

fn main() -> geoent::Result<()> {
    let seed: SeedPattern = "11000".parse()?;
    let psi = make_basic_ti(&seed);
    for (name, tying) in [
        ("free", TyingPattern::free(5)?),
        ("seed classes", tying_from_seed(&seed)),
        ("all equal", TyingPattern::symmetric(5)?),
    ] {
        let cfg = SampleConfig::new(tying.clone(), 20_000, 7)?;
        let top = sample_top_k(&psi, &cfg, 4)?;
        let mut best = top.result.lambda;
        for c in &top.candidates {
            best = best.max(refine(&psi, &c.params, &tying)?.lambda);
        }
        println!(
            "{name:<12} sampled {:.6} (last gain at {:?}, steady {:?}), refined {best:.10}",
            top.result.lambda, top.result.improved_at, top.result.steady
        );
    }
    Ok(())
}
