//! Builds the basic translation-invariant states and a two-component
//! superposition, and lists the seed classes available on six sites.

use std::f64::consts::PI;

use geoent::qstate::{
    available_periods, enumerate_basic_seeds, make_dicke, BasicState, HybridSpec, SeedPattern,
};

fn main() -> geoent::Result<()> {
    let basics = [
        BasicState::ghz(4)?,
        BasicState::w(4)?,
        BasicState::ghz_prime(4)?,
        BasicState::seeded("psi^3_6", "100100".parse::<SeedPattern>()?),
    ];
    for b in &basics {
        println!(
            "{:<8} period {}  terms {}  TI {}",
            b.label,
            b.period(),
            b.state.support().len(),
            b.state.is_translation_invariant(1e-12)
        );
    }

    let dicke = make_dicke(4, 2)?;
    println!(
        "S(4;2) terms: {:?}",
        dicke
            .support()
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
    );

    let hybrid = HybridSpec::two_component(
        BasicState::ghz(4)?,
        BasicState::ghz_prime(4)?,
        0.25,
        PI / 3.0,
    )?;
    let sup = hybrid.superpose()?;
    println!(
        "GHZ_4 + GHZ'_4: orthogonal {}, periods {:?}",
        sup.orthogonal, sup.component_periods
    );

    println!("six-site periods: {:?}", available_periods(6)?);
    for seed in enumerate_basic_seeds(6)? {
        print!("{seed} ");
    }
    println!();
    Ok(())
}
