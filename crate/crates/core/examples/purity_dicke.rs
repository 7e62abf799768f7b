//! Separable mixtures never beat the best product state; S(4;2)
//! decomposes into GHZ'_4 and psi_4.

use geoent::experiments::{
    dicke_decomposition_residual, verify_dicke_decomposition, verify_pure_sufficiency, BasicId,
};

fn main() -> geoent::Result<()> {
    for id in [BasicId::Ghz(4), BasicId::W(5), BasicId::Psi3x6] {
        let psi = id.build()?.state;
        let bound = id.closed_form()?.lambda_max;
        let r = verify_pure_sufficiency(&psi, bound, 5_000, 4, 1)?;
        println!(
            "{:<8} bound {bound:.6}, best mixture {:.6}, violations {}",
            id.label(),
            r.max_observed,
            r.violations
        );
    }
    let (x, y) = ((1.0f64 / 3.0).sqrt(), (2.0f64 / 3.0).sqrt());
    println!(
        "S(4;2) decomposition holds: {}",
        verify_dicke_decomposition()?
    );
    println!(
        "residual {:.2e}, swapped {:.3}",
        dicke_decomposition_residual(x, y, false)?,
        dicke_decomposition_residual(x, y, true)?
    );
    Ok(())
}
