//! Overlap of a state with product states: plain, tied, gradient and
//! separable mixtures.

use geoent::overlap::{
    expand_tied, mixture_overlap, overlap_sq, overlap_sq_grad, ProductParams, TyingPattern,
};
use geoent::qstate::{make_ghz, make_w};

fn main() -> geoent::Result<()> {
    let w3 = make_w(3)?;
    let at_max = ProductParams::uniform(3, 1.0 / 3.0, 0.0)?;
    println!("W_3 at a = 1/3: {:.12}", overlap_sq(&w3, &at_max)?);
    println!(
        "gradient norm there: {:.2e}",
        overlap_sq_grad(&w3, &at_max)?.norm()
    );

    let off = ProductParams::new(vec![0.2, 0.4, 0.3], vec![0.0, 0.5, 1.0])?;
    let g = overlap_sq_grad(&w3, &off)?;
    println!(
        "W_3 at {:?}: {:.6}, d/da {:?}",
        off.a(),
        overlap_sq(&w3, &off)?,
        g.d_a
    );

    // one class for the outer sites, one for the middle
    let tying = TyingPattern::new(vec![0, 1, 0])?;
    let tied = expand_tied(&tying, &[0.3, 0.4], &[0.0, 0.0])?;
    println!(
        "tied params a = {:?}: {:.6}",
        tied.a(),
        overlap_sq(&w3, &tied)?
    );

    let ghz = make_ghz(3)?;
    let ensemble = [
        (0.5, ProductParams::uniform(3, 1.0, 0.0)?),
        (0.5, ProductParams::uniform(3, 0.0, 0.0)?),
    ];
    println!(
        "GHZ_3 vs mixture of |111> and |000>: {}",
        mixture_overlap(&ghz, &ensemble)?
    );
    Ok(())
}
