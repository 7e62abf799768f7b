use std::f64::consts::TAU;

use rayon::prelude::*;

use super::{spread, Evaluator, Method, OptimizationResult};
use crate::error::{Error, Result};
use crate::overlap::{overlap_sq, TyingPattern};
use crate::qstate::PureState;

/// Largest number of grid points evaluated by [`grid_oracle`].
pub const GRID_BUDGET: u128 = 1_000_000_000;

const CHUNK: u64 = 4096;

/// Exhaustive search over a uniform grid: `resolution` values of each class
/// `a` in [0, 1] (both endpoints) and of each class θ in [0, 2π).
///
/// For a state whose amplitudes share one phase the phases are pinned to 0,
/// which loses nothing: every term of the overlap is then aligned at θ = 0.
/// The budget applies to the points actually evaluated.
pub fn grid_oracle(
    psi: &PureState,
    tying: &TyingPattern,
    resolution: usize,
) -> Result<OptimizationResult> {
    if tying.n_sites() != psi.n_sites() {
        return Err(Error::DimensionMismatch {
            left: psi.n_sites(),
            right: tying.n_sites(),
        });
    }
    if resolution < 2 {
        return Err(Error::InvalidConfig(format!(
            "grid resolution {resolution} below 2"
        )));
    }
    let k = tying.n_classes();
    let phase_axes = if psi.is_phase_aligned() { 0 } else { k };
    let axes = (k + phase_axes) as u32;
    let required = (resolution as u128).checked_pow(axes).unwrap_or(u128::MAX);
    if required > GRID_BUDGET {
        return Err(Error::GridBudget {
            required,
            limit: GRID_BUDGET,
        });
    }
    let total = required as u64;
    let r = resolution as u64;
    let a_step = 1.0 / (resolution - 1) as f64;
    let t_step = TAU / resolution as f64;

    let decode = |mut idx: u64, a: &mut [f64], theta: &mut [f64]| {
        for ai in a.iter_mut() {
            *ai = (idx % r) as f64 * a_step;
            idx /= r;
        }
        for ti in theta.iter_mut().take(phase_axes) {
            *ti = (idx % r) as f64 * t_step;
            idx /= r;
        }
    };

    let class_of = tying.class_of();
    let n_chunks = total.div_ceil(CHUNK);
    // (value, index) with the earliest index kept on ties
    let (_, best_idx) = (0..n_chunks)
        .into_par_iter()
        .map_init(
            || (Evaluator::new(psi), vec![0.0; k], vec![0.0; k]),
            |(ev, a, theta), chunk| {
                let mut best = (f64::NEG_INFINITY, u64::MAX);
                for idx in chunk * CHUNK..((chunk + 1) * CHUNK).min(total) {
                    decode(idx, a, theta);
                    let v = ev.tied(class_of, a, theta);
                    if v > best.0 {
                        best = (v, idx);
                    }
                }
                best
            },
        )
        .reduce(
            || (f64::NEG_INFINITY, u64::MAX),
            |x, y| {
                if y.0 > x.0 || (y.0 == x.0 && y.1 < x.1) {
                    y
                } else {
                    x
                }
            },
        );

    let mut a = vec![0.0; k];
    let mut theta = vec![0.0; k];
    decode(best_idx, &mut a, &mut theta);
    let best_params = spread(tying, &a, &theta);
    let lambda = overlap_sq(psi, &best_params)?;
    Ok(OptimizationResult {
        lambda,
        best_params,
        samples_used: total,
        improved_at: None,
        method: Method::Grid,
        master_seed: None,
        steady: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::overlap::tying_from_seed;
    use crate::qstate::{make_basic_ti, make_ghz, make_ghz_family, make_w};

    #[test]
    fn ghz3_symmetric_hits_endpoint() {
        let r = grid_oracle(
            &make_ghz(3).unwrap(),
            &TyingPattern::symmetric(3).unwrap(),
            50,
        )
        .unwrap();
        assert!((r.lambda - 0.5).abs() < 1e-12);
    }

    #[test]
    fn w3_converges() {
        let r = grid_oracle(
            &make_w(3).unwrap(),
            &TyingPattern::symmetric(3).unwrap(),
            300,
        )
        .unwrap();
        assert!((r.lambda - 4.0 / 9.0).abs() < 2e-5);
        assert!(r.lambda <= 4.0 / 9.0 + 1e-12);
    }

    #[test]
    fn psi1b5_seed_tying() {
        let seed = "10100".parse().unwrap();
        let r = grid_oracle(&make_basic_ti(&seed), &tying_from_seed(&seed), 100).unwrap();
        assert!(r.lambda >= 0.1999);
    }

    #[test]
    fn budget_guard_reports_requirement() {
        let psi = make_ghz_family(4, 0.4, 1.0).unwrap();
        let err = grid_oracle(&psi, &TyingPattern::free(4).unwrap(), 20).unwrap_err();
        assert!(matches!(err, Error::GridBudget { required, .. } if required == 20u128.pow(8)));
    }

    #[test]
    fn complex_state_uses_phase_axes() {
        let psi = make_ghz_family(3, 0.5, 1.0).unwrap();
        let r = grid_oracle(&psi, &TyingPattern::symmetric(3).unwrap(), 40).unwrap();
        assert_eq!(r.samples_used, 1600);
        assert!((r.lambda - 0.5).abs() < 1e-12);
    }
}
