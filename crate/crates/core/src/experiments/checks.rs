use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::overlap::{mixture_overlap, ProductParams};
use crate::qstate::{make_basic_ti, make_dicke, make_ghz_prime, PureState, SeedPattern};

/// Slack allowed above the pure-product reference.
pub const PURITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PurityReport {
    pub trials: u64,
    pub ensemble_size: usize,
    pub lambda_ref: f64,
    pub max_observed: f64,
    pub violations: u64,
    pub seed: u64,
}

impl PurityReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

fn random_ensemble(rng: &mut ChaCha8Rng, n: usize, size: usize) -> Vec<(f64, ProductParams)> {
    let members = rng.gen_range(1..=size);
    let raw: Vec<f64> = (0..members).map(|_| rng.gen::<f64>() + 1e-12).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter()
        .map(|w| {
            let a = (0..n).map(|_| rng.gen::<f64>()).collect();
            let theta = (0..n).map(|_| rng.gen_range(0.0..TAU)).collect();
            (
                w / total,
                ProductParams::new(a, theta).expect("sampled in range"),
            )
        })
        .collect()
}

/// Checks that no random separable mixture of up to `ensemble_size`
/// product states overlaps `psi` by more than `lambda_ref`.
pub fn verify_pure_sufficiency(
    psi: &PureState,
    lambda_ref: f64,
    n_trials: u64,
    ensemble_size: usize,
    seed: u64,
) -> Result<PurityReport> {
    let mut max_observed = f64::NEG_INFINITY;
    let mut violations = 0;
    for trial in 0..n_trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        let ensemble = random_ensemble(&mut rng, psi.n_sites(), ensemble_size.max(1));
        let v = mixture_overlap(psi, &ensemble)?;
        max_observed = max_observed.max(v);
        if v > lambda_ref + PURITY_TOL {
            violations += 1;
        }
    }
    Ok(PurityReport {
        trials: n_trials,
        ensemble_size,
        lambda_ref,
        max_observed,
        violations,
        seed,
    })
}

/// ‖S(4;2) − (x |first⟩ + y |second⟩)‖ with (first, second) =
/// (GHZ′₄, ψ₄), or the reverse when `swapped`.
pub fn dicke_decomposition_residual(x: f64, y: f64, swapped: bool) -> Result<f64> {
    let dicke = make_dicke(4, 2)?;
    let ghz_prime = make_ghz_prime(4)?;
    let psi4 = make_basic_ti(&"1100".parse::<SeedPattern>()?);
    let (first, second) = if swapped {
        (&psi4, &ghz_prime)
    } else {
        (&ghz_prime, &psi4)
    };
    let combo: Vec<Complex64> = first
        .amplitudes()
        .iter()
        .zip(second.amplitudes())
        .map(|(p, q)| p * x + q * y)
        .collect();
    Ok(dicke
        .amplitudes()
        .iter()
        .zip(&combo)
        .map(|(d, c)| (d - c).norm_sqr())
        .sum::<f64>()
        .sqrt())
}

/// S(4;2) = √(1/3) GHZ′₄ + √(2/3) ψ₄ to 1e-12.
pub fn verify_dicke_decomposition() -> Result<bool> {
    let x = (1.0f64 / 3.0).sqrt();
    let y = (2.0f64 / 3.0).sqrt();
    Ok(dicke_decomposition_residual(x, y, false)? < 1e-12)
}

/// Equal-weight mixture of |1…1⟩ and |0…0⟩, the incoherent counterpart
/// of GHZ.
pub fn incoherent_ghz_mixture(n: usize) -> Result<Vec<(f64, ProductParams)>> {
    Ok(vec![
        (0.5, ProductParams::uniform(n, 1.0, 0.0)?),
        (0.5, ProductParams::uniform(n, 0.0, 0.0)?),
    ])
}
