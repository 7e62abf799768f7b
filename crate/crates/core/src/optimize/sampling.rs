use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{spread, Evaluator, Method, OptimizationResult, SampleConfig};
use crate::error::{Error, Result};
use crate::overlap::ProductParams;
use crate::qstate::PureState;

/// One evaluated sample, possibly its boundary-rounded companion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledCandidate {
    pub index: u64,
    pub rounded: bool,
    pub lambda: f64,
    pub params: ProductParams,
}

/// Best sample plus the highest-ranked candidates for refinement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleOutcome {
    pub result: OptimizationResult,
    pub candidates: Vec<SampledCandidate>,
}

/// Class values of sample `index`, drawn from its own stream.
fn draw(master_seed: u64, index: u64, classes: usize) -> (Vec<f64>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    let a = (0..classes).map(|_| rng.gen::<f64>()).collect();
    let theta = (0..classes).map(|_| rng.gen_range(0.0..TAU)).collect();
    (a, theta)
}

fn round_a(a: &[f64]) -> Vec<f64> {
    a.iter().map(|&x| if x < 0.5 { 0.0 } else { 1.0 }).collect()
}

fn check(psi: &PureState, cfg: &SampleConfig) -> Result<()> {
    cfg.validate()?;
    if cfg.tying.n_sites() != psi.n_sites() {
        return Err(Error::DimensionMismatch {
            left: psi.n_sites(),
            right: cfg.tying.n_sites(),
        });
    }
    Ok(())
}

/// (value, rounded) for every sample index.
fn evaluate_all(psi: &PureState, cfg: &SampleConfig) -> Vec<(f64, bool)> {
    let k = cfg.tying.n_classes();
    let class_of = cfg.tying.class_of();
    (0..cfg.n_samples)
        .into_par_iter()
        .map_init(
            || Evaluator::new(psi),
            |ev, i| {
                let (a, theta) = draw(cfg.master_seed, i, k);
                let plain = ev.tied(class_of, &a, &theta);
                if cfg.include_boundary_rounding {
                    let r = ev.tied(class_of, &round_a(&a), &theta);
                    if r > plain {
                        return (r, true);
                    }
                }
                (plain, false)
            },
        )
        .collect()
}

fn candidate(cfg: &SampleConfig, index: u64, rounded: bool, lambda: f64) -> SampledCandidate {
    let (a, theta) = draw(cfg.master_seed, index, cfg.tying.n_classes());
    let a = if rounded { round_a(&a) } else { a };
    SampledCandidate {
        index,
        rounded,
        lambda,
        params: spread(&cfg.tying, &a, &theta),
    }
}

/// Uniform sampling of the tied parameters; the best sample wins, the
/// earliest index on ties. The outcome depends only on `(master_seed, i)`
/// per sample, so any parallel split gives the same result.
pub fn sample_maximize(psi: &PureState, cfg: &SampleConfig) -> Result<OptimizationResult> {
    Ok(sample_top_k(psi, cfg, 1)?.result)
}

/// As [`sample_maximize`], also returning the `k` best distinct candidates
/// ranked by (lambda descending, index ascending). Rounded candidates with
/// bit-identical values are kept once.
pub fn sample_top_k(psi: &PureState, cfg: &SampleConfig, k: usize) -> Result<SampleOutcome> {
    check(psi, cfg)?;
    let values = evaluate_all(psi, cfg);

    let mut best = f64::NEG_INFINITY;
    let mut improved_at = 0u64;
    for (i, &(v, _)) in values.iter().enumerate() {
        if v > best {
            best = v;
            improved_at = i as u64;
        }
    }

    let mut order: Vec<u64> = (0..cfg.n_samples).collect();
    order.sort_by(|&x, &y| {
        values[y as usize]
            .0
            .total_cmp(&values[x as usize].0)
            .then(x.cmp(&y))
    });
    let mut seen_vertex_values: Vec<u64> = Vec::new();
    let mut candidates = Vec::with_capacity(k);
    for i in order {
        if candidates.len() >= k {
            break;
        }
        let (v, rounded) = values[i as usize];
        if rounded {
            if seen_vertex_values.contains(&v.to_bits()) {
                continue;
            }
            seen_vertex_values.push(v.to_bits());
        }
        candidates.push(candidate(cfg, i, rounded, v));
    }

    let top = &candidates[0];
    let result = OptimizationResult {
        lambda: top.lambda,
        best_params: top.params.clone(),
        samples_used: cfg.n_samples,
        improved_at: Some(improved_at),
        method: Method::Sampling,
        master_seed: Some(cfg.master_seed),
        steady: Some(cfg.n_samples - 1 - improved_at >= cfg.stall_window),
    };
    Ok(SampleOutcome { result, candidates })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::overlap::{overlap_sq, tying_from_seed, TyingPattern};
    use crate::qstate::{make_basic_ti, make_ghz, make_w};

    #[test]
    fn streams_are_index_keyed() {
        assert_eq!(draw(5, 17, 2), draw(5, 17, 2));
        assert_ne!(draw(5, 17, 2), draw(5, 18, 2));
        assert_ne!(draw(5, 17, 2), draw(6, 17, 2));
        let (a, t) = draw(1, 0, 3);
        assert!(a.iter().all(|x| (0.0..1.0).contains(x)));
        assert!(t.iter().all(|x| (0.0..TAU).contains(x)));
    }

    #[test]
    fn ghz4_free_hits_vertex() {
        let psi = make_ghz(4).unwrap();
        let cfg = SampleConfig::new(TyingPattern::free(4).unwrap(), 2000, 3).unwrap();
        let r = sample_maximize(&psi, &cfg).unwrap();
        assert!((r.lambda - 0.5).abs() < 1e-12);
    }

    #[test]
    fn psi1a5_sampling_bounds() {
        let psi = make_basic_ti(&"11000".parse().unwrap());
        // all-equal sites cap the overlap at 5 a²(1 − a)³ ≤ 0.1728
        let cfg = SampleConfig::new(TyingPattern::symmetric(5).unwrap(), 20_000, 11).unwrap();
        let r = sample_maximize(&psi, &cfg).unwrap();
        assert!(
            r.lambda <= 0.1728 + 1e-12 && r.lambda > 0.172,
            "{}",
            r.lambda
        );
        let cfg = SampleConfig::new(TyingPattern::free(5).unwrap(), 20_000, 11).unwrap();
        let r = sample_maximize(&psi, &cfg).unwrap();
        assert!((r.lambda - 0.2).abs() < 1e-12, "{}", r.lambda);
    }

    #[test]
    fn result_params_reproduce_lambda() {
        let psi = make_w(4).unwrap();
        let seed = "1100".parse().unwrap();
        let cfg = SampleConfig::new(tying_from_seed(&seed), 500, 9).unwrap();
        let out = sample_top_k(&psi, &cfg, 5).unwrap();
        assert!(
            (overlap_sq(&psi, &out.result.best_params).unwrap() - out.result.lambda).abs() < 1e-12
        );
        assert_eq!(out.candidates.len(), 5);
        for w in out.candidates.windows(2) {
            assert!(w[0].lambda >= w[1].lambda);
        }
        for c in &out.candidates {
            assert!((overlap_sq(&psi, &c.params).unwrap() - c.lambda).abs() < 1e-12);
        }
    }

    #[test]
    fn rounding_off_never_hits_vertex_exactly() {
        let psi = make_ghz(3).unwrap();
        let cfg = SampleConfig::new(TyingPattern::symmetric(3).unwrap(), 500, 2)
            .unwrap()
            .with_boundary_rounding(false);
        let r = sample_maximize(&psi, &cfg).unwrap();
        assert!(r.lambda < 0.5);
    }

    #[test]
    fn mismatched_tying_rejected() {
        let psi = make_ghz(3).unwrap();
        let cfg = SampleConfig::new(TyingPattern::free(4).unwrap(), 10, 2).unwrap();
        assert!(sample_maximize(&psi, &cfg).is_err());
    }
}
