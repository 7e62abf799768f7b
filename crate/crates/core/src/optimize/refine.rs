use std::f64::consts::PI;

use num_complex::Complex64;

use super::{angle_factor, Evaluator, Method, OptimizationResult};
use crate::error::{Error, Result};
use crate::overlap::{
    expand_tied, overlap_sq, site_contractions, wrap_angle, ProductParams, TyingPattern,
};
use crate::qstate::PureState;

/// Sweeps stop once one sweep gains less than this.
pub const REFINE_TOL: f64 = 1e-12;
pub const REFINE_MAX_SWEEPS: usize = 10_000;

const SCAN_POINTS: usize = 16;
const GOLDEN_WIDTH: f64 = 1e-11;
const POLISH_ITERS: usize = 200;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section maximization of `f` on [lo, hi].
fn golden_max(f: &mut impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > GOLDEN_WIDTH {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Coarse scan of [lo, hi] (endpoints included) then golden section around
/// the best point. Returns the new coordinate only if it beats `current`.
fn line_max(
    f: &mut impl FnMut(f64) -> f64,
    lo: f64,
    hi: f64,
    x0: f64,
    f0: f64,
) -> Option<(f64, f64)> {
    let step = (hi - lo) / SCAN_POINTS as f64;
    let (mut bx, mut bf) = (x0, f0);
    for j in 0..=SCAN_POINTS {
        let x = lo + step * j as f64;
        let v = f(x);
        if v > bf {
            (bx, bf) = (x, v);
        }
    }
    let (gx, gf) = golden_max(f, (bx - step).max(lo), (bx + step).min(hi));
    if gf > bf {
        (bx, bf) = (gx, gf);
    }
    (bf > f0).then_some((bx, bf))
}

/// One pass of coordinate ascent over every class value.
fn coordinate_sweep(
    ev: &mut Evaluator,
    class_of: &[usize],
    a: &mut [f64],
    theta: &mut [f64],
    mut value: f64,
) -> f64 {
    for c in 0..a.len() {
        let a0 = a[c];
        let mut fa = |x: f64| {
            let old = a[c];
            a[c] = x;
            let v = ev.tied(class_of, a, theta);
            a[c] = old;
            v
        };
        if let Some((x, v)) = line_max(&mut fa, 0.0, 1.0, a0, value) {
            a[c] = x;
            value = v;
        }
        let t0 = theta[c];
        let mut ft = |x: f64| {
            let old = theta[c];
            theta[c] = x;
            let v = ev.tied(class_of, a, theta);
            theta[c] = old;
            v
        };
        if let Some((x, v)) = line_max(&mut ft, t0 - PI, t0 + PI, t0, value) {
            theta[c] = x;
            value = v;
        }
    }
    value
}

/// Value and gradient in the angle chart; `x = [u_0.., θ_0..]`.
fn angle_value_grad(psi: &PureState, class_of: &[usize], x: &[f64]) -> (f64, Vec<f64>) {
    let k = x.len() / 2;
    let (u, theta) = x.split_at(k);
    let factors: Vec<(Complex64, Complex64)> = class_of
        .iter()
        .map(|&c| angle_factor(u[c], theta[c]))
        .collect();
    let contractions = site_contractions(psi, &factors);
    let (a1, a0) = contractions[0];
    let z = factors[0].0 * a1 + factors[0].1 * a0;
    let mut grad = vec![0.0; 2 * k];
    for (site, &c) in class_of.iter().enumerate() {
        let (a1, a0) = contractions[site];
        let phase = Complex64::from_polar(1.0, theta[c]);
        let du = u[c].cos() * a1 - phase * u[c].sin() * a0;
        let dt = Complex64::i() * phase * u[c].cos() * a0;
        grad[c] += 2.0 * (z.conj() * du).re;
        grad[k + c] += 2.0 * (z.conj() * dt).re;
    }
    (z.norm_sqr(), grad)
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// BFGS ascent in the chart a = sin²u, which is smooth at the boundary.
fn bfgs_polish(
    psi: &PureState,
    ev: &mut Evaluator,
    class_of: &[usize],
    x: &mut Vec<f64>,
    value: f64,
) -> f64 {
    let m = x.len();
    let k = m / 2;
    let eval = |ev: &mut Evaluator, x: &[f64]| ev.angles(class_of, &x[..k], &x[k..]);
    let identity = || {
        let mut h = vec![0.0; m * m];
        for i in 0..m {
            h[i * m + i] = 1.0;
        }
        h
    };
    let mut h = identity();
    let (_, mut g) = angle_value_grad(psi, class_of, x);
    let mut fx = value;
    for _ in 0..POLISH_ITERS {
        if dot(&g, &g).sqrt() < 1e-14 {
            break;
        }
        let mut d: Vec<f64> = (0..m).map(|i| dot(&h[i * m..(i + 1) * m], &g)).collect();
        let mut slope = dot(&d, &g);
        if slope <= 0.0 {
            h = identity();
            d = g.clone();
            slope = dot(&g, &g);
        }
        let mut t = 1.0;
        let mut next = None;
        while t > 1e-14 {
            let trial: Vec<f64> = x.iter().zip(&d).map(|(xi, di)| xi + t * di).collect();
            let ft = eval(ev, &trial);
            if ft >= fx + 1e-4 * t * slope {
                next = Some((trial, ft));
                break;
            }
            t *= 0.5;
        }
        let Some((trial, ft)) = next else { break };
        let (_, g_new) = angle_value_grad(psi, class_of, &trial);
        let s: Vec<f64> = trial.iter().zip(x.iter()).map(|(a, b)| a - b).collect();
        // curvature of the minimized objective −f
        let y: Vec<f64> = g.iter().zip(&g_new).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-18 {
            let rho = 1.0 / sy;
            let hy: Vec<f64> = (0..m).map(|i| dot(&h[i * m..(i + 1) * m], &y)).collect();
            let yhy = dot(&y, &hy);
            for i in 0..m {
                for j in 0..m {
                    h[i * m + j] += -rho * (hy[i] * s[j] + s[i] * hy[j])
                        + (rho * rho * yhy + rho) * s[i] * s[j];
                }
            }
        }
        let gain = ft - fx;
        *x = trial;
        g = g_new;
        fx = ft;
        if gain < 1e-16 {
            break;
        }
    }
    fx
}

/// Maps chart coordinates back to (a, θ), absorbing signs into the phase.
fn from_angles(u: f64, theta: f64) -> (f64, f64) {
    let (s, c) = u.sin_cos();
    let a = (s * s).clamp(0.0, 1.0);
    let flip = s * c < 0.0;
    (a, wrap_angle(if flip { theta + PI } else { theta }))
}

const CORNER_MAX_CLASSES: usize = 12;

/// Best assignment of every class `a` to {0, 1} with the phases kept.
fn best_corner(ev: &mut Evaluator, class_of: &[usize], theta: &[f64]) -> Option<(Vec<f64>, f64)> {
    let k = theta.len();
    if k > CORNER_MAX_CLASSES {
        return None;
    }
    let mut best: Option<(Vec<f64>, f64)> = None;
    for mask in 0u32..1 << k {
        let a: Vec<f64> = (0..k).map(|c| f64::from((mask >> c) & 1)).collect();
        let v = ev.tied(class_of, &a, theta);
        if best.as_ref().is_none_or(|b| v > b.1) {
            best = Some((a, v));
        }
    }
    best
}

/// Local maximization of the overlap over the tied parameters.
///
/// Alternates coordinate ascent (scan plus golden section per class value,
/// boundary values included) with a BFGS polish in the chart a = sin²u,
/// until a full round gains less than [`REFINE_TOL`]. At a stall, the
/// corners a ∈ {0, 1}^k (phases kept) are checked and the search resumes
/// from a better corner if there is one. Each step is accepted
/// only if it improves the overlap, so the result never falls below the
/// start. A start that breaks the tying is first projected onto it; if the
/// projection is worse than the start and refinement cannot recover, the
/// start itself is returned.
pub fn refine(
    psi: &PureState,
    start: &ProductParams,
    tying: &TyingPattern,
) -> Result<OptimizationResult> {
    if tying.n_sites() != psi.n_sites() {
        return Err(Error::DimensionMismatch {
            left: psi.n_sites(),
            right: tying.n_sites(),
        });
    }
    let start_value = overlap_sq(psi, start)?;
    let class_of = tying.class_of();
    let (mut a, mut theta) = tying.project(start);
    let mut ev = Evaluator::new(psi);
    let mut value = ev.tied(class_of, &a, &theta);

    for _ in 0..REFINE_MAX_SWEEPS {
        let before = value;
        value = coordinate_sweep(&mut ev, class_of, &mut a, &mut theta, value);

        let mut x: Vec<f64> = a
            .iter()
            .map(|&ai| ai.sqrt().asin())
            .chain(theta.iter().copied())
            .collect();
        let polished = bfgs_polish(psi, &mut ev, class_of, &mut x, value);
        if polished > value {
            let k = a.len();
            let mapped: Vec<(f64, f64)> = (0..k).map(|c| from_angles(x[c], x[k + c])).collect();
            let (na, nt): (Vec<f64>, Vec<f64>) = mapped.into_iter().unzip();
            let check = ev.tied(class_of, &na, &nt);
            if check > value {
                a = na;
                theta = nt;
                value = check;
            }
        }
        if value - before < REFINE_TOL {
            // a coordinate-wise stationary point; jump to a better corner if one exists
            match best_corner(&mut ev, class_of, &theta) {
                Some((corner, v)) if v > value + REFINE_TOL => {
                    a = corner;
                    value = v;
                }
                _ => break,
            }
        }
    }

    let params = expand_tied(tying, &a, &theta)?;
    let lambda = overlap_sq(psi, &params)?;
    let (best_params, lambda) = if lambda >= start_value {
        (params, lambda)
    } else {
        (start.clone(), start_value)
    };
    Ok(OptimizationResult {
        lambda,
        best_params,
        samples_used: 0,
        improved_at: None,
        method: Method::Refined,
        master_seed: None,
        steady: None,
    })
}
