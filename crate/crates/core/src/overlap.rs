//! Overlap of a pure state with the fully separable product ansatz
//!
//! ```text
//! |φ(a, θ)⟩ = ⊗_i ( √a_i |1⟩_i + e^{iθ_i} √(1 − a_i) |0⟩_i )
//! ```
//!
//! together with its gradient and the tying patterns that encode symmetry
//! ansätze (sites in one class share `a` and `θ`).

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qstate::{BasicKind, BasicState, PureState, SeedPattern, MAX_SITES, MIN_SITES};

/// Reduces an angle into [0, 2π).
pub fn wrap_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// Per-site parameters of a product state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ParamsRepr")]
pub struct ProductParams {
    a: Vec<f64>,
    theta: Vec<f64>,
}

#[derive(Deserialize)]
struct ParamsRepr {
    a: Vec<f64>,
    theta: Vec<f64>,
}

impl TryFrom<ParamsRepr> for ProductParams {
    type Error = Error;

    fn try_from(r: ParamsRepr) -> Result<Self> {
        ProductParams::new(r.a, r.theta)
    }
}

impl ProductParams {
    pub fn new(a: Vec<f64>, theta: Vec<f64>) -> Result<Self> {
        if a.len() != theta.len() {
            return Err(Error::LengthMismatch {
                expected: a.len(),
                found: theta.len(),
            });
        }
        if !(MIN_SITES..=MAX_SITES).contains(&a.len()) {
            return Err(Error::SiteCount(a.len()));
        }
        if let Some(&bad) = a.iter().find(|x| !(0.0..=1.0).contains(*x)) {
            return Err(Error::ParameterOutOfRange {
                name: "a",
                value: bad,
            });
        }
        if let Some(&bad) = theta.iter().find(|x| !x.is_finite()) {
            return Err(Error::ParameterOutOfRange {
                name: "theta",
                value: bad,
            });
        }
        Ok(Self {
            a,
            theta: theta.into_iter().map(wrap_angle).collect(),
        })
    }

    /// Product basis state `bits` (phases zero).
    pub fn vertex(bits: &SeedPattern) -> Self {
        let a = bits
            .bits()
            .into_iter()
            .map(|b| if b { 1.0 } else { 0.0 })
            .collect();
        Self {
            a,
            theta: vec![0.0; bits.n_sites()],
        }
    }

    /// Every site in the same single-qubit state.
    pub fn uniform(n: usize, a: f64, theta: f64) -> Result<Self> {
        Self::new(vec![a; n], vec![theta; n])
    }

    pub fn n_sites(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    /// Same parameters translated `steps` sites along the ring.
    pub fn rotated(&self, steps: usize) -> Self {
        let n = self.n_sites();
        let mut a = vec![0.0; n];
        let mut theta = vec![0.0; n];
        for i in 0..n {
            a[(i + steps) % n] = self.a[i];
            theta[(i + steps) % n] = self.theta[i];
        }
        Self { a, theta }
    }

    /// Each a rounded to the nearer of {0, 1}; phases kept.
    pub fn rounded(&self) -> Self {
        Self {
            a: self
                .a
                .iter()
                .map(|&x| if x < 0.5 { 0.0 } else { 1.0 })
                .collect(),
            theta: self.theta.clone(),
        }
    }

    pub(crate) fn local_factors(&self) -> Vec<(Complex64, Complex64)> {
        self.a
            .iter()
            .zip(&self.theta)
            .map(|(&a, &t)| {
                (
                    Complex64::new(a.sqrt(), 0.0),
                    Complex64::from_polar((1.0 - a).sqrt(), t),
                )
            })
            .collect()
    }
}

/// Amplitudes of a product of single-site vectors `(⟨1|v⟩, ⟨0|v⟩)`,
/// site 0 most significant.
pub(crate) fn kron_factors(factors: &[(Complex64, Complex64)]) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(1 << factors.len());
    out.push(Complex64::new(1.0, 0.0));
    for &(one, zero) in factors {
        let prev = std::mem::take(&mut out);
        out.reserve(prev.len() * 2);
        for p in prev {
            out.push(p * zero);
            out.push(p * one);
        }
    }
    out
}

pub fn product_vector(params: &ProductParams) -> PureState {
    let amps = kron_factors(&params.local_factors());
    PureState::normalized(params.n_sites(), amps).expect("product of unit vectors")
}

fn check_pair(psi: &PureState, n: usize) -> Result<()> {
    if psi.n_sites() != n {
        return Err(Error::DimensionMismatch {
            left: psi.n_sites(),
            right: n,
        });
    }
    Ok(())
}

#[inline]
pub(crate) fn inner_with(psi: &[Complex64], phi: &[Complex64]) -> Complex64 {
    psi.iter().zip(phi).map(|(p, f)| p.conj() * f).sum()
}

/// Overlap from precomputed single-site factors, without validation.
#[inline]
pub(crate) fn overlap_from_factors(psi: &PureState, factors: &[(Complex64, Complex64)]) -> f64 {
    let phi = kron_factors(factors);
    inner_with(psi.amplitudes(), &phi).norm_sqr().min(1.0)
}

/// |⟨ψ|φ(params)⟩|².
pub fn overlap_sq(psi: &PureState, params: &ProductParams) -> Result<f64> {
    check_pair(psi, params.n_sites())?;
    Ok(overlap_from_factors(psi, &params.local_factors()))
}

/// Σ_k w_k |⟨ψ|φ_k⟩|², the overlap of ψ with a convex mixture of product
/// states. Weights are used as given.
pub fn mixture_overlap(psi: &PureState, ensemble: &[(f64, ProductParams)]) -> Result<f64> {
    ensemble
        .iter()
        .map(|(w, p)| overlap_sq(psi, p).map(|o| w * o))
        .sum()
}

/// For every site i, the pair (A1, A0) with ⟨ψ|φ⟩ = u1_i A1 + u0_i A0,
/// where (u1_i, u0_i) is the local vector of site i.
pub(crate) fn site_contractions(
    psi: &PureState,
    factors: &[(Complex64, Complex64)],
) -> Vec<(Complex64, Complex64)> {
    let n = factors.len();
    let amps = psi.amplitudes();
    (0..n)
        .map(|i| {
            let left = kron_factors(&factors[..i]);
            let right = kron_factors(&factors[i + 1..]);
            let rlen = right.len();
            let mut acc = [Complex64::new(0.0, 0.0); 2];
            for (l, lv) in left.iter().enumerate() {
                for (bit, slot) in acc.iter_mut().enumerate() {
                    let base = ((l << 1) | bit) * rlen;
                    let s: Complex64 = amps[base..base + rlen]
                        .iter()
                        .zip(&right)
                        .map(|(p, r)| p.conj() * r)
                        .sum();
                    *slot += lv * s;
                }
            }
            (acc[1], acc[0])
        })
        .collect()
}

/// Partial derivatives of [`overlap_sq`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OverlapGradient {
    pub d_a: Vec<f64>,
    pub d_theta: Vec<f64>,
    /// Sites where `a` sits on the boundary of [0, 1] and `d_a` is the
    /// one-sided (inward) derivative; it may be infinite there.
    pub one_sided: Vec<bool>,
}

impl OverlapGradient {
    pub fn norm(&self) -> f64 {
        self.d_a
            .iter()
            .chain(&self.d_theta)
            .map(|g| g * g)
            .sum::<f64>()
            .sqrt()
    }
}

/// Analytic gradient of |⟨ψ|φ⟩|² with respect to every a_i and θ_i.
pub fn overlap_sq_grad(psi: &PureState, params: &ProductParams) -> Result<OverlapGradient> {
    check_pair(psi, params.n_sites())?;
    let factors = params.local_factors();
    let contractions = site_contractions(psi, &factors);
    let n = params.n_sites();
    let mut d_a = Vec::with_capacity(n);
    let mut d_theta = Vec::with_capacity(n);
    let mut one_sided = Vec::with_capacity(n);
    for (i, (a1, a0)) in contractions.into_iter().enumerate() {
        let a = params.a[i];
        let cross = a1.conj() * Complex64::from_polar(1.0, params.theta[i]) * a0;
        let s = (a * (1.0 - a)).sqrt();
        let boundary = a == 0.0 || a == 1.0;
        let coupling = if boundary {
            if cross.re.abs() < 1e-15 {
                0.0
            } else {
                (1.0 - 2.0 * a).signum() * cross.re.signum() * f64::INFINITY
            }
        } else {
            (1.0 - 2.0 * a) / s * cross.re
        };
        d_a.push(a1.norm_sqr() - a0.norm_sqr() + coupling);
        d_theta.push(-2.0 * s * cross.im);
        one_sided.push(boundary);
    }
    Ok(OverlapGradient {
        d_a,
        d_theta,
        one_sided,
    })
}

/// Partition of sites into classes whose parameters are constrained equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "TyingRepr")]
pub struct TyingPattern {
    class_of: Vec<usize>,
}

#[derive(Deserialize)]
struct TyingRepr {
    class_of: Vec<usize>,
}

impl TryFrom<TyingRepr> for TyingPattern {
    type Error = Error;

    fn try_from(r: TyingRepr) -> Result<Self> {
        TyingPattern::new(r.class_of)
    }
}

impl TyingPattern {
    pub fn new(class_of: Vec<usize>) -> Result<Self> {
        if !(MIN_SITES..=MAX_SITES).contains(&class_of.len()) {
            return Err(Error::SiteCount(class_of.len()));
        }
        let k = class_of.iter().max().map_or(0, |m| m + 1);
        let mut seen = vec![false; k];
        for &c in &class_of {
            seen[c] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::NonContiguousLabels);
        }
        Ok(Self { class_of })
    }

    /// Every site free (N classes).
    pub fn free(n: usize) -> Result<Self> {
        Self::new((0..n).collect())
    }

    /// Permutation-invariant ansatz (one class).
    pub fn symmetric(n: usize) -> Result<Self> {
        Self::new(vec![0; n])
    }

    /// The ansatz a basic state suggests: all-equal for GHZ and W, and the
    /// seed split otherwise.
    pub fn ansatz(basic: &BasicState) -> Self {
        match basic.kind {
            BasicKind::Ghz | BasicKind::W => {
                Self::symmetric(basic.n_sites()).expect("valid site count")
            }
            BasicKind::GhzPrime | BasicKind::Seeded => tying_from_seed(&basic.seed),
        }
    }

    pub fn n_sites(&self) -> usize {
        self.class_of.len()
    }

    pub fn n_classes(&self) -> usize {
        self.class_of.iter().max().map_or(0, |m| m + 1)
    }

    pub fn class_of(&self) -> &[usize] {
        &self.class_of
    }

    pub fn is_symmetric(&self) -> bool {
        self.n_classes() == 1
    }

    /// Sites of each class, in site order.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n_classes()];
        for (site, &c) in self.class_of.iter().enumerate() {
            out[c].push(site);
        }
        out
    }

    /// Same partition, labels ignored.
    pub fn same_partition(&self, other: &TyingPattern) -> bool {
        let mut a = self.classes();
        let mut b = other.classes();
        a.sort();
        b.sort();
        a == b
    }

    /// Per-class means of site parameters (θ averaged on the circle).
    pub fn project(&self, params: &ProductParams) -> (Vec<f64>, Vec<f64>) {
        let classes = self.classes();
        let a = classes
            .iter()
            .map(|c| c.iter().map(|&i| params.a[i]).sum::<f64>() / c.len() as f64)
            .collect();
        let theta = classes
            .iter()
            .map(|c| {
                let z: Complex64 = c
                    .iter()
                    .map(|&i| Complex64::from_polar(1.0, params.theta[i]))
                    .sum();
                if z.norm() < 1e-12 {
                    params.theta[c[0]]
                } else {
                    wrap_angle(z.arg())
                }
            })
            .collect();
        (a, theta)
    }
}

/// Copies per-class values onto the sites of each class.
pub fn expand_tied(
    tying: &TyingPattern,
    class_a: &[f64],
    class_theta: &[f64],
) -> Result<ProductParams> {
    let k = tying.n_classes();
    if class_a.len() != k || class_theta.len() != k {
        return Err(Error::LengthMismatch {
            expected: k,
            found: class_a.len().max(class_theta.len()),
        });
    }
    ProductParams::new(
        tying.class_of.iter().map(|&c| class_a[c]).collect(),
        tying.class_of.iter().map(|&c| class_theta[c]).collect(),
    )
}

/// Class 0 holds the sites where the seed has a 1, class 1 the rest; a
/// constant seed gives the single-class ansatz.
pub fn tying_from_seed(seed: &SeedPattern) -> TyingPattern {
    if seed.is_product() {
        return TyingPattern::symmetric(seed.n_sites()).expect("valid site count");
    }
    TyingPattern {
        class_of: seed
            .bits()
            .into_iter()
            .map(|b| if b { 0 } else { 1 })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{cyclic_shift, make_basic_ti, make_ghz, make_w};
    use std::f64::consts::PI;

    fn seed(s: &str) -> SeedPattern {
        s.parse().unwrap()
    }

    #[test]
    fn product_vector_examples() {
        let p = ProductParams::new(vec![1.0; 3], vec![0.3, 1.0, 2.0]).unwrap();
        let v = product_vector(&p);
        assert!((v.amplitude("111").unwrap().re - 1.0).abs() < 1e-15);

        let third = 1.0 / 3.0;
        let p = ProductParams::uniform(3, third, 0.0).unwrap();
        let v = product_vector(&p);
        let expect = third.sqrt() * (2.0 / 3.0);
        assert!((v.amplitude("100").unwrap().re - expect).abs() < 1e-15);

        let p = ProductParams::new(vec![0.0, 0.0], vec![PI, PI]).unwrap();
        let v = product_vector(&p);
        assert!((v.amplitude("00").unwrap().norm() - 1.0).abs() < 1e-15);
        assert_eq!(v.support().len(), 1);
    }

    #[test]
    fn params_validation() {
        assert!(ProductParams::new(vec![0.5, 1.1], vec![0.0, 0.0]).is_err());
        assert!(ProductParams::new(vec![0.5, 0.5], vec![0.0]).is_err());
        let p = ProductParams::new(vec![0.5, 0.5], vec![-0.5, 7.0]).unwrap();
        assert!(p.theta().iter().all(|t| (0.0..TAU).contains(t)));
    }

    #[test]
    fn overlap_examples() {
        let ghz = make_ghz(3).unwrap();
        let p = ProductParams::uniform(3, 1.0, 0.0).unwrap();
        assert!((overlap_sq(&ghz, &p).unwrap() - 0.5).abs() < 1e-15);

        let w = make_w(3).unwrap();
        let p = ProductParams::uniform(3, 1.0 / 3.0, 0.7).unwrap();
        assert!((overlap_sq(&w, &p).unwrap() - 4.0 / 9.0).abs() < 1e-15);

        let psi4 = make_basic_ti(&seed("1100"));
        let p = ProductParams::new(vec![1.0, 1.0, 0.0, 0.0], vec![0.1, 2.0, 3.0, 4.0]).unwrap();
        assert!((overlap_sq(&psi4, &p).unwrap() - 0.25).abs() < 1e-15);

        assert!(matches!(
            overlap_sq(&psi4, &ProductParams::uniform(3, 0.5, 0.0).unwrap()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn gradient_vanishes_at_w_maximum() {
        let w = make_w(3).unwrap();
        let p = ProductParams::uniform(3, 1.0 / 3.0, 1.1).unwrap();
        let g = overlap_sq_grad(&w, &p).unwrap();
        assert!(g.norm() < 1e-9, "{g:?}");
        assert!(g.one_sided.iter().all(|b| !b));
    }

    #[test]
    fn theta_gradient_zero_for_real_states() {
        let s = make_basic_ti(&seed("110000"));
        let p = ProductParams::new(vec![0.2, 0.4, 0.6, 0.8, 0.3, 0.9], vec![0.0; 6]).unwrap();
        let g = overlap_sq_grad(&s, &p).unwrap();
        assert!(g.d_theta.iter().all(|d| d.abs() < 1e-14));
    }

    #[test]
    fn boundary_gradient_is_one_sided() {
        let w = make_w(3).unwrap();
        let p = ProductParams::new(vec![0.0, 0.5, 0.5], vec![0.0; 3]).unwrap();
        let g = overlap_sq_grad(&w, &p).unwrap();
        assert!(g.one_sided[0]);
        assert_eq!(g.d_a[0], f64::INFINITY);
        assert!(g.d_a[1].is_finite());
    }

    #[test]
    fn tying_examples() {
        let t = tying_from_seed(&seed("11000"));
        assert_eq!(t.classes(), vec![vec![0, 1], vec![2, 3, 4]]);
        let t = tying_from_seed(&seed("10100"));
        assert_eq!(t.classes(), vec![vec![0, 2], vec![1, 3, 4]]);
        let t = tying_from_seed(&seed("1111"));
        assert!(t.is_symmetric());

        let pi = TyingPattern::symmetric(4).unwrap();
        let p = expand_tied(&pi, &[0.3], &[1.0]).unwrap();
        assert!(p.a().iter().all(|&a| a == 0.3));

        let id = TyingPattern::free(3).unwrap();
        let p = expand_tied(&id, &[0.1, 0.2, 0.3], &[0.4, 0.5, 0.6]).unwrap();
        assert_eq!(p.a(), &[0.1, 0.2, 0.3]);
        assert_eq!(p.theta(), &[0.4, 0.5, 0.6]);

        assert!(TyingPattern::new(vec![0, 2, 0]).is_err());
        assert!(expand_tied(&pi, &[0.3, 0.2], &[1.0, 1.0]).is_err());
    }

    #[test]
    fn ring_symmetry_of_overlap() {
        let s = make_basic_ti(&seed("110100"));
        let w = make_w(6).unwrap();
        let p = ProductParams::new(
            vec![0.1, 0.7, 0.3, 0.9, 0.5, 0.2],
            vec![0.3, 1.4, 2.2, 0.1, 5.0, 4.0],
        )
        .unwrap();
        for state in [s, w] {
            let base = overlap_sq(&state, &p).unwrap();
            for k in 1..6 {
                let moved = overlap_sq(&cyclic_shift(&state, k), &p.rotated(k)).unwrap();
                assert!((base - moved).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn mixture_of_vertices() {
        let ghz = make_ghz(3).unwrap();
        let ens = vec![
            (0.5, ProductParams::vertex(&seed("111"))),
            (0.5, ProductParams::vertex(&seed("000"))),
        ];
        assert!((mixture_overlap(&ghz, &ens).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn json_shape() {
        let p = ProductParams::new(vec![0.5, 1.0], vec![0.0, 1.0]).unwrap();
        let v = serde_json::to_value(&p).unwrap();
        assert_eq!(v["a"][1], 1.0);
        assert_eq!(v["theta"][1], 1.0);
        let bad = serde_json::json!({"a": [2.0, 0.0], "theta": [0.0, 0.0]});
        assert!(serde_json::from_value::<ProductParams>(bad).is_err());
    }
}
