//! Exact maximal overlaps for the families that admit a closed form.

use std::fmt;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::overlap::{overlap_sq, wrap_angle, ProductParams};
use crate::qstate::{PureState, SeedPattern};

/// Non-negative rational in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fraction {
    pub num: u128,
    pub den: u128,
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Fraction {
    pub fn new(num: u128, den: u128) -> Self {
        assert!(den != 0, "zero denominator");
        let g = gcd(num, den).max(1);
        Self {
            num: num / g,
            den: den / g,
        }
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl Serialize for Fraction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// How the phases of a maximizer template may vary without changing the
/// overlap.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PhaseFreedom {
    /// Only the listed phases.
    Fixed,
    /// Any phases (a product basis state).
    Any,
    /// Any common phase θ_i = θ₀ for all i.
    AllEqual,
    /// Any phases with Σ_{i∈sites} θ_i ≡ value (mod 2π).
    SumEquals { sites: Vec<usize>, value: f64 },
    /// Any phases with Σ_n (θ_{2n−1} − θ_{2n}) ≡ value (mod 2π).
    AlternatingSum { value: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Maximizer {
    pub params: ProductParams,
    pub phases: PhaseFreedom,
}

impl Maximizer {
    fn new(params: ProductParams, phases: PhaseFreedom) -> Self {
        Self { params, phases }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosedFormResult {
    pub family: String,
    #[serde(rename = "lambda")]
    pub lambda_max: f64,
    #[serde(rename = "lambda_exact")]
    pub exact: Option<Fraction>,
    pub maximizers: Vec<Maximizer>,
}

impl ClosedFormResult {
    /// Largest deviation between `lambda_max` and the overlap at each
    /// listed maximizer.
    pub fn self_consistency(&self, psi: &PureState) -> Result<f64> {
        self.maximizers.iter().try_fold(0.0f64, |acc, m| {
            Ok(acc.max((overlap_sq(psi, &m.params)? - self.lambda_max).abs()))
        })
    }
}

fn check_c(c: f64) -> Result<()> {
    if (0.0..=1.0).contains(&c) {
        Ok(())
    } else {
        Err(Error::CoefficientOutOfRange(c))
    }
}

/// √c|1…1⟩ + e^{iφ}√(1−c)|0…0⟩ has Λ = max(c, 1−c) at a vertex.
pub fn lambda_ghz_family(n: usize, c: f64, phi: f64) -> Result<ClosedFormResult> {
    check_c(c)?;
    let mut maximizers = Vec::new();
    if c >= 1.0 - c {
        maximizers.push(Maximizer::new(
            ProductParams::uniform(n, 1.0, 0.0)?,
            PhaseFreedom::Any,
        ));
    }
    if 1.0 - c >= c {
        maximizers.push(Maximizer::new(
            ProductParams::uniform(n, 0.0, phi / n as f64)?,
            PhaseFreedom::SumEquals {
                sites: (0..n).collect(),
                value: wrap_angle(phi),
            },
        ));
    }
    Ok(ClosedFormResult {
        family: format!("GHZ_{n}(c={c}, phi={phi})"),
        lambda_max: c.max(1.0 - c),
        exact: None,
        maximizers,
    })
}

/// √c|1010…⟩ + e^{iφ}√(1−c)|0101…⟩ (even n) has Λ = max(c, 1−c).
pub fn lambda_ghz_prime_family(n: usize, c: f64, phi: f64) -> Result<ClosedFormResult> {
    check_c(c)?;
    if !n.is_multiple_of(2) {
        return Err(Error::OddSiteCount { family: "GHZ'", n });
    }
    let odd = SeedPattern::alternating(n)?;
    let even = odd.rotated(1);
    let mut maximizers = Vec::new();
    if c >= 1.0 - c {
        maximizers.push(Maximizer::new(
            ProductParams::vertex(&odd),
            PhaseFreedom::Any,
        ));
    }
    if 1.0 - c >= c {
        // θ on odd sites carries φ·2/n so the alternating sum equals φ
        let theta = (0..n)
            .map(|i| {
                if i % 2 == 0 {
                    2.0 * phi / n as f64
                } else {
                    0.0
                }
            })
            .collect();
        let a = even
            .bits()
            .into_iter()
            .map(|b| if b { 1.0 } else { 0.0 })
            .collect();
        maximizers.push(Maximizer::new(
            ProductParams::new(a, theta)?,
            PhaseFreedom::AlternatingSum {
                value: wrap_angle(phi),
            },
        ));
    }
    Ok(ClosedFormResult {
        family: format!("GHZ'_{n}(c={c}, phi={phi})"),
        lambda_max: c.max(1.0 - c),
        exact: None,
        maximizers,
    })
}

/// W_N: Λ = (1 − 1/N)^{N−1} at a_i = 1/N with equal phases.
pub fn lambda_w(n: usize) -> Result<ClosedFormResult> {
    let params = ProductParams::uniform(n, 1.0 / n as f64, 0.0)?;
    let k = (n - 1) as u32;
    let exact = Fraction::new(((n - 1) as u128).pow(k), (n as u128).pow(k));
    Ok(ClosedFormResult {
        family: format!("W_{n}"),
        lambda_max: (1.0 - 1.0 / n as f64).powi(k as i32),
        exact: Some(exact),
        maximizers: vec![Maximizer::new(params, PhaseFreedom::AllEqual)],
    })
}

/// Seeded basic states with a known closed form: (label, seed, Λ as p/q).
pub const SOLVED_BASIC_STATES: &[(&str, &str, u128, u128)] = &[
    ("psi_4", "1100", 1, 4),
    ("psi^1a_5", "11000", 1, 5),
    ("psi^1b_5", "10100", 1, 5),
    ("psi^1a_6", "110000", 1, 6),
    ("psi^1b_6", "101000", 1, 6),
    ("psi^2a_6", "111000", 1, 6),
    ("psi^3_6", "100100", 1, 3),
    ("psi^1_8", "10001000", 1, 4),
    ("psi^2_8", "11001100", 1, 4),
];

fn orbit_vertices(seed: &SeedPattern) -> Vec<Maximizer> {
    seed.canonical()
        .orbit()
        .iter()
        .map(|s| Maximizer::new(ProductParams::vertex(s), PhaseFreedom::Any))
        .collect()
}

/// Λ for the basic state generated by `seed`, if it is one of the solved
/// families. Lookup is by orbit, so any rotation of a listed seed matches.
pub fn lambda_known_basic(seed: &SeedPattern) -> Option<ClosedFormResult> {
    let n = seed.n_sites();
    let rep = seed.canonical();
    if rep.is_product() {
        return Some(ClosedFormResult {
            family: format!("product |{seed}>"),
            lambda_max: 1.0,
            exact: Some(Fraction::new(1, 1)),
            maximizers: vec![Maximizer::new(
                ProductParams::vertex(seed),
                PhaseFreedom::Any,
            )],
        });
    }
    if rep == SeedPattern::single_excitation(n).ok()? {
        return lambda_w(n).ok();
    }
    if n.is_multiple_of(2) && rep == SeedPattern::alternating(n).ok()? {
        return Some(ClosedFormResult {
            family: format!("GHZ'_{n}"),
            lambda_max: 0.5,
            exact: Some(Fraction::new(1, 2)),
            maximizers: orbit_vertices(&rep),
        });
    }
    SOLVED_BASIC_STATES.iter().find_map(|&(label, bits, p, q)| {
        let s: SeedPattern = bits.parse().ok()?;
        (s == rep).then(|| {
            let exact = Fraction::new(p, q);
            ClosedFormResult {
                family: label.to_string(),
                lambda_max: exact.value(),
                exact: Some(exact),
                maximizers: orbit_vertices(&rep),
            }
        })
    })
}

/// c0|100⟩ + c1 e^{iα}|010⟩ + c2 e^{iβ}|001⟩.
pub fn make_w_prime(c: [f64; 3], alpha: f64, beta: f64) -> Result<PureState> {
    let mut amps = vec![Complex64::new(0.0, 0.0); 8];
    amps[0b100] = Complex64::new(c[0], 0.0);
    amps[0b010] = Complex64::from_polar(c[1], alpha);
    amps[0b001] = Complex64::from_polar(c[2], beta);
    PureState::from_amplitudes(3, amps)
}

/// Interior stationary point of the W′ problem, when it exists.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WPrimeInterior {
    /// Products √(t1 t2), √(t2 t3), √(t1 t3) with t_i = a_i / (1 − a_i).
    pub xyz: [f64; 3],
    pub a: [f64; 3],
    pub value: f64,
    /// Every a_i < 1/2. Reported only: f is A√(1 − a) + B√a in each a_i
    /// separately, hence concave along every axis, so a feasible
    /// stationary point needs no such test.
    pub all_below_half: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WPrimeSolution {
    pub result: ClosedFormResult,
    pub interior: Option<WPrimeInterior>,
    pub boundary_value: f64,
}

/// Solves the three-qubit W′ problem through its stationary system.
///
/// The optimal phases make every term of the overlap real and positive;
/// the stationarity conditions then become the linear system
///
/// ```text
/// c1 x + c2 z = c0
/// c0 x + c2 y = c1
/// c0 z + c1 y = c2
/// ```
///
/// in the products x, y, z, whose ratios recover a_i. A feasible interior
/// point is compared against the vertices.
pub fn w_prime_solver(c0: f64, c1: f64, c2: f64, alpha: f64, beta: f64) -> Result<WPrimeSolution> {
    let c = [c0, c1, c2];
    if let Some(&bad) = c.iter().find(|v| v.is_nan() || **v < 0.0) {
        return Err(Error::ParameterOutOfRange {
            name: "c_i",
            value: bad,
        });
    }
    let norm = c0 * c0 + c1 * c1 + c2 * c2;
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::NotNormalized(norm));
    }
    // renormalize residual rounding so the state constructor accepts it
    let s = norm.sqrt();
    let c = c.map(|v| v / s);
    let psi = make_w_prime(c, alpha, beta)?;

    let theta1 = (alpha + beta) / 2.0;
    let theta3 = (alpha - beta) / 2.0;
    let theta = vec![theta1, -theta3, theta3];

    // vertices |100⟩, |010⟩, |001⟩ give c_α²; faces add nothing beyond
    // them (each face is a two-party problem with Schmidt weights c_α²)
    let mut best_val = f64::NEG_INFINITY;
    let mut candidates: Vec<(f64, Maximizer)> = Vec::new();
    for (k, ck) in c.iter().enumerate() {
        let mut a = vec![0.0; 3];
        a[k] = 1.0;
        let p = ProductParams::new(a, theta.clone())?;
        let v = ck * ck;
        best_val = best_val.max(v);
        candidates.push((v, Maximizer::new(p, PhaseFreedom::Any)));
    }
    let boundary_value = best_val;

    let mut interior = None;
    if c.iter().all(|&v| v > 1e-12) {
        let [c0, c1, c2] = c;
        let x = (1.0 - 2.0 * c2 * c2) / (2.0 * c0 * c1);
        let y = (1.0 - 2.0 * c0 * c0) / (2.0 * c1 * c2);
        let z = (1.0 - 2.0 * c1 * c1) / (2.0 * c0 * c2);
        if x > 0.0 && y > 0.0 && z > 0.0 {
            let t = [x * z / y, x * y / z, y * z / x];
            let a = t.map(|ti| ti / (1.0 + ti));
            let params = ProductParams::new(a.to_vec(), theta.clone())?;
            let value = overlap_sq(&psi, &params)?;
            best_val = best_val.max(value);
            candidates.push((value, Maximizer::new(params, PhaseFreedom::Fixed)));
            interior = Some(WPrimeInterior {
                xyz: [x, y, z],
                a,
                value,
                all_below_half: a.iter().all(|&ai| ai < 0.5),
            });
        }
    }

    let maximizers = candidates
        .into_iter()
        .filter(|(v, _)| (best_val - v).abs() <= 1e-12)
        .map(|(_, m)| m)
        .collect();
    Ok(WPrimeSolution {
        result: ClosedFormResult {
            family: format!(
                "W'(c=[{:.6}, {:.6}, {:.6}], alpha={alpha}, beta={beta})",
                c[0], c[1], c[2]
            ),
            lambda_max: best_val,
            exact: None,
            maximizers,
        },
        interior,
        boundary_value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{make_basic_ti, make_ghz_family, make_ghz_prime_family, make_w};
    use std::f64::consts::PI;

    fn seed(s: &str) -> SeedPattern {
        s.parse().unwrap()
    }

    #[test]
    fn ghz_family_values() {
        let r = lambda_ghz_family(3, 0.5, 0.0).unwrap();
        assert_eq!(r.lambda_max, 0.5);
        assert_eq!(r.maximizers.len(), 2);
        let psi = make_ghz_family(3, 0.5, 0.0).unwrap();
        assert!(r.self_consistency(&psi).unwrap() < 1e-10);

        let r = lambda_ghz_family(6, 0.7, PI / 3.0).unwrap();
        assert_eq!(r.lambda_max, 0.7);
        let r = lambda_ghz_family(4, 1.0, 0.0).unwrap();
        assert_eq!(r.lambda_max, 1.0);
        assert!(lambda_ghz_family(4, -0.1, 0.0).is_err());
    }

    #[test]
    fn ghz_prime_family_values() {
        let r = lambda_ghz_prime_family(4, 0.5, 0.0).unwrap();
        assert_eq!(r.lambda_max, 0.5);
        let verts: Vec<String> = r
            .maximizers
            .iter()
            .map(|m| {
                m.params
                    .a()
                    .iter()
                    .map(|&a| if a == 1.0 { '1' } else { '0' })
                    .collect()
            })
            .collect();
        assert!(verts.contains(&"1010".to_string()) && verts.contains(&"0101".to_string()));

        assert_eq!(
            lambda_ghz_prime_family(8, 0.25, 0.0).unwrap().lambda_max,
            0.75
        );
        assert_eq!(
            lambda_ghz_prime_family(6, 0.0, 0.0).unwrap().lambda_max,
            1.0
        );
        let psi = make_ghz_prime_family(6, 0.3, 1.0).unwrap();
        let r = lambda_ghz_prime_family(6, 0.3, 1.0).unwrap();
        assert!(r.self_consistency(&psi).unwrap() < 1e-10);
    }

    #[test]
    fn w_values() {
        let r = lambda_w(3).unwrap();
        assert!((r.lambda_max - 4.0 / 9.0).abs() < 1e-15);
        assert_eq!(r.exact.unwrap().to_string(), "4/9");
        assert_eq!(lambda_w(2).unwrap().lambda_max, 0.5);
        assert!((lambda_w(6).unwrap().lambda_max - 0.401_877_572_016_460_9).abs() < 1e-15);
        for n in 2..=8 {
            let r = lambda_w(n).unwrap();
            assert!(r.lambda_max >= 1.0 / n as f64);
            assert!(r.self_consistency(&make_w(n).unwrap()).unwrap() < 1e-10);
        }
    }

    #[test]
    fn known_basic_lookup() {
        let r = lambda_known_basic(&seed("1100")).unwrap();
        assert_eq!(r.lambda_max, 0.25);
        let mut verts: Vec<String> = r
            .maximizers
            .iter()
            .map(|m| {
                m.params
                    .a()
                    .iter()
                    .map(|&a| if a == 1.0 { '1' } else { '0' })
                    .collect()
            })
            .collect();
        verts.sort();
        assert_eq!(verts, vec!["0011", "0110", "1001", "1100"]);

        let r = lambda_known_basic(&seed("100100")).unwrap();
        assert!((r.lambda_max - 1.0 / 3.0).abs() < 1e-15);
        assert!(r
            .maximizers
            .iter()
            .any(|m| m.params.a() == [1.0, 0.0, 0.0, 1.0, 0.0, 0.0]));

        assert!(lambda_known_basic(&seed("110100")).is_none());
        // rotations share the entry
        assert_eq!(lambda_known_basic(&seed("0011")).unwrap().lambda_max, 0.25);
    }

    #[test]
    fn catalog_is_self_consistent() {
        for &(_, bits, _, _) in SOLVED_BASIC_STATES {
            let s = seed(bits);
            let r = lambda_known_basic(&s).unwrap();
            assert!(
                r.self_consistency(&make_basic_ti(&s)).unwrap() < 1e-10,
                "{bits}"
            );
        }
    }

    #[test]
    fn w_prime_symmetric_point() {
        let c = 3f64.sqrt().recip();
        let sol = w_prime_solver(c, c, c, 0.0, 0.0).unwrap();
        assert!((sol.result.lambda_max - 4.0 / 9.0).abs() < 1e-12);
        let int = sol.interior.unwrap();
        assert!(int.all_below_half);
        for a in int.a {
            assert!((a - 1.0 / 3.0).abs() < 1e-12);
        }
        // x, y, z satisfy the linear system
        let [x, y, z] = int.xyz;
        assert!((c * x + c * z - c).abs() < 1e-12);
        assert!((c * x + c * y - c).abs() < 1e-12);
        assert!((c * z + c * y - c).abs() < 1e-12);
    }

    #[test]
    fn w_prime_product_and_degenerate() {
        let sol = w_prime_solver(1.0, 0.0, 0.0, 0.3, 0.2).unwrap();
        assert_eq!(sol.result.lambda_max, 1.0);
        let sol = w_prime_solver(0.8, 0.6, 0.0, 1.0, 2.0).unwrap();
        assert!((sol.result.lambda_max - 0.64).abs() < 1e-12);
        assert!(sol.interior.is_none());
        assert!(w_prime_solver(0.5, 0.5, 0.5, 0.0, 0.0).is_err());
        assert!(w_prime_solver(-0.6, 0.8, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn w_prime_interior_above_half_is_kept() {
        let c = [0.5706253464339404, 0.48077803256252893, 0.6657621177360945];
        let s = c.iter().map(|v| v * v).sum::<f64>().sqrt();
        let c = c.map(|v| v / s);
        let sol = w_prime_solver(c[0], c[1], c[2], 1.0, 2.0).unwrap();
        let int = sol.interior.unwrap();
        assert!(!int.all_below_half);
        assert!(int.value > sol.boundary_value + 0.01);
        assert_eq!(sol.result.lambda_max, int.value);
        // no coordinate move improves on it
        let psi = make_w_prime(c, 1.0, 2.0).unwrap();
        let best = &sol.result.maximizers[0].params;
        for k in 0..3 {
            for d in [-1e-3, 1e-3] {
                let mut a = best.a().to_vec();
                a[k] += d;
                let p = ProductParams::new(a, best.theta().to_vec()).unwrap();
                assert!(overlap_sq(&psi, &p).unwrap() < int.value);
            }
        }
    }

    #[test]
    fn w_prime_never_below_vertices() {
        let cases = [
            [0.9, 0.3, 0.3],
            [0.2, 0.5, 0.8],
            [0.6, 0.6, 0.5291502622129182],
        ];
        for raw in cases {
            let s = raw.iter().map(|v| v * v).sum::<f64>().sqrt();
            let c = raw.map(|v| v / s);
            let sol = w_prime_solver(c[0], c[1], c[2], 0.4, 1.9).unwrap();
            let vmax = c.iter().map(|v| v * v).fold(0.0, f64::max);
            assert!(sol.result.lambda_max >= vmax - 1e-12);
            let psi = make_w_prime(c, 0.4, 1.9).unwrap();
            assert!(sol.result.self_consistency(&psi).unwrap() < 1e-10);
        }
    }
}
