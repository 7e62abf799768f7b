//! Pure states of qubits arranged on a ring.
//!
//! Basis convention: site 1 is the most significant bit of the basis index,
//! and bit value 1 is the single-party state |1⟩. The string `"110"` is
//! therefore basis index 6 of a three-site register.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub const MIN_SITES: usize = 2;
pub const MAX_SITES: usize = 16;

/// Amplitudes with modulus below this are treated as absent when reading
/// off the support of a state.
pub const SUPPORT_EPS: f64 = 1e-12;

pub(crate) const NORM_TOL: f64 = 1e-12;

fn check_sites(n: usize) -> Result<()> {
    if (MIN_SITES..=MAX_SITES).contains(&n) {
        Ok(())
    } else {
        Err(Error::SiteCount(n))
    }
}

#[inline]
fn full_mask(n: usize) -> u32 {
    if n == 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// Moves the content of every site to the next site along the ring,
/// `steps` times. With site 1 as the most significant bit this is a right
/// rotation of the bitstring.
#[inline]
pub(crate) fn rotate_bits(bits: u32, n: usize, steps: usize) -> u32 {
    let s = steps % n;
    if s == 0 {
        return bits;
    }
    ((bits >> s) | (bits << (n - s))) & full_mask(n)
}

/// Bit of `index` holding `site` (0-based, site 0 is the most significant).
#[inline]
pub(crate) fn site_bit(index: usize, n: usize, site: usize) -> bool {
    (index >> (n - 1 - site)) & 1 == 1
}

fn format_bits(bits: u32, n: usize) -> String {
    (0..n)
        .map(|site| {
            if site_bit(bits as usize, n, site) {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}

/// Normalized amplitude vector over the 2^N computational basis.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n_sites: usize,
    amps: Vec<Complex64>,
}

impl PureState {
    /// Wraps an amplitude vector that is already normalized to 1e-12.
    pub fn from_amplitudes(n_sites: usize, amps: Vec<Complex64>) -> Result<Self> {
        check_sites(n_sites)?;
        if amps.len() != 1 << n_sites {
            return Err(Error::LengthMismatch {
                expected: 1 << n_sites,
                found: amps.len(),
            });
        }
        let norm_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm_sq));
        }
        Ok(Self { n_sites, amps })
    }

    /// Rescales `amps` to unit norm. Fails on the zero vector.
    pub fn normalized(n_sites: usize, mut amps: Vec<Complex64>) -> Result<Self> {
        check_sites(n_sites)?;
        if amps.len() != 1 << n_sites {
            return Err(Error::LengthMismatch {
                expected: 1 << n_sites,
                found: amps.len(),
            });
        }
        let norm_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if norm_sq.is_nan() || norm_sq <= 0.0 || !norm_sq.is_finite() {
            return Err(Error::NotNormalized(norm_sq));
        }
        let scale = norm_sq.sqrt().recip();
        amps.iter_mut().for_each(|a| *a *= scale);
        Ok(Self { n_sites, amps })
    }

    /// The basis state labelled by `bits`.
    pub fn basis(seed: &SeedPattern) -> Self {
        let n = seed.n_sites();
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[seed.mask() as usize] = Complex64::new(1.0, 0.0);
        Self { n_sites: n, amps }
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, bits: &str) -> Result<Complex64> {
        let seed: SeedPattern = bits.parse()?;
        if seed.n_sites() != self.n_sites {
            return Err(Error::DimensionMismatch {
                left: self.n_sites,
                right: seed.n_sites(),
            });
        }
        Ok(self.amps[seed.mask() as usize])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        if self.n_sites != other.n_sites {
            return Err(Error::DimensionMismatch {
                left: self.n_sites,
                right: other.n_sites,
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Euclidean distance between amplitude vectors (no phase alignment).
    pub fn distance(&self, other: &PureState) -> Result<f64> {
        if self.n_sites != other.n_sites {
            return Err(Error::DimensionMismatch {
                left: self.n_sites,
                right: other.n_sites,
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    /// Basis strings carrying non-negligible amplitude.
    pub fn support(&self) -> Vec<SeedPattern> {
        self.amps
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() > SUPPORT_EPS)
            .map(|(i, _)| SeedPattern::from_mask(self.n_sites, i as u32))
            .collect()
    }

    /// Term periods of all basis strings in the support.
    pub fn term_periods(&self) -> BTreeSet<usize> {
        self.support().iter().map(term_period).collect()
    }

    /// True when a one-site cyclic shift reproduces the state to `tol`.
    pub fn is_translation_invariant(&self, tol: f64) -> bool {
        let shifted = cyclic_shift(self, 1);
        self.distance(&shifted).map(|d| d <= tol).unwrap_or(false)
    }

    /// True when every amplitude is a non-negative real after removing the
    /// phase of the first nonzero amplitude.
    pub fn is_phase_aligned(&self) -> bool {
        let Some(lead) = self.amps.iter().find(|a| a.norm() > SUPPORT_EPS) else {
            return true;
        };
        let rot = lead.conj() / lead.norm();
        self.amps.iter().all(|a| {
            let r = a * rot;
            r.im.abs() <= 1e-12 && r.re >= -1e-12
        })
    }

    /// True when all support strings share one Hamming weight.
    pub fn has_constant_weight(&self) -> bool {
        let mut weights = self.support().into_iter().map(|s| s.weight());
        match weights.next() {
            Some(w) => weights.all(|v| v == w),
            None => true,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct StateRepr {
    n: usize,
    amps: Vec<[f64; 2]>,
}

impl Serialize for PureState {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        StateRepr {
            n: self.n_sites,
            amps: self.amps.iter().map(|a| [a.re, a.im]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PureState {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = StateRepr::deserialize(d)?;
        let amps = repr
            .amps
            .into_iter()
            .map(|[re, im]| Complex64::new(re, im))
            .collect();
        PureState::from_amplitudes(repr.n, amps).map_err(serde::de::Error::custom)
    }
}

/// A basis bitstring on the ring; generates a basic translation-invariant
/// state from its cyclic orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SeedPattern {
    n_sites: usize,
    mask: u32,
}

impl SeedPattern {
    pub fn new(bits: &[bool]) -> Result<Self> {
        check_sites(bits.len())?;
        let n = bits.len();
        let mask = bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .fold(0u32, |m, (i, _)| m | 1 << (n - 1 - i));
        Ok(Self { n_sites: n, mask })
    }

    pub(crate) fn from_mask(n_sites: usize, mask: u32) -> Self {
        debug_assert!(mask <= full_mask(n_sites));
        Self { n_sites, mask }
    }

    /// `"10…0"`, the W seed.
    pub fn single_excitation(n: usize) -> Result<Self> {
        check_sites(n)?;
        Ok(Self::from_mask(n, 1 << (n - 1)))
    }

    /// `"1010…10"`, the GHZ′ seed.
    pub fn alternating(n: usize) -> Result<Self> {
        check_sites(n)?;
        let mask = (0..n)
            .filter(|i| i % 2 == 0)
            .fold(0u32, |m, i| m | 1 << (n - 1 - i));
        Ok(Self::from_mask(n, mask))
    }

    pub fn all_ones(n: usize) -> Result<Self> {
        check_sites(n)?;
        Ok(Self::from_mask(n, full_mask(n)))
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn bit(&self, site: usize) -> bool {
        site_bit(self.mask as usize, self.n_sites, site)
    }

    pub fn bits(&self) -> Vec<bool> {
        (0..self.n_sites).map(|i| self.bit(i)).collect()
    }

    pub fn weight(&self) -> u32 {
        self.mask.count_ones()
    }

    /// All-zero and all-one seeds generate product basis states.
    pub fn is_product(&self) -> bool {
        self.mask == 0 || self.mask == full_mask(self.n_sites)
    }

    pub fn rotated(&self, steps: usize) -> Self {
        Self::from_mask(self.n_sites, rotate_bits(self.mask, self.n_sites, steps))
    }

    /// Distinct cyclic shifts, in shift order starting from the seed.
    pub fn orbit(&self) -> Vec<SeedPattern> {
        (0..term_period(self)).map(|s| self.rotated(s)).collect()
    }

    /// Lexicographically largest rotation, used as the orbit representative.
    pub fn canonical(&self) -> Self {
        (0..self.n_sites)
            .map(|s| self.rotated(s))
            .max()
            .expect("n_sites >= 2")
    }
}

impl fmt::Display for SeedPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_bits(self.mask, self.n_sites))
    }
}

impl FromStr for SeedPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::MalformedSeed(s.to_string())),
            })
            .collect::<Result<Vec<_>>>()?;
        if bits.is_empty() {
            return Err(Error::MalformedSeed(s.to_string()));
        }
        SeedPattern::new(&bits)
    }
}

impl Serialize for SeedPattern {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for SeedPattern {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Translates every single-party state `steps` sites along the ring.
pub fn cyclic_shift(state: &PureState, steps: usize) -> PureState {
    let n = state.n_sites;
    let mut out = vec![Complex64::new(0.0, 0.0); state.dim()];
    for (idx, amp) in state.amps.iter().enumerate() {
        out[rotate_bits(idx as u32, n, steps) as usize] = *amp;
    }
    PureState {
        n_sites: n,
        amps: out,
    }
}

/// Minimal number of shifts returning the seed to itself.
pub fn term_period(seed: &SeedPattern) -> usize {
    (1..=seed.n_sites)
        .find(|&p| seed.rotated(p) == *seed)
        .expect("rotation by n is the identity")
}

/// Equal superposition of the distinct cyclic shifts of `seed`.
pub fn make_basic_ti(seed: &SeedPattern) -> PureState {
    let orbit = seed.orbit();
    let amp = Complex64::new((orbit.len() as f64).sqrt().recip(), 0.0);
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << seed.n_sites];
    for term in &orbit {
        amps[term.mask as usize] = amp;
    }
    PureState {
        n_sites: seed.n_sites,
        amps,
    }
}

fn two_term(n: usize, first: u32, second: u32, c: f64, phi: f64) -> Result<PureState> {
    check_sites(n)?;
    if !(0.0..=1.0).contains(&c) {
        return Err(Error::CoefficientOutOfRange(c));
    }
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    amps[first as usize] += Complex64::new(c.sqrt(), 0.0);
    amps[second as usize] += Complex64::from_polar((1.0 - c).sqrt(), phi);
    Ok(PureState { n_sites: n, amps })
}

/// √c |1…1⟩ + e^{iφ} √(1−c) |0…0⟩.
pub fn make_ghz_family(n: usize, c: f64, phi: f64) -> Result<PureState> {
    check_sites(n)?;
    two_term(n, full_mask(n), 0, c, phi)
}

pub fn make_ghz(n: usize) -> Result<PureState> {
    make_ghz_family(n, 0.5, 0.0)
}

/// √c |1010…10⟩ + e^{iφ} √(1−c) |0101…01⟩ for even `n`.
pub fn make_ghz_prime_family(n: usize, c: f64, phi: f64) -> Result<PureState> {
    check_sites(n)?;
    if !n.is_multiple_of(2) {
        return Err(Error::OddSiteCount { family: "GHZ'", n });
    }
    let odd = SeedPattern::alternating(n)?.mask;
    two_term(n, odd, odd ^ full_mask(n), c, phi)
}

pub fn make_ghz_prime(n: usize) -> Result<PureState> {
    make_ghz_prime_family(n, 0.5, 0.0)
}

pub fn make_w(n: usize) -> Result<PureState> {
    Ok(make_basic_ti(&SeedPattern::single_excitation(n)?))
}

/// Dicke state with `zeros` sites in |0⟩ and the rest in |1⟩, i.e. the
/// equal superposition of all weight-(n − zeros) strings.
pub fn make_dicke(n: usize, zeros: usize) -> Result<PureState> {
    check_sites(n)?;
    if zeros == 0 || zeros >= n {
        return Err(Error::DickeOutOfRange {
            n,
            k: zeros,
            max: n - 1,
        });
    }
    let weight = (n - zeros) as u32;
    let terms: Vec<usize> = (0..1usize << n)
        .filter(|i| i.count_ones() == weight)
        .collect();
    let amp = Complex64::new((terms.len() as f64).sqrt().recip(), 0.0);
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    for i in terms {
        amps[i] = amp;
    }
    Ok(PureState { n_sites: n, amps })
}

/// One orbit representative per cyclic-equivalence class of n-bit strings,
/// ordered by term period and then by representative (descending).
///
/// Constant strings are included; they are the period-1 classes and are
/// flagged by [`SeedPattern::is_product`].
pub fn enumerate_basic_seeds(n: usize) -> Result<Vec<SeedPattern>> {
    check_sites(n)?;
    let mut reps: Vec<SeedPattern> = (0..=full_mask(n))
        .map(|m| SeedPattern::from_mask(n, m))
        .filter(|s| s.canonical() == *s)
        .collect();
    reps.sort_by(|a, b| term_period(a).cmp(&term_period(b)).then(b.cmp(a)));
    Ok(reps)
}

/// Periods realized by entangling (non-constant) seeds of length `n`, plus
/// period 1 for the constant seeds.
pub fn available_periods(n: usize) -> Result<BTreeSet<usize>> {
    Ok(enumerate_basic_seeds(n)?.iter().map(term_period).collect())
}

/// Which member of the catalog a basic state is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasicKind {
    Ghz,
    W,
    GhzPrime,
    Seeded,
}

/// A basic translation-invariant state together with the descriptor the
/// optimizers need to build its symmetry ansatz.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BasicState {
    pub label: String,
    pub kind: BasicKind,
    /// Generating string; for GHZ this is the all-ones string.
    pub seed: SeedPattern,
    pub state: PureState,
}

impl BasicState {
    pub fn ghz(n: usize) -> Result<Self> {
        Ok(Self {
            label: format!("GHZ_{n}"),
            kind: BasicKind::Ghz,
            seed: SeedPattern::all_ones(n)?,
            state: make_ghz(n)?,
        })
    }

    pub fn w(n: usize) -> Result<Self> {
        Ok(Self {
            label: format!("W_{n}"),
            kind: BasicKind::W,
            seed: SeedPattern::single_excitation(n)?,
            state: make_w(n)?,
        })
    }

    pub fn ghz_prime(n: usize) -> Result<Self> {
        Ok(Self {
            label: format!("GHZ'_{n}"),
            kind: BasicKind::GhzPrime,
            seed: SeedPattern::alternating(n)?,
            state: make_ghz_prime(n)?,
        })
    }

    pub fn seeded(label: impl Into<String>, seed: SeedPattern) -> Self {
        Self {
            label: label.into(),
            kind: BasicKind::Seeded,
            seed,
            state: make_basic_ti(&seed),
        }
    }

    pub fn n_sites(&self) -> usize {
        self.state.n_sites()
    }

    /// Period of the generating term (1 for GHZ, N for W, 2 for GHZ′).
    pub fn period(&self) -> usize {
        match self.kind {
            BasicKind::Ghz => 1,
            _ => term_period(&self.seed),
        }
    }

    /// Squared modulus shared by every nonzero amplitude.
    pub fn common_weight(&self) -> f64 {
        1.0 / self.state.support().len() as f64
    }
}

/// One term of a hybrid superposition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HybridComponent {
    pub basic: BasicState,
    pub coefficient: Complex64,
}

/// Coefficient-weighted superposition of basic states.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HybridSpec {
    pub components: Vec<HybridComponent>,
}

/// Result of [`HybridSpec::superpose`].
#[derive(Debug, Clone, PartialEq)]
pub struct Superposition {
    pub state: PureState,
    /// Whether the components were mutually orthogonal (to 1e-12).
    pub orthogonal: bool,
    /// Term periods of the individual components.
    pub component_periods: Vec<usize>,
}

impl HybridSpec {
    pub fn new(components: Vec<(BasicState, Complex64)>) -> Self {
        Self {
            components: components
                .into_iter()
                .map(|(basic, coefficient)| HybridComponent { basic, coefficient })
                .collect(),
        }
    }

    /// √c·first + e^{iφ}√(1−c)·second.
    pub fn two_component(first: BasicState, second: BasicState, c: f64, phi: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&c) {
            return Err(Error::CoefficientOutOfRange(c));
        }
        Ok(Self::new(vec![
            (first, Complex64::new(c.sqrt(), 0.0)),
            (second, Complex64::from_polar((1.0 - c).sqrt(), phi)),
        ]))
    }

    pub fn single(basic: BasicState) -> Self {
        Self::new(vec![(basic, Complex64::new(1.0, 0.0))])
    }

    pub fn n_sites(&self) -> Option<usize> {
        self.components.first().map(|c| c.basic.n_sites())
    }

    pub fn superpose(&self) -> Result<Superposition> {
        superpose(self)
    }
}

/// Sums the weighted components and renormalizes.
pub fn superpose(spec: &HybridSpec) -> Result<Superposition> {
    let first = spec
        .components
        .first()
        .ok_or_else(|| Error::UnsupportedHybrid("no components".into()))?;
    let n = first.basic.n_sites();
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    for comp in &spec.components {
        if comp.basic.n_sites() != n {
            return Err(Error::DimensionMismatch {
                left: n,
                right: comp.basic.n_sites(),
            });
        }
        for (acc, a) in amps.iter_mut().zip(comp.basic.state.amplitudes()) {
            *acc += comp.coefficient * a;
        }
    }
    let mut orthogonal = true;
    for (i, a) in spec.components.iter().enumerate() {
        for b in &spec.components[i + 1..] {
            if a.basic.state.inner(&b.basic.state)?.norm() > NORM_TOL {
                orthogonal = false;
            }
        }
    }
    Ok(Superposition {
        state: PureState::normalized(n, amps)?,
        orthogonal,
        component_periods: spec.components.iter().map(|c| c.basic.period()).collect(),
    })
}
