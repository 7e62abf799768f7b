//! Numerical estimation of the maximal product-state overlap.

mod grid;
mod refine;
mod sampling;

pub use grid::{grid_oracle, GRID_BUDGET};
pub use refine::{refine, REFINE_MAX_SWEEPS, REFINE_TOL};
pub use sampling::{sample_maximize, sample_top_k, SampleOutcome, SampledCandidate};

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::overlap::{expand_tied, ProductParams, TyingPattern};
use crate::qstate::{BasicState, HybridSpec, PureState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Sampling,
    Refined,
    Grid,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Sampling => "sampling",
            Method::Refined => "refined",
            Method::Grid => "grid",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleConfig {
    pub n_samples: u64,
    pub master_seed: u64,
    pub tying: TyingPattern,
    pub include_boundary_rounding: bool,
    pub stall_window: u64,
}

/// Samples without improvement after which a run counts as steady.
pub const DEFAULT_STALL_WINDOW: u64 = 10_000;

impl SampleConfig {
    /// Boundary rounding on, stall window 10⁴ (or `n_samples` if smaller).
    pub fn new(tying: TyingPattern, n_samples: u64, master_seed: u64) -> Result<Self> {
        let cfg = Self {
            n_samples,
            master_seed,
            tying,
            include_boundary_rounding: true,
            stall_window: DEFAULT_STALL_WINDOW.min(n_samples),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_stall_window(mut self, window: u64) -> Result<Self> {
        self.stall_window = window;
        self.validate()?;
        Ok(self)
    }

    pub fn with_boundary_rounding(mut self, on: bool) -> Self {
        self.include_boundary_rounding = on;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_samples == 0 {
            return Err(Error::InvalidConfig("n_samples must be at least 1".into()));
        }
        if self.stall_window > self.n_samples {
            return Err(Error::InvalidConfig(format!(
                "stall_window {} exceeds n_samples {}",
                self.stall_window, self.n_samples
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub lambda: f64,
    pub best_params: ProductParams,
    pub samples_used: u64,
    /// Sample index of the last improvement (sampling only).
    pub improved_at: Option<u64>,
    pub method: Method,
    pub master_seed: Option<u64>,
    /// At least `stall_window` samples passed after the last improvement.
    pub steady: Option<bool>,
}

impl OptimizationResult {
    /// Geometric entanglement 1 − Λ.
    pub fn geometric_entanglement(&self) -> f64 {
        1.0 - self.lambda
    }
}

/// Allocation-free overlap evaluation for one state.
pub(crate) struct Evaluator<'a> {
    psi: &'a [Complex64],
    n: usize,
    buf: Vec<Complex64>,
    factors: Vec<(Complex64, Complex64)>,
}

impl<'a> Evaluator<'a> {
    pub(crate) fn new(psi: &'a PureState) -> Self {
        Self {
            psi: psi.amplitudes(),
            n: psi.n_sites(),
            buf: vec![Complex64::new(0.0, 0.0); psi.dim()],
            factors: vec![(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)); psi.n_sites()],
        }
    }

    /// Overlap for per-class values spread over `class_of`.
    pub(crate) fn tied(&mut self, class_of: &[usize], a: &[f64], theta: &[f64]) -> f64 {
        for (site, &c) in class_of.iter().enumerate() {
            self.factors[site] = (
                Complex64::new(a[c].sqrt(), 0.0),
                Complex64::from_polar((1.0 - a[c]).max(0.0).sqrt(), theta[c]),
            );
        }
        self.eval_factors()
    }

    /// Overlap for the smooth chart (sin u, e^{iθ} cos u) per class.
    pub(crate) fn angles(&mut self, class_of: &[usize], u: &[f64], theta: &[f64]) -> f64 {
        for (site, &c) in class_of.iter().enumerate() {
            self.factors[site] = angle_factor(u[c], theta[c]);
        }
        self.eval_factors()
    }

    fn eval_factors(&mut self) -> f64 {
        self.buf[0] = Complex64::new(1.0, 0.0);
        let mut len = 1;
        for &(one, zero) in &self.factors[..self.n] {
            // expand in place from the back so earlier entries stay intact
            for j in (0..len).rev() {
                let p = self.buf[j];
                self.buf[2 * j] = p * zero;
                self.buf[2 * j + 1] = p * one;
            }
            len *= 2;
        }
        let z: Complex64 = self
            .psi
            .iter()
            .zip(&self.buf)
            .map(|(p, f)| p.conj() * f)
            .sum();
        z.norm_sqr().min(1.0)
    }
}

#[inline]
pub(crate) fn angle_factor(u: f64, theta: f64) -> (Complex64, Complex64) {
    (
        Complex64::new(u.sin(), 0.0),
        Complex64::from_polar(u.cos(), theta),
    )
}

/// The four ansatz choices compared for a two-component superposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Case {
    /// Every site free.
    Free,
    /// The first component's ansatz.
    First,
    /// The second component's ansatz.
    Second,
    /// All sites equal.
    Symmetric,
}

impl Case {
    pub const ALL: [Case; 4] = [Case::Free, Case::First, Case::Second, Case::Symmetric];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "case{}", self.index())
    }
}

/// Settings shared by every case of [`maximize_cases`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseConfig {
    pub n_samples: u64,
    pub master_seed: u64,
    pub refine: bool,
    /// Number of best samples used as refinement starts.
    pub top_k: usize,
    pub include_boundary_rounding: bool,
}

impl CaseConfig {
    pub fn new(n_samples: u64, master_seed: u64) -> Self {
        Self {
            n_samples,
            master_seed,
            refine: true,
            top_k: 8,
            include_boundary_rounding: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseOutcome {
    pub case: Case,
    pub tying: TyingPattern,
    /// The tying coincides with the all-equal ansatz (or another case).
    pub redundant: bool,
    pub sampled: OptimizationResult,
    pub refined: Option<OptimizationResult>,
}

impl CaseOutcome {
    /// Refined value when available, sampled otherwise.
    pub fn best_lambda(&self) -> f64 {
        self.refined
            .as_ref()
            .map_or(self.sampled.lambda, |r| r.lambda)
    }

    pub fn best(&self) -> &OptimizationResult {
        self.refined.as_ref().unwrap_or(&self.sampled)
    }
}

pub fn case_tying(spec: &HybridSpec, case: Case) -> Result<TyingPattern> {
    let n = spec
        .n_sites()
        .ok_or_else(|| Error::UnsupportedHybrid("empty superposition".into()))?;
    let component = |k: usize| -> &BasicState {
        let comps = &spec.components;
        &comps[k.min(comps.len() - 1)].basic
    };
    Ok(match case {
        Case::Free => TyingPattern::free(n)?,
        Case::First => TyingPattern::ansatz(component(0)),
        Case::Second => TyingPattern::ansatz(component(1)),
        Case::Symmetric => TyingPattern::symmetric(n)?,
    })
}

/// Refines from each start and keeps the best (earliest on ties).
pub fn refine_best(
    psi: &PureState,
    starts: &[ProductParams],
    tying: &TyingPattern,
) -> Result<Option<OptimizationResult>> {
    let mut best: Option<OptimizationResult> = None;
    for start in starts {
        let r = refine(psi, start, tying)?;
        if best.as_ref().is_none_or(|b| r.lambda > b.lambda) {
            best = Some(r);
        }
    }
    Ok(best)
}

/// Sampling plus refinement under the free, per-component and all-equal
/// ansätze.
pub fn maximize_cases(spec: &HybridSpec, cfg: &CaseConfig) -> Result<Vec<CaseOutcome>> {
    if spec.components.is_empty() || spec.components.len() > 2 {
        return Err(Error::UnsupportedHybrid(format!(
            "expected one or two components, found {}",
            spec.components.len()
        )));
    }
    let psi = spec.superpose()?.state;
    let ansatz = [
        case_tying(spec, Case::First)?,
        case_tying(spec, Case::Second)?,
    ];
    maximize_with_ansatz(&psi, ansatz, spec.components.len() == 1, cfg)
}

/// [`maximize_cases`] for an arbitrary state with the two component
/// ansätze given directly. With `single_component` the second case is
/// marked redundant.
///
/// The free case is additionally refined from the tied optima, so its
/// refined value never falls below theirs.
pub fn maximize_with_ansatz(
    psi: &PureState,
    ansatz: [TyingPattern; 2],
    single_component: bool,
    cfg: &CaseConfig,
) -> Result<Vec<CaseOutcome>> {
    let n = psi.n_sites();
    for t in &ansatz {
        if t.n_sites() != n {
            return Err(Error::DimensionMismatch {
                left: n,
                right: t.n_sites(),
            });
        }
    }
    let symmetric = TyingPattern::symmetric(n)?;
    let [first, second] = ansatz;
    let mut outcomes: Vec<CaseOutcome> = Vec::with_capacity(4);
    for case in [Case::First, Case::Second, Case::Symmetric, Case::Free] {
        let tying = match case {
            Case::First => first.clone(),
            Case::Second => second.clone(),
            Case::Symmetric => symmetric.clone(),
            Case::Free => TyingPattern::free(n)?,
        };
        let redundant = match case {
            Case::First => tying.same_partition(&symmetric),
            Case::Second => tying.same_partition(&symmetric) || single_component,
            _ => false,
        };
        let sample_cfg = SampleConfig::new(tying.clone(), cfg.n_samples, cfg.master_seed)?
            .with_boundary_rounding(cfg.include_boundary_rounding);
        let top = sample_top_k(psi, &sample_cfg, cfg.top_k.max(1))?;
        let sampled = top.result;
        let refined = if cfg.refine {
            let mut starts: Vec<ProductParams> =
                top.candidates.into_iter().map(|c| c.params).collect();
            if case == Case::Free {
                starts.extend(outcomes.iter().map(|o| o.best().best_params.clone()));
            }
            refine_best(psi, &starts, &tying)?
        } else {
            None
        };
        outcomes.push(CaseOutcome {
            case,
            tying,
            redundant,
            sampled,
            refined,
        });
    }
    outcomes.sort_by_key(|o| o.case);
    Ok(outcomes)
}

/// Tied parameters drawn or evaluated per class, spread over sites.
pub(crate) fn spread(tying: &TyingPattern, a: &[f64], theta: &[f64]) -> ProductParams {
    expand_tied(tying, a, theta).expect("class values in range")
}
