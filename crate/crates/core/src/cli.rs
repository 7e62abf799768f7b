//! Command-line front end behind the `geoent` binary.
//!
//! Every command prints (or writes) a JSON envelope
//! `{"manifest": …, "payload": …}`. The payload depends only on the
//! arguments and the master seed; the manifest adds the timestamp and a
//! SHA-256 of the compact payload bytes.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::closed_form::{lambda_ghz_family, lambda_ghz_prime_family, lambda_w};
use crate::error::{Error, Result};
use crate::experiments::{
    catalog_basic_ids, catalog_subset, find_entry, infer_hierarchy, run_table, to_csv,
    verify_dicke_decomposition, verify_pure_sufficiency, CaseReport, Relation, WINNER_TOL,
};
use crate::optimize::{
    case_tying, grid_oracle, maximize_with_ansatz, refine_best, sample_top_k, Case, CaseConfig,
    CaseOutcome, OptimizationResult, SampleConfig,
};
use crate::overlap::{mixture_overlap, tying_from_seed, TyingPattern};
use crate::qstate::{
    make_dicke, make_ghz_family, make_ghz_prime_family, BasicState, HybridSpec, PureState,
    SeedPattern,
};

pub const DEFAULT_SAMPLES: u64 = 100_000;
pub const DEFAULT_SEED: u64 = 42;
pub const SEED_ENV: &str = "GEOENT_SEED";

pub const EXIT_ASSERTION: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "geoent",
    version,
    about = "Maximal product-state overlap of translation-invariant qubit states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a state and print its amplitudes, periods and TI check.
    State(StateArgs),
    /// Estimate the maximal overlap of a state.
    Lambda(LambdaArgs),
    /// Reproduce a reference table.
    Table(TableArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
}

/// Exactly one state selector.
#[derive(Debug, Clone, Args)]
#[group(id = "target", required = true, multiple = false)]
pub struct TargetSel {
    #[arg(long, value_name = "N")]
    pub ghz: Option<usize>,
    #[arg(long, value_name = "N")]
    pub w: Option<usize>,
    #[arg(long = "ghz-prime", value_name = "N")]
    pub ghz_prime: Option<usize>,
    /// N sites with K of them in |0⟩.
    #[arg(long, num_args = 2, value_names = ["N", "K"])]
    pub dicke: Option<Vec<usize>>,
    /// Basic TI state generated by a bitstring.
    #[arg(long = "seed", value_name = "BITS")]
    pub bits: Option<String>,
    /// A table row such as A2-1.
    #[arg(long, value_name = "LABEL")]
    pub entry: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct Mixing {
    /// Weight c for --ghz/--ghz-prime families and --entry rows.
    #[arg(long)]
    pub c: Option<f64>,
    /// Relative phase φ for the same.
    #[arg(long)]
    pub phi: Option<f64>,
}

#[derive(Debug, Args)]
pub struct StateArgs {
    #[command(flatten)]
    pub target: TargetSel,
    #[command(flatten)]
    pub mixing: Mixing,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseChoice {
    Auto,
    One(Case),
}

fn parse_case(s: &str) -> std::result::Result<CaseChoice, String> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(CaseChoice::Auto);
    }
    s.parse::<usize>()
        .ok()
        .and_then(Case::from_index)
        .map(CaseChoice::One)
        .ok_or_else(|| format!("expected 0, 1, 2, 3 or auto, got {s:?}"))
}

#[derive(Debug, Args)]
pub struct LambdaArgs {
    #[command(flatten)]
    pub target: TargetSel,
    #[command(flatten)]
    pub mixing: Mixing,
    /// 0 free, 1 and 2 component ansätze, 3 all equal, or auto.
    #[arg(long, default_value = "auto", value_parser = parse_case)]
    pub case: CaseChoice,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub samples: u64,
    /// Master seed of the sampler.
    #[arg(long = "rng-seed", env = SEED_ENV)]
    pub rng_seed: Option<u64>,
    #[arg(long)]
    pub refine: bool,
    /// Also run the grid oracle at this resolution.
    #[arg(long, value_name = "R")]
    pub oracle: Option<usize>,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// A, B, C, D, E or all.
    #[arg(long, default_value = "all")]
    pub set: String,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub samples: u64,
    /// Master seed of the sampler.
    #[arg(long, env = SEED_ENV)]
    pub seed: Option<u64>,
    /// Override the relative phase of every row.
    #[arg(long)]
    pub phi: Option<f64>,
    #[arg(long = "no-refine")]
    pub no_refine: bool,
    /// CSV path; the JSON envelope goes next to it with a .json extension.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    ClosedForms,
    Purity,
    Dicke,
    Hierarchy,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    #[arg(long, env = SEED_ENV)]
    pub seed: Option<u64>,
    /// Sampling budget of the closed-forms and hierarchy suites.
    #[arg(long)]
    pub samples: Option<u64>,
    /// Random ensembles per state in the purity suite.
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub args: Vec<String>,
    pub master_seed: Option<u64>,
    pub version: String,
    pub timestamp: String,
    pub payload_sha256: String,
}

impl RunManifest {
    fn new(command: &str, args: &[String], master_seed: Option<u64>, payload: &[u8]) -> Self {
        Self {
            command: command.to_string(),
            args: args.to_vec(),
            master_seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            payload_sha256: format!("{:x}", Sha256::digest(payload)),
        }
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    manifest: &'a RunManifest,
    payload: &'a T,
}

/// What a command produced, before it is written anywhere.
struct Output<T: Serialize> {
    payload: T,
    passed: bool,
}

fn seed_or_default(seed: Option<u64>) -> u64 {
    seed.unwrap_or(DEFAULT_SEED)
}

/// A resolved state selector.
struct Target {
    label: String,
    state: PureState,
    /// Present for basic states and table rows.
    spec: Option<HybridSpec>,
    ansatz: [TyingPattern; 2],
    single_component: bool,
}

fn mixing_for_basic(mixing: &Mixing, what: &str) -> Result<()> {
    if mixing.c.is_some() || mixing.phi.is_some() {
        return Err(Error::InvalidConfig(format!(
            "--c/--phi do not apply to {what}"
        )));
    }
    Ok(())
}

fn basic_target(basic: BasicState) -> Target {
    let t = TyingPattern::ansatz(&basic);
    Target {
        label: basic.label.clone(),
        state: basic.state.clone(),
        spec: Some(HybridSpec::single(basic)),
        ansatz: [t.clone(), t],
        single_component: true,
    }
}

fn family_target(label: String, state: PureState) -> Result<Target> {
    let t = TyingPattern::symmetric(state.n_sites())?;
    Ok(Target {
        label,
        state,
        spec: None,
        ansatz: [t.clone(), t],
        single_component: true,
    })
}

fn resolve_target(sel: &TargetSel, mixing: &Mixing) -> Result<Target> {
    let has_mixing = mixing.c.is_some() || mixing.phi.is_some();
    let c = mixing.c.unwrap_or(0.5);
    let phi = mixing.phi.unwrap_or(0.0);
    if let Some(n) = sel.ghz {
        if !has_mixing {
            return Ok(basic_target(BasicState::ghz(n)?));
        }
        return family_target(
            format!("GHZ_{n}(c={c}, phi={phi})"),
            make_ghz_family(n, c, phi)?,
        );
    }
    if let Some(n) = sel.ghz_prime {
        if !has_mixing {
            return Ok(basic_target(BasicState::ghz_prime(n)?));
        }
        let state = make_ghz_prime_family(n, c, phi)?;
        let t = tying_from_seed(&SeedPattern::alternating(n)?);
        return Ok(Target {
            label: format!("GHZ'_{n}(c={c}, phi={phi})"),
            state,
            spec: None,
            ansatz: [t.clone(), t],
            single_component: true,
        });
    }
    if let Some(n) = sel.w {
        mixing_for_basic(mixing, "--w")?;
        return Ok(basic_target(BasicState::w(n)?));
    }
    if let Some(nk) = &sel.dicke {
        mixing_for_basic(mixing, "--dicke")?;
        let (n, k) = (nk[0], nk[1]);
        return family_target(format!("S({n};{k})"), make_dicke(n, k)?);
    }
    if let Some(bits) = &sel.bits {
        mixing_for_basic(mixing, "--seed")?;
        let seed: SeedPattern = bits.parse()?;
        return Ok(basic_target(BasicState::seeded(
            format!("seed {seed}"),
            seed,
        )));
    }
    if let Some(label) = &sel.entry {
        let mut entry = find_entry(label)?;
        entry.c = mixing.c.unwrap_or(entry.c);
        entry.phi = mixing.phi.unwrap_or(entry.phi);
        let spec = entry.spec()?;
        let state = spec.superpose()?.state;
        return Ok(Target {
            label: entry.label.clone(),
            state,
            ansatz: [
                case_tying(&spec, Case::First)?,
                case_tying(&spec, Case::Second)?,
            ],
            spec: Some(spec),
            single_component: false,
        });
    }
    Err(Error::InvalidConfig("no state selected".into()))
}

#[derive(Debug, Serialize)]
struct AmplitudeEntry {
    basis: String,
    re: f64,
    im: f64,
}

#[derive(Debug, Serialize)]
struct StatePayload {
    label: String,
    n_sites: usize,
    /// Term period of a basic state; absent for superpositions.
    period: Option<usize>,
    term_periods: Vec<usize>,
    translation_invariant: bool,
    phase_aligned: bool,
    amplitudes: Vec<AmplitudeEntry>,
}

fn cmd_state(args: &StateArgs) -> Result<Output<StatePayload>> {
    let target = resolve_target(&args.target, &args.mixing)?;
    let psi = &target.state;
    let period = match &target.spec {
        Some(spec) if spec.components.len() == 1 => Some(spec.components[0].basic.period()),
        _ => None,
    };
    let n = psi.n_sites();
    let amplitudes = psi
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm_sqr() > 0.0)
        .map(|(i, a)| AmplitudeEntry {
            basis: format!("{i:0n$b}"),
            re: a.re,
            im: a.im,
        })
        .collect();
    Ok(Output {
        payload: StatePayload {
            label: target.label,
            n_sites: n,
            period,
            term_periods: psi.term_periods().into_iter().collect(),
            translation_invariant: psi.is_translation_invariant(1e-12),
            phase_aligned: psi.is_phase_aligned(),
            amplitudes,
        },
        passed: true,
    })
}

#[derive(Debug, Serialize)]
struct LambdaCase {
    case: usize,
    classes: usize,
    redundant: bool,
    tying: TyingPattern,
    sampled: OptimizationResult,
    refined: Option<OptimizationResult>,
    lambda: f64,
}

impl From<CaseOutcome> for LambdaCase {
    fn from(o: CaseOutcome) -> Self {
        Self {
            case: o.case.index(),
            classes: o.tying.n_classes(),
            redundant: o.redundant,
            lambda: o.best_lambda(),
            tying: o.tying,
            sampled: o.sampled,
            refined: o.refined,
        }
    }
}

#[derive(Debug, Serialize)]
struct LambdaPayload {
    target: String,
    n_sites: usize,
    samples: u64,
    master_seed: u64,
    cases: Vec<LambdaCase>,
    /// Selected case: the requested one, or the coarsest maximal case.
    winner: usize,
    lambda: f64,
    geometric_entanglement: f64,
    oracle: Option<OptimizationResult>,
}

fn coarsest_maximal(cases: &[LambdaCase]) -> usize {
    let max = cases
        .iter()
        .map(|c| c.lambda)
        .fold(f64::NEG_INFINITY, f64::max);
    cases
        .iter()
        .filter(|c| c.lambda >= max - WINNER_TOL)
        .min_by_key(|c| (c.classes, std::cmp::Reverse(c.case)))
        .map(|c| c.case)
        .expect("at least one case")
}

fn cmd_lambda(args: &LambdaArgs) -> Result<Output<LambdaPayload>> {
    let target = resolve_target(&args.target, &args.mixing)?;
    let seed = seed_or_default(args.rng_seed);
    let psi = &target.state;
    let cfg = CaseConfig {
        refine: args.refine,
        ..CaseConfig::new(args.samples, seed)
    };
    let cases: Vec<LambdaCase> = match args.case {
        CaseChoice::Auto => {
            maximize_with_ansatz(psi, target.ansatz.clone(), target.single_component, &cfg)?
                .into_iter()
                .map(LambdaCase::from)
                .collect()
        }
        CaseChoice::One(case) => {
            let n = psi.n_sites();
            let tying = match case {
                Case::Free => TyingPattern::free(n)?,
                Case::First => target.ansatz[0].clone(),
                Case::Second => target.ansatz[1].clone(),
                Case::Symmetric => TyingPattern::symmetric(n)?,
            };
            let sample_cfg = SampleConfig::new(tying.clone(), cfg.n_samples, seed)?;
            let top = sample_top_k(psi, &sample_cfg, cfg.top_k)?;
            let refined = if args.refine {
                let starts: Vec<_> = top.candidates.into_iter().map(|c| c.params).collect();
                refine_best(psi, &starts, &tying)?
            } else {
                None
            };
            let outcome = CaseOutcome {
                case,
                redundant: false,
                tying,
                sampled: top.result,
                refined,
            };
            vec![outcome.into()]
        }
    };
    let winner = match args.case {
        CaseChoice::Auto => coarsest_maximal(&cases),
        CaseChoice::One(c) => c.index(),
    };
    let chosen = cases
        .iter()
        .find(|c| c.case == winner)
        .expect("winner is listed");
    let oracle = match args.oracle {
        Some(r) => Some(grid_oracle(psi, &chosen.tying, r)?),
        None => None,
    };
    let lambda = chosen.lambda;
    Ok(Output {
        payload: LambdaPayload {
            target: target.label,
            n_sites: psi.n_sites(),
            samples: args.samples,
            master_seed: seed,
            winner,
            lambda,
            geometric_entanglement: 1.0 - lambda,
            oracle,
            cases,
        },
        passed: true,
    })
}

fn cmd_table(args: &TableArgs) -> Result<Output<Vec<CaseReport>>> {
    let mut entries = catalog_subset(&args.set)?;
    if let Some(phi) = args.phi {
        for e in &mut entries {
            e.phi = phi;
        }
    }
    let cfg = CaseConfig {
        refine: !args.no_refine,
        ..CaseConfig::new(args.samples, seed_or_default(args.seed))
    };
    Ok(Output {
        payload: run_table(&entries, &cfg)?,
        passed: true,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub passed: bool,
    pub checks: Vec<Check>,
}

fn closed_form_checks(seed: u64, samples: u64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..20 {
        let n = rng.gen_range(2..=8usize);
        let c: f64 = rng.gen();
        let phi = rng.gen_range(0.0..std::f64::consts::TAU);
        let expected = c.max(1.0 - c);
        let ghz = lambda_ghz_family(n, c, phi)?;
        let ghz_err = ghz.self_consistency(&make_ghz_family(n, c, phi)?)?;
        checks.push(Check::new(
            format!("ghz family #{i} (n={n}, c={c:.4})"),
            (ghz.lambda_max - expected).abs() < 1e-12 && ghz_err < 1e-10,
            format!("lambda {} maximizer error {ghz_err:.1e}", ghz.lambda_max),
        ));
        if n % 2 == 0 {
            let gp = lambda_ghz_prime_family(n, c, phi)?;
            let gp_err = gp.self_consistency(&make_ghz_prime_family(n, c, phi)?)?;
            checks.push(Check::new(
                format!("ghz' family #{i} (n={n}, c={c:.4})"),
                (gp.lambda_max - expected).abs() < 1e-12 && gp_err < 1e-10,
                format!("lambda {} maximizer error {gp_err:.1e}", gp.lambda_max),
            ));
        }
    }
    for n in 2..=8 {
        let w = lambda_w(n)?;
        let expected = (1.0 - 1.0 / n as f64).powi(n as i32 - 1);
        let err = w.self_consistency(&BasicState::w(n)?.state)?;
        checks.push(Check::new(
            format!("W_{n}"),
            (w.lambda_max - expected).abs() < 1e-12 && err < 1e-10,
            format!("lambda {} expected {expected}", w.lambda_max),
        ));
    }
    let cfg = CaseConfig::new(samples, seed);
    for id in catalog_basic_ids() {
        let basic = id.build()?;
        let cf = id.closed_form()?;
        let err = cf.self_consistency(&basic.state)?;
        let t = TyingPattern::ansatz(&basic);
        let outcomes = maximize_with_ansatz(&basic.state, [t.clone(), t], true, &cfg)?;
        let found = outcomes
            .iter()
            .map(CaseOutcome::best_lambda)
            .fold(f64::NEG_INFINITY, f64::max);
        let ok =
            err < 1e-10 && (found - cf.lambda_max).abs() < 1e-6 && found <= cf.lambda_max + 1e-9;
        checks.push(Check::new(
            id.label(),
            ok,
            format!(
                "closed form {} numerical {found} maximizer error {err:.1e}",
                cf.lambda_max
            ),
        ));
    }
    Ok(checks)
}

fn purity_checks(seed: u64, trials: u64) -> Result<Vec<Check>> {
    catalog_basic_ids()
        .into_iter()
        .map(|id| {
            let psi = id.build()?.state;
            let cf = id.closed_form()?;
            let reference = cf.lambda_max;
            let r = verify_pure_sufficiency(&psi, reference, trials, 4, seed)?;
            // an even mixture of the maximizers sits exactly on the bound
            let w = 1.0 / cf.maximizers.len() as f64;
            let ensemble: Vec<_> = cf.maximizers.iter().map(|m| (w, m.params.clone())).collect();
            let on_bound = mixture_overlap(&psi, &ensemble)?;
            Ok(Check::new(
                id.label(),
                r.passed() && (on_bound - reference).abs() < 1e-10,
                format!(
                    "max random mixture {} vs {reference}, {} violations, maximizer mixture {on_bound}",
                    r.max_observed, r.violations
                ),
            ))
        })
        .collect()
}

fn hierarchy_checks(seed: u64, samples: u64) -> Result<Vec<Check>> {
    let mut entries = catalog_subset("A")?;
    entries.extend(catalog_subset("B")?);
    entries.extend(catalog_subset("E")?);
    let reports = run_table(&entries, &CaseConfig::new(samples, seed))?;
    let ordering = infer_hierarchy(&reports);
    let expected = [
        ("A2", "GHZ_4 ~ GHZ'_4", Relation::Similar),
        ("A4", "GHZ'_4 > W_4", Relation::Greater),
        ("B2", "W_5 > psi^1a_5", Relation::Greater),
        ("E1", "psi^1a_6 ? psi^2a_6", Relation::Inconclusive),
    ];
    let mut checks: Vec<Check> = expected
        .iter()
        .map(|&(family, summary, relation)| {
            let got = ordering.for_family(family);
            let ok = got.is_some_and(|r| r.relation == relation && r.summary() == summary);
            let detail = got.map_or_else(|| "missing".to_string(), |r| r.summary());
            Check::new(format!("{family}: {summary}"), ok, detail)
        })
        .collect();
    for r in &ordering.relations {
        if !expected.iter().any(|(f, _, _)| *f == r.family) {
            let flag = if r.asserted_by_source {
                " (asserted by the source)"
            } else {
                ""
            };
            checks.push(Check::new(
                r.family.clone(),
                true,
                format!("{}{flag}", r.summary()),
            ));
        }
    }
    Ok(checks)
}

/// Runs one verification suite.
pub fn verify_suite(
    suite: Suite,
    seed: u64,
    samples: Option<u64>,
    trials: u64,
) -> Result<SuiteReport> {
    let checks = match suite {
        Suite::ClosedForms => closed_form_checks(seed, samples.unwrap_or(10_000))?,
        Suite::Purity => purity_checks(seed, trials)?,
        Suite::Dicke => vec![Check::new(
            "S(4;2) = sqrt(1/3) GHZ'_4 + sqrt(2/3) psi_4",
            verify_dicke_decomposition()?,
            "residual below 1e-12",
        )],
        Suite::Hierarchy => hierarchy_checks(seed, samples.unwrap_or(DEFAULT_SAMPLES))?,
    };
    Ok(SuiteReport {
        suite,
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

fn cmd_verify(args: &VerifyArgs) -> Result<Output<SuiteReport>> {
    let report = verify_suite(
        args.suite,
        seed_or_default(args.seed),
        args.samples,
        args.trials,
    )?;
    Ok(Output {
        passed: report.passed,
        payload: report,
    })
}

/// Writes one line to stdout; a closed pipe is not an error.
fn print_line(line: &str) -> Result<()> {
    match writeln!(io::stdout().lock(), "{line}") {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn emit<T: Serialize>(
    command: &str,
    argv: &[String],
    master_seed: Option<u64>,
    out: Option<&Path>,
    output: &Output<T>,
) -> Result<()> {
    let payload_bytes = serde_json::to_vec(&output.payload)?;
    let manifest = RunManifest::new(command, argv, master_seed, &payload_bytes);
    let json = serde_json::to_string_pretty(&Envelope {
        manifest: &manifest,
        payload: &output.payload,
    })?;
    match out {
        Some(path) => fs::write(path, json + "\n")?,
        None => print_line(&json)?,
    }
    Ok(())
}

fn emit_table(
    argv: &[String],
    seed: u64,
    out: Option<&Path>,
    output: &Output<Vec<CaseReport>>,
) -> Result<()> {
    let Some(csv_path) = out else {
        return emit("table", argv, Some(seed), None, output);
    };
    let payload_bytes = serde_json::to_vec(&output.payload)?;
    let manifest = RunManifest::new("table", argv, Some(seed), &payload_bytes);
    let mut csv = format!("# {}\n", serde_json::to_string(&manifest)?);
    csv.push_str(&to_csv(&output.payload));
    fs::write(csv_path, csv)?;
    let json_path = csv_path.with_extension("json");
    let json = serde_json::to_string_pretty(&Envelope {
        manifest: &manifest,
        payload: &output.payload,
    })?;
    fs::write(&json_path, json + "\n")?;
    for r in &output.payload {
        print_line(&format!(
            "{:<6} winner case{} lambda {:.6} published-winner {}",
            r.entry.label,
            r.winner.index(),
            r.winner_lambda,
            if r.winner_agrees() {
                "agrees"
            } else {
                "differs"
            }
        ))?;
    }
    print_line(&format!(
        "wrote {} and {}",
        csv_path.display(),
        json_path.display()
    ))?;
    Ok(())
}

fn execute(cli: &Cli, argv: &[String]) -> Result<bool> {
    match &cli.command {
        Command::State(a) => {
            let o = cmd_state(a)?;
            emit("state", argv, None, a.out.as_deref(), &o)?;
            Ok(o.passed)
        }
        Command::Lambda(a) => {
            let o = cmd_lambda(a)?;
            emit(
                "lambda",
                argv,
                Some(o.payload.master_seed),
                a.out.as_deref(),
                &o,
            )?;
            Ok(o.passed)
        }
        Command::Table(a) => {
            let o = cmd_table(a)?;
            emit_table(argv, seed_or_default(a.seed), a.out.as_deref(), &o)?;
            Ok(o.passed)
        }
        Command::Verify(a) => {
            let o = cmd_verify(a)?;
            for c in &o.payload.checks {
                eprintln!(
                    "{} {}: {}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                );
            }
            emit(
                "verify",
                argv,
                Some(seed_or_default(a.seed)),
                a.out.as_deref(),
                &o,
            )?;
            Ok(o.passed)
        }
    }
}

fn error_exit_code(e: &Error) -> u8 {
    match e {
        Error::Io(_) | Error::Json(_) => EXIT_ASSERTION,
        _ => EXIT_USAGE,
    }
}

/// Parses `args` (program name first), runs the command and maps the
/// result to the process exit code.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let argv: Vec<String> = args
        .iter()
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    match execute(&cli, &argv) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_ASSERTION),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_exit_code(&e))
        }
    }
}
