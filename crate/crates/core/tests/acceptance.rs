//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::f64::consts::TAU;
use std::process::{Command, ExitCode};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use geoent::closed_form::{
    lambda_ghz_family, lambda_ghz_prime_family, lambda_known_basic, lambda_w, w_prime_solver,
    SOLVED_BASIC_STATES,
};
use geoent::experiments::{
    build_catalog, catalog_basic_ids, run_table, verify_dicke_decomposition,
    verify_pure_sufficiency, BasicId, CaseReport, DECIMAL_SLACK, EXACT_TOL,
};
use geoent::optimize::{case_tying, grid_oracle, Case, CaseConfig};
use geoent::overlap::{overlap_sq, overlap_sq_grad, tying_from_seed, ProductParams, TyingPattern};
use geoent::qstate::{
    cyclic_shift, make_basic_ti, make_ghz_family, make_ghz_prime_family, PureState, SeedPattern,
};

const TABLE_SAMPLES: u64 = 100_000;
const TABLE_SEED: u64 = 42;

type Criterion<'a> = Box<dyn Fn() -> Verdict + 'a>;

struct Verdict {
    passed: bool,
    detail: String,
}

impl Verdict {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self {
            passed,
            detail: detail.into(),
        }
    }
}

fn closed_forms() -> Verdict {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..20 {
        let n = rng.gen_range(2..=8usize);
        let c: f64 = rng.gen();
        let phi = rng.gen_range(0.0..TAU);
        let expected = c.max(1.0 - c);
        let ghz = lambda_ghz_family(n, c, phi).unwrap();
        let err = ghz
            .self_consistency(&make_ghz_family(n, c, phi).unwrap())
            .unwrap();
        if ghz.lambda_max != expected || err > 1e-10 {
            failures.push(format!("GHZ n={n} c={c}"));
        }
        let m = 2 * rng.gen_range(1..=4usize);
        let gp = lambda_ghz_prime_family(m, c, phi).unwrap();
        let err = gp
            .self_consistency(&make_ghz_prime_family(m, c, phi).unwrap())
            .unwrap();
        if gp.lambda_max != expected || err > 1e-10 {
            failures.push(format!("GHZ' n={m} c={c}"));
        }
    }
    let w3 = lambda_w(3).unwrap();
    if (w3.lambda_max - 4.0 / 9.0).abs() > 1e-15 {
        failures.push("W_3".into());
    }
    for n in 2..=8 {
        let w = lambda_w(n).unwrap();
        let expected = (1.0 - 1.0 / n as f64).powi(n as i32 - 1);
        let psi = BasicId::W(n).build().unwrap().state;
        if (w.lambda_max - expected).abs() > 1e-12 || w.self_consistency(&psi).unwrap() > 1e-10 {
            failures.push(format!("W_{n}"));
        }
    }
    let expected = [
        ("1100", 0.25),
        ("11000", 0.2),
        ("10100", 0.2),
        ("110000", 1.0 / 6.0),
        ("101000", 1.0 / 6.0),
        ("111000", 1.0 / 6.0),
        ("100100", 1.0 / 3.0),
        ("10001000", 0.25),
        ("11001100", 0.25),
    ];
    for (bits, value) in expected {
        let listed = SOLVED_BASIC_STATES.iter().any(|&(_, b, _, _)| b == bits);
        let seed: SeedPattern = bits.parse().unwrap();
        let cf = lambda_known_basic(&seed);
        let ok = listed
            && cf.as_ref().is_some_and(|cf| {
                (cf.lambda_max - value).abs() < 1e-15
                    && cf.self_consistency(&make_basic_ti(&seed)).unwrap() < 1e-10
            });
        if !ok {
            failures.push(bits.to_string());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Verdict::new(
        failures.is_empty() && secs < 1.0,
        format!("{secs:.3} s, failures: {failures:?}"),
    )
}

fn oracle_agreement() -> Verdict {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut checked = 0;
    for id in catalog_basic_ids() {
        let basic = id.build().unwrap();
        if basic.n_sites() > 6 {
            continue;
        }
        let cf = id.closed_form().unwrap().lambda_max;
        let grid = grid_oracle(&basic.state, &tying_from_seed(&basic.seed), 200)
            .unwrap()
            .lambda;
        checked += 1;
        if !(grid >= cf - 1e-3 && grid <= cf + 1e-9) {
            failures.push(format!("{} grid {grid} closed form {cf}", id.label()));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Verdict::new(
        failures.is_empty() && checked > 0 && secs < 60.0,
        format!("{checked} states, {secs:.1} s, failures: {failures:?}"),
    )
}

/// Maximum over a₁, a₂ on a grid, with the third site solved exactly: for
/// fixed a₁, a₂ the overlap amplitude is y₃P + x₃Q with (x₃, y₃) a unit
/// vector, so its best value is P² + Q².
fn w_prime_grid(c: [f64; 3], resolution: usize) -> f64 {
    let mut best = 0.0f64;
    for i in 0..resolution {
        let a1 = i as f64 / (resolution - 1) as f64;
        let (x1, y1) = (a1.sqrt(), (1.0 - a1).sqrt());
        for j in 0..resolution {
            let a2 = j as f64 / (resolution - 1) as f64;
            let (x2, y2) = (a2.sqrt(), (1.0 - a2).sqrt());
            let p = c[0] * x1 * y2 + c[1] * y1 * x2;
            let q = c[2] * y1 * y2;
            best = best.max(p * p + q * q);
        }
    }
    best
}

fn w_prime() -> Verdict {
    let s = 1.0 / 3f64.sqrt();
    let sym = w_prime_solver(s, s, s, 0.0, 0.0).unwrap().result.lambda_max;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let raw: [f64; 3] = [rng.gen(), rng.gen(), rng.gen()];
        let norm = raw.iter().map(|v| v * v).sum::<f64>().sqrt();
        let c = raw.map(|v| v / norm);
        let (alpha, beta) = (rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU));
        let solved = w_prime_solver(c[0], c[1], c[2], alpha, beta)
            .unwrap()
            .result
            .lambda_max;
        worst = worst.max((solved - w_prime_grid(c, 400)).abs());
    }
    Verdict::new(
        (sym - 4.0 / 9.0).abs() < 1e-10 && worst < 1e-4,
        format!("symmetric point {sym:.12}, worst gap to grid {worst:.2e} over 50 draws"),
    )
}

fn tying_for(r: &CaseReport, case: Case) -> TyingPattern {
    case_tying(&r.entry.spec().unwrap(), case).unwrap()
}

fn table_reproduction(reports: &[CaseReport]) -> Verdict {
    let mut misses = Vec::new();
    let mut cells = 0;
    for r in reports {
        for cell in &r.cells {
            match cell.agrees_with_published() {
                None => {}
                Some(true) => cells += 1,
                Some(false) => {
                    cells += 1;
                    let psi = r.entry.spec().unwrap().superpose().unwrap().state;
                    let grid = grid_oracle(&psi, &tying_for(r, cell.case), 1000).map_or_else(
                        |_| "over budget".to_string(),
                        |g| format!("{:.5}", g.lambda),
                    );
                    misses.push(format!(
                        "{} {}: ours {:.5} (grid {}) vs published {:.5}",
                        r.entry.label,
                        cell.case,
                        cell.best(),
                        grid,
                        cell.published.value().unwrap()
                    ));
                }
            }
        }
        if r.entry.has_exact_winner() && !r.winner_agrees() {
            misses.push(format!("{} winner {:?}", r.entry.label, r.winners));
        }
    }
    Verdict::new(
        misses.is_empty(),
        format!(
            "{} rows, {cells} published cells (exact tol {EXACT_TOL}, decimal slack {DECIMAL_SLACK}), misses: {misses:?}",
            reports.len()
        ),
    )
}

fn coefficient_rule(reports: &[CaseReport]) -> Verdict {
    let mut rows = 0;
    let mut misses = Vec::new();
    for r in reports {
        if let Some(p) = r.prediction {
            rows += 1;
            if (p - r.winner_lambda).abs() > 1e-4 {
                misses.push(format!(
                    "{}: predicted {p} found {}",
                    r.entry.label, r.winner_lambda
                ));
            }
        }
    }
    let families: std::collections::BTreeSet<_> = reports
        .iter()
        .filter(|r| r.prediction.is_some())
        .map(|r| r.entry.family.clone())
        .collect();
    Verdict::new(
        misses.is_empty() && rows == 30,
        format!("{rows} rows in {families:?}, misses: {misses:?}"),
    )
}

fn relative_fd_error(psi: &PureState, params: &ProductParams) -> f64 {
    const H: f64 = 1e-6;
    let g = overlap_sq_grad(psi, params).unwrap();
    let n = params.n_sites();
    let mut diff = 0.0f64;
    for i in 0..n {
        for (is_a, analytic) in [(true, g.d_a[i]), (false, g.d_theta[i])] {
            let bump = |h: f64| {
                let mut a = params.a().to_vec();
                let mut t = params.theta().to_vec();
                if is_a {
                    a[i] += h;
                } else {
                    t[i] += h;
                }
                overlap_sq(psi, &ProductParams::new(a, t).unwrap()).unwrap()
            };
            let fd = (bump(H) - bump(-H)) / (2.0 * H);
            diff += (fd - analytic).powi(2);
        }
    }
    diff.sqrt() / g.norm().max(1e-6)
}

fn property_suites(reports: &[CaseReport]) -> Verdict {
    let mut states: Vec<(String, PureState, f64)> = catalog_basic_ids()
        .into_iter()
        .map(|id| {
            (
                id.label(),
                id.build().unwrap().state,
                id.closed_form().unwrap().lambda_max,
            )
        })
        .collect();
    states.extend(reports.iter().map(|r| {
        (
            r.entry.label.clone(),
            r.entry.spec().unwrap().superpose().unwrap().state,
            r.winner_lambda,
        )
    }));
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst_grad = 0.0f64;
    let mut invariant_failures = Vec::new();
    let mut violations = 0;
    for (label, psi, lambda) in &states {
        let n = psi.n_sites();
        for _ in 0..100 {
            let a = (0..n).map(|_| rng.gen_range(0.01..0.99)).collect();
            let t = (0..n).map(|_| rng.gen_range(0.0..TAU)).collect();
            worst_grad = worst_grad.max(relative_fd_error(psi, &ProductParams::new(a, t).unwrap()));
        }
        let shifted = cyclic_shift(psi, 1);
        if (psi.norm_sqr() - 1.0).abs() > 1e-12 || psi.distance(&shifted).unwrap() > 1e-12 {
            invariant_failures.push(label.clone());
        }
        violations += verify_pure_sufficiency(psi, *lambda, 1000, 4, 7)
            .unwrap()
            .violations;
    }
    let dicke = verify_dicke_decomposition().unwrap();
    Verdict::new(
        worst_grad < 1e-5 && invariant_failures.is_empty() && violations == 0 && dicke,
        format!(
            "{} states: worst gradient rel. error {worst_grad:.1e}, invariant failures {invariant_failures:?}, \
             purity violations {violations}, Dicke {dicke}",
            states.len()
        ),
    )
}

fn table_payload(dir: &std::path::Path, tag: &str) -> (String, String) {
    let csv = dir.join(format!("{tag}.csv"));
    let status = Command::new(env!("CARGO_BIN_EXE_geoent"))
        .env_remove("GEOENT_SEED")
        .args(["table", "--set", "A", "--seed", "42", "--out"])
        .arg(&csv)
        .output()
        .expect("binary runs");
    assert!(
        status.status.success(),
        "{}",
        String::from_utf8_lossy(&status.stderr)
    );
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(csv.with_extension("json")).unwrap())
            .unwrap();
    let payload = serde_json::to_string(&json["payload"]).unwrap();
    let rows: String = std::fs::read_to_string(&csv)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect();
    (payload, rows)
}

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let first = table_payload(dir.path(), "first");
    let second = table_payload(dir.path(), "second");
    Verdict::new(
        first == second && !first.0.is_empty(),
        format!(
            "payload {} bytes, csv {} bytes",
            first.0.len(),
            first.1.len()
        ),
    )
}

fn main() -> ExitCode {
    let table_start = Instant::now();
    let reports = run_table(
        &build_catalog(),
        &CaseConfig::new(TABLE_SAMPLES, TABLE_SEED),
    )
    .unwrap();
    let table_secs = table_start.elapsed().as_secs_f64();

    let criteria: Vec<(&str, Criterion)> = vec![
        ("closed forms", Box::new(closed_forms)),
        ("grid oracle agreement", Box::new(oracle_agreement)),
        ("W' stationary solver", Box::new(w_prime)),
        (
            "table reproduction",
            Box::new(|| table_reproduction(&reports)),
        ),
        ("coefficient rule", Box::new(|| coefficient_rule(&reports))),
        ("property suites", Box::new(|| property_suites(&reports))),
        ("CLI determinism", Box::new(determinism)),
    ];
    let mut all = true;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let v = check();
        all &= v.passed;
        println!(
            "criterion {} ({name}): {} | {}",
            i + 1,
            if v.passed { "PASS" } else { "FAIL" },
            v.detail
        );
    }
    println!("table run over {} rows: {table_secs:.1} s", reports.len());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
