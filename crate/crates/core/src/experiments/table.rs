use std::fmt::Write as _;

use serde::Serialize;

use super::catalog::{CatalogEntry, PublishedValue};
use super::rules::predict_coefficient_rule;
use crate::error::Result;
use crate::optimize::{maximize_cases, Case, CaseConfig, CaseOutcome};

/// Cases within this of the best refined value count as maximal.
pub const WINNER_TOL: f64 = 1e-4;
/// Exact published fractions must be reproduced this closely.
pub const EXACT_TOL: f64 = 1e-4;
/// Decimal published values may exceed ours by at most this much.
pub const DECIMAL_SLACK: f64 = 5e-3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseCell {
    pub case: Case,
    pub classes: usize,
    pub redundant: bool,
    pub sampled: f64,
    pub refined: Option<f64>,
    pub improved_at: Option<u64>,
    pub steady: Option<bool>,
    pub published: PublishedValue,
    /// Ours minus published, where both exist.
    pub delta: Option<f64>,
}

impl CaseCell {
    pub fn best(&self) -> f64 {
        self.refined.unwrap_or(self.sampled)
    }

    /// Whether this cell reproduces its published value under the
    /// exact/decimal tolerances; `None` for dashes.
    pub fn agrees_with_published(&self) -> Option<bool> {
        let ours = self.best();
        match self.published {
            PublishedValue::Dash => None,
            PublishedValue::Exact { value, .. } => Some((ours - value.value()).abs() <= EXACT_TOL),
            PublishedValue::Decimal { value, .. } => Some(ours >= value - DECIMAL_SLACK),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseReport {
    pub entry: CatalogEntry,
    pub cells: Vec<CaseCell>,
    /// The maximal case with the fewest ansatz classes.
    pub winner: Case,
    /// Every case within [`WINNER_TOL`] of the maximum.
    pub winners: Vec<Case>,
    pub winner_lambda: f64,
    pub prediction: Option<f64>,
    /// 1 − Λ for the winning value.
    pub geometric_entanglement: f64,
}

impl CaseReport {
    pub fn cell(&self, case: Case) -> &CaseCell {
        &self.cells[case.index()]
    }

    /// Published maximal cases are all among ours.
    pub fn winner_agrees(&self) -> bool {
        self.entry
            .published_winners()
            .iter()
            .all(|&i| self.winners.iter().any(|w| w.index() == i))
    }

    /// The bold published value and ours for the same case.
    pub fn published_best(&self) -> Option<(f64, f64)> {
        let i = self.entry.published_winners().into_iter().next()?;
        Some((self.entry.published[i].value()?, self.cells[i].best()))
    }
}

pub fn report_from_outcomes(entry: &CatalogEntry, outcomes: &[CaseOutcome]) -> CaseReport {
    let cells: Vec<CaseCell> = outcomes
        .iter()
        .map(|o| {
            let published = entry.published[o.case.index()];
            let refined = o.refined.as_ref().map(|r| r.lambda);
            let best = refined.unwrap_or(o.sampled.lambda);
            CaseCell {
                case: o.case,
                classes: o.tying.n_classes(),
                redundant: o.redundant,
                sampled: o.sampled.lambda,
                refined,
                improved_at: o.sampled.improved_at,
                steady: o.sampled.steady,
                published,
                delta: published.value().map(|p| best - p),
            }
        })
        .collect();
    let max = cells
        .iter()
        .map(CaseCell::best)
        .fold(f64::NEG_INFINITY, f64::max);
    let winners: Vec<Case> = cells
        .iter()
        .filter(|c| c.best() >= max - WINNER_TOL)
        .map(|c| c.case)
        .collect();
    let winner = cells
        .iter()
        .filter(|c| winners.contains(&c.case))
        .min_by_key(|c| (c.classes, std::cmp::Reverse(c.case)))
        .map(|c| c.case)
        .expect("at least one case");
    CaseReport {
        entry: entry.clone(),
        winner,
        winner_lambda: max,
        prediction: predict_coefficient_rule(entry).ok().flatten(),
        geometric_entanglement: 1.0 - max,
        winners,
        cells,
    }
}

/// Runs every case of every entry.
pub fn run_table(entries: &[CatalogEntry], cfg: &CaseConfig) -> Result<Vec<CaseReport>> {
    entries
        .iter()
        .map(|e| {
            let outcomes = maximize_cases(&e.spec()?, cfg)?;
            Ok(report_from_outcomes(e, &outcomes))
        })
        .collect()
}

/// Six significant digits, in exponent form below 1e-4.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    if magnitude < -4 {
        return format!("{x:.5e}");
    }
    let decimals = (5 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

pub const CSV_HEADER: &str = "label,c,phi,case0_sampled,case1_sampled,case2_sampled,case3_sampled,\
case0_refined,case1_refined,case2_refined,case3_refined,winner,paper_value,delta";

/// One row per report; redundant cases print as "-".
pub fn to_csv(reports: &[CaseReport]) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in reports {
        let cell = |c: &CaseCell, v: Option<f64>| match (c.redundant, v) {
            (true, _) | (_, None) => "-".to_string(),
            (false, Some(v)) => sig6(v),
        };
        let sampled: Vec<String> = r.cells.iter().map(|c| cell(c, Some(c.sampled))).collect();
        let refined: Vec<String> = r.cells.iter().map(|c| cell(c, c.refined)).collect();
        let (published, delta) = match r.published_best() {
            Some((p, ours)) => (sig6(p), sig6(ours - p)),
            None => ("-".into(), "-".into()),
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{published},{delta}",
            r.entry.label,
            sig6(r.entry.c),
            sig6(r.entry.phi),
            sampled.join(","),
            refined.join(","),
            r.winner.index(),
        );
    }
    out
}
