use std::collections::BTreeMap;

use serde::Serialize;

use super::catalog::CatalogEntry;
use super::table::CaseReport;
use crate::error::Result;
use crate::optimize::Case;

/// Tolerance for comparing winning values in the hierarchy rules.
pub const HIERARCHY_TOL: f64 = 1e-3;

/// max over components of |coefficient|² × (common amplitude² of the
/// component), or `None` when a component repeats only after all N sites.
pub fn predict_coefficient_rule(entry: &CatalogEntry) -> Result<Option<f64>> {
    let n = entry.n_sites();
    let [first, second] = entry.component_ids();
    let (first, second) = (first.build()?, second.build()?);
    if first.period() == n || second.period() == n {
        return Ok(None);
    }
    let c = entry.c;
    Ok(Some(
        (c * first.common_weight()).max((1.0 - c) * second.common_weight()),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = ">")]
    Greater,
    #[serde(rename = "~")]
    Similar,
    #[serde(rename = "inconclusive")]
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowEvidence {
    pub label: String,
    pub c: f64,
    pub winning_lambda: f64,
    pub prediction: Option<f64>,
    /// Best value under each component's own ansatz.
    pub component_lambda: [f64; 2],
    /// Component (0 or 1) whose ansatz wins this row.
    pub winner: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairRelation {
    pub family: String,
    pub first: String,
    pub second: String,
    pub relation: Relation,
    /// The higher-ranked component for ">".
    pub stronger: Option<String>,
    /// The ordering is stated in the source without numerical support.
    pub asserted_by_source: bool,
    pub evidence: Vec<RowEvidence>,
}

impl PairRelation {
    /// "A > B", "A ~ B" or "A ? B".
    pub fn summary(&self) -> String {
        match (self.relation, &self.stronger) {
            (Relation::Greater, Some(s)) => {
                let weaker = if *s == self.first {
                    &self.second
                } else {
                    &self.first
                };
                format!("{s} > {weaker}")
            }
            (Relation::Similar, _) => format!("{} ~ {}", self.first, self.second),
            _ => format!("{} ? {}", self.first, self.second),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HierarchyOrdering {
    pub relations: Vec<PairRelation>,
}

impl HierarchyOrdering {
    pub fn for_family(&self, family: &str) -> Option<&PairRelation> {
        self.relations.iter().find(|r| r.family == family)
    }
}

fn row_evidence(r: &CaseReport) -> RowEvidence {
    let win = r.winner_lambda;
    let cells = [r.cell(Case::First), r.cell(Case::Second)];
    let attains = cells.map(|c| c.best() >= win - HIERARCHY_TOL);
    let winner = match attains {
        [true, false] => Some(0),
        [false, true] => Some(1),
        [true, true] if cells[0].classes != cells[1].classes => {
            Some(if cells[0].classes < cells[1].classes {
                0
            } else {
                1
            })
        }
        _ => None,
    };
    RowEvidence {
        label: r.entry.label.clone(),
        c: r.entry.c,
        winning_lambda: win,
        prediction: r.prediction,
        component_lambda: cells.map(|c| c.best()),
        winner,
    }
}

/// Pairwise symmetry ordering of the two components of each family.
///
/// A family is "~" when every row's winning value equals the
/// coefficient-rule prediction. Otherwise a component wins a row when its
/// ansatz reaches the winning value and the other's does not, or both do
/// and its ansatz is coarser (fewer classes); two wins out of three give
/// ">". Anything else is inconclusive.
pub fn infer_hierarchy(reports: &[CaseReport]) -> HierarchyOrdering {
    let mut by_family: BTreeMap<(char, usize, String), Vec<&CaseReport>> = BTreeMap::new();
    for r in reports {
        let fam = &r.entry.family;
        let num: usize = fam[1..].parse().unwrap_or(0);
        by_family
            .entry((r.entry.table, num, fam.clone()))
            .or_default()
            .push(r);
    }
    let relations = by_family
        .into_values()
        .map(|rows| {
            let entry = &rows[0].entry;
            let [a, b] = entry.component_ids();
            let (first, second) = (a.label(), b.label());
            let evidence: Vec<RowEvidence> = rows.iter().map(|r| row_evidence(r)).collect();
            let similar = rows.len() == 3
                && evidence.iter().all(|e| {
                    e.prediction
                        .is_some_and(|p| (e.winning_lambda - p).abs() <= HIERARCHY_TOL)
                });
            let wins = |k| evidence.iter().filter(|e| e.winner == Some(k)).count();
            let (relation, stronger) = if similar {
                (Relation::Similar, None)
            } else if rows.len() == 3 && wins(0) >= 2 {
                (Relation::Greater, Some(first.clone()))
            } else if rows.len() == 3 && wins(1) >= 2 {
                (Relation::Greater, Some(second.clone()))
            } else {
                (Relation::Inconclusive, None)
            };
            PairRelation {
                family: entry.family.clone(),
                asserted_by_source: entry.family == "A3",
                first,
                second,
                relation,
                stronger,
                evidence,
            }
        })
        .collect();
    HierarchyOrdering { relations }
}
