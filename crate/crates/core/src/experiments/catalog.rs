//! The two-component superpositions of the reference tables, with the
//! published values kept for comparison.

use std::f64::consts::PI;

use serde::{Serialize, Serializer};

use crate::closed_form::{lambda_ghz_family, lambda_known_basic, ClosedFormResult, Fraction};
use crate::error::{Error, Result};
use crate::qstate::{BasicState, HybridSpec, SeedPattern};

/// Relative phase used for every table row.
pub const TABLE_PHI: f64 = PI / 3.0;

/// Coefficient values c₁, c₂, c₃ of the rows of one family.
pub const TABLE_COEFFICIENTS: [f64; 3] = [0.25, 0.5, 0.75];

/// Named basic states appearing in the tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasicId {
    Ghz(usize),
    W(usize),
    GhzPrime(usize),
    Psi4,
    Psi1a5,
    Psi1b5,
    Psi1a6,
    Psi2a6,
    Psi3x6,
    Psi1x8,
    Psi2x8,
}

impl BasicId {
    pub fn label(self) -> String {
        match self {
            BasicId::Ghz(n) => format!("GHZ_{n}"),
            BasicId::W(n) => format!("W_{n}"),
            BasicId::GhzPrime(n) => format!("GHZ'_{n}"),
            BasicId::Psi4 => "psi_4".into(),
            BasicId::Psi1a5 => "psi^1a_5".into(),
            BasicId::Psi1b5 => "psi^1b_5".into(),
            BasicId::Psi1a6 => "psi^1a_6".into(),
            BasicId::Psi2a6 => "psi^2a_6".into(),
            BasicId::Psi3x6 => "psi^3_6".into(),
            BasicId::Psi1x8 => "psi^1_8".into(),
            BasicId::Psi2x8 => "psi^2_8".into(),
        }
    }

    fn seed_bits(self) -> Option<&'static str> {
        Some(match self {
            BasicId::Psi4 => "1100",
            BasicId::Psi1a5 => "11000",
            BasicId::Psi1b5 => "10100",
            BasicId::Psi1a6 => "110000",
            BasicId::Psi2a6 => "111000",
            BasicId::Psi3x6 => "100100",
            BasicId::Psi1x8 => "10001000",
            BasicId::Psi2x8 => "11001100",
            _ => return None,
        })
    }

    pub fn build(self) -> Result<BasicState> {
        match self {
            BasicId::Ghz(n) => BasicState::ghz(n),
            BasicId::W(n) => BasicState::w(n),
            BasicId::GhzPrime(n) => BasicState::ghz_prime(n),
            other => {
                let seed: SeedPattern = other.seed_bits().expect("seeded id").parse()?;
                Ok(BasicState::seeded(other.label(), seed))
            }
        }
    }

    /// Known maximal overlap of the basic state itself.
    pub fn closed_form(self) -> Result<ClosedFormResult> {
        if let BasicId::Ghz(n) = self {
            return lambda_ghz_family(n, 0.5, 0.0);
        }
        let basic = self.build()?;
        lambda_known_basic(&basic.seed).ok_or_else(|| Error::UnknownEntry(self.label()))
    }
}

/// Serializes a [`BasicId`] as its label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasicIdLabel(pub BasicId);

impl Serialize for BasicIdLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(&self.0.label())
    }
}

/// One published cell of a table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PublishedValue {
    /// Case not evaluated (its ansatz coincides with the all-equal one).
    Dash,
    Decimal {
        value: f64,
        bold: bool,
    },
    Exact {
        value: Fraction,
        bold: bool,
    },
}

impl PublishedValue {
    pub fn value(&self) -> Option<f64> {
        match self {
            PublishedValue::Dash => None,
            PublishedValue::Decimal { value, .. } => Some(*value),
            PublishedValue::Exact { value, .. } => Some(value.value()),
        }
    }

    pub fn is_bold(&self) -> bool {
        matches!(
            self,
            PublishedValue::Decimal { bold: true, .. } | PublishedValue::Exact { bold: true, .. }
        )
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, PublishedValue::Exact { .. })
    }
}

impl Serialize for PublishedValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        match self {
            PublishedValue::Dash => s.serialize_none(),
            PublishedValue::Decimal { value, bold } => {
                let mut st = s.serialize_struct("PublishedValue", 3)?;
                st.serialize_field("value", value)?;
                st.serialize_field("exact", &Option::<Fraction>::None)?;
                st.serialize_field("bold", bold)?;
                st.end()
            }
            PublishedValue::Exact { value, bold } => {
                let mut st = s.serialize_struct("PublishedValue", 3)?;
                st.serialize_field("value", &value.value())?;
                st.serialize_field("exact", value)?;
                st.serialize_field("bold", bold)?;
                st.end()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CatalogEntry {
    /// Row label such as "A2-3".
    pub label: String,
    pub family: String,
    pub table: char,
    pub components: [BasicIdLabel; 2],
    pub c: f64,
    pub phi: f64,
    /// Published values for case 0 to case 3, in our case numbering.
    pub published: [PublishedValue; 4],
    /// Published columns for cases 1 and 2 were swapped before storing.
    pub published_columns_swapped: bool,
    pub note: Option<&'static str>,
}

impl CatalogEntry {
    pub fn component_ids(&self) -> [BasicId; 2] {
        [self.components[0].0, self.components[1].0]
    }

    pub fn n_sites(&self) -> usize {
        match self.components[0].0 {
            BasicId::Ghz(n) | BasicId::W(n) | BasicId::GhzPrime(n) => n,
            other => other.seed_bits().expect("seeded id").len(),
        }
    }

    /// √c |first⟩ + e^{iφ} √(1 − c) |second⟩.
    pub fn spec(&self) -> Result<HybridSpec> {
        let [a, b] = self.component_ids();
        HybridSpec::two_component(a.build()?, b.build()?, self.c, self.phi)
    }

    /// Published cases marked as maximal, in our case numbering.
    pub fn published_winners(&self) -> Vec<usize> {
        (0..4).filter(|&i| self.published[i].is_bold()).collect()
    }

    /// A bold published cell is an exact fraction.
    pub fn has_exact_winner(&self) -> bool {
        self.published.iter().any(|p| p.is_bold() && p.is_exact())
    }
}

// Cell shorthands for the tables below.
const D: PublishedValue = PublishedValue::Dash;

const fn n(value: f64) -> PublishedValue {
    PublishedValue::Decimal { value, bold: false }
}

const fn b(value: f64) -> PublishedValue {
    PublishedValue::Decimal { value, bold: true }
}

const fn nf(num: u128, den: u128) -> PublishedValue {
    PublishedValue::Exact {
        value: Fraction { num, den },
        bold: false,
    }
}

const fn bf(num: u128, den: u128) -> PublishedValue {
    PublishedValue::Exact {
        value: Fraction { num, den },
        bold: true,
    }
}

struct Family {
    name: &'static str,
    first: BasicId,
    second: BasicId,
    rows: [[PublishedValue; 4]; 3],
    swapped: bool,
    notes: [Option<&'static str>; 3],
}

const fn fam(
    name: &'static str,
    first: BasicId,
    second: BasicId,
    rows: [[PublishedValue; 4]; 3],
) -> Family {
    Family {
        name,
        first,
        second,
        rows,
        swapped: false,
        notes: [None; 3],
    }
}

use BasicId::*;

fn families() -> Vec<Family> {
    vec![
        fam(
            "A1",
            Ghz(4),
            Psi4,
            [
                [n(0.28253), D, n(0.29458), b(0.2953)],
                [n(0.28452), D, n(0.29077), b(0.2916)],
                [n(0.34184), D, n(0.37407), bf(3, 8)],
            ],
        ),
        fam(
            "A2",
            Ghz(4),
            GhzPrime(4),
            [
                [n(0.3495), D, bf(3, 8), n(0.18)],
                [n(0.24912), D, b(0.25), b(0.25)],
                [n(0.33599), D, n(0.37282), bf(3, 8)],
            ],
        ),
        fam(
            "A3",
            W(4),
            Psi4,
            [
                [n(0.47811), D, n(0.50217), b(0.50364)],
                [n(0.51147), D, n(0.57522), b(0.5782)],
                [n(0.52825), D, n(0.58671), b(0.58832)],
            ],
        ),
        fam(
            "A4",
            W(4),
            GhzPrime(4),
            [
                [n(0.44235), D, b(0.49037), n(0.35)],
                [n(0.43111), D, b(0.48201), n(0.444)],
                [n(0.47361), D, n(0.49538), b(0.49580)],
            ],
        ),
        fam(
            "A5",
            GhzPrime(4),
            Psi4,
            [
                [n(0.29404), n(0.29524), n(0.29518), b(0.29530)],
                [n(0.28207), b(0.29157), n(0.27564), n(0.27589)],
                [n(0.36237), bf(3, 8), n(0.23274), n(0.2328)],
            ],
        ),
        fam(
            "B1",
            Ghz(5),
            Psi1a5,
            [
                [n(0.20702), D, n(0.24871), b(0.25124)],
                [n(0.24403), D, n(0.27173), b(0.27329)],
                [n(0.31523), D, n(0.37251), bf(3, 8)],
            ],
        ),
        fam(
            "B2",
            W(5),
            Psi1a5,
            [
                [n(0.33628), D, n(0.40932), b(0.4102)],
                [n(0.44841), D, n(0.49339), b(0.49597)],
                [n(0.39626), D, n(0.52329), b(0.52734)],
            ],
        ),
        fam(
            "B3",
            Psi1a5,
            Psi1b5,
            [
                [n(0.22777), n(0.24746), n(0.24749), b(0.24763)],
                [n(0.22326), n(0.25915), n(0.25899), b(0.25920)],
                [n(0.22985), n(0.24752), n(0.24707), b(0.24762)],
            ],
        ),
        fam(
            "C1",
            Ghz(6),
            GhzPrime(6),
            [
                [n(0.24839), D, bf(3, 8), nf(1, 8)],
                [n(0.18059), D, b(0.25), b(0.25)],
                [n(0.25466), D, n(0.37159), bf(3, 8)],
            ],
        ),
        fam(
            "C2",
            W(6),
            GhzPrime(6),
            [
                [n(0.29698), D, bf(3, 8), n(0.159)],
                [n(0.21546), D, b(0.2672), n(0.25793)],
                [n(0.25309), D, b(0.34657), b(0.34658)],
            ],
        ),
        fam(
            "C3",
            Ghz(6),
            Psi1a6,
            [
                [n(0.16963), D, n(0.1952), b(0.20225)],
                [n(0.20256), D, n(0.24579), b(0.25706)],
                [n(0.2557), D, n(0.35873), bf(3, 8)],
            ],
        ),
        fam(
            "C4",
            W(6),
            Psi1a6,
            [
                [n(0.24022), D, n(0.3537), b(0.35595)],
                [n(0.30666), D, n(0.44431), b(0.44687)],
                [n(0.33181), D, n(0.48512), b(0.48992)],
            ],
        ),
        fam(
            "C5",
            Ghz(6),
            Psi2a6,
            [
                [n(0.11394), D, n(0.12491), bf(1, 8)],
                [n(0.19292), D, n(0.24775), b(0.25)],
                [n(0.2892), D, n(0.37285), bf(3, 8)],
            ],
        ),
        fam(
            "C6",
            W(6),
            Psi2a6,
            [
                [n(0.17516), D, n(0.22896), b(0.22998)],
                [n(0.20439), D, n(0.31553), b(0.31641)],
                [n(0.24171), D, n(0.38406), b(0.38689)],
            ],
        ),
        fam(
            "C7",
            GhzPrime(6),
            Psi1a6,
            [
                [n(0.1474), n(0.15244), n(0.15161), b(0.153)],
                [n(0.15756), b(0.25), n(0.1344), n(0.135)],
                [n(0.2534), bf(3, 8), n(0.10211), n(0.10273)],
            ],
        ),
        fam(
            "C8",
            GhzPrime(6),
            Psi2a6,
            [
                [n(0.11912), bf(1, 8), n(0.12456), n(0.1015)],
                [n(0.21251), b(0.25), n(0.08947), n(0.09)],
                [n(0.27651), bf(3, 8), n(0.07025), n(0.07)],
            ],
        ),
        fam(
            "C9",
            Ghz(6),
            Psi3x6,
            [
                [n(0.19456), D, b(0.25), n(0.14)],
                [n(0.19164), D, n(0.24937), b(0.25)],
                [n(0.27267), D, n(0.37207), bf(3, 8)],
            ],
        ),
        fam(
            "C10",
            W(6),
            Psi3x6,
            [
                [n(0.25579), D, b(0.33068), n(0.2603)],
                [n(0.26902), D, b(0.36098), b(0.36095)],
                [n(0.26567), D, b(0.42781), b(0.42782)],
            ],
        ),
        fam(
            "C11",
            GhzPrime(6),
            Psi3x6,
            [
                [n(0.18722), n(0.12411), b(0.25), n(0.09)],
                [n(0.18246), b(0.25), n(0.16624), n(0.085)],
                [n(0.25725), bf(3, 8), n(0.08286), n(0.072)],
            ],
        ),
        fam(
            "C12",
            Psi3x6,
            Psi1a6,
            [
                [n(0.13548), n(0.15535), b(0.15547), b(0.15555)],
                [n(0.13392), bf(1, 6), n(0.14518), n(0.14532)],
                [n(0.20826), b(0.25), n(0.12247), n(0.12263)],
            ],
        ),
        fam(
            "C13",
            Psi3x6,
            Psi2a6,
            [
                [n(0.12497), b(0.14731), b(0.14731), b(0.14731)],
                [n(0.11305), bf(1, 6), n(0.14542), n(0.14542)],
                [n(0.15592), b(0.25), n(0.12959), n(0.12960)],
            ],
        ),
        fam(
            "D1",
            Ghz(8),
            GhzPrime(8),
            [
                [n(0.17958), D, bf(3, 8), nf(1, 8)],
                [n(0.11301), D, b(0.25), b(0.25)],
                [n(0.16164), D, n(0.37167), bf(3, 8)],
            ],
        ),
        fam(
            "D2",
            W(8),
            GhzPrime(8),
            [
                [n(0.16865), D, bf(3, 8), n(0.12)],
                [n(0.1515), D, b(0.25), n(0.20792)],
                [n(0.14598), D, b(0.30415), b(0.30416)],
            ],
        ),
        fam(
            "D3",
            Ghz(8),
            Psi1x8,
            [
                [n(0.09073), D, bf(3, 16), n(0.1307)],
                [n(0.12702), D, n(0.24895), b(0.25)],
                [n(0.14792), D, n(0.37068), bf(3, 8)],
            ],
        ),
        fam(
            "D4",
            W(8),
            Psi1x8,
            [
                [n(0.12409), D, b(0.24924), n(0.22288)],
                [n(0.17166), D, b(0.32373), b(0.32373)],
                [n(0.15625), D, b(0.39656), b(0.39656)],
            ],
        ),
        fam(
            "D5",
            Ghz(8),
            Psi2x8,
            [
                [n(0.08002), D, bf(3, 16), nf(1, 8)],
                [n(0.13844), D, n(0.24804), b(0.25)],
                [n(0.14722), D, n(0.3733), bf(3, 8)],
            ],
        ),
        Family {
            notes: [
                Some("case 2 printed as 3/16 alongside a sampled 0.185; stored as 3/16"),
                None,
                None,
            ],
            ..fam(
                "D6",
                W(8),
                Psi2x8,
                [
                    [n(0.08814), D, bf(3, 16), n(0.11464)],
                    [n(0.09481), D, b(0.21338), b(0.21337)],
                    [n(0.15491), D, n(0.30844), b(0.30846)],
                ],
            )
        },
        fam(
            "D7",
            GhzPrime(8),
            Psi1x8,
            [
                [n(0.11729), n(0.13375), bf(3, 16), n(0.04402)],
                [n(0.11472), b(0.25), n(0.12349), n(0.03601)],
                [n(0.2053), bf(3, 8), n(0.06219), n(0.02544)],
            ],
        ),
        fam(
            "D8",
            GhzPrime(8),
            Psi2x8,
            [
                [n(0.0962), n(0.12346), bf(3, 16), n(0.1015)],
                [n(0.13414), b(0.25), n(0.12402), n(0.017)],
                [n(0.17557), bf(3, 8), n(0.06204), n(0.01455)],
            ],
        ),
        // published case 1 and case 2 columns belong to the second and
        // first component respectively; stored here in our order
        Family {
            swapped: true,
            notes: [
                Some("published case 3 value 0.3486 exceeds the free optimum"),
                None,
                None,
            ],
            ..fam(
                "D9",
                Psi1x8,
                Psi2x8,
                [
                    [n(0.07897), n(0.06424), bf(3, 16), n(0.3486)],
                    [n(0.07395), bf(1, 8), bf(1, 8), n(0.04389)],
                    [n(0.09303), bf(3, 16), n(0.0258), n(0.04943)],
                ],
            )
        },
        fam(
            "E1",
            Psi1a6,
            Psi2a6,
            [
                [b(0.2407), n(0.18365), n(0.20275), n(0.18365)],
                [b(0.25199), n(0.20546), n(0.21439), n(0.20545)],
                [b(0.24209), n(0.20251), n(0.20574), n(0.20251)],
            ],
        ),
    ]
}

/// Every table row: 31 families at c = 1/4, 1/2, 3/4, φ = π/3.
pub fn build_catalog() -> Vec<CatalogEntry> {
    let mut out = Vec::with_capacity(93);
    for f in families() {
        for (i, row) in f.rows.iter().enumerate() {
            out.push(CatalogEntry {
                label: format!("{}-{}", f.name, i + 1),
                family: f.name.to_string(),
                table: f.name.chars().next().expect("non-empty name"),
                components: [BasicIdLabel(f.first), BasicIdLabel(f.second)],
                c: TABLE_COEFFICIENTS[i],
                phi: TABLE_PHI,
                published: *row,
                published_columns_swapped: f.swapped,
                note: f.notes[i],
            });
        }
    }
    out
}

/// Distinct basic states used by the tables, in order of first use.
pub fn catalog_basic_ids() -> Vec<BasicId> {
    let mut ids: Vec<BasicId> = Vec::new();
    for e in build_catalog() {
        for id in e.component_ids() {
            if !ids.contains(&id) {
                ids.push(id);
            }
        }
    }
    ids
}

/// Rows of one table ('A' to 'E'), or all rows for "all".
pub fn catalog_subset(set: &str) -> Result<Vec<CatalogEntry>> {
    let all = build_catalog();
    if set.eq_ignore_ascii_case("all") {
        return Ok(all);
    }
    let mut chars = set.chars();
    match (chars.next().map(|c| c.to_ascii_uppercase()), chars.next()) {
        (Some(t @ 'A'..='E'), None) => Ok(all.into_iter().filter(|e| e.table == t).collect()),
        _ => Err(Error::UnknownEntry(format!("table set '{set}'"))),
    }
}

pub fn find_entry(label: &str) -> Result<CatalogEntry> {
    build_catalog()
        .into_iter()
        .find(|e| e.label.eq_ignore_ascii_case(label))
        .ok_or_else(|| Error::UnknownEntry(label.to_string()))
}
