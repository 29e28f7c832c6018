//! Coefficient triangles, reference fixtures and the typo registry.
//!
//! The fixtures under `tables/fixtures/` are verbatim transcriptions of the
//! printed source tables, typos included; each line carries the printed row
//! label followed by the printed entries. What is actually *true* lives in
//! the registry ([`typo_registry`]): a comparison passes exactly when its
//! mismatch set coincides with the registered entries, so transcription
//! drift and stale registry lines both fail loudly.

use crate::algebra::Polynomial;
use crate::families::{Family, FamilySpec};
use crate::formulas::{family_poly_closed, family_poly_recurrence};
use num_bigint::BigInt;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TableError {
    #[error("recurrence and closed form disagree for {family} at n = {n}")]
    RecurrenceMismatch { family: Family, n: usize },
    #[error("unknown table id `{0}`")]
    UnknownTable(String),
}

/// A coefficient triangle: row `n` holds the coefficients of `x^0..x^deg` of
/// the family's `n`-th polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangle {
    pub family: Family,
    pub rows: Vec<Vec<BigInt>>,
}

/// Generates rows `0..=max_n` from the closed form, cross-checked entry-wise
/// against the recurrence route.
pub fn triangle(family: Family, max_n: usize) -> Result<Triangle, TableError> {
    let mut rows = Vec::with_capacity(max_n + 1);
    for n in 0..=max_n {
        let spec = FamilySpec::new(family, n);
        let closed = family_poly_closed(spec);
        if family_poly_recurrence(spec) != closed {
            return Err(TableError::RecurrenceMismatch { family, n });
        }
        rows.push(row_of(&closed));
    }
    Ok(Triangle { family, rows })
}

fn row_of(p: &Polynomial) -> Vec<BigInt> {
    if p.is_zero() {
        vec![BigInt::from(0)]
    } else {
        p.coeffs().to_vec()
    }
}

/// The embedded reference tables, in source order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TableId {
    TwistLoop,
    TwistLoop2,
    Link,
    TwistLoop3,
    TwistLink,
    Hitch,
    ChainLink,
    Foil,
    Foil2,
    Foil3,
    Bracelet,
    Sinnet,
    Ringbolt,
    TwistKnot,
    SigmaA,
    SigmaB,
    SigmaC,
    SigmaD,
    SigmaE,
}

impl TableId {
    pub const ALL: [TableId; 19] = [
        TableId::TwistLoop,
        TableId::TwistLoop2,
        TableId::Link,
        TableId::TwistLoop3,
        TableId::TwistLink,
        TableId::Hitch,
        TableId::ChainLink,
        TableId::Foil,
        TableId::Foil2,
        TableId::Foil3,
        TableId::Bracelet,
        TableId::Sinnet,
        TableId::Ringbolt,
        TableId::TwistKnot,
        TableId::SigmaA,
        TableId::SigmaB,
        TableId::SigmaC,
        TableId::SigmaD,
        TableId::SigmaE,
    ];

    /// Stable id used in fixture file names and the registry.
    pub fn id(self) -> &'static str {
        match self {
            TableId::TwistLoop => "2",
            TableId::TwistLoop2 => "3",
            TableId::Link => "4",
            TableId::TwistLoop3 => "5",
            TableId::TwistLink => "6",
            TableId::Hitch => "7",
            TableId::ChainLink => "8",
            TableId::Foil => "9",
            TableId::Foil2 => "10",
            TableId::Foil3 => "11",
            TableId::Bracelet => "12",
            TableId::Sinnet => "13",
            TableId::Ringbolt => "15",
            TableId::TwistKnot => "16",
            TableId::SigmaA => "sigma_a",
            TableId::SigmaB => "sigma_b",
            TableId::SigmaC => "sigma_c",
            TableId::SigmaD => "sigma_d",
            TableId::SigmaE => "sigma_e",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            TableId::TwistLoop => "twist loop",
            TableId::TwistLoop2 => "2n-twist loop",
            TableId::Link => "link",
            TableId::TwistLoop3 => "3n-twist loop",
            TableId::TwistLink => "twist link",
            TableId::Hitch => "hitch",
            TableId::ChainLink => "chain link",
            TableId::Foil => "foil",
            TableId::Foil2 => "2n-foil",
            TableId::Foil3 => "3n-foil",
            TableId::Bracelet => "twist bracelet",
            TableId::Sinnet => "sinnet",
            TableId::Ringbolt => "ringbolt hitching",
            TableId::TwistKnot => "twist knot",
            TableId::SigmaA => "sigma_a",
            TableId::SigmaB => "sigma_b",
            TableId::SigmaC => "sigma_c",
            TableId::SigmaD => "sigma_d",
            TableId::SigmaE => "sigma_e",
        }
    }

    pub fn parse(s: &str) -> Result<TableId, TableError> {
        TableId::ALL
            .into_iter()
            .find(|t| t.id() == s)
            .ok_or_else(|| TableError::UnknownTable(s.to_string()))
    }

    /// Fixture file stem, also the registry key: `table8`, `table_sigma_c`.
    pub fn file_stem(self) -> String {
        let id = self.id();
        if id.chars().all(|c| c.is_ascii_digit()) {
            format!("table{id}")
        } else {
            format!("table_{id}")
        }
    }

    /// The family member whose polynomial fills row `n`.
    pub fn row_spec(self, n: usize) -> FamilySpec {
        match self {
            TableId::TwistLoop => FamilySpec::new(Family::TwistLoop, n),
            TableId::TwistLoop2 => FamilySpec::new(Family::TwistLoop, 2 * n),
            TableId::Link => FamilySpec::new(Family::Link, n),
            TableId::TwistLoop3 => FamilySpec::new(Family::TwistLoop, 3 * n),
            TableId::TwistLink => FamilySpec::new(Family::TwistLink, n),
            TableId::Hitch => FamilySpec::new(Family::Hitch, n),
            TableId::ChainLink => FamilySpec::new(Family::ChainLink, n),
            TableId::Foil => FamilySpec::new(Family::Foil, n),
            TableId::Foil2 => FamilySpec::new(Family::Foil, 2 * n),
            TableId::Foil3 => FamilySpec::new(Family::Foil, 3 * n),
            TableId::Bracelet => FamilySpec::new(Family::TwistBracelet, n),
            TableId::Sinnet => FamilySpec::new(Family::Sinnet, n),
            TableId::Ringbolt => FamilySpec::new(Family::Ringbolt, n),
            TableId::TwistKnot => FamilySpec::new(Family::TwistKnot, n),
            TableId::SigmaA => FamilySpec::new(Family::AltA, n),
            TableId::SigmaB => FamilySpec::new(Family::AltB, n),
            TableId::SigmaC => FamilySpec::new(Family::AltC, n),
            TableId::SigmaD => FamilySpec::new(Family::AltD, n),
            TableId::SigmaE => FamilySpec::new(Family::AltE, n),
        }
    }

    fn fixture_text(self) -> &'static str {
        match self {
            TableId::TwistLoop => include_str!("tables/fixtures/table2.csv"),
            TableId::TwistLoop2 => include_str!("tables/fixtures/table3.csv"),
            TableId::Link => include_str!("tables/fixtures/table4.csv"),
            TableId::TwistLoop3 => include_str!("tables/fixtures/table5.csv"),
            TableId::TwistLink => include_str!("tables/fixtures/table6.csv"),
            TableId::Hitch => include_str!("tables/fixtures/table7.csv"),
            TableId::ChainLink => include_str!("tables/fixtures/table8.csv"),
            TableId::Foil => include_str!("tables/fixtures/table9.csv"),
            TableId::Foil2 => include_str!("tables/fixtures/table10.csv"),
            TableId::Foil3 => include_str!("tables/fixtures/table11.csv"),
            TableId::Bracelet => include_str!("tables/fixtures/table12.csv"),
            TableId::Sinnet => include_str!("tables/fixtures/table13.csv"),
            TableId::Ringbolt => include_str!("tables/fixtures/table15.csv"),
            TableId::TwistKnot => include_str!("tables/fixtures/table16.csv"),
            TableId::SigmaA => include_str!("tables/fixtures/table_sigma_a.csv"),
            TableId::SigmaB => include_str!("tables/fixtures/table_sigma_b.csv"),
            TableId::SigmaC => include_str!("tables/fixtures/table_sigma_c.csv"),
            TableId::SigmaD => include_str!("tables/fixtures/table_sigma_d.csv"),
            TableId::SigmaE => include_str!("tables/fixtures/table_sigma_e.csv"),
        }
    }

    /// Printed rows as `(printed label, printed values)` pairs.
    pub fn fixture_rows(self) -> Vec<(String, Vec<BigInt>)> {
        self.fixture_text()
            .lines()
            .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
            .map(|l| {
                let mut parts = l.split(',');
                let label = parts.next().unwrap_or_default().trim().to_string();
                let values = parts
                    .map(|v| v.trim().parse::<BigInt>().expect("fixture integer"))
                    .collect();
                (label, values)
            })
            .collect()
    }

    /// Derived rows matching the fixture's extent, from the closed forms.
    pub fn derived_rows(self) -> Vec<Vec<BigInt>> {
        (0..self.fixture_rows().len())
            .map(|n| row_of(&family_poly_closed(self.row_spec(n))))
            .collect()
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "table {} ({})", self.id(), self.label())
    }
}

/// One registry line: a known discrepancy in the printed source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegistryEntry {
    pub table: String,
    pub kind: RegistryKind,
    pub position: String,
    pub printed: String,
    pub derived: String,
    pub note: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegistryKind {
    /// A wrong table entry at position `n,k`.
    Cell,
    /// A wrong printed row label at row index `n`.
    Label,
    /// A formula-level misprint; not part of any table diff.
    Note,
}

/// The embedded typo registry.
pub fn typo_registry() -> Vec<RegistryEntry> {
    include_str!("tables/fixtures/registry.txt")
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let mut parts = l.splitn(6, '|');
            let mut next = || parts.next().unwrap_or_default().trim().to_string();
            let table = next();
            let kind = match next().as_str() {
                "cell" => RegistryKind::Cell,
                "label" => RegistryKind::Label,
                _ => RegistryKind::Note,
            };
            RegistryEntry {
                table,
                kind,
                position: next(),
                printed: next(),
                derived: next(),
                note: next(),
            }
        })
        .collect()
}

/// A single fixture/derived disagreement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub kind: RegistryKind,
    /// Row index `n` (true index, not the printed label).
    pub row: usize,
    /// Column `k` for cell mismatches, 0 for label mismatches.
    pub col: usize,
    pub printed: String,
    pub derived: String,
}

/// Outcome of diffing a fixture against the derived triangle.
#[derive(Clone, Debug)]
pub struct CompareReport {
    pub table: TableId,
    pub entries_checked: usize,
    pub mismatches: Vec<Mismatch>,
    /// Registered entries for this table that the diff did not reproduce.
    pub stale_registry: Vec<RegistryEntry>,
    /// Mismatches not covered by the registry.
    pub unregistered: Vec<Mismatch>,
    pub pass: bool,
}

/// Entry-wise diff of the printed fixture against derived values. The report
/// passes exactly when the mismatch set equals the registered typos.
pub fn compare_with_reference(table: TableId) -> CompareReport {
    let fixture = table.fixture_rows();
    let derived = table.derived_rows();
    let mut mismatches = Vec::new();
    let mut entries_checked = 0;

    for (n, ((label, printed_row), derived_row)) in fixture.iter().zip(derived.iter()).enumerate() {
        if *label != n.to_string() {
            mismatches.push(Mismatch {
                kind: RegistryKind::Label,
                row: n,
                col: 0,
                printed: label.clone(),
                derived: n.to_string(),
            });
        }
        // tables print exactly the coefficients x^0..x^deg; compare that span
        for (k, printed) in printed_row.iter().enumerate() {
            entries_checked += 1;
            let derived = derived_row
                .get(k)
                .cloned()
                .unwrap_or_else(|| BigInt::from(0));
            if *printed != derived {
                mismatches.push(Mismatch {
                    kind: RegistryKind::Cell,
                    row: n,
                    col: k,
                    printed: printed.to_string(),
                    derived: derived.to_string(),
                });
            }
        }
        if printed_row.len() != derived_row.len() {
            mismatches.push(Mismatch {
                kind: RegistryKind::Cell,
                row: n,
                col: printed_row.len().min(derived_row.len()),
                printed: format!("row of width {}", printed_row.len()),
                derived: format!("row of width {}", derived_row.len()),
            });
        }
    }

    let registered: Vec<RegistryEntry> = typo_registry()
        .into_iter()
        .filter(|e| e.table == table.file_stem() && e.kind != RegistryKind::Note)
        .collect();

    let mut stale_registry = Vec::new();
    for entry in &registered {
        let hit = mismatches.iter().any(|m| registry_covers(entry, m));
        if !hit {
            stale_registry.push(entry.clone());
        }
    }
    let unregistered: Vec<Mismatch> = mismatches
        .iter()
        .filter(|m| !registered.iter().any(|e| registry_covers(e, m)))
        .cloned()
        .collect();

    let pass = stale_registry.is_empty() && unregistered.is_empty();
    CompareReport {
        table,
        entries_checked,
        mismatches,
        stale_registry,
        unregistered,
        pass,
    }
}

fn registry_covers(entry: &RegistryEntry, m: &Mismatch) -> bool {
    if entry.kind != m.kind {
        return false;
    }
    let position_match = match m.kind {
        RegistryKind::Cell => entry.position == format!("{},{}", m.row, m.col),
        RegistryKind::Label => entry.position == m.row.to_string(),
        RegistryKind::Note => false,
    };
    position_match && entry.printed == m.printed && entry.derived == m.derived
}

/// Machine-readable exports of triangle rows.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Json,
    BFile,
}

impl ExportFormat {
    pub fn parse(s: &str) -> Option<ExportFormat> {
        match s {
            "csv" => Some(ExportFormat::Csv),
            "json" => Some(ExportFormat::Json),
            "bfile" => Some(ExportFormat::BFile),
            _ => None,
        }
    }
}

/// Serializes rows as CSV (one row per line), JSON (array of arrays) or an
/// OEIS-style b-file (`index value` pairs, rows flattened left to right,
/// 0-indexed).
pub fn export(rows: &[Vec<BigInt>], format: ExportFormat) -> String {
    match format {
        ExportFormat::Csv => {
            let mut out = String::new();
            for row in rows {
                let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                out.push_str(&line.join(","));
                out.push('\n');
            }
            out
        }
        ExportFormat::Json => {
            let rows: Vec<String> = rows
                .iter()
                .map(|row| {
                    let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                    format!("[{}]", line.join(","))
                })
                .collect();
            format!("[{}]\n", rows.join(","))
        }
        ExportFormat::BFile => {
            let mut out = String::new();
            let mut index = 0usize;
            for row in rows {
                for v in row {
                    out.push_str(&format!("{index} {v}\n"));
                    index += 1;
                }
            }
            out
        }
    }
}

/// First terms of an embedded OEIS reference sequence.
pub fn oeis_fixture(name: &str) -> Option<Vec<BigInt>> {
    include_str!("tables/fixtures/oeis.csv")
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .find_map(|l| {
            let mut parts = l.split(',');
            if parts.next()?.trim() != name {
                return None;
            }
            Some(
                parts
                    .map(|v| v.trim().parse::<BigInt>().expect("fixture integer"))
                    .collect(),
            )
        })
}
