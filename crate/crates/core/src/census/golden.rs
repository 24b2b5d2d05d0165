//! Golden tables: printed census tables transcribed verbatim, and the
//! field-by-field comparison that turns them into an errata report.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};

use super::build::{Census, CensusRow, EulerSource};
use super::covering::{diagonal_suborbifolds_of, lift_components, SubOrbifold};
use super::cy::{cy_defect, DeltaConvention};
use super::errata::{is_known, ErrataEntry, ErrataField, ErrataNote, ErrataReport};
use crate::error::{Error, Result};
use crate::rational::RationalValue;
use crate::signature::{parse_components, parse_signature, LocusComponent, OrbifoldSignature};
use crate::uniformization::failing_prime_power;

pub const GOLDEN_DIR_ENV: &str = "ORBICENSUS_GOLDEN_DIR";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenTable {
    pub table: String,
    pub dim: u32,
    /// False when the printed table is a selection; then only containment
    /// is checked.
    pub complete: bool,
    pub rows: Vec<GoldenRow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenRow {
    pub row: u32,
    pub signature: String,
    pub d: Option<u64>,
    pub e: Option<i64>,
    pub pi1: Option<GoldenOrder>,
    pub delta: Option<i64>,
    #[serde(default)]
    pub coverings: Vec<GoldenCovering>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GoldenOrder {
    Finite(u64),
    /// Only `"infinite"` is meaningful.
    Text(String),
}

impl GoldenOrder {
    fn as_order(&self) -> Option<BigUint> {
        match self {
            GoldenOrder::Finite(v) => Some(BigUint::from(*v)),
            GoldenOrder::Text(_) => None,
        }
    }

    fn render(&self) -> String {
        match self {
            GoldenOrder::Finite(v) => v.to_string(),
            GoldenOrder::Text(s) => s.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenCovering {
    /// Positional divisor vector over the printed signature; `m` is a
    /// placeholder for an arbitrary exponent.
    pub sub: String,
    pub target_row: u32,
}

impl GoldenCovering {
    fn render(&self) -> String {
        format!("{}{{{}}}", self.sub, self.target_row)
    }
}

pub fn load_golden(path: &Path) -> Result<GoldenTable> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let table: GoldenTable = serde_json::from_str(&text)
        .map_err(|e| Error::Golden(format!("{}: {e}", path.display())))?;
    Ok(table)
}

/// File name of the bundled golden table for dimension `n`.
pub fn golden_file_name(n: u32) -> String {
    match n {
        1 => "p1.json".into(),
        2 => "k3.json".into(),
        3 => "cy3.json".into(),
        n => format!("p{n}.json"),
    }
}

/// Resolves a golden path: as given if it exists, otherwise relative to
/// `$ORBICENSUS_GOLDEN_DIR`.
pub fn resolve_golden(path: &Path) -> PathBuf {
    if path.exists() || path.is_absolute() {
        return path.to_path_buf();
    }
    match std::env::var_os(GOLDEN_DIR_ENV) {
        Some(dir) => Path::new(&dir).join(path),
        None => path.to_path_buf(),
    }
}

/// Sub-orbifold vector as printed: integers, or `m` for "any exponent",
/// which is checked with `m = 2`.
fn parse_sub(text: &str) -> Result<SubOrbifold> {
    let inner = text
        .trim()
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| Error::InvalidSubOrbifold(format!("'{text}' is not bracketed")))?;
    let divisors = inner
        .split(',')
        .map(|t| match t.trim() {
            "m" => Ok(2),
            t => t
                .parse::<u64>()
                .map_err(|_| Error::InvalidSubOrbifold(format!("bad entry '{t}' in {text}"))),
        })
        .collect::<Result<Vec<u64>>>()?;
    Ok(SubOrbifold { divisors })
}

/// Why a printed signature is not in the census.
fn absence_reason(sig: &OrbifoldSignature) -> String {
    match cy_defect(sig) {
        Ok(d) if !d.is_zero() => return format!("Calabi-Yau defect {d}, not 0"),
        Err(e) => return e.to_string(),
        _ => {}
    }
    if sig.dim() >= 2 {
        if let Ok(f) = sig.f_vector() {
            if let Some((p, a, count)) = failing_prime_power(f.values(), sig.dim()) {
                return format!("not uniformizable: {p}^{a} divides {count} f-values, needs {}", sig.dim() + 1);
            }
        }
    }
    "not produced by the enumeration".into()
}

/// Retries a signature with doubled closing brackets collapsed.
fn lenient_parse(text: &str, dim: u32) -> Option<OrbifoldSignature> {
    let trimmed = text.trim().trim_end_matches(']');
    parse_signature(&format!("{trimmed}]"), dim).ok()
}

struct Comparison<'a> {
    golden: &'a GoldenTable,
    census: &'a Census,
    convention: DeltaConvention,
    report: ErrataReport,
    /// golden row id by canonical signature
    printed_rows: BTreeMap<OrbifoldSignature, u32>,
}

impl Comparison<'_> {
    fn entry(&mut self, row: Option<u32>, field: ErrataField, printed: String, computed: String, why: String) {
        let mut e = ErrataEntry {
            table_id: self.golden.table.clone(),
            row_id: row,
            field,
            printed_value: printed,
            computed_value: computed,
            justification: why,
            known: false,
        };
        e.known = is_known(&e);
        self.report.entries.push(e);
    }

    fn note(&mut self, row: u32, field: ErrataField, printed: String, reason: String) {
        self.report.notes.push(ErrataNote {
            table_id: self.golden.table.clone(),
            row_id: Some(row),
            field,
            printed_value: printed,
            reason,
        });
    }

    fn row_label(&self, sig: &OrbifoldSignature) -> String {
        match self.printed_rows.get(sig) {
            Some(r) => format!("row {r} {}", sig.render_machine()),
            None => format!("{} (not a printed row)", sig.render_machine()),
        }
    }

    fn run(&mut self) {
        let n = self.golden.dim;
        let mut matched: Vec<usize> = Vec::new();
        for g in &self.golden.rows {
            if let Ok(sig) = parse_signature(&g.signature, n) {
                self.printed_rows.entry(sig).or_insert(g.row);
            }
        }

        for g in &self.golden.rows {
            let sig = match parse_signature(&g.signature, n) {
                Ok(s) => s,
                Err(e) => {
                    let repaired = match lenient_parse(&g.signature, n) {
                        Some(s) => {
                            let status = match self.census.find(&s) {
                                Some(r) => format!("in the census as row {}", r.row),
                                None => absence_reason(&s),
                            };
                            format!("; read as {}: {status}", s.render_machine())
                        }
                        None => String::new(),
                    };
                    self.entry(
                        Some(g.row),
                        ErrataField::Signature,
                        g.signature.clone(),
                        format!("unparseable ({e}){repaired}"),
                        "signature grammar; Calabi-Yau condition Σ d_i(1 - 1/m_i) = n+1 on the repaired reading".into(),
                    );
                    continue;
                }
            };
            let Some(row) = self.census.find(&sig) else {
                self.entry(
                    Some(g.row),
                    ErrataField::Signature,
                    g.signature.clone(),
                    absence_reason(&sig),
                    "Calabi-Yau condition and prime-power uniformizability test".into(),
                );
                continue;
            };
            matched.push(row.row);
            self.compare_row(g, row);
            self.compare_coverings(g);
        }

        if self.golden.complete {
            for r in &self.census.rows {
                if !matched.contains(&r.row) {
                    let order = r.group_order.as_ref().map_or("infinite".into(), |o| o.to_string());
                    self.entry(
                        None,
                        ErrataField::MissingRow,
                        "absent".into(),
                        r.signature.render_machine(),
                        format!(
                            "census row {}: Calabi-Yau defect 0, uniformizable, d = {}, |π₁| = {order}, δ = {}",
                            r.row,
                            r.degree,
                            r.delta(self.convention)
                        ),
                    );
                }
            }
        }
    }

    fn compare_row(&mut self, g: &GoldenRow, row: &CensusRow) {
        if let Some(d) = g.d {
            if d != row.degree {
                self.entry(
                    Some(g.row),
                    ErrataField::Degree,
                    d.to_string(),
                    row.degree.to_string(),
                    "degree is Σ d_i of the printed signature".into(),
                );
            }
        }

        let computed_delta = row.delta(self.convention).clone();
        let order_ok = match &g.pi1 {
            Some(p) => p.as_order() == row.group_order,
            None => true,
        };
        let delta_ok = g.delta.is_none_or(|d| BigInt::from(d) == computed_delta);
        let order_str = row.group_order.as_ref().map_or("infinite".to_string(), |o| o.to_string());
        let swapped = !order_ok
            && !delta_ok
            && g.pi1.as_ref().and_then(|p| p.as_order()).map(BigInt::from) == Some(computed_delta.clone())
            && g.delta.map(|d| d.to_string()) == Some(order_str.clone());
        if swapped {
            self.entry(
                Some(g.row),
                ErrataField::GroupOrderDeltaSwap,
                format!("pi1={}, delta={}", g.pi1.as_ref().unwrap().render(), g.delta.unwrap()),
                format!("pi1={order_str}, delta={computed_delta}"),
                "order formula Π m_i / lcm(f) agrees with the Smith normal form; δ from the linear-system count".into(),
            );
        } else {
            if !order_ok {
                self.entry(
                    Some(g.row),
                    ErrataField::GroupOrder,
                    g.pi1.as_ref().unwrap().render(),
                    order_str.clone(),
                    self.order_justification(row),
                );
            }
            if !delta_ok {
                let other = match self.convention {
                    DeltaConvention::Moduli => ("linear-system", &row.delta_linear_system),
                    DeltaConvention::LinearSystem => ("moduli", &row.delta_moduli),
                };
                self.entry(
                    Some(g.row),
                    ErrataField::Delta,
                    g.delta.unwrap().to_string(),
                    computed_delta.to_string(),
                    format!(
                        "δ = Σ [C(n+d_i, n) - 1] - n(n+2); the {} convention gives {}",
                        other.0, other.1
                    ),
                );
            }
        }

        match (g.e, &row.e_universal) {
            (Some(p), Some(c)) if BigInt::from(p) != *c => {
                let why = match row.e_source {
                    EulerSource::ComputedLinear => format!(
                        "e_orb = {} from both the stratified sum and the symmetric-function formula, times |π₁| = {order_str}",
                        row.e_orb.as_ref().expect("linear row")
                    ),
                    EulerSource::Propagated { from_row } => {
                        let src = self.census.row(from_row);
                        format!(
                            "liftings share the universal uniformization: propagated from {} along a covering edge",
                            self.row_label(&src.signature)
                        )
                    }
                    _ => "fixture value".into(),
                };
                self.entry(Some(g.row), ErrataField::Euler, p.to_string(), c.to_string(), why);
            }
            (Some(p), None) => self.note(
                g.row,
                ErrataField::Euler,
                p.to_string(),
                "non-linear row not connected to a linear row by covering edges; value not verified".into(),
            ),
            (None, Some(c)) if row.e_source != EulerSource::Fixture => self.note(
                g.row,
                ErrataField::Euler,
                "blank".into(),
                match row.e_source {
                    EulerSource::Propagated { from_row } => format!("computed {c}, carried from row {from_row}"),
                    _ => format!("computed {c} from the orbifold Euler number"),
                },
            ),
            _ => {}
        }
    }

    fn order_justification(&self, row: &CensusRow) -> String {
        let mut why = "order formula Π m_i / lcm(f) agrees with the Smith normal form".to_string();
        if let (Some(order), Some(e_orb)) = (&row.group_order, &row.e_orb) {
            why.push_str(&format!("; e_orb = {e_orb} so e = {}", e_orb.clone() * RationalValue::from_integer(BigInt::from(order.clone()))));
        }
        for (src, edge) in self.census.edges() {
            if edge.target_row == Some(row.row) {
                if let Some(o) = &src.group_order {
                    why.push_str(&format!(
                        "; conservation from {}: {o} = {} · {}",
                        self.row_label(&src.signature),
                        row.group_order.as_ref().unwrap(),
                        edge.deck_order
                    ));
                }
            }
        }
        why
    }

    fn compare_coverings(&mut self, g: &GoldenRow) {
        let n = self.golden.dim;
        let Ok(printed) = parse_components(&g.signature) else { return };
        for cov in &g.coverings {
            let shown = cov.render();
            let outcome = parse_sub(&cov.sub).and_then(|s| lift_components(n, &printed, &s));
            match outcome {
                Ok(target) => {
                    let resolved = self.printed_rows.get(&target).copied();
                    if resolved != Some(cov.target_row) {
                        self.entry(
                            Some(g.row),
                            ErrataField::Covering,
                            shown,
                            self.row_label(&target),
                            lift_justification(n),
                        );
                    }
                }
                Err(e) => {
                    let hint = self.reaching_choice(n, &printed, cov);
                    self.entry(
                        Some(g.row),
                        ErrataField::Covering,
                        shown,
                        e.to_string(),
                        format!("a diagonal sub-orbifold puts one exponent c on exactly n+1 lines{hint}"),
                    );
                }
            }
        }
    }

    /// Looks for a valid diagonal sub-orbifold with the printed exponent
    /// that lifts to the printed target row.
    fn reaching_choice(&self, n: u32, printed: &[LocusComponent], cov: &GoldenCovering) -> String {
        let c = parse_sub(&cov.sub).map(|s| s.exponent()).unwrap_or(0);
        let target = self
            .golden
            .rows
            .iter()
            .find(|r| r.row == cov.target_row)
            .and_then(|r| parse_signature(&r.signature, n).ok());
        let Some(target) = target else { return String::new() };
        diagonal_suborbifolds_of(n, printed)
            .into_iter()
            .filter(|s| s.exponent() == c)
            .find(|s| lift_components(n, printed, s).ok().as_ref() == Some(&target))
            .map(|s| format!("; {} reaches the printed target row {}", s.render(), cov.target_row))
            .unwrap_or_default()
    }
}

fn lift_justification(n: u32) -> String {
    format!(
        "lifting rule: branch multiplicities divide by c, other degrees multiply by c{}; |π₁(source)| = |π₁(lift)| · cⁿ checked",
        if n == 1 { " (points split into c points)" } else { "" }
    )
}

/// Field-by-field comparison of a census against a golden table.
pub fn compare_to_golden(census: &Census, golden: &GoldenTable, convention: DeltaConvention) -> Result<ErrataReport> {
    if census.dim != golden.dim {
        return Err(Error::Golden(format!(
            "golden table {} is for dimension {}, census is for {}",
            golden.table, golden.dim, census.dim
        )));
    }
    let mut cmp = Comparison {
        golden,
        census,
        convention,
        report: ErrataReport::default(),
        printed_rows: BTreeMap::new(),
    };
    cmp.run();
    Ok(cmp.report)
}

impl Census {
    /// Copies errata row references onto the affected census rows.
    pub fn annotate(&mut self, report: &ErrataReport, golden: &GoldenTable) {
        for e in &report.entries {
            let sig = match e.row_id {
                Some(id) => golden
                    .rows
                    .iter()
                    .find(|r| r.row == id)
                    .and_then(|r| parse_signature(&r.signature, golden.dim).ok()),
                None => parse_signature(&e.computed_value, golden.dim).ok(),
            };
            if let Some(sig) = sig {
                if let Some(row) = self.rows.iter_mut().find(|r| r.signature == sig) {
                    row.flags.push(format!("{}:{}", e.table_id, e.field));
                }
            }
        }
    }
}
