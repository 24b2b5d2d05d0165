//! Assembling the per-dimension census: invariants of every row, the
//! covering graph between rows, and Euler numbers carried along it.

use std::collections::{BTreeMap, VecDeque};

use num_bigint::{BigInt, BigUint};
use serde::Serialize;

use super::covering::{covering_edges, CoveringEdge};
use super::cy::{family_dimension, DeltaConvention};
use super::enumerate::enumerate_cy;
use super::fixtures;
use crate::error::Result;
use crate::euler::{e_orb_formula, integral_euler};
use crate::groups::{orb_group_order_formula, orb_group_structure, GroupStructure};
use crate::rational::RationalValue;
use crate::signature::OrbifoldSignature;

/// Where a row's Euler number came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum EulerSource {
    /// `e_orb · |π₁^orb|` on a linear locus.
    ComputedLinear,
    /// Copied across a covering edge from the given row: a lifting shares
    /// its universal uniformization with the source.
    Propagated { from_row: usize },
    /// Infinite-group rows, where the value is fixed at 0.
    Fixture,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub row: usize,
    pub signature: OrbifoldSignature,
    pub degree: u64,
    #[serde(serialize_with = "crate::groups::serialize_order")]
    pub group_order: Option<BigUint>,
    pub group_structure: Option<GroupStructure>,
    pub e_orb: Option<RationalValue>,
    #[serde(serialize_with = "serialize_opt_int")]
    pub e_universal: Option<BigInt>,
    pub e_source: EulerSource,
    #[serde(serialize_with = "serialize_int")]
    pub delta_moduli: BigInt,
    #[serde(serialize_with = "serialize_int")]
    pub delta_linear_system: BigInt,
    pub coverings: Vec<CoveringEdge>,
    pub flags: Vec<String>,
}

fn serialize_int<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    use num_traits::ToPrimitive;
    match v.to_i64() {
        Some(x) => s.serialize_i64(x),
        None => s.collect_str(v),
    }
}

fn serialize_opt_int<S: serde::Serializer>(v: &Option<BigInt>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => serialize_int(x, s),
        None => s.serialize_none(),
    }
}

impl CensusRow {
    pub fn delta(&self, convention: DeltaConvention) -> &BigInt {
        match convention {
            DeltaConvention::Moduli => &self.delta_moduli,
            DeltaConvention::LinearSystem => &self.delta_linear_system,
        }
    }
}

/// Two rows joined by a covering edge whose known Euler numbers differ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EulerConflict {
    pub source_row: usize,
    pub target_row: usize,
    pub source_value: String,
    pub target_value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Census {
    pub dim: u32,
    pub linear_only: bool,
    pub rows: Vec<CensusRow>,
    pub conflicts: Vec<EulerConflict>,
}

impl Census {
    pub fn find(&self, sig: &OrbifoldSignature) -> Option<&CensusRow> {
        self.rows.iter().find(|r| &r.signature == sig)
    }

    pub fn row(&self, row: usize) -> &CensusRow {
        &self.rows[row - 1]
    }

    pub fn edges(&self) -> impl Iterator<Item = (&CensusRow, &CoveringEdge)> {
        self.rows.iter().flat_map(|r| r.coverings.iter().map(move |e| (r, e)))
    }
}

fn assemble_row(row: usize, sig: OrbifoldSignature) -> Result<CensusRow> {
    let n = sig.dim();
    let infinite_group = n == 1 || sig.has_infinite();
    let (group_order, group_structure) = if infinite_group {
        (None, None)
    } else {
        let structure = orb_group_structure(&sig)?;
        let order = orb_group_order_formula(&sig)?;
        assert_eq!(structure.order().as_ref(), Some(&order), "order formula and SNF disagree on {sig}");
        (Some(order), Some(structure))
    };

    let e_orb = (sig.is_linear() && !sig.has_infinite()).then(|| e_orb_formula(&sig)).transpose()?;
    let (e_universal, e_source) = match (&group_order, &e_orb) {
        (None, _) => (Some(BigInt::from(0)), EulerSource::Fixture),
        (Some(order), Some(e)) => (Some(integral_euler(e, order)?), EulerSource::ComputedLinear),
        (Some(_), None) => (None, EulerSource::Unknown),
    };

    let completion = sig.has_infinite() && sig.len() == n as usize + 1 && sig.is_linear();
    let (delta_moduli, delta_linear_system) = if completion {
        // n+1 hyperplanes in general position are projectively rigid
        (BigInt::from(0), BigInt::from(n * (n + 2)))
    } else {
        (
            family_dimension(&sig, DeltaConvention::Moduli),
            family_dimension(&sig, DeltaConvention::LinearSystem),
        )
    };

    Ok(CensusRow {
        row,
        degree: sig.total_degree(),
        coverings: covering_edges(&sig)?,
        signature: sig,
        group_order,
        group_structure,
        e_orb,
        e_universal,
        e_source,
        delta_moduli,
        delta_linear_system,
        flags: Vec::new(),
    })
}

/// Signatures of the census in row order: the all-infinite row first, then
/// the enumeration. Dimension one is entirely fixture data.
pub fn census_signatures(n: u32, linear_only: bool) -> Vec<OrbifoldSignature> {
    if n == 1 {
        return fixtures::dim_one_all();
    }
    let mut sigs = vec![fixtures::infinite_completion(n)];
    sigs.extend(enumerate_cy(n, linear_only));
    sigs
}

pub fn build_census(n: u32, linear_only: bool) -> Result<Census> {
    let mut rows = census_signatures(n, linear_only)
        .into_iter()
        .enumerate()
        .map(|(i, sig)| assemble_row(i + 1, sig))
        .collect::<Result<Vec<_>>>()?;

    let index: BTreeMap<OrbifoldSignature, usize> = rows.iter().map(|r| (r.signature.clone(), r.row)).collect();
    for row in &mut rows {
        for edge in &mut row.coverings {
            edge.target_row = index.get(&edge.target).copied();
        }
    }

    let conflicts = propagate_euler(&mut rows);
    Ok(Census { dim: n, linear_only, rows, conflicts })
}

/// Breadth-first fixed point over the undirected covering graph, seeded by
/// every row with a computed value, in row order.
fn propagate_euler(rows: &mut [CensusRow]) -> Vec<EulerConflict> {
    let mut adjacent: Vec<Vec<usize>> = vec![Vec::new(); rows.len() + 1];
    for r in rows.iter() {
        for e in &r.coverings {
            if let Some(t) = e.target_row {
                if t != r.row {
                    adjacent[r.row].push(t);
                    adjacent[t].push(r.row);
                }
            }
        }
    }
    for a in &mut adjacent {
        a.sort_unstable();
        a.dedup();
    }

    let mut queue: VecDeque<usize> = rows
        .iter()
        .filter(|r| r.e_source == EulerSource::ComputedLinear)
        .map(|r| r.row)
        .collect();
    while let Some(u) = queue.pop_front() {
        let value = rows[u - 1].e_universal.clone().expect("queued rows are known");
        for &v in &adjacent[u] {
            let target = &mut rows[v - 1];
            if target.e_source == EulerSource::Unknown {
                target.e_universal = Some(value.clone());
                target.e_source = EulerSource::Propagated { from_row: u };
                queue.push_back(v);
            }
        }
    }

    let mut conflicts = Vec::new();
    for u in 1..=rows.len() {
        for &v in adjacent[u].iter().filter(|&&v| v > u) {
            let (ru, rv) = (&rows[u - 1], &rows[v - 1]);
            if ru.e_source == EulerSource::Fixture || rv.e_source == EulerSource::Fixture {
                continue;
            }
            if let (Some(a), Some(b)) = (&ru.e_universal, &rv.e_universal) {
                if a != b {
                    conflicts.push(EulerConflict {
                        source_row: u,
                        target_row: v,
                        source_value: a.to_string(),
                        target_value: b.to_string(),
                    });
                }
            }
        }
    }
    conflicts
}
