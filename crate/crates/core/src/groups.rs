//! Finite abelian groups given by relations on meridian generators.
//!
//! The orbifold group of a signature with components `H_1..H_r` is
//! `⟨μ_1..μ_r | m_i μ_i = 0, Σ d_i μ_i = 0⟩`; everything here is evaluated
//! through the Smith normal form of an integer relation matrix.

use std::fmt;

use itertools::Itertools;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::signature::OrbifoldSignature;

/// Integer relations `Σ c_i μ_i = 0`, one row each, over a fixed number of generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationMatrix {
    generators: usize,
    rows: Vec<Vec<BigInt>>,
}

impl RelationMatrix {
    pub fn new(generators: usize) -> Self {
        RelationMatrix { generators, rows: Vec::new() }
    }

    pub fn from_rows(generators: usize, rows: Vec<Vec<i64>>) -> Result<Self> {
        let mut m = Self::new(generators);
        for r in rows {
            m.push(r.into_iter().map(BigInt::from).collect())?;
        }
        Ok(m)
    }

    pub fn push(&mut self, row: Vec<BigInt>) -> Result<()> {
        if row.len() != self.generators {
            return Err(Error::RelationLength { got: row.len(), expected: self.generators });
        }
        self.rows.push(row);
        Ok(())
    }

    /// Adds the relation `μ_index = 0`.
    pub fn kill_generator(&mut self, index: usize) {
        let mut row = vec![BigInt::zero(); self.generators];
        row[index] = BigInt::one();
        self.rows.push(row);
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    /// Invariant factors of the presented group.
    pub fn structure(&self) -> GroupStructure {
        GroupStructure::from_diagonal(&smith_normal_form(self))
    }
}

/// Nearest integer to `a / b`, keeping remainders within half the pivot.
fn nearest_quotient(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut q, r) = a.div_mod_floor(b);
    if (&r * 2u32).abs() > b.abs() {
        q += 1;
    }
    q
}

/// Diagonal of the Smith normal form, one entry per generator: `d_1 | d_2 | …`,
/// non-negative, zeros last. Generators not hit by any relation contribute zeros.
///
/// Each round moves the smallest non-zero entry of the remaining block to the
/// pivot and reduces its row and column with nearest-integer quotients; this
/// keeps intermediate entries small.
pub fn smith_normal_form(m: &RelationMatrix) -> Vec<BigInt> {
    let cols = m.generators;
    let mut a: Vec<Vec<BigInt>> = m.rows.clone();
    let rows = a.len();
    let mut diag = Vec::with_capacity(cols);

    'outer: for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = (t..rows)
                .flat_map(|i| (t..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| !a[i][j].is_zero())
                .min_by(|&(i1, j1), &(i2, j2)| a[i1][j1].abs().cmp(&a[i2][j2].abs()))
            else {
                break 'outer;
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let p = a[t][t].clone();
            let mut dirty = false;

            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = nearest_quotient(&a[i][t], &p);
                let (top, rest) = a.split_at_mut(i);
                for (x, y) in rest[0][t..].iter_mut().zip(&top[t][t..]) {
                    *x -= &q * y;
                }
                dirty |= !a[i][t].is_zero();
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = nearest_quotient(&a[t][j], &p);
                for row in a[t..].iter_mut() {
                    let y = row[t].clone();
                    row[j] -= &q * y;
                }
                dirty |= !a[t][j].is_zero();
            }
            if dirty {
                continue;
            }

            // the pivot must divide everything left in the block
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&a[i][j] % &p).is_zero()));
            match bad {
                Some(i) => {
                    let src = a[i].clone();
                    for (x, y) in a[t][t..].iter_mut().zip(&src[t..]) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
    }
    diag.resize(cols, BigInt::zero());
    diag
}

/// A finitely generated abelian group `Z/e_1 ⊕ … ⊕ Z/e_k ⊕ Z^free_rank` with
/// `e_i >= 2` and `e_i | e_{i+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupStructure {
    pub invariant_factors: Vec<BigUint>,
    pub free_rank: usize,
}

impl GroupStructure {
    pub fn from_diagonal(diag: &[BigInt]) -> Self {
        let mut invariant_factors = Vec::new();
        let mut free_rank = 0;
        for d in diag {
            if d.is_zero() {
                free_rank += 1;
            } else if !d.is_one() {
                invariant_factors.push(d.magnitude().clone());
            }
        }
        GroupStructure { invariant_factors, free_rank }
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Order of the group, `None` if infinite.
    pub fn order(&self) -> Option<BigUint> {
        self.is_finite().then(|| self.invariant_factors.iter().product())
    }

    pub fn is_cyclic(&self) -> bool {
        self.invariant_factors.len() + self.free_rank <= 1
    }
}

impl fmt::Display for GroupStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.invariant_factors.iter().map(|e| format!("Z/{e}")).collect();
        parts.extend(std::iter::repeat_n("Z".to_string(), self.free_rank));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

impl Serialize for GroupStructure {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("GroupStructure", 3)?;
        match self.order() {
            Some(o) => st.serialize_field("order", &BigNumber(&o))?,
            None => st.serialize_field("order", "infinite")?,
        }
        let factors: Vec<BigNumber> = self.invariant_factors.iter().map(BigNumber).collect();
        st.serialize_field("invariant_factors", &factors)?;
        st.serialize_field("free_rank", &self.free_rank)?;
        st.end()
    }
}

/// JSON number when it fits in a u64, decimal string otherwise.
pub(crate) struct BigNumber<'a>(pub &'a BigUint);

impl Serialize for BigNumber<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_u64() {
            Some(v) => s.serialize_u64(v),
            None => s.collect_str(self.0),
        }
    }
}

pub(crate) fn serialize_big<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    BigNumber(v).serialize(s)
}

/// A group order where `None` means infinite.
pub(crate) fn serialize_order<S: Serializer>(v: &Option<BigUint>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(o) => BigNumber(o).serialize(s),
        None => s.serialize_str("infinite"),
    }
}

fn require_presentable(sig: &OrbifoldSignature) -> Result<Vec<u64>> {
    if sig.dim() < 2 {
        return Err(Error::DimOne);
    }
    sig.multiplicities()
}

/// Relation matrix `m_i μ_i = 0` (one row each) plus `Σ d_i μ_i = 0`.
pub fn orb_presentation(sig: &OrbifoldSignature) -> Result<RelationMatrix> {
    let ms = require_presentable(sig)?;
    let r = ms.len();
    let mut mat = RelationMatrix::new(r);
    for (i, &m) in ms.iter().enumerate() {
        let mut row = vec![BigInt::zero(); r];
        row[i] = BigInt::from(m);
        mat.rows.push(row);
    }
    mat.rows.push(sig.degrees().into_iter().map(BigInt::from).collect());
    Ok(mat)
}

pub fn orb_group_structure(sig: &OrbifoldSignature) -> Result<GroupStructure> {
    Ok(orb_presentation(sig)?.structure())
}

/// `Π m_i / lcm(f_1..f_r)`.
pub fn orb_group_order_formula(sig: &OrbifoldSignature) -> Result<BigUint> {
    let ms = require_presentable(sig)?;
    let lcm = BigUint::from(sig.f_vector()?.values().iter().fold(1u64, |a, f| a.lcm(f)));
    let prod: BigUint = ms.iter().map(|&m| BigUint::from(m)).product();
    debug_assert!((&prod % &lcm).is_zero());
    Ok(prod / lcm)
}

/// Order of the local group at a point where exactly the components in `subset` meet.
pub fn local_germ_order(sig: &OrbifoldSignature, subset: &[usize]) -> Result<BigUint> {
    sig.stratum_b_value(subset)
}

/// Extra relations imposed on the orbifold group, one vector per relation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QuotientSpec {
    pub extra_relations: Vec<Vec<i64>>,
}

impl QuotientSpec {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn with_relation(relation: Vec<i64>) -> Self {
        QuotientSpec { extra_relations: vec![relation] }
    }
}

/// Which strata the local-injectivity test visits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StrataCheck {
    /// Only subsets of size `min(n, r)`; smaller strata embed in these.
    #[default]
    Maximal,
    /// Every subset of size `<= n`.
    Paranoid,
}

/// Order of `π₁^orb / extra_relations`, failing if it is infinite.
pub fn quotient_group(sig: &OrbifoldSignature, q: &QuotientSpec) -> Result<(RelationMatrix, BigUint)> {
    let mut mat = orb_presentation(sig)?;
    for rel in &q.extra_relations {
        mat.push(rel.iter().map(|&c| BigInt::from(c)).collect())?;
    }
    let g = mat.structure();
    match g.order() {
        Some(order) => Ok((mat, order)),
        None => Err(Error::InfiniteQuotient { free_rank: g.free_rank }),
    }
}

/// Whether the Galois cover with group `π₁^orb / q` uniformizes the orbifold:
/// every local group `⟨μ_i : i ∈ B⟩ ≅ Π Z/m_i` must inject into the quotient.
/// The image order is `|G| / |G / ⟨μ_i : i ∈ B⟩|`.
pub fn quotient_uniformizes(sig: &OrbifoldSignature, q: &QuotientSpec, check: StrataCheck) -> Result<bool> {
    let (mat, order) = quotient_group(sig, q)?;
    let ms = sig.multiplicities()?;
    let r = ms.len();
    let n = sig.dim() as usize;
    let sizes: Vec<usize> = match check {
        StrataCheck::Maximal => vec![n.min(r)],
        StrataCheck::Paranoid => (1..=n.min(r)).collect(),
    };
    for k in sizes {
        for subset in (0..r).combinations(k) {
            let mut killed = mat.clone();
            for &i in &subset {
                killed.kill_generator(i);
            }
            let rest = killed.structure().order().expect("quotient of a finite group is finite");
            let image = &order / rest;
            let local: BigUint = subset.iter().map(|&i| BigUint::from(ms[i])).product();
            if image != local {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The all-2 signature with `2n + 2` hyperplanes on ℙⁿ.
pub fn all_two_signature(n: u32) -> Result<OrbifoldSignature> {
    OrbifoldSignature::linear(n, &vec![2; 2 * n as usize + 2])
}

/// Index-2 intermediate quotients of `[2 × (2n+2)]` by `α_S = Σ_{i∈S} μ_i`,
/// `|S| = n + 1`, one per unordered pair `{S, complement of S}`. Each returned
/// quotient has been checked to uniformize.
pub fn enumerate_enriques_quotients(n: u32) -> Result<(usize, Vec<QuotientSpec>)> {
    enumerate_enriques_quotients_with(n, StrataCheck::Maximal)
}

pub fn enumerate_enriques_quotients_with(n: u32, check: StrataCheck) -> Result<(usize, Vec<QuotientSpec>)> {
    if n < 2 {
        return Err(Error::DimOne);
    }
    let sig = all_two_signature(n)?;
    let r = sig.len();
    let mut specs = Vec::new();
    // S and its complement give the same subgroup; keep the S containing index 0
    for rest in (1..r).combinations(n as usize) {
        let mut alpha = vec![0i64; r];
        alpha[0] = 1;
        for i in rest {
            alpha[i] = 1;
        }
        let spec = QuotientSpec::with_relation(alpha);
        if quotient_uniformizes(&sig, &spec, check)? {
            specs.push(spec);
        }
    }
    Ok((specs.len(), specs))
}
