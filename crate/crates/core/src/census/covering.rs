//! Diagonal sub-orbifolds and the liftings they induce.
//!
//! Choosing `n+1` lines whose multiplicities share a divisor `c >= 2` gives a
//! sub-orbifold uniformized by the Kummer map of degree `cⁿ`. Pulling the
//! orbifold back along that map divides the chosen multiplicities by `c` and
//! multiplies the degree of every other component by `c`.

use itertools::Itertools;
use num_bigint::BigUint;
use num_integer::Integer;
use serde::Serialize;

use super::cy::defect_of;
use crate::error::{Error, Result};
use crate::groups::orb_group_order_formula;
use crate::signature::{LocusComponent, Multiplicity, OrbifoldSignature};
use crate::uniformization::is_uniformizable_prime_power;

/// A divisor vector over a component list: `c` on the `n+1` branch lines,
/// `1` elsewhere.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct SubOrbifold {
    pub divisors: Vec<u64>,
}

impl SubOrbifold {
    pub fn on(len: usize, branch: &[usize], c: u64) -> Self {
        let mut divisors = vec![1; len];
        for &i in branch {
            divisors[i] = c;
        }
        SubOrbifold { divisors }
    }

    pub fn branch(&self) -> Vec<usize> {
        self.divisors.iter().positions(|&c| c > 1).collect()
    }

    pub fn exponent(&self) -> u64 {
        self.divisors.iter().copied().max().unwrap_or(1)
    }

    /// Checks the vector against a component list and returns `c`.
    pub fn validate(&self, dim: u32, components: &[LocusComponent]) -> Result<u64> {
        let invalid = |msg: String| Err(Error::InvalidSubOrbifold(msg));
        if self.divisors.len() != components.len() {
            return invalid(format!(
                "{} entries for {} components",
                self.divisors.len(),
                components.len()
            ));
        }
        let c = self.exponent();
        if c < 2 {
            return invalid("no branch component".into());
        }
        if let Some(&x) = self.divisors.iter().find(|&&x| x != 1 && x != c) {
            return invalid(format!("mixed exponents {x} and {c}"));
        }
        let branch = self.branch();
        if branch.len() != dim as usize + 1 {
            return invalid(format!("{} branch components, need n+1 = {}", branch.len(), dim + 1));
        }
        for &i in &branch {
            let comp = &components[i];
            if !comp.is_linear() {
                return invalid(format!("branch component {} has degree {}", i + 1, comp.degree));
            }
            if let Multiplicity::Finite(m) = comp.multiplicity {
                if m % c != 0 {
                    return invalid(format!("{c} does not divide multiplicity {m} of component {}", i + 1));
                }
            }
        }
        Ok(c)
    }

    pub fn render(&self) -> String {
        format!("[{}]", self.divisors.iter().join(","))
    }
}

/// Every choice of `n+1` lines and a common divisor `c >= 2` of their finite
/// multiplicities; infinite lines accept any `c`, but a choice made only of
/// infinite lines would give an unbounded family and is skipped.
pub fn diagonal_suborbifolds_of(dim: u32, components: &[LocusComponent]) -> Vec<SubOrbifold> {
    let lines: Vec<usize> = components.iter().positions(|c| c.is_linear()).collect();
    let mut out = Vec::new();
    for branch in lines.into_iter().combinations(dim as usize + 1) {
        let g = branch
            .iter()
            .filter_map(|&i| components[i].multiplicity.value())
            .fold(0u64, |g, m| g.gcd(&m));
        if g < 2 {
            continue;
        }
        for c in (2..=g).filter(|c| g % c == 0) {
            out.push(SubOrbifold::on(components.len(), &branch, c));
        }
    }
    out
}

pub fn diagonal_suborbifolds(sig: &OrbifoldSignature) -> Vec<SubOrbifold> {
    diagonal_suborbifolds_of(sig.dim(), sig.components())
}

/// Lifts a component list (in any order) along a sub-orbifold aligned with it.
///
/// On ℙ¹ a non-branch point pulls back to `c` points; in higher dimension a
/// non-branch hypersurface of degree `d` pulls back to one of degree `c·d`.
/// For finite signatures the Calabi-Yau defect scales by exactly `c`, and
/// when the source is uniformizable the group orders satisfy
/// `|source| = |lift| · cⁿ`.
pub fn lift_components(dim: u32, components: &[LocusComponent], sub: &SubOrbifold) -> Result<OrbifoldSignature> {
    let c = sub.validate(dim, components)?;
    let mut lifted = Vec::new();
    for (comp, &ci) in components.iter().zip(&sub.divisors) {
        if ci > 1 {
            match comp.multiplicity {
                Multiplicity::Infinite => lifted.push(*comp),
                Multiplicity::Finite(m) if m / c > 1 => lifted.push(LocusComponent::new(1, m / c)),
                Multiplicity::Finite(_) => {}
            }
        } else if dim == 1 {
            let copies = (c * comp.degree) as usize;
            lifted.extend(std::iter::repeat_n(LocusComponent { degree: 1, ..*comp }, copies));
        } else {
            lifted.push(LocusComponent { degree: c * comp.degree, ..*comp });
        }
    }
    let target = OrbifoldSignature::new(dim, lifted).map_err(|e| match e {
        Error::EmptySignature => Error::InvalidSubOrbifold("every component is absorbed by the cover".into()),
        e => e,
    })?;

    if components.iter().all(|x| !x.multiplicity.is_infinite()) {
        let before = defect_of(dim, components)?;
        let after = defect_of(dim, target.components())?;
        assert_eq!(after, before * (c as i64).into(), "defect must scale by c");

        if dim >= 2 {
            let source = OrbifoldSignature::new(dim, components.to_vec())?;
            if is_uniformizable_prime_power(&source)? {
                let source_order = orb_group_order_formula(&source)?;
                let deck = BigUint::from(c).pow(dim);
                let lifted_order = if is_uniformizable_prime_power(&target)? {
                    orb_group_order_formula(&target)? * &deck
                } else {
                    BigUint::from(0u32)
                };
                if lifted_order != source_order {
                    return Err(Error::ConservationViolation {
                        source_order: source_order.to_string(),
                        lifted: lifted_order.to_string(),
                    });
                }
            }
        }
    }
    Ok(target)
}

pub fn lift(sig: &OrbifoldSignature, sub: &SubOrbifold) -> Result<OrbifoldSignature> {
    lift_components(sig.dim(), sig.components(), sub)
}

/// One edge of the covering graph, from a census row to its lifting.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoveringEdge {
    pub suborbifold: SubOrbifold,
    pub kummer_exponent: u64,
    pub target: OrbifoldSignature,
    #[serde(serialize_with = "crate::groups::serialize_big")]
    pub deck_order: BigUint,
    /// 1-based census row of the target, when it is in the census.
    pub target_row: Option<usize>,
}

/// All distinct liftings of `sig`; sub-orbifolds that differ only by which of
/// several equal lines are chosen collapse to the first choice.
pub fn covering_edges(sig: &OrbifoldSignature) -> Result<Vec<CoveringEdge>> {
    let mut seen = std::collections::BTreeSet::new();
    let mut edges = Vec::new();
    for sub in diagonal_suborbifolds(sig) {
        let target = lift(sig, &sub)?;
        let c = sub.exponent();
        let branch_ms: Vec<Multiplicity> = sub.branch().iter().map(|&i| sig.components()[i].multiplicity).collect();
        if !seen.insert((c, branch_ms, target.clone())) {
            continue;
        }
        edges.push(CoveringEdge {
            kummer_exponent: c,
            deck_order: BigUint::from(c).pow(sig.dim()),
            suborbifold: sub,
            target,
            target_row: None,
        });
    }
    Ok(edges)
}
