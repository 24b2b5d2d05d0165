//! The Calabi-Yau condition, the degree bounds it implies, and family dimensions.

use num_bigint::{BigInt, BigUint};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::orb_group_order_formula;
use crate::rational::RationalValue;
use crate::signature::{LocusComponent, OrbifoldSignature};

/// `Σ d_i (1 - 1/m_i) - (n + 1)`; zero exactly when the uniformizing
/// manifold has trivial canonical class.
pub fn cy_defect(sig: &OrbifoldSignature) -> Result<RationalValue> {
    defect_of(sig.dim(), sig.components())
}

pub(crate) fn defect_of(dim: u32, components: &[LocusComponent]) -> Result<RationalValue> {
    let mut total = RationalValue::from(-(dim as i64 + 1));
    for c in components {
        let m = c.finite_multiplicity()?;
        let d = RationalValue::from(c.degree as i64);
        total = total + d * (RationalValue::one() - RationalValue::recip_of(m));
    }
    Ok(total)
}

pub fn is_calabi_yau(sig: &OrbifoldSignature) -> Result<bool> {
    Ok(cy_defect(sig)?.is_zero())
}

/// Why a Calabi-Yau signature escapes the degree window. Any value of this
/// type is a bug upstream: the bounds are theorems.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum BoundsViolation {
    DegreeTooSmall { degree: u64, min: u64 },
    DegreeTooLarge { degree: u64, max: u64 },
    MaximalDegreeNeedsAllTwo { multiplicity: u64 },
}

impl std::fmt::Display for BoundsViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BoundsViolation::DegreeTooSmall { degree, min } => write!(f, "degree {degree} below n+2 = {min}"),
            BoundsViolation::DegreeTooLarge { degree, max } => write!(f, "degree {degree} above 2n+2 = {max}"),
            BoundsViolation::MaximalDegreeNeedsAllTwo { multiplicity } => {
                write!(f, "degree 2n+2 with a component of multiplicity {multiplicity}")
            }
        }
    }
}

/// `n + 2 <= d <= 2n + 2`, and `d = 2n + 2` forces every `m_i = 2`.
/// Errors with `NotCalabiYau` when called on a non-CY signature.
pub fn check_degree_bounds(sig: &OrbifoldSignature) -> Result<std::result::Result<(), BoundsViolation>> {
    let defect = cy_defect(sig)?;
    if !defect.is_zero() {
        return Err(Error::NotCalabiYau(defect.to_string()));
    }
    let n = sig.dim() as u64;
    let degree = sig.total_degree();
    if degree < n + 2 {
        return Ok(Err(BoundsViolation::DegreeTooSmall { degree, min: n + 2 }));
    }
    if degree > 2 * n + 2 {
        return Ok(Err(BoundsViolation::DegreeTooLarge { degree, max: 2 * n + 2 }));
    }
    if degree == 2 * n + 2 {
        if let Some(&m) = sig.multiplicities()?.iter().find(|&&m| m != 2) {
            return Ok(Err(BoundsViolation::MaximalDegreeNeedsAllTwo { multiplicity: m }));
        }
    }
    Ok(Ok(()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeltaConvention {
    /// Parameters of the locus modulo projective equivalence.
    #[default]
    Moduli,
    /// Raw parameter count of the locus, `Σ [C(n + d_i, n) - 1]`.
    LinearSystem,
}

impl std::str::FromStr for DeltaConvention {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "moduli" => Ok(DeltaConvention::Moduli),
            "linear-system" => Ok(DeltaConvention::LinearSystem),
            other => Err(format!("unknown delta convention '{other}' (expected moduli or linear-system)")),
        }
    }
}

fn binomial(n: u64, k: u64) -> BigUint {
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Family dimension. Only degrees enter, so infinite components are allowed.
/// The moduli value is not floored at zero.
pub fn family_dimension(sig: &OrbifoldSignature, convention: DeltaConvention) -> BigInt {
    let n = sig.dim() as u64;
    let raw: BigUint = sig
        .degrees()
        .iter()
        .map(|&d| binomial(n + d, n) - 1u32)
        .sum();
    let raw = BigInt::from(raw);
    match convention {
        DeltaConvention::LinearSystem => raw,
        DeltaConvention::Moduli => raw - BigInt::from(n * (n + 2)),
    }
}

/// Order arithmetic for the non-abelian quotient of the eight-plane orbifold
/// `[2×8]` on ℙ³ by the coordinate sign changes `(Z/2)³`: the uniformizing
/// group has order `|π₁^orb([2×8])| · 2³`, and the symmetric group on the
/// four coordinates multiplies the automorphism count by 4!.
pub fn nonabelian_extension_orders() -> Result<(BigUint, BigUint)> {
    let planes = OrbifoldSignature::linear(3, &[2; 8])?;
    let order = orb_group_order_formula(&planes)? * BigUint::from(2u32).pow(3);
    let automorphisms = &order * 24u32;
    Ok((order, automorphisms))
}
