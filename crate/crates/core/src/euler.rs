//! Orbifold Euler numbers for linear loci.
//!
//! `e(r, n)` is the Euler number of the complement of `r` general-position
//! hyperplanes in ℙⁿ. The orbifold Euler number is evaluated twice: as the
//! stratified sum over the intersection lattice and as the alternating
//! symmetric-function formula in `s_i = 1 - 1/m_i`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::groups::orb_group_order_formula;
use crate::rational::RationalValue;
use crate::signature::OrbifoldSignature;
use crate::uniformization::is_uniformizable_prime_power;

/// `e(r, n) = (-1)^n C(r - 2, n)`, generalized binomial for `r < 2`.
pub fn e_complement(r: u32, n: u32) -> BigInt {
    let top = BigInt::from(r as i64 - 2);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..n {
        num *= &top - BigInt::from(i);
        den *= BigInt::from(i + 1);
    }
    let c = num / den;
    if n.is_multiple_of(2) {
        c
    } else {
        -c
    }
}

/// Table of `e(r, n)` for `r <= max_r`, `n <= max_n` built by deletion-restriction:
/// `e(r, n) = e(r-1, n) - e(r-1, n-1)`, with `e(0, n) = n + 1` and `e(r, 0) = 1`.
/// Indexed `table[r][n]`.
pub fn e_complement_table(max_r: u32, max_n: u32) -> Vec<Vec<BigInt>> {
    let mut t: Vec<Vec<BigInt>> = Vec::with_capacity(max_r as usize + 1);
    for r in 0..=max_r as usize {
        let mut row = Vec::with_capacity(max_n as usize + 1);
        for n in 0..=max_n as usize {
            let v = if r == 0 {
                BigInt::from(n + 1)
            } else if n == 0 {
                BigInt::one()
            } else {
                &t[r - 1][n] - &t[r - 1][n - 1]
            };
            row.push(v);
        }
        t.push(row);
    }
    t
}

pub fn e_complement_recursive(r: u32, n: u32) -> BigInt {
    e_complement_table(r, n)[r as usize][n as usize].clone()
}

/// Elementary symmetric polynomials `e_0..e_len` of `xs`, read off `Π (1 + x_i t)`.
pub fn elementary_symmetric(xs: &[RationalValue]) -> Vec<RationalValue> {
    let mut coeffs = vec![RationalValue::one()];
    for x in xs {
        coeffs.push(RationalValue::zero());
        for j in (1..coeffs.len()).rev() {
            let add = &coeffs[j - 1] * x;
            coeffs[j] = &coeffs[j] + &add;
        }
    }
    coeffs
}

/// `s_i = 1 - 1/m_i` per component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SVector(pub Vec<RationalValue>);

impl SVector {
    pub fn of(sig: &OrbifoldSignature) -> Result<Self> {
        Ok(SVector(
            sig.multiplicities()?
                .into_iter()
                .map(|m| RationalValue::one() - RationalValue::recip_of(m))
                .collect(),
        ))
    }
}

fn linear_multiplicities(sig: &OrbifoldSignature) -> Result<Vec<u64>> {
    let ms = sig.multiplicities()?;
    if !sig.is_linear() {
        return Err(Error::NonlinearLocus);
    }
    Ok(ms)
}

/// `e_0..=e_upto` of integer inputs; the workhorse behind both routes, which
/// scale every weight to the common denominator `lcm(m_i)` to avoid
/// normalizing rationals in the inner loop.
fn integer_symmetric(xs: &[BigInt], upto: usize) -> Vec<BigInt> {
    let mut coeffs = vec![BigInt::zero(); upto + 1];
    coeffs[0] = BigInt::one();
    for (seen, x) in xs.iter().enumerate() {
        for j in (1..=upto.min(seen + 1)).rev() {
            let add = &coeffs[j - 1] * x;
            coeffs[j] += add;
        }
    }
    coeffs
}

/// `Σ_k c_k E_k D^{n-k} / D^n`, i.e. `Σ_k c_k e_k(x)` for `x_i = E-inputs / D`.
fn rescale(terms: impl Iterator<Item = BigInt>, n: u32, denom: &BigInt) -> RationalValue {
    let mut num = BigInt::zero();
    for t in terms {
        num = num * denom + t;
    }
    RationalValue::new(num, denom.pow(n))
}

fn common_denominator(ms: &[u64]) -> u64 {
    ms.iter().fold(1u64, |a, &m| a.lcm(&m))
}

/// `Σ_{j=0}^{n} (-1)^j (n + 1 - j) e_j(s)`.
pub fn e_orb_formula(sig: &OrbifoldSignature) -> Result<RationalValue> {
    let ms = linear_multiplicities(sig)?;
    let n = sig.dim();
    let d = common_denominator(&ms);
    let s: Vec<BigInt> = ms.iter().map(|&m| BigInt::from(d - d / m)).collect();
    let e = integer_symmetric(&s, n as usize);
    // Horner in D from j = 0 upwards: term j carries D^{n-j}
    let terms = (0..=n as usize).map(|j| {
        let t = BigInt::from((n as usize + 1 - j) as i64) * &e[j];
        if j % 2 == 0 {
            t
        } else {
            -t
        }
    });
    Ok(rescale(terms, n, &BigInt::from(d)))
}

/// The symmetric-function formula on raw weights `s_i`.
pub fn e_orb_from_weights(n: u32, s: &[RationalValue]) -> RationalValue {
    let e = elementary_symmetric(s);
    let n = n as usize;
    (0..=n.min(s.len()))
        .map(|j| {
            let term = RationalValue::from((n + 1 - j) as i64) * e[j].clone();
            if j % 2 == 0 {
                term
            } else {
                -term
            }
        })
        .sum()
}

/// `Σ_{k=0}^{n} e(r - k, n - k) Σ_{|B| = k} Π_{i∈B} 1/m_i`.
pub fn e_orb_stratified(sig: &OrbifoldSignature) -> Result<RationalValue> {
    let ms = linear_multiplicities(sig)?;
    let r = ms.len() as u32;
    let n = sig.dim();
    let d = common_denominator(&ms);
    let inv: Vec<BigInt> = ms.iter().map(|&m| BigInt::from(d / m)).collect();
    let sums = integer_symmetric(&inv, n as usize);
    // strata deeper than r are empty and contribute e_k = 0
    let terms = (0..=n).map(|k| {
        if k > r {
            BigInt::zero()
        } else {
            e_complement(r - k, n - k) * &sums[k as usize]
        }
    });
    Ok(rescale(terms, n, &BigInt::from(d)))
}

/// `|G| · e_orb` must be an integer; anything else is an internal inconsistency.
pub fn integral_euler(e_orb: &RationalValue, order: &BigUint) -> Result<BigInt> {
    let prod = e_orb * &RationalValue::from_integer(BigInt::from(order.clone()));
    prod.to_integer()
        .ok_or_else(|| Error::NonIntegerResult(format!("{e_orb} * {order} = {prod}")))
}

/// Euler number of the universal uniformization, `e_orb · |π₁^orb|`.
pub fn e_universal(sig: &OrbifoldSignature) -> Result<BigInt> {
    let e_orb = e_orb_formula(sig)?;
    if !is_uniformizable_prime_power(sig)? {
        let f = sig.f_vector()?;
        let (prime, exponent, count) =
            crate::uniformization::failing_prime_power(f.values(), sig.dim()).expect("failing prime power");
        return Err(Error::NotUniformizable { prime, exponent, count, needed: sig.dim() as usize + 1 });
    }
    integral_euler(&e_orb, &orb_group_order_formula(sig)?)
}
