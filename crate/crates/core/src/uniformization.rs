//! Existence of a finite abelian smooth uniformization.
//!
//! Two formulations are provided and must always agree:
//! a per-prime exponent test on the f-vector, and the lcm test
//! `lcm{f_i} = lcm{f_i : i ∉ B}` over strata `B` of size `min(n, r)`.

use std::collections::BTreeMap;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::signature::OrbifoldSignature;

/// Prime factorization by trial division, primes ascending.
pub fn factorize(mut x: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= x {
        if x.is_multiple_of(p) {
            let mut e = 0;
            while x.is_multiple_of(p) {
                x /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if x > 1 {
        out.push((x, 1));
    }
    out
}

pub fn valuation(mut x: u64, p: u64) -> u32 {
    let mut e = 0;
    while x > 0 && x.is_multiple_of(p) {
        x /= p;
        e += 1;
    }
    e
}

fn checked_f_values(sig: &OrbifoldSignature) -> Result<Vec<u64>> {
    if sig.dim() < 2 {
        return Err(Error::DimOne);
    }
    Ok(sig.f_vector()?.0)
}

/// Finds a prime power `p^a` dividing some f-value but fewer than `n + 1` of them.
pub fn failing_prime_power(f: &[u64], n: u32) -> Option<(u64, u32, usize)> {
    let needed = n as usize + 1;
    let primes: BTreeMap<u64, ()> = f.iter().flat_map(|&x| factorize(x)).map(|(p, _)| (p, ())).collect();
    for &p in primes.keys() {
        let mut exps: Vec<u32> = f.iter().map(|&x| valuation(x, p)).collect();
        exps.sort_unstable_by(|a, b| b.cmp(a));
        exps.resize(exps.len().max(needed), 0);
        if exps[0] != exps[n as usize] {
            let top = exps[0];
            let count = exps.iter().filter(|&&e| e == top).count();
            return Some((p, top, count));
        }
    }
    None
}

/// Every prime power dividing some `f_i` divides at least `n` others: per prime,
/// the exponents sorted descending (zero-padded to `n + 1`) satisfy `e[0] = e[n]`.
pub fn is_uniformizable_prime_power(sig: &OrbifoldSignature) -> Result<bool> {
    let f = checked_f_values(sig)?;
    Ok(failing_prime_power(&f, sig.dim()).is_none())
}

/// Same predicate on a bare f-multiset.
pub fn f_values_uniformizable(f: &[u64], n: u32) -> bool {
    failing_prime_power(f, n).is_none()
}

/// For every `B` with `|B| = min(n, r)`, removing `B` must not lower the lcm.
/// Subsets are enumerated as removal counts over the distinct f-values.
pub fn is_uniformizable_lcm(sig: &OrbifoldSignature) -> Result<bool> {
    let f = checked_f_values(sig)?;
    Ok(lcm_condition(&f, sig.dim()))
}

fn lcm_condition(f: &[u64], n: u32) -> bool {
    let mut counts: BTreeMap<u64, usize> = BTreeMap::new();
    for &x in f {
        *counts.entry(x).or_default() += 1;
    }
    let groups: Vec<(u64, usize)> = counts.into_iter().collect();
    let total = groups.iter().fold(1u64, |a, &(v, _)| a.lcm(&v));
    let k = (n as usize).min(f.len());

    // removed[i] copies of groups[i] are in B
    fn walk(groups: &[(u64, usize)], i: usize, left: usize, lcm_rest: u64, total: u64) -> bool {
        if i == groups.len() {
            return left > 0 || lcm_rest == total;
        }
        let (v, c) = groups[i];
        let max_take = c.min(left);
        (0..=max_take).all(|take| {
            let l = if take < c { lcm_rest.lcm(&v) } else { lcm_rest };
            walk(groups, i + 1, left - take, l, total)
        })
    }
    walk(&groups, 0, k, 1, total)
}

/// One prime's slice of the f-vector: `p^alpha` on at least `n + 1`
/// components, exponents elsewhere in `[0, alpha]`. Exponents are aligned
/// with the signature's components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTuple {
    pub prime: u64,
    pub alpha: u32,
    pub exponents: Vec<u32>,
}

impl PrimeTuple {
    pub fn sorted_exponents(&self) -> Vec<u32> {
        let mut e = self.exponents.clone();
        e.sort_unstable_by(|a, b| b.cmp(a));
        e
    }

    pub fn values(&self) -> Vec<u64> {
        self.exponents.iter().map(|&e| self.prime.pow(e)).collect()
    }
}

/// Factors the f-vector of a uniformizable signature into per-prime tuples
/// whose componentwise product is the f-vector.
pub fn factorization_certificate(sig: &OrbifoldSignature) -> Result<Vec<PrimeTuple>> {
    let f = checked_f_values(sig)?;
    if let Some((prime, exponent, count)) = failing_prime_power(&f, sig.dim()) {
        return Err(Error::NotUniformizable {
            prime,
            exponent,
            count,
            needed: sig.dim() as usize + 1,
        });
    }
    let primes: BTreeMap<u64, ()> = f.iter().flat_map(|&x| factorize(x)).map(|(p, _)| (p, ())).collect();
    Ok(primes
        .keys()
        .map(|&p| {
            let exponents: Vec<u32> = f.iter().map(|&x| valuation(x, p)).collect();
            let alpha = exponents.iter().copied().max().unwrap_or(0);
            PrimeTuple { prime: p, alpha, exponents }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::{parse_signature, LocusComponent};
    use proptest::prelude::*;

    fn sig(s: &str, n: u32) -> OrbifoldSignature {
        parse_signature(s, n).unwrap()
    }

    fn both(s: &OrbifoldSignature) -> bool {
        let a = is_uniformizable_prime_power(s).unwrap();
        let b = is_uniformizable_lcm(s).unwrap();
        assert_eq!(a, b, "{s} on P^{}", s.dim());
        a
    }

    #[test]
    fn factorize_small() {
        assert_eq!(factorize(1), vec![]);
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factorize(97), vec![(97, 1)]);
    }

    #[test]
    fn table_rows_are_uniformizable() {
        assert!(both(&sig("[2,8,8,8,8]", 3)));
        assert!(both(&sig("[2,5,10,10,10]", 3)));
        assert!(both(&sig("[2_2,3_3]", 2)));
    }

    #[test]
    fn single_component_needs_m_dividing_d() {
        for n in 2..6 {
            assert!(!both(&sig("[3_4]", n)));
            assert!(!both(&sig("[5]", n)));
            assert!(both(&sig("[3_6]", n)));
        }
    }

    #[test]
    fn two_lines_fail() {
        assert!(!both(&sig("[2,3]", 2)));
        assert!(!both(&sig("[3,3]", 2)));
    }

    #[test]
    fn dim_one_rejected() {
        assert_eq!(is_uniformizable_prime_power(&sig("[2,3,6]", 1)), Err(Error::DimOne));
        assert_eq!(is_uniformizable_lcm(&sig("[2,3,6]", 1)), Err(Error::DimOne));
    }

    #[test]
    fn certificate_for_2_8_8_8_8() {
        let c = factorization_certificate(&sig("[2,8,8,8,8]", 3)).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].prime, 2);
        assert_eq!(c[0].alpha, 3);
        assert_eq!(c[0].exponents, vec![1, 3, 3, 3, 3]);
        assert_eq!(c[0].sorted_exponents(), vec![3, 3, 3, 3, 1]);
    }

    #[test]
    fn certificate_trivial_and_failure() {
        assert!(factorization_certificate(&sig("[5_5]", 3)).unwrap().is_empty());
        assert!(matches!(
            factorization_certificate(&sig("[2,3]", 2)),
            Err(Error::NotUniformizable { prime: 2, exponent: 1, count: 1, needed: 3 })
        ));
    }

    #[test]
    fn exhaustive_f_multiset_sweep() {
        // every f-multiset with r <= 8, values in 1..=12, n in 2..=4; f = 1 is
        // realized as a conic with m = 2, f = k >= 2 as a line with m = k
        fn rec(start: u64, left: usize, cur: &mut Vec<u64>, checked: &mut usize) {
            if !cur.is_empty() {
                let comps: Vec<LocusComponent> = cur
                    .iter()
                    .map(|&f| if f == 1 { LocusComponent::new(2, 2) } else { LocusComponent::new(1, f) })
                    .collect();
                for n in 2..=4 {
                    let s = OrbifoldSignature::new(n, comps.clone()).unwrap();
                    assert_eq!(s.f_vector().unwrap().0.iter().filter(|&&x| x == 1).count(),
                               cur.iter().filter(|&&x| x == 1).count());
                    both(&s);
                    *checked += 1;
                }
            }
            if left == 0 {
                return;
            }
            for v in start..=12 {
                cur.push(v);
                rec(v, left - 1, cur, checked);
                cur.pop();
            }
        }
        let mut checked = 0;
        rec(1, 8, &mut Vec::new(), &mut checked);
        assert!(checked > 300_000);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn formulations_agree(v in prop::collection::vec((1u64..=6, 2u64..=12), 1..=8), n in 2u32..=4) {
            let s = OrbifoldSignature::new(n, v.iter().map(|&(d, m)| LocusComponent::new(d, m)).collect()).unwrap();
            prop_assert_eq!(is_uniformizable_prime_power(&s).unwrap(), is_uniformizable_lcm(&s).unwrap());
        }

        #[test]
        fn few_components_need_trivial_f(v in prop::collection::vec((1u64..=6, 2u64..=12), 1..=4), n in 4u32..=6) {
            let s = OrbifoldSignature::new(n, v.iter().map(|&(d, m)| LocusComponent::new(d, m)).collect()).unwrap();
            let trivial = s.f_vector().unwrap().values().iter().all(|&f| f == 1);
            prop_assert_eq!(is_uniformizable_prime_power(&s).unwrap(), trivial);
        }

        #[test]
        fn permutation_invariant(v in prop::collection::vec((1u64..=6, 2u64..=12), 1..=8), n in 2u32..=4) {
            let comps: Vec<LocusComponent> = v.iter().map(|&(d, m)| LocusComponent::new(d, m)).collect();
            let mut rev = comps.clone();
            rev.reverse();
            let f1 = crate::signature::f_vector_of(&comps).unwrap().0;
            let f2 = crate::signature::f_vector_of(&rev).unwrap().0;
            prop_assert_eq!(f_values_uniformizable(&f1, n), f_values_uniformizable(&f2, n));
        }

        #[test]
        fn certificate_reconstructs_f(v in prop::collection::vec((1u64..=6, 2u64..=12), 1..=8), n in 2u32..=4) {
            let s = OrbifoldSignature::new(n, v.iter().map(|&(d, m)| LocusComponent::new(d, m)).collect()).unwrap();
            if let Ok(cert) = factorization_certificate(&s) {
                let f = s.f_vector().unwrap().0;
                let mut prod = vec![1u64; f.len()];
                for t in &cert {
                    let top = t.exponents.iter().filter(|&&e| e == t.alpha).count();
                    prop_assert!(top > n as usize);
                    for (p, x) in prod.iter_mut().zip(t.values()) {
                        *p *= x;
                    }
                }
                prop_assert_eq!(prod, f);
            }
        }
    }
}
