//! Exhaustive search for abelian Calabi-Yau signatures.
//!
//! For every degree `d` in `[n+2, 2n+2]` and every partition of `d` into
//! component degrees, the multiplicities solve `Σ d_i/m_i = d - (n+1)`.
//! Components are taken in order of non-increasing contribution `d_i/m_i`
//! (ties by degree), so with `k` slots left and residual `t` the next
//! contribution is at least `t/k`: `m <= d_i k / t`. Uniformizability is
//! pruned on the fly, since each prime power dividing an f-value has to
//! divide at least `n+1` of them.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use super::cy::check_degree_bounds;
use super::fixtures;
use crate::signature::{LocusComponent, OrbifoldSignature};
use crate::uniformization::{factorize, is_uniformizable_prime_power};

/// Partitions of `d` into non-increasing parts.
pub fn partitions(d: u64) -> Vec<Vec<u64>> {
    fn rec(left: u64, max: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=max.min(left)).rev() {
            cur.push(p);
            rec(left - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, d, &mut Vec::new(), &mut out);
    out
}

fn prime_powers(x: u64) -> impl Iterator<Item = u64> {
    factorize(x)
        .into_iter()
        .flat_map(|(p, e)| (1..=e).map(move |a| p.pow(a)))
}

fn divisors(x: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factorize(x) {
        let base = out.clone();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            out.extend(base.iter().map(|b| b * pk));
        }
    }
    out.sort_unstable();
    out
}

/// Clamp a non-negative big integer into `u64`, saturating.
fn to_u64_sat(x: &BigInt) -> u64 {
    if x.is_negative() {
        0
    } else {
        x.to_u64().unwrap_or(u64::MAX)
    }
}

struct Search {
    n: u32,
}

struct Node<'a> {
    /// distinct remaining degrees, descending, with counts
    remaining: &'a mut Vec<(u64, usize)>,
    slots: usize,
    residual: BigRational,
    last: Option<(BigRational, u64)>,
    counts: BTreeMap<u64, usize>,
}

impl Search {
    fn run(&self, degrees: &[u64]) -> Vec<Vec<LocusComponent>> {
        let mut grouped: Vec<(u64, usize)> = Vec::new();
        for &d in degrees {
            match grouped.last_mut() {
                Some((g, c)) if *g == d => *c += 1,
                _ => grouped.push((d, 1)),
            }
        }
        let total: u64 = degrees.iter().sum();
        let target = BigRational::from_integer(BigInt::from(total) - BigInt::from(self.n + 1));
        let mut out = Vec::new();
        let mut chosen = Vec::with_capacity(degrees.len());
        let node = Node {
            remaining: &mut grouped,
            slots: degrees.len(),
            residual: target,
            last: None,
            counts: BTreeMap::new(),
        };
        self.visit(node, &mut chosen, &mut out);
        out
    }

    fn visit(&self, node: Node<'_>, chosen: &mut Vec<LocusComponent>, out: &mut Vec<Vec<LocusComponent>>) {
        let needed = self.n as usize + 1;
        let k = node.slots;

        // every f chosen from here on must be divisible by `forced`
        let mut forced = 1u64;
        for (&q, &c) in &node.counts {
            if c + k < needed {
                return;
            }
            if c + k == needed {
                forced = forced.lcm(&q);
            }
        }
        if k == 0 {
            if node.residual.is_zero() {
                out.push(chosen.clone());
            }
            return;
        }
        if !node.residual.is_positive() {
            return;
        }
        // with at most n slots left a new prime power can never reach n+1
        // occurrences, so f must divide the lcm of those already present
        let ceiling = (k < needed).then(|| node.counts.keys().fold(1u64, |acc, &q| acc.lcm(&q)));

        for idx in 0..node.remaining.len() {
            let (d, count) = node.remaining[idx];
            if count == 0 {
                continue;
            }
            for m in self.candidates(d, k, &node, forced, ceiling) {
                let contribution = BigRational::new(BigInt::from(d), BigInt::from(m));
                if let Some((ref lc, ld)) = node.last {
                    if contribution > *lc || (contribution == *lc && d > ld) {
                        continue;
                    }
                }
                let f = m / m.gcd(&d);
                if f % forced != 0 {
                    continue;
                }
                let mut counts = node.counts.clone();
                for q in prime_powers(f) {
                    *counts.entry(q).or_default() += 1;
                }
                node.remaining[idx].1 -= 1;
                chosen.push(LocusComponent::new(d, m));
                let child = Node {
                    remaining: &mut *node.remaining,
                    slots: k - 1,
                    residual: &node.residual - &contribution,
                    last: Some((contribution, d)),
                    counts,
                };
                self.visit(child, chosen, out);
                chosen.pop();
                node.remaining[idx].1 += 1;
            }
        }
    }

    /// Multiplicities for one more component of degree `d` compatible with
    /// the residual budget and the ordering.
    fn candidates(&self, d: u64, k: usize, node: &Node<'_>, forced: u64, ceiling: Option<u64>) -> Vec<u64> {
        let t = &node.residual;
        let dn = BigInt::from(d) * t.denom();
        if k == 1 {
            // the last contribution must be exactly the residual
            let (m, rem) = dn.div_rem(t.numer());
            return if rem.is_zero() && m >= BigInt::from(2) { vec![to_u64_sat(&m)] } else { vec![] };
        }
        // t/k <= d/m < t
        let hi = to_u64_sat(&((&dn * BigInt::from(k as u64)) / t.numer()));
        let mut lo = (to_u64_sat(&(&dn / t.numer())) + 1).max(2);
        if let Some((ref lc, _)) = node.last {
            // d/m <= last contribution
            let bound = (BigInt::from(d) * lc.denom()).div_ceil(lc.numer());
            lo = lo.max(to_u64_sat(&bound));
        }
        if lo > hi {
            return vec![];
        }
        match ceiling {
            Some(l) => {
                let mut ms: BTreeSet<u64> = BTreeSet::new();
                let ds = divisors(d);
                for f in divisors(l).into_iter().filter(|f| f % forced == 0) {
                    for &g in &ds {
                        let m = f * g;
                        if m >= lo && m <= hi && m / m.gcd(&d) == f {
                            ms.insert(m);
                        }
                    }
                }
                ms.into_iter().collect()
            }
            None if d == 1 => {
                // linear: f = m, so step through multiples of the forced divisor
                let start = lo.div_ceil(forced) * forced;
                (start..=hi).step_by(forced as usize).collect()
            }
            None => (lo..=hi).collect(),
        }
    }
}

/// Every Calabi-Yau signature on ℙⁿ with a finite abelian uniformization,
/// sorted by degree then canonical order. `n = 1` is answered from fixtures.
pub fn enumerate_cy(n: u32, linear_only: bool) -> Vec<OrbifoldSignature> {
    if n == 1 {
        return fixtures::dim_one_finite();
    }
    let degree_sets: Vec<Vec<u64>> = (n as u64 + 2..=2 * n as u64 + 2)
        .flat_map(|d| if linear_only { vec![vec![1; d as usize]] } else { partitions(d) })
        .collect();
    let search = Search { n };
    let found: BTreeSet<OrbifoldSignature> = degree_sets
        .par_iter()
        .flat_map_iter(|degrees| search.run(degrees))
        .map(|comps| OrbifoldSignature::new(n, comps).expect("non-empty search result"))
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    for sig in &found {
        // theorems, so assert rather than filter
        assert!(
            is_uniformizable_prime_power(sig).expect("finite"),
            "pruned search produced a non-uniformizable {sig}"
        );
        assert_eq!(
            check_degree_bounds(sig).expect("search output is Calabi-Yau"),
            Ok(()),
            "degree bounds fail for {sig}"
        );
    }
    found.into_iter().collect()
}
