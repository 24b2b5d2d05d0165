//! Rows that are not produced by the abelian machinery: the classical
//! dimension-one list and the all-infinite completion row of each dimension.

use crate::signature::{LocusComponent, OrbifoldSignature};

fn points(ms: &[Option<u64>]) -> OrbifoldSignature {
    let comps = ms
        .iter()
        .map(|m| match m {
            Some(m) => LocusComponent::new(1, *m),
            None => LocusComponent::infinite(),
        })
        .collect();
    OrbifoldSignature::new(1, comps).expect("fixture signature")
}

/// The four finite Euclidean orbifolds on ℙ¹.
pub fn dim_one_finite() -> Vec<OrbifoldSignature> {
    let mut v = vec![
        points(&[Some(2), Some(2), Some(2), Some(2)]),
        points(&[Some(2), Some(3), Some(6)]),
        points(&[Some(2), Some(4), Some(4)]),
        points(&[Some(3), Some(3), Some(3)]),
    ];
    v.sort();
    v
}

/// All six parabolic orbifolds on ℙ¹, including the two with cusps.
pub fn dim_one_all() -> Vec<OrbifoldSignature> {
    let mut v = dim_one_finite();
    v.push(points(&[None, None]));
    v.push(points(&[Some(2), Some(2), None]));
    v.sort();
    v
}

/// `[∞ × (n+1)]`, uniformized by affine space through the exponential map.
pub fn infinite_completion(n: u32) -> OrbifoldSignature {
    OrbifoldSignature::new(n, vec![LocusComponent::infinite(); n as usize + 1]).expect("n >= 1")
}
