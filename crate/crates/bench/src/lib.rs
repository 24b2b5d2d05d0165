//! Inputs shared by the benchmarks.

use orbicensus_core::groups::{orb_presentation, RelationMatrix};
use orbicensus_core::{parse_signature, OrbifoldSignature};

/// Linear rows of the threefold census with their largest groups.
pub fn heavy_linear() -> Vec<OrbifoldSignature> {
    ["[2,8,8,8,8]", "[2,2,4,4,4,4]", "[3,3,3,3,3,3]", "[2,2,2,2,2,2,2,2]"]
        .iter()
        .map(|s| parse_signature(s, 3).expect("fixture parses"))
        .collect()
}

/// Presentation of the all-2 signature with `2n + 2` hyperplanes.
pub fn all_two_presentation(n: u32) -> RelationMatrix {
    let sig = OrbifoldSignature::linear(n, &vec![2; 2 * n as usize + 2]).expect("fixture is valid");
    orb_presentation(&sig).expect("n >= 2")
}
