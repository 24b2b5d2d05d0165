//! Calabi-Yau orbifolds on ℙⁿ: enumeration, invariants, coverings between
//! them, and comparison against printed tables.

pub mod build;
pub mod covering;
pub mod cy;
pub mod enumerate;
pub mod errata;
pub mod fixtures;
pub mod golden;
pub mod render;

pub use build::{build_census, Census, CensusRow, EulerSource};
pub use covering::{covering_edges, diagonal_suborbifolds, lift, lift_components, CoveringEdge, SubOrbifold};
pub use cy::{check_degree_bounds, cy_defect, family_dimension, is_calabi_yau, DeltaConvention};
pub use enumerate::enumerate_cy;
pub use errata::{ErrataEntry, ErrataField, ErrataReport};
pub use golden::{compare_to_golden, load_golden, GoldenTable};
