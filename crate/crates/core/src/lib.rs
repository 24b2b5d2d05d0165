//! Finite abelian orbifold structures on complex projective space.
//!
//! An orbifold `(ℙⁿ, b)` is described by its locus: hypersurfaces `H_i` of
//! degree `d_i` carrying multiplicity `m_i`. This crate decides when such an
//! orbifold is uniformized by a smooth manifold with a finite abelian group
//! action, computes the deck group and orbifold Euler numbers exactly, and
//! classifies the Calabi-Yau cases dimension by dimension.
//!
//! All arithmetic is exact; nothing in the crate uses floating point.

pub mod census;
pub mod error;
pub mod euler;
pub mod groups;
pub mod rational;
pub mod signature;
pub mod uniformization;

pub use error::{Error, Result};
pub use groups::{GroupStructure, QuotientSpec, RelationMatrix, StrataCheck};
pub use rational::RationalValue;
pub use signature::{parse_signature, FVector, LocusComponent, Multiplicity, OrbifoldSignature};
