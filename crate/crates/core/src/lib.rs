//! Topological invariants of twisted toric 4-manifolds.
//!
//! A twisted toric manifold over a surface with corners is described by a flat
//! `SL₂(ℤ)` torus bundle together with one primitive circle sub-lattice per
//! boundary arc (see [`ttm::TwistedToricSpec`]). From that finite datum this
//! crate computes the Euler characteristic, the fundamental group, integral
//! cohomology through the E₂ page of the Leray spectral sequence, and the
//! signature through Meyer's cocycle plus the boundary sphere necklace.

pub mod cohomology;
pub mod error;
pub mod invariants;
pub mod lattice;
pub mod signature;
pub mod surface;
pub mod ttm;

pub use error::{Error, Result};
pub use lattice::{AbelianGroup, IntMat, IntVec};
pub use surface::BaseSurface;
pub use ttm::{CharacteristicData, MonodromyRep, TwistedToricSpec};
