//! Enumeration and identification of tetrahedral hyperbolic manifolds.
//!
//! A cusped hyperbolic 3-manifold is *tetrahedral* when it decomposes into
//! regular ideal tetrahedra. This crate enumerates the combinatorial
//! tetrahedral tessellations (CTTs) up to a given size, verifies that they
//! are geometric, computes canonical cell decompositions, and groups CTTs
//! into isometry classes.

pub mod canon;
pub mod census;
pub mod enumerate;
pub mod error;
pub mod geometry;
pub mod homology;
pub mod morphisms;
pub mod numbers;
pub mod perm;
pub mod signature;
pub mod triangulation;

pub use error::{Error, ParseError, Result};
pub use perm::Perm4;
pub use triangulation::Triangulation;
