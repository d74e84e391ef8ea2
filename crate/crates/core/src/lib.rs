//! Exact-arithmetic toolkit for twisted rank-2 meromorphic connections on the
//! projective line: oper gauge and apparent singularities, isomonodromic
//! Hamiltonians and their zero-curvature compatibility, symplectic reduction
//! to the Painlevé I hierarchy, spectral invariants, and the explicit
//! isomonodromic↔isospectral coordinate correspondence. Every identity the
//! construction rests on can be verified as an exact algebraic check.

// coefficient manipulation reads most clearly with explicit indices
#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod connection;
pub mod correspondence;
pub mod deformation;
pub mod error;
pub mod oper;
pub mod reduction;
pub mod suite;

pub use error::{Error, Result};
