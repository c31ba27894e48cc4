//! Construction and verification of explicit cubature formulas of fixed degree
//! in high dimension.
//!
//! The central device is *thinning*: an equal-weight product (convolution)
//! formula with `q^ℓ` points is cut down to the rows of an orthogonal array of
//! strength `t` over `GF(q)` without losing cubature degree `t`.  Suitable
//! arrays come from duals of BCH codes, from Hadamard matrices, and from
//! Kerdock codes; combined with radial projections this yields positive
//! interior formulas on cubes, spheres, balls, shells, simplices,
//! cross-polytopes and Gaussian/exponential weights.
//!
//! Every formula produced by this crate is checked against exact moments of
//! its target measure before it is released; see [`verify`].

pub mod bch;
pub mod build;
pub mod cli;
pub mod field;
pub mod format;
pub mod formula;
pub mod galois_ring;
pub mod hadamard;
pub mod kerdock;
pub mod measure;
pub mod oa;
pub mod quad;
pub mod thin;
pub mod verify;

mod error;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
