//! Exact verification workbench for group-invariant spin model correlations.
//!
//! The crate computes zero-coupling correlations of the O(N) and CP^{N-1}
//! models in exact rational arithmetic, evaluates Kirchhoff spanning-tree
//! polynomials and their Rayleigh/log-ultramodularity properties, certifies
//! the padded Ginibre inequality family for inverse half-integer powers of
//! stable determinantal polynomials, and numerically confirms the large-power
//! collapse of correlations onto inverse Kirchhoff powers.
//!
//! All certificates are exact rationals where possible; square roots of
//! rationals (odd half-integer powers, transcendental prefactors) go through
//! outward-rounded interval arithmetic so that every reported sign is proved.

pub mod asymptotics;
pub mod core;
mod error;
pub mod inequalities;
pub mod kirchhoff;
pub mod moments;
pub mod stabledet;

pub use error::{Error, Result};
