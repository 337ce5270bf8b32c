//! Exact minimization of multivariate polynomials over the integer lattice.
//!
//! The pipeline: certify that the leading form of `f` is positive definite
//! via sum-of-squares programming, compute the radius of a p-norm ball that
//! contains every integer minimizer, fit an easy-to-minimize underestimator
//! from the shifted-monomial cone, and run a pruned depth-first branch and
//! bound to a provably optimal integer point.

pub mod bnb;
pub mod bounds;
pub mod instances;
pub mod poly;
pub mod rng;
pub mod sdp;
pub mod sos;
pub mod underest;

pub use poly::{Monomial, Polynomial};
