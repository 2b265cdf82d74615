//! Numerical laboratory for spectral sets of small matrices.
//!
//! The crate evaluates the holomorphic functional calculus `γ(f)` of a matrix
//! on a smoothly bounded planar domain by trapezoid quadrature, computes the
//! double-layer potential and the conjugate Cauchy transform, searches for
//! extremal pairs and measures, and checks spectral-constant inequalities.

pub mod bounds;
pub mod calculus;
pub mod campaign;
pub mod domain;
pub mod example;
pub mod linalg;
pub mod par;
pub mod random;
