//! Uniformly Lipschitz affine actions of hyperbolic groups, computed on
//! finite Cayley balls.
//!
//! The pipeline runs `group` (presentations, normal forms, balls) into
//! `bicombing` (exact 1-chains and their area), `kernel` (squared Hilbert
//! distances `K`), `espace` (the normed space, representation and
//! cocycle) and `actions` (tree and quasi-tree inputs).
//!
//! Chains are exact over [`Rational`] or `i64`. Everything downstream of a
//! kernel is generic over [`Scalar`]; the aliases below fix `f64` or `f32`.

pub mod actions;
pub mod bicombing;
pub mod error;
pub mod espace;
pub mod group;
pub mod kernel;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Exact chain coefficients.
pub type Rational = num_rational::Ratio<i64>;

pub type RationalChain = bicombing::Chain1<Rational>;
pub type IntChain = bicombing::Chain1<i64>;

pub type Kernel = kernel::DisplacementKernel<f64>;
pub type Kernel32 = kernel::DisplacementKernel<f32>;
pub type Vector = espace::EVector<f64>;
pub type Vector32 = espace::EVector<f32>;
pub type Report = espace::NormReport<f64>;

#[cfg(test)]
pub(crate) mod testing;
