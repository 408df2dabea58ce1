//! Verification toolkit for generalized Euler parameterizations of compact
//! simple Lie groups.
//!
//! The crate builds root systems and the restricted-root data of the
//! irreducible compact symmetric spaces, then checks the identities that tie
//! the Euler coordinate ranges to generalized Dyson integrals:
//!
//! * [`root_systems`]: exact root data and `|W| = |Z| · r! · ∏ ñ_i`.
//! * [`symspace`]: the catalog of symmetric spaces with dimension audits.
//! * [`constant_term`]: exact constant terms of `∏ (1 − e^α)^{k_α}`.
//! * [`integrals`]: Selberg, Mehta, circular Dyson and Macdonald–Opdam
//!   gamma products and their numerical counterparts.
//! * [`geometry`]: fundamental regions, alcove tiling and the volume-free
//!   forms of the Euler-parametrization identities.
//! * [`verify`]: verification records and suites used by the `edl` CLI.
//!
//! Numerical code is generic over [`Real`] (`f32`/`f64`); the aliases below
//! fix the scalar to `f64`.

pub mod constant_term;
pub mod exact;
pub mod gamma;
pub mod geometry;
pub mod integrals;
pub mod quadrature;
pub mod root_systems;
pub mod sampling;
pub mod scalar;
pub mod symspace;
pub mod verify;

pub use exact::{ExactFactor, Rational};
pub use scalar::Real;

pub type GammaProduct = integrals::GammaProduct<f64>;
pub type IntegralEstimate = integrals::IntegralEstimate<f64>;
pub type IdentityReport = geometry::IdentityReport<f64>;
pub type GaussLegendre = quadrature::GaussLegendre<f64>;
pub type GammaProduct32 = integrals::GammaProduct<f32>;
pub type IntegralEstimate32 = integrals::IntegralEstimate<f32>;
