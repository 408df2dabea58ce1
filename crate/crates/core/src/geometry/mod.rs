//! Geometry of the Euler parametrization: the change of variables from
//! `y`-coordinates to simple-root coordinates `s_i = α_i(y)`, the
//! fundamental region `Δ = { s ≥ 0, Σ ñ_i s_i ≤ π }`, alcove tiling of the
//! box `[0, π]^l`, and the integral identities that tie region integrals of
//! `∏ sin^{m_α}(α(y))` to Macdonald–Opdam gamma products.

mod identities;
mod region;

use serde::Serialize;
use thiserror::Error;

use crate::exact::ExactFactor;
use crate::integrals::{IntegralError, IntegralEstimate};
use crate::root_systems::RootError;
use crate::scalar::Real;
use crate::symspace::CatalogError;

pub use identities::{
    euler_range_report, tiling_check, verify_dyson_identity, verify_restricted_identity, EulerRangeReport,
    REGION_QUADRATURE_RANK_CAP,
};
pub use region::{
    box_integral, cell_count, change_of_variables, dominance_spot_check, fundamental_region, measure_density,
    region_integral, CellCount, ChangeOfVariables, FundamentalRegion, MIN_ACCEPTANCE,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Integral(#[from] IntegralError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error("|W| = {weyl} is not divisible by |Z| = {center}")]
    CenterDoesNotDivide { weyl: String, center: u64 },
}

/// Acceptance rule for comparing a numerical value with a closed form.
///
/// Quadrature passes when the relative error is at most `rel`. Monte Carlo
/// passes when the deviation is within `sigma` standard errors or within
/// `stochastic_rel` relative error, whichever is looser.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerance {
    pub rel: f64,
    pub sigma: f64,
    pub stochastic_rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { rel: 1e-6, sigma: 3.0, stochastic_rel: 2e-2 }
    }
}

/// Outcome of comparing two sides of an integral identity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityReport<T> {
    pub label: String,
    /// Numerical side, prefactor already applied.
    pub lhs: T,
    pub rhs: T,
    pub lhs_estimate: IntegralEstimate<T>,
    /// Exact constant multiplying `lhs_estimate`.
    pub prefactor: ExactFactor,
    pub abs_err: T,
    pub rel_err: T,
    /// Deviation in units of the scaled standard error (Monte Carlo only).
    pub sigma: Option<T>,
    pub tolerance: Tolerance,
    pub pass: bool,
    pub notes: Vec<String>,
}

impl<T: Real> IdentityReport<T> {
    pub(crate) fn compare(
        label: String,
        estimate: IntegralEstimate<T>,
        prefactor: ExactFactor,
        rhs: T,
        tolerance: Tolerance,
    ) -> Self {
        let c = prefactor.to_real::<T>();
        let scaled = estimate.scaled(c);
        let lhs = scaled.value;
        let abs_err = (lhs - rhs).abs();
        let rel_err = abs_err / rhs.abs().max(T::min_positive_value());
        let (sigma, pass) = if estimate.is_stochastic() {
            let se = scaled.std_error;
            let sig = if se > T::zero() { Some(abs_err / se) } else { None };
            let ok = abs_err <= T::lit(tolerance.sigma) * se || rel_err <= T::lit(tolerance.stochastic_rel);
            (sig, ok)
        } else {
            (None, rel_err <= T::lit(tolerance.rel))
        };
        Self {
            label,
            lhs,
            rhs,
            lhs_estimate: estimate,
            prefactor,
            abs_err,
            rel_err,
            sigma,
            tolerance,
            pass: pass && lhs.is_finite() && rhs.is_finite(),
            notes: Vec::new(),
        }
    }
}
