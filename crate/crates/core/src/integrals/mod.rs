//! Closed-form gamma products for the Selberg, Mehta, circular Dyson and
//! Macdonald–Opdam integrals, plus quadrature and Monte Carlo estimates of
//! the integrals themselves.

mod closed;
mod numeric;

use serde::Serialize;
use thiserror::Error;

use crate::gamma::{ln_gamma, GammaError};
use crate::root_systems::RootError;
use crate::sampling::SamplingPlan;
use crate::scalar::Real;

pub use closed::{
    circular_closed, macdonald_closed, macdonald_closed_complex, mehta_closed, opdam_closed, rho_k, selberg_closed,
};
pub use numeric::{circular_numeric, mehta_mc, selberg_numeric, torus_integral, TORUS_QUADRATURE_RANK_CAP};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IntegralError {
    #[error(transparent)]
    Gamma(#[from] GammaError),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("quadrature is limited to dimension {cap} (got {dim}); use Monte Carlo")]
    DimensionCap { dim: usize, cap: usize },
    #[error("rejection sampling accepted only {0:.2e} of proposals")]
    LowAcceptance(f64),
}

/// One factor `Γ(argument)^power` of a gamma product.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GammaFactor<T> {
    pub argument: T,
    pub power: i32,
}

/// `scalar · ∏ Γ(a_i)^{p_i}` evaluated through log-gamma.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GammaProduct<T> {
    pub value: T,
    /// `ln |value|`, finite even when `value` over- or underflows.
    pub log_value: T,
    pub sign: i8,
    pub scalar: T,
    pub factors: Vec<GammaFactor<T>>,
}

impl<T: Real> GammaProduct<T> {
    pub fn builder() -> GammaProductBuilder<T> {
        GammaProductBuilder { scalar: T::one(), factors: Vec::new() }
    }
}

#[derive(Clone, Debug)]
pub struct GammaProductBuilder<T> {
    scalar: T,
    factors: Vec<GammaFactor<T>>,
}

impl<T: Real> GammaProductBuilder<T> {
    pub fn num(mut self, argument: T) -> Self {
        self.factors.push(GammaFactor { argument, power: 1 });
        self
    }

    pub fn den(mut self, argument: T) -> Self {
        self.factors.push(GammaFactor { argument, power: -1 });
        self
    }

    pub fn pow(mut self, argument: T, power: i32) -> Self {
        self.factors.push(GammaFactor { argument, power });
        self
    }

    pub fn scale(mut self, c: T) -> Self {
        self.scalar = self.scalar * c;
        self
    }

    pub fn build(self) -> Result<GammaProduct<T>, IntegralError> {
        let mut log = T::zero();
        let mut sign: i8 = if self.scalar < T::zero() { -1 } else { 1 };
        if self.scalar == T::zero() {
            sign = 0;
        } else {
            log = self.scalar.abs().ln();
        }
        for f in &self.factors {
            let (lg, s) = ln_gamma(f.argument)?;
            log = log + T::from_i32(f.power).expect("small power") * lg;
            if s < 0 && f.power % 2 != 0 {
                sign = -sign;
            }
        }
        let value = if sign == 0 { T::zero() } else { T::from_i8(sign).expect("sign fits") * log.exp() };
        Ok(GammaProduct { value, log_value: log, sign, scalar: self.scalar, factors: self.factors })
    }
}

/// How a numerical integral is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Method {
    /// Gauss–Legendre with this many nodes per piece and dimension.
    Quadrature {
        nodes: usize,
    },
    MonteCarlo(SamplingPlan),
}

/// A numerical integral with its error estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IntegralEstimate<T> {
    pub value: T,
    /// Standard error for Monte Carlo; zero for quadrature.
    pub std_error: T,
    pub method: Method,
    pub samples_or_nodes: usize,
    pub seed: Option<u64>,
}

impl<T: Real> IntegralEstimate<T> {
    pub(crate) fn quadrature(value: T, nodes: usize) -> Self {
        Self { value, std_error: T::zero(), method: Method::Quadrature { nodes }, samples_or_nodes: nodes, seed: None }
    }

    pub(crate) fn monte_carlo(value: T, std_error: T, plan: SamplingPlan) -> Self {
        Self {
            value,
            std_error,
            method: Method::MonteCarlo(plan),
            samples_or_nodes: plan.samples,
            seed: Some(plan.seed),
        }
    }

    /// Multiplies value and error by a constant.
    pub fn scaled(mut self, c: T) -> Self {
        self.value = self.value * c;
        self.std_error = self.std_error * c.abs();
        self
    }

    pub fn is_stochastic(&self) -> bool {
        matches!(self.method, Method::MonteCarlo(_))
    }
}
