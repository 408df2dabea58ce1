//! Exact constant terms of `∏_{α ∈ R} (1 − e^α)^{k_α}` and the closed-form
//! predictions they are checked against (Dyson, and Macdonald's
//! equal-parameter and general-parameter product formulas).

mod laurent;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exact::{int, Rational};
use crate::root_systems::{MultiplicityFunction, NonReducedRootSystem, RootError, RootSystem};

pub use laurent::{poly_mul, poly_pow, LaurentPolynomial};

/// Largest number of intermediate terms kept before giving up.
pub const DEFAULT_TERM_BUDGET: usize = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CtError {
    #[error("Laurent polynomials of rank {0} and {1} cannot be multiplied")]
    RankMismatch(usize, usize),
    #[error("term budget of {budget} exceeded ({reached} intermediate terms)")]
    TermBudget { budget: usize, reached: usize },
    #[error("predicted value needs an integral factorial argument, got {0}")]
    NonIntegralArgument(String),
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Root(#[from] RootError),
}

/// Which closed form a constant term was compared with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CtFormula {
    /// `(nk)! / (k!)^n` for `A_{n−1}`.
    Dyson,
    /// `∏ binom(k d_i, k)` for reduced systems with equal parameter.
    EqualParameter,
    /// Product over all roots of factorial ratios built from `ρ_k`.
    General,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CtResult {
    #[serde(serialize_with = "crate::exact::ser_display")]
    pub computed: BigInt,
    #[serde(serialize_with = "crate::exact::ser_display")]
    pub predicted: Rational,
    pub formula: CtFormula,
    pub pass: bool,
}

/// Constant term of `∏_{α ∈ R⁺} (2 − e^α − e^{−α})^{k_α}`, exponents taken in
/// simple-root coordinates.
///
/// Factors are multiplied largest first; after each step every monomial that
/// the remaining factors can no longer bring back to the origin is dropped.
pub fn constant_term(
    system: &NonReducedRootSystem,
    k: &MultiplicityFunction<u32>,
    budget: usize,
) -> Result<BigInt, CtError> {
    let rank = system.rank();
    let mut factors: Vec<Vec<i32>> = Vec::new();
    for root in system.positive_roots() {
        let exp: Vec<i32> = root.root.coeffs.iter().map(|&c| c as i32).collect();
        for _ in 0..k.get(root.orbit) {
            factors.push(exp.clone());
        }
    }
    factors.sort_by_key(|e| std::cmp::Reverse(e.iter().map(|c| c.abs()).sum::<i32>()));
    // reach[t][i]: how far factors t.. can still move coordinate i
    let mut reach = vec![vec![0i32; rank]; factors.len() + 1];
    for t in (0..factors.len()).rev() {
        for i in 0..rank {
            reach[t][i] = reach[t + 1][i] + factors[t][i].abs();
        }
    }
    let mut acc = LaurentPolynomial::one(rank);
    for (t, f) in factors.iter().enumerate() {
        let rest = &reach[t + 1];
        acc =
            acc.mul_filtered(&LaurentPolynomial::root_factor(f), |e| e.iter().zip(rest).all(|(x, r)| x.abs() <= *r))?;
        if acc.len() > budget {
            return Err(CtError::TermBudget { budget, reached: acc.len() });
        }
    }
    Ok(acc.constant_term())
}

/// `(nk)! / (k!)^n`.
pub fn dyson_constant_term(n: u32, k: u32) -> BigInt {
    let num = factorial(u64::from(n) * u64::from(k));
    let den = factorial(u64::from(k)).pow(n);
    BigInt::from(num / den)
}

/// `∏_i binom(k d_i, k)` over the degrees of a reduced system.
pub fn predict_equal_parameter(system: &RootSystem, k: u32) -> BigInt {
    let k = u64::from(k);
    let prod: BigUint = system.degrees().iter().map(|&d| binomial(k * d, k)).product();
    BigInt::from(prod)
}

/// `∏_{α ∈ R} |⟨ρ_k, α̌⟩ + k_α + ½k_{α/2}|! / |⟨ρ_k, α̌⟩ + ½k_{α/2}|!` with
/// `ρ_k = ½ Σ_{α ∈ R⁺} k_α α`.
pub fn predict_general(system: &NonReducedRootSystem, k: &MultiplicityFunction<u32>) -> Result<Rational, CtError> {
    let base = system.base();
    let rank = system.rank();
    let half = Rational::new(1.into(), 2.into());
    let mut rho = vec![Rational::zero(); rank];
    for r in system.positive_roots() {
        let kr = int(i64::from(k.get(r.orbit)));
        for (i, &c) in r.root.coeffs.iter().enumerate() {
            rho[i] += &kr * int(c) * &half;
        }
    }
    let mut product = Rational::one();
    for r in system.positive_roots() {
        let alpha: Vec<Rational> = r.root.coeffs.iter().map(|&c| int(c)).collect();
        let pairing = int(2) * base.inner_coeffs(&rho, &alpha) / base.inner_coeffs(&alpha, &alpha);
        let ka = int(i64::from(k.get(r.orbit)));
        let kh = r.half.map(|o| int(i64::from(k.get(o)))).unwrap_or_else(Rational::zero) * &half;
        for sign in [1i64, -1] {
            let c = &pairing * int(sign);
            let top = integral_abs(&(&c + &ka + &kh))?;
            let bottom = integral_abs(&(&c + &kh))?;
            product *= Rational::new(BigInt::from(factorial(top)), BigInt::from(factorial(bottom)));
        }
    }
    Ok(product)
}

/// Computes the constant term and compares it with `formula`.
pub fn verify_constant_term(
    system: &NonReducedRootSystem,
    k: &MultiplicityFunction<u32>,
    formula: CtFormula,
    budget: usize,
) -> Result<CtResult, CtError> {
    let computed = constant_term(system, k, budget)?;
    let uniform = || -> Result<u32, CtError> {
        let values: Vec<u32> = system.positive_roots().iter().map(|r| k.get(r.orbit)).collect();
        match values.split_first() {
            Some((first, rest)) if rest.iter().all(|v| v == first) => Ok(*first),
            _ => Err(CtError::Unsupported("formula needs one multiplicity on every root".into())),
        }
    };
    let predicted = match formula {
        CtFormula::Dyson => {
            let fam = system.family();
            if fam.family() != crate::root_systems::Family::A {
                return Err(CtError::Unsupported(format!("Dyson's formula applies to type A, not {fam}")));
            }
            Rational::from(dyson_constant_term(fam.rank() as u32 + 1, uniform()?))
        }
        CtFormula::EqualParameter => {
            if system.is_non_reduced() {
                return Err(CtError::Unsupported("equal-parameter formula needs a reduced system".into()));
            }
            Rational::from(predict_equal_parameter(system.base(), uniform()?))
        }
        CtFormula::General => predict_general(system, k)?,
    };
    let pass = predicted.is_integer() && predicted.to_integer() == computed;
    Ok(CtResult { computed, predicted, formula, pass })
}

fn integral_abs(q: &Rational) -> Result<u64, CtError> {
    if !q.is_integer() {
        return Err(CtError::NonIntegralArgument(q.to_string()));
    }
    q.to_integer().abs().to_u64().ok_or_else(|| CtError::NonIntegralArgument(q.to_string()))
}

pub(crate) fn factorial(n: u64) -> BigUint {
    (1..=n).map(BigUint::from).product()
}

pub(crate) fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_systems::{build_nonreduced, build_root_system, Orbit, RootFamily};

    fn system(name: &str) -> NonReducedRootSystem {
        let fam = RootFamily::parse(name).unwrap();
        build_nonreduced(fam, MultiplicityFunction::new()).unwrap()
    }

    #[test]
    fn a1_central_binomial() {
        let r = system("A1");
        for k in 0..6u32 {
            let ct = constant_term(&r, &MultiplicityFunction::uniform(k), DEFAULT_TERM_BUDGET).unwrap();
            assert_eq!(ct, BigInt::from(binomial(2 * u64::from(k), u64::from(k))));
        }
    }

    #[test]
    fn dyson_small_values() {
        assert_eq!(dyson_constant_term(3, 1), BigInt::from(6));
        assert_eq!(dyson_constant_term(3, 2), BigInt::from(90));
        assert_eq!(dyson_constant_term(4, 1), BigInt::from(24));
    }

    #[test]
    fn bc1_general_formula_by_hand() {
        let r = system("BC1");
        let k = MultiplicityFunction::new().with(Orbit::Long, 1).with(Orbit::DoubleLong, 1);
        // (2 − x − 1/x)(2 − x² − 1/x²) has constant term 4
        assert_eq!(constant_term(&r, &k, DEFAULT_TERM_BUDGET).unwrap(), BigInt::from(4));
        assert_eq!(predict_general(&r, &k).unwrap(), int(4));
    }

    #[test]
    fn budget_is_enforced() {
        let r = system("A3");
        let err = constant_term(&r, &MultiplicityFunction::uniform(3), 10).unwrap_err();
        assert!(matches!(err, CtError::TermBudget { budget: 10, .. }));
    }

    #[test]
    fn equal_parameter_for_g2() {
        let g2 = build_root_system(RootFamily::parse("G2").unwrap()).unwrap();
        // binom(2,1) · binom(6,1)
        assert_eq!(predict_equal_parameter(&g2, 1), BigInt::from(12));
    }
}
