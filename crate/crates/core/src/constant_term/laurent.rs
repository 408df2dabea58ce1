use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::CtError;

/// Sparse Laurent polynomial in `rank` variables with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPolynomial {
    rank: usize,
    terms: HashMap<Vec<i32>, BigInt>,
}

impl LaurentPolynomial {
    pub fn zero(rank: usize) -> Self {
        Self { rank, terms: HashMap::new() }
    }

    pub fn one(rank: usize) -> Self {
        Self::monomial(vec![0; rank], BigInt::one())
    }

    pub fn monomial(exponent: Vec<i32>, coeff: BigInt) -> Self {
        let mut p = Self::zero(exponent.len());
        p.add_term(exponent, coeff);
        p
    }

    /// `2 − e^α − e^{−α}` for the exponent vector `α`.
    pub fn root_factor(alpha: &[i32]) -> Self {
        let rank = alpha.len();
        let mut p = Self::monomial(vec![0; rank], BigInt::from(2));
        p.add_term(alpha.to_vec(), BigInt::from(-1));
        p.add_term(alpha.iter().map(|a| -a).collect(), BigInt::from(-1));
        p
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exponent: &[i32]) -> BigInt {
        self.terms.get(exponent).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coefficient(&vec![0; self.rank])
    }

    pub fn add_term(&mut self, exponent: Vec<i32>, coeff: BigInt) {
        assert_eq!(exponent.len(), self.rank, "exponent length must equal rank");
        if coeff.is_zero() {
            return;
        }
        let vanished = {
            let entry = self.terms.entry(exponent.clone()).or_default();
            *entry += coeff;
            entry.is_zero()
        };
        if vanished {
            self.terms.remove(&exponent);
        }
    }

    /// Terms sorted by exponent, for deterministic output.
    pub fn sorted_terms(&self) -> Vec<(&Vec<i32>, &BigInt)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort();
        v
    }

    /// Product keeping only terms whose exponent satisfies `keep`.
    pub(crate) fn mul_filtered<F: Fn(&[i32]) -> bool>(&self, other: &Self, keep: F) -> Result<Self, CtError> {
        if self.rank != other.rank {
            return Err(CtError::RankMismatch(self.rank, other.rank));
        }
        let mut out: HashMap<Vec<i32>, BigInt> = HashMap::with_capacity(self.terms.len() * other.terms.len().min(8));
        let mut e = vec![0i32; self.rank];
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                for i in 0..self.rank {
                    e[i] = a[i] + b[i];
                }
                if !keep(&e) {
                    continue;
                }
                *out.entry(e.clone()).or_default() += ca * cb;
            }
        }
        out.retain(|_, v| !v.is_zero());
        Ok(Self { rank: self.rank, terms: out })
    }
}

/// Full product of two Laurent polynomials.
pub fn poly_mul(p: &LaurentPolynomial, q: &LaurentPolynomial) -> Result<LaurentPolynomial, CtError> {
    p.mul_filtered(q, |_| true)
}

/// `p^k` by repeated squaring.
pub fn poly_pow(p: &LaurentPolynomial, k: u32) -> Result<LaurentPolynomial, CtError> {
    let mut result = LaurentPolynomial::one(p.rank());
    let mut base = p.clone();
    let mut k = k;
    while k > 0 {
        if k & 1 == 1 {
            result = poly_mul(&result, &base)?;
        }
        k >>= 1;
        if k > 0 {
            base = poly_mul(&base, &base)?;
        }
    }
    Ok(result)
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            let sign = if c.is_negative() {
                "-"
            } else if i > 0 {
                "+"
            } else {
                ""
            };
            if i > 0 {
                write!(f, " {sign} ")?;
            } else {
                f.write_str(sign)?;
            }
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &p)| p != 0)
                .map(|(j, &p)| if p == 1 { format!("x{}", j + 1) } else { format!("x{}^{}", j + 1, p) })
                .collect();
            let mag = c.abs();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{mag}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}
