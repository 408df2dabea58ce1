//! Exact rational helpers: linear algebra over any field-like scalar and
//! closed-form prefactors of the shape `q · √r · π^k`.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::scalar::Real;

/// Arbitrary-precision rational.
pub type Rational = BigRational;

/// Serializes any `Display` value (big integers, rationals) as a string.
pub(crate) fn ser_display<T: fmt::Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// `n / d` as a big rational.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Integer as a big rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rational_to_real<T: Real>(q: &Rational) -> T {
    // numerator and denominator may exceed f64 range separately
    let n = q.numer().to_f64().unwrap_or(f64::NAN);
    let d = q.denom().to_f64().unwrap_or(f64::NAN);
    if n.is_finite() && d.is_finite() {
        T::lit(n / d)
    } else {
        let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(1000) as i32;
        let scale = BigInt::one() << shift.max(0) as usize;
        let n = (q.numer() / &scale).to_f64().unwrap_or(f64::NAN);
        let d = (q.denom() / &scale).to_f64().unwrap_or(f64::NAN);
        T::lit(n / d)
    }
}

/// Determinant by Gaussian elimination with largest-magnitude pivoting.
///
/// Works for exact fields (`BigRational`) and floats alike.
#[allow(clippy::needless_range_loop)]
pub fn determinant<T>(mut m: Vec<Vec<T>>) -> T
where
    T: Clone + Num + Signed + PartialOrd,
{
    let n = m.len();
    let mut det = T::one();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| m[a][col].abs().partial_cmp(&m[b][col].abs()).unwrap_or(std::cmp::Ordering::Equal))
            .expect("non-empty range");
        if m[pivot][col].is_zero() {
            return T::zero();
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det = det * p.clone();
        for row in col + 1..n {
            if m[row][col].is_zero() {
                continue;
            }
            let factor = m[row][col].clone() / p.clone();
            for k in col..n {
                let v = m[col][k].clone() * factor.clone();
                m[row][k] = m[row][k].clone() - v;
            }
        }
    }
    det
}

/// Solves `a · x = b`; `None` when `a` is singular (exactly, or below `eps` in magnitude).
#[allow(clippy::needless_range_loop)]
pub fn solve<T>(mut a: Vec<Vec<T>>, mut b: Vec<T>, eps: &T) -> Option<Vec<T>>
where
    T: Clone + Num + Signed + PartialOrd,
{
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| a[x][col].abs().partial_cmp(&a[y][col].abs()).unwrap_or(std::cmp::Ordering::Equal))?;
        if a[pivot][col].abs() <= *eps {
            return None;
        }
        a.swap(pivot, col);
        b.swap(pivot, col);
        let p = a[col][col].clone();
        for row in 0..n {
            if row == col || a[row][col].is_zero() {
                continue;
            }
            let factor = a[row][col].clone() / p.clone();
            for k in col..n {
                let v = a[col][k].clone() * factor.clone();
                a[row][k] = a[row][k].clone() - v;
            }
            let v = b[col].clone() * factor;
            b[row] = b[row].clone() - v;
        }
    }
    Some((0..n).map(|i| b[i].clone() / a[i][i].clone()).collect())
}

/// Exact square root of a non-negative rational, if it is a perfect square.
pub fn exact_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Splits `r = s² · f` with `f` square-free over small primes; returns `(s, f)`.
fn extract_square(r: &Rational) -> (Rational, Rational) {
    if let Some(s) = exact_sqrt(r) {
        return (s, Rational::one());
    }
    // make the denominator a perfect square: n/d = (n·d)/d²
    let d = r.denom().clone();
    let mut n = r.numer() * &d;
    let mut outside = BigInt::one();
    let mut p = BigInt::from(2u32);
    let limit = BigInt::from(10_000u32);
    while p <= limit && &p * &p <= n {
        let sq = &p * &p;
        while (&n % &sq).is_zero() {
            n /= &sq;
            outside *= &p;
        }
        p += 1u32;
    }
    (Rational::new(outside, d), Rational::from_integer(n))
}

/// Exact closed-form factor `rational · √radicand · π^pi_power`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactFactor {
    pub rational: Rational,
    pub radicand: Rational,
    pub pi_power: i32,
}

impl ExactFactor {
    pub fn new(rational: Rational, radicand: Rational, pi_power: i32) -> Self {
        let (outside, inside) = extract_square(&radicand);
        Self { rational: rational * outside, radicand: inside, pi_power }
    }

    pub fn rational(q: Rational) -> Self {
        Self { rational: q, radicand: Rational::one(), pi_power: 0 }
    }

    pub fn sqrt(q: Rational) -> Self {
        Self::new(Rational::one(), q, 0)
    }

    pub fn pi_pow(k: i32) -> Self {
        Self { rational: Rational::one(), radicand: Rational::one(), pi_power: k }
    }

    pub fn recip(&self) -> Self {
        // 1/(q√r) = √r / (q r)
        Self::new((self.rational.clone() * self.radicand.clone()).recip(), self.radicand.clone(), -self.pi_power)
    }

    /// Square of the factor with the π power dropped; exact.
    pub fn square_without_pi(&self) -> Rational {
        self.rational.clone() * self.rational.clone() * self.radicand.clone()
    }

    pub fn to_real<T: Real>(&self) -> T {
        rational_to_real::<T>(&self.rational)
            * rational_to_real::<T>(&self.radicand).sqrt()
            * T::PI().powi(self.pi_power)
    }
}

impl Mul for ExactFactor {
    type Output = ExactFactor;
    fn mul(self, rhs: ExactFactor) -> ExactFactor {
        ExactFactor::new(self.rational * rhs.rational, self.radicand * rhs.radicand, self.pi_power + rhs.pi_power)
    }
}

impl fmt::Display for ExactFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rational)?;
        if !self.radicand.is_one() {
            write!(f, "·√({})", self.radicand)?;
        }
        match self.pi_power {
            0 => Ok(()),
            1 => write!(f, "·π"),
            k => write!(f, "·π^{k}"),
        }
    }
}

impl Serialize for ExactFactor {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_exact_and_float_agree() {
        let m = vec![vec![int(2), int(-1), int(0)], vec![int(-1), int(2), int(-1)], vec![int(0), int(-1), int(2)]];
        assert_eq!(determinant(m), int(4));
        let f = vec![vec![2.0, -1.0], vec![-1.0, 2.0]];
        assert!((determinant(f) - 3.0f64).abs() < 1e-14);
    }

    #[test]
    fn singular_matrix() {
        let m = vec![vec![int(1), int(2)], vec![int(2), int(4)]];
        assert!(determinant(m.clone()).is_zero());
        assert!(solve(m, vec![int(1), int(1)], &Rational::zero()).is_none());
    }

    #[test]
    fn solve_recovers_vector() {
        let a = vec![vec![int(2), int(-1)], vec![int(-1), int(2)]];
        let x = solve(a, vec![int(1), int(1)], &Rational::zero()).unwrap();
        assert_eq!(x, vec![int(1), int(1)]);
    }

    #[test]
    fn factor_simplifies_square_parts() {
        let f = ExactFactor::sqrt(int(4));
        assert_eq!(f.rational, int(2));
        assert!(f.radicand.is_one());
        let g = ExactFactor::sqrt(int(12));
        assert_eq!(g.rational, int(2));
        assert_eq!(g.radicand, int(3));
        let h = ExactFactor::sqrt(rat(1, 2));
        assert_eq!(h.rational, rat(1, 2));
        assert_eq!(h.radicand, int(2));
        let prod = g.clone() * g.recip();
        assert!(prod.rational.is_one() && prod.radicand.is_one());
        assert!(
            (ExactFactor::new(int(3), int(2), 1).to_real::<f64>() - 3.0 * 2f64.sqrt() * std::f64::consts::PI).abs()
                < 1e-12
        );
    }
}
