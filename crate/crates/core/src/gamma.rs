//! Log-gamma in real and complex arithmetic (Lanczos, g = 7, with reflection).

use num_complex::Complex;
use thiserror::Error;

use crate::scalar::Real;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GammaError {
    #[error("gamma pole at non-positive integer argument {0}")]
    Pole(f64),
    #[error("non-finite gamma argument")]
    NonFinite,
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn is_nonpositive_integer<T: Real>(x: T) -> bool {
    x <= T::zero() && x == x.round()
}

/// `(ln|Γ(x)|, sign Γ(x))` for real `x`.
pub fn ln_gamma<T: Real>(x: T) -> Result<(T, i8), GammaError> {
    if !x.is_finite() {
        return Err(GammaError::NonFinite);
    }
    if is_nonpositive_integer(x) {
        return Err(GammaError::Pole(x.to_f64_lossy()));
    }
    let half = T::lit(0.5);
    if x < half {
        // Γ(x) Γ(1−x) = π / sin(πx)
        let s = (T::PI() * x).sin();
        let (lg, _) = ln_gamma(T::one() - x)?;
        let sign = if s < T::zero() { -1 } else { 1 };
        return Ok((T::PI().ln() - s.abs().ln() - lg, sign));
    }
    let z = x - T::one();
    let mut a = T::lit(LANCZOS[0]);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        a = a + T::lit(c) / (z + T::from_count(i));
    }
    let t = z + T::lit(LANCZOS_G + 0.5);
    let ln_sqrt_2pi = T::lit(0.918_938_533_204_672_8);
    Ok((ln_sqrt_2pi + (z + half) * t.ln() - t + a.ln(), 1))
}

/// `Γ(x)` for real `x`.
pub fn gamma<T: Real>(x: T) -> Result<T, GammaError> {
    let (lg, sign) = ln_gamma(x)?;
    let v = lg.exp();
    Ok(if sign < 0 { -v } else { v })
}

/// A branch of `ln Γ(z)` for complex `z`; only `exp` of sums of these is meaningful.
pub fn ln_gamma_complex<T: Real>(z: Complex<T>) -> Result<Complex<T>, GammaError> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(GammaError::NonFinite);
    }
    if z.im == T::zero() && is_nonpositive_integer(z.re) {
        return Err(GammaError::Pole(z.re.to_f64_lossy()));
    }
    let one = Complex::new(T::one(), T::zero());
    let half = T::lit(0.5);
    if z.re < half {
        let pi = Complex::new(T::PI(), T::zero());
        let s = (pi * z).sin();
        let lg = ln_gamma_complex(one - z)?;
        return Ok(pi.ln() - s.ln() - lg);
    }
    let w = z - one;
    let mut a = Complex::new(T::lit(LANCZOS[0]), T::zero());
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        a = a + Complex::new(T::lit(c), T::zero()) / (w + T::from_count(i));
    }
    let t = w + T::lit(LANCZOS_G + 0.5);
    let ln_sqrt_2pi = T::lit(0.918_938_533_204_672_8);
    Ok((w + half) * t.ln() - t + a.ln() + ln_sqrt_2pi)
}
