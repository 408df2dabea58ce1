// `!(x > bound)` is deliberate: it rejects NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use num_complex::Complex;
use num_traits::Zero;

use crate::exact::{int, rat, rational_to_real, Rational};
use crate::gamma::ln_gamma_complex;
use crate::root_systems::{MultiplicityFunction, NonReducedRootSystem, RootSystem};
use crate::scalar::Real;

use super::{GammaProduct, IntegralError};

fn check_gamma_range<T: Real>(gamma: T, n: usize) -> Result<(), IntegralError> {
    if !(gamma > -T::one() / T::from_count(n)) {
        return Err(IntegralError::InvalidParameter(format!("γ = {gamma} must exceed −1/{n}")));
    }
    Ok(())
}

/// Selberg's integral
/// `∫_{[0,1]^n} ∏ t_i^{α−1} (1 − t_i)^{β−1} ∏_{i<j} |t_i − t_j|^{2γ} dt`
/// `= ∏_{j=0}^{n−1} Γ(α + jγ) Γ(β + jγ) Γ(1 + (j+1)γ) / (Γ(α + β + (n+j−1)γ) Γ(1 + γ))`.
pub fn selberg_closed<T: Real>(n: usize, alpha: T, beta: T, gamma: T) -> Result<GammaProduct<T>, IntegralError> {
    if n == 0 {
        return Err(IntegralError::InvalidParameter("Selberg integral needs n ≥ 1".into()));
    }
    if !(alpha > T::zero() && beta > T::zero()) {
        return Err(IntegralError::InvalidParameter(format!("α = {alpha}, β = {beta} must be positive")));
    }
    let mut bound = T::one() / T::from_count(n);
    if n > 1 {
        let m = T::from_count(n - 1);
        bound = bound.min(alpha / m).min(beta / m);
    }
    if !(gamma > -bound) {
        return Err(IntegralError::InvalidParameter(format!("γ = {gamma} must exceed −{bound}")));
    }
    let mut b = GammaProduct::builder();
    for j in 0..n {
        let jf = T::from_count(j);
        b = b
            .num(alpha + jf * gamma)
            .num(beta + jf * gamma)
            .num(T::one() + (jf + T::one()) * gamma)
            .den(alpha + beta + T::from_count(n + j - 1) * gamma)
            .den(T::one() + gamma);
    }
    b.build()
}

/// Mehta's integral `(2π)^{−n/2} ∫ ∏_{i<j} |x_i − x_j|^{2γ} e^{−|x|²/2} dx = ∏_{j=1}^n Γ(1 + jγ) / Γ(1 + γ)`.
pub fn mehta_closed<T: Real>(n: usize, gamma: T) -> Result<GammaProduct<T>, IntegralError> {
    if n == 0 {
        return Err(IntegralError::InvalidParameter("Mehta integral needs n ≥ 1".into()));
    }
    check_gamma_range(gamma, n)?;
    let mut b = GammaProduct::builder();
    for j in 1..=n {
        b = b.num(T::one() + T::from_count(j) * gamma).den(T::one() + gamma);
    }
    b.build()
}

/// Circular Dyson integral
/// `(2π)^{−n} ∫_{[0,2π]^n} ∏_{i<j} |e^{iθ_i} − e^{iθ_j}|^{2γ} dθ = Γ(1 + nγ) / Γ(1 + γ)^n`.
pub fn circular_closed<T: Real>(n: usize, gamma: T) -> Result<GammaProduct<T>, IntegralError> {
    if n == 0 {
        return Err(IntegralError::InvalidParameter("circular integral needs n ≥ 1".into()));
    }
    check_gamma_range(gamma, n)?;
    GammaProduct::builder().num(T::one() + T::from_count(n) * gamma).pow(T::one() + gamma, -(n as i32)).build()
}

/// Macdonald's equal-parameter product `∏_i Γ(s d_i + 1) / (Γ(s + 1) Γ(s d_i − s + 1))`.
pub fn macdonald_closed<T: Real>(system: &RootSystem, s: T) -> Result<GammaProduct<T>, IntegralError> {
    let dmax = *system.degrees().iter().max().expect("non-empty degrees");
    if !(s > -T::one() / T::from_count(dmax as usize)) {
        return Err(IntegralError::InvalidParameter(format!("s = {s} must exceed −1/{dmax}")));
    }
    let mut b = GammaProduct::builder();
    for &d in system.degrees() {
        let sd = s * T::from_count(d as usize);
        b = b.num(sd + T::one()).den(s + T::one()).den(sd - s + T::one());
    }
    b.build()
}

/// [`macdonald_closed`] at complex `s`.
pub fn macdonald_closed_complex<T: Real>(system: &RootSystem, s: Complex<T>) -> Result<Complex<T>, IntegralError> {
    let dmax = *system.degrees().iter().max().expect("non-empty degrees");
    if !(s.re > -T::one() / T::from_count(dmax as usize)) {
        return Err(IntegralError::InvalidParameter(format!("Re s = {} must exceed −1/{dmax}", s.re)));
    }
    let one = Complex::new(T::one(), T::zero());
    let mut log = Complex::zero();
    for &d in system.degrees() {
        let sd = s * T::from_count(d as usize);
        log = log + ln_gamma_complex(sd + one)? - ln_gamma_complex(s + one)? - ln_gamma_complex(sd - s + one)?;
    }
    Ok(log.exp())
}

/// `ρ_k = ½ Σ_{α ∈ R⁺} k_α α` in simple-root coordinates.
pub fn rho_k(system: &NonReducedRootSystem, k: &MultiplicityFunction<Rational>) -> Vec<Rational> {
    let mut rho = vec![Rational::zero(); system.rank()];
    for r in system.positive_roots() {
        let kr = k.get(r.orbit) * rat(1, 2);
        for (i, &c) in r.root.coeffs.iter().enumerate() {
            rho[i] += &kr * int(c);
        }
    }
    rho
}

/// Opdam's evaluation of the torus integral `J_k` (normalized to total mass
/// one at `k = 0`):
/// `∏_{α ∈ R⁺} Γ(c + k_α + κ + 1) Γ(c − k_α − κ + 1) / (Γ(c + κ + 1) Γ(c − κ + 1))`
/// with `c = ⟨ρ_k, α^∨⟩` and `κ = ½ k_{α/2}`.
pub fn opdam_closed<T: Real>(
    system: &NonReducedRootSystem,
    k: &MultiplicityFunction<Rational>,
) -> Result<GammaProduct<T>, IntegralError> {
    for (orbit, v) in k.iter() {
        if *v < Rational::zero() {
            return Err(IntegralError::InvalidParameter(format!("k on {orbit:?} is negative")));
        }
    }
    let base = system.base();
    let rho = rho_k(system, k);
    let mut b = GammaProduct::builder();
    for r in system.positive_roots() {
        let ka = k.get(r.orbit);
        if ka.is_zero() {
            continue;
        }
        let alpha: Vec<Rational> = r.root.coeffs.iter().map(|&c| int(c)).collect();
        let c = int(2) * base.inner_coeffs(&rho, &alpha) / base.inner_coeffs(&alpha, &alpha);
        let kappa = r.half.map(|o| k.get(o)).unwrap_or_else(Rational::zero) * rat(1, 2);
        let one = int(1);
        let arg = |q: Rational| rational_to_real::<T>(&q);
        b = b
            .num(arg(&c + &ka + &kappa + &one))
            .num(arg(&c - &ka - &kappa + &one))
            .den(arg(&c + &kappa + &one))
            .den(arg(&c - &kappa + &one));
    }
    b.build()
}
