use num_traits::Zero;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::exact::{rational_to_real, Rational};
use crate::quadrature::{BoxArrangement, GaussLegendre};
use crate::root_systems::{MultiplicityFunction, NonReducedRootSystem};
use crate::sampling::{estimate_mean, SamplingPlan};
use crate::scalar::Real;

use super::{IntegralError, IntegralEstimate, Method};

/// Largest torus dimension handled by quadrature.
pub const TORUS_QUADRATURE_RANK_CAP: usize = 4;

fn is_integral<T: Real>(x: T) -> bool {
    x == x.round()
}

fn quadrature_cap(dim: usize) -> Result<(), IntegralError> {
    if dim > TORUS_QUADRATURE_RANK_CAP {
        return Err(IntegralError::DimensionCap { dim, cap: TORUS_QUADRATURE_RANK_CAP });
    }
    Ok(())
}

/// `J_k = (2π)^{−r} ∫_{[0,2π]^r} ∏_{α ∈ R⁺} |2 sin(⟨α, ζ⟩/2)|^{2k_α} dζ`, the
/// torus average of `∏_{α ∈ R} (1 − e^α)^{k_α}`; `⟨α, ζ⟩ = Σ c_i ζ_i` for
/// `α = Σ c_i α_i`.
pub fn torus_integral<T: Real>(
    system: &NonReducedRootSystem,
    k: &MultiplicityFunction<Rational>,
    method: Method,
) -> Result<IntegralEstimate<T>, IntegralError> {
    let rank = system.rank();
    let mut factors: Vec<(Vec<T>, T)> = Vec::new();
    for r in system.positive_roots() {
        let kr = k.get(r.orbit);
        if kr < Rational::zero() {
            return Err(IntegralError::InvalidParameter(format!("k on {:?} is negative", r.orbit)));
        }
        if kr.is_zero() {
            continue;
        }
        let coeffs: Vec<T> = r.root.coeffs.iter().map(|&c| T::from_count(c as usize)).collect();
        factors.push((coeffs, T::lit(2.0) * rational_to_real::<T>(&kr)));
    }
    let integrand = |z: &[T]| {
        factors.iter().fold(T::one(), |acc, (c, p)| {
            let phase = c.iter().zip(z).fold(T::zero(), |s, (a, b)| s + *a * *b);
            acc * (T::lit(2.0) * (phase * T::lit(0.5)).sin()).abs().powf(*p)
        })
    };
    let two_pi = T::TAU();
    match method {
        Method::Quadrature { nodes } => {
            quadrature_cap(rank)?;
            let mut boxed = BoxArrangement::new(vec![T::zero(); rank], vec![two_pi; rank]);
            for (c, p) in &factors {
                if is_integral(*p * T::lit(0.5)) {
                    continue; // (2 − 2cos)^k is smooth
                }
                let span: usize = c.iter().map(|x| x.to_f64_lossy() as usize).sum();
                for m in 1..span {
                    boxed = boxed.with_plane(c.clone(), two_pi * T::from_count(m));
                }
            }
            let rule = GaussLegendre::new(nodes);
            let v = boxed.integrate(&rule, integrand) / two_pi.powi(rank as i32);
            Ok(IntegralEstimate::quadrature(v, nodes))
        }
        Method::MonteCarlo(plan) => {
            let est = estimate_mean(&plan, |rng| {
                let z: Vec<T> = (0..rank).map(|_| T::lit(rng.random::<f64>()) * two_pi).collect();
                integrand(&z)
            });
            Ok(IntegralEstimate::monte_carlo(est.mean, est.std_error, plan))
        }
    }
}

/// Monte Carlo estimate of Mehta's integral as a Gaussian expectation.
pub fn mehta_mc<T: Real>(n: usize, gamma: T, plan: SamplingPlan) -> Result<IntegralEstimate<T>, IntegralError> {
    if n == 0 {
        return Err(IntegralError::InvalidParameter("Mehta integral needs n ≥ 1".into()));
    }
    let two_gamma = T::lit(2.0) * gamma;
    let est = estimate_mean(&plan, |rng| {
        let x: Vec<T> = (0..n).map(|_| T::lit(rng.sample::<f64, _>(StandardNormal))).collect();
        vandermonde_power(&x, two_gamma)
    });
    Ok(IntegralEstimate::monte_carlo(est.mean, est.std_error, plan))
}

fn vandermonde_power<T: Real>(x: &[T], p: T) -> T {
    let mut acc = T::one();
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            acc = acc * (x[i] - x[j]).abs().powf(p);
        }
    }
    acc
}

/// Circular Dyson integral, with the rotation symmetry used to fix `θ_n = 0`.
pub fn circular_numeric<T: Real>(n: usize, gamma: T, method: Method) -> Result<IntegralEstimate<T>, IntegralError> {
    if n == 0 {
        return Err(IntegralError::InvalidParameter("circular integral needs n ≥ 1".into()));
    }
    let dim = n - 1;
    let two_gamma = T::lit(2.0) * gamma;
    let integrand = |theta: &[T]| {
        let mut acc = T::one();
        for i in 0..n {
            for j in i + 1..n {
                let a = if i < dim { theta[i] } else { T::zero() };
                let b = if j < dim { theta[j] } else { T::zero() };
                acc = acc * (T::lit(2.0) * ((a - b) * T::lit(0.5)).sin()).abs().powf(two_gamma);
            }
        }
        acc
    };
    if dim == 0 {
        return Ok(IntegralEstimate::quadrature(T::one(), 0));
    }
    let two_pi = T::TAU();
    match method {
        Method::Quadrature { nodes } => {
            quadrature_cap(dim)?;
            let mut boxed = BoxArrangement::new(vec![T::zero(); dim], vec![two_pi; dim]);
            if !is_integral(gamma) {
                for i in 0..dim {
                    for j in i + 1..dim {
                        let mut normal = vec![T::zero(); dim];
                        normal[i] = T::one();
                        normal[j] = -T::one();
                        boxed = boxed.with_plane(normal, T::zero());
                    }
                }
            }
            let rule = GaussLegendre::new(nodes);
            let v = boxed.integrate(&rule, integrand) / two_pi.powi(dim as i32);
            Ok(IntegralEstimate::quadrature(v, nodes))
        }
        Method::MonteCarlo(plan) => {
            let est = estimate_mean(&plan, |rng| {
                let th: Vec<T> = (0..dim).map(|_| T::lit(rng.random::<f64>()) * two_pi).collect();
                integrand(&th)
            });
            Ok(IntegralEstimate::monte_carlo(est.mean, est.std_error, plan))
        }
    }
}

/// Selberg's integral over `[0,1]^n`. Quadrature is accurate for `α, β ≥ 1`.
pub fn selberg_numeric<T: Real>(
    n: usize,
    alpha: T,
    beta: T,
    gamma: T,
    method: Method,
) -> Result<IntegralEstimate<T>, IntegralError> {
    if n == 0 {
        return Err(IntegralError::InvalidParameter("Selberg integral needs n ≥ 1".into()));
    }
    let (am, bm, g2) = (alpha - T::one(), beta - T::one(), T::lit(2.0) * gamma);
    let integrand = |t: &[T]| {
        let ends = t.iter().fold(T::one(), |acc, &x| acc * x.powf(am) * (T::one() - x).powf(bm));
        ends * vandermonde_power(t, g2)
    };
    match method {
        Method::Quadrature { nodes } => {
            quadrature_cap(n)?;
            let mut boxed = BoxArrangement::new(vec![T::zero(); n], vec![T::one(); n]);
            if !is_integral(gamma) {
                for i in 0..n {
                    for j in i + 1..n {
                        let mut normal = vec![T::zero(); n];
                        normal[i] = T::one();
                        normal[j] = -T::one();
                        boxed = boxed.with_plane(normal, T::zero());
                    }
                }
            }
            let rule = GaussLegendre::new(nodes);
            Ok(IntegralEstimate::quadrature(boxed.integrate(&rule, integrand), nodes))
        }
        Method::MonteCarlo(plan) => {
            let est = estimate_mean(&plan, |rng| {
                let t: Vec<T> = (0..n).map(|_| T::lit(rng.random::<f64>())).collect();
                integrand(&t)
            });
            Ok(IntegralEstimate::monte_carlo(est.mean, est.std_error, plan))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use crate::integrals::{circular_closed, opdam_closed, selberg_closed};
    use crate::root_systems::{build_nonreduced, Orbit, RootFamily};

    #[test]
    fn torus_a1_half() {
        // (2π)^{-1} ∫ |2 sin(θ/2)| dθ = 4/π
        let a1 = build_nonreduced(RootFamily::parse("A1").unwrap(), MultiplicityFunction::new()).unwrap();
        let est =
            torus_integral::<f64>(&a1, &MultiplicityFunction::uniform(rat(1, 2)), Method::Quadrature { nodes: 32 })
                .unwrap();
        assert!((est.value - 4.0 / std::f64::consts::PI).abs() < 1e-13);
    }

    #[test]
    fn torus_bc1_matches_closed_form() {
        let bc1 = build_nonreduced(RootFamily::parse("BC1").unwrap(), MultiplicityFunction::new()).unwrap();
        let k = MultiplicityFunction::new().with(Orbit::Long, int(1)).with(Orbit::DoubleLong, rat(1, 2));
        let est = torus_integral::<f64>(&bc1, &k, Method::Quadrature { nodes: 32 }).unwrap();
        let closed = opdam_closed::<f64>(&bc1, &k).unwrap().value;
        assert!((est.value - closed).abs() < 1e-12, "{} vs {closed}", est.value);
    }

    #[test]
    fn circular_two_points() {
        let est = circular_numeric::<f64>(2, 1.0, Method::Quadrature { nodes: 16 }).unwrap();
        assert!((est.value - 2.0).abs() < 1e-13);
        let est = circular_numeric::<f64>(3, 0.5, Method::Quadrature { nodes: 24 }).unwrap();
        let closed = circular_closed(3, 0.5f64).unwrap().value;
        assert!((est.value - closed).abs() < 1e-10, "{} vs {closed}", est.value);
    }

    #[test]
    fn selberg_quadrature_matches() {
        let est = selberg_numeric::<f64>(2, 1.0, 1.0, 1.0, Method::Quadrature { nodes: 8 }).unwrap();
        assert!((est.value - 1.0 / 6.0).abs() < 1e-14);
        let est = selberg_numeric::<f64>(2, 2.0, 3.0, 0.5, Method::Quadrature { nodes: 32 }).unwrap();
        let closed = selberg_closed(2, 2.0f64, 3.0, 0.5).unwrap().value;
        assert!((est.value - closed).abs() < 1e-6 * closed, "{} vs {closed}", est.value);
    }

    #[test]
    fn dimension_cap() {
        let a5 = build_nonreduced(RootFamily::parse("A5").unwrap(), MultiplicityFunction::new()).unwrap();
        let err = torus_integral::<f64>(&a5, &MultiplicityFunction::uniform(int(1)), Method::Quadrature { nodes: 4 });
        assert!(matches!(err, Err(IntegralError::DimensionCap { .. })));
    }
}
