use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::exact::{int, rat, rational_to_real, ExactFactor, Rational};
use crate::integrals::{IntegralError, IntegralEstimate, Method};
use crate::quadrature::{integrate_weighted_simplex, BoxArrangement, GaussLegendre};
use crate::root_systems::{NonReducedRootSystem, RootSystem};
use crate::sampling::estimate_mean;
use crate::scalar::Real;

use super::GeometryError;

/// Largest rank for which region and box integrals use quadrature.
const QUADRATURE_RANK_CAP: usize = 4;

/// Rejection sampling gives up below this acceptance rate.
/// Smallest region-to-box volume ratio accepted by rejection sampling.
pub const MIN_ACCEPTANCE: f64 = 1e-4;

/// The linear map `y ↦ (α_1(y), …, α_l(y))` and its Jacobian.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChangeOfVariables {
    /// Rows are the simple roots in the ambient realization.
    #[serde(serialize_with = "ser_matrix")]
    pub matrix: Vec<Vec<Rational>>,
    /// Inner-product scale of the realization.
    #[serde(serialize_with = "ser_q")]
    pub metric: Rational,
    /// `|α_1 ∧ … ∧ α_l|² = det ⟨α_i, α_j⟩`.
    #[serde(serialize_with = "ser_q")]
    pub wedge_squared: Rational,
    /// `|α_1 ∧ … ∧ α_l|`.
    pub wedge: ExactFactor,
    /// `V_F`, the volume of the simple-coroot parallelepiped.
    pub coroot_volume: ExactFactor,
    /// `V_F · ∏ ‖α_i‖²/2`, which must equal `wedge`.
    pub wedge_via_coroots: ExactFactor,
    pub consistent: bool,
}

fn ser_q<S: serde::Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(q)
}

fn ser_matrix<S: serde::Serializer>(m: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(m.iter().map(|row| row.iter().map(|q| q.to_string()).collect::<Vec<_>>()))
}

pub fn change_of_variables(system: &RootSystem) -> ChangeOfVariables {
    let matrix: Vec<Vec<Rational>> = system.simple_roots().iter().map(|r| r.embedding.clone()).collect();
    let wedge_squared = system.root_gram_determinant();
    let half_norms: Rational =
        system.simple_roots().iter().map(|r| &r.norm_sq * rat(1, 2)).fold(Rational::one(), |a, b| a * b);
    let coroot_volume = system.coroot_fundamental_volume();
    let wedge_via_coroots = coroot_volume.clone() * ExactFactor::rational(half_norms.clone());
    let consistent = wedge_via_coroots.square_without_pi() == wedge_squared;
    ChangeOfVariables {
        matrix,
        metric: system.metric().clone(),
        wedge: ExactFactor::sqrt(wedge_squared.clone()),
        wedge_squared,
        coroot_volume,
        wedge_via_coroots,
        consistent,
    }
}

/// `Δ = { s ∈ R^l : s_i ≥ 0, Σ ñ_i s_i ≤ π }` in simple-root coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FundamentalRegion {
    pub highest_coeffs: Vec<i64>,
}

impl FundamentalRegion {
    pub fn rank(&self) -> usize {
        self.highest_coeffs.len()
    }

    pub fn contains<T: Real>(&self, s: &[T]) -> bool {
        let apex =
            self.highest_coeffs.iter().zip(s).fold(T::zero(), |acc, (&n, &x)| acc + T::from_count(n as usize) * x);
        s.iter().all(|&x| x >= T::zero()) && apex <= T::PI()
    }

    /// `π^l / (l! ∏ ñ_i)`.
    pub fn volume(&self) -> ExactFactor {
        let l = self.rank();
        let denom: BigUint = (1..=l as u64).map(BigUint::from).product::<BigUint>()
            * self.highest_coeffs.iter().map(|&n| BigUint::from(n as u64)).product::<BigUint>();
        ExactFactor::new(Rational::new(1.into(), denom.into()), int(1), l as i32)
    }

    /// Box containing the region: `[0, π/ñ_i]`.
    pub fn bounding_box<T: Real>(&self) -> Vec<T> {
        self.highest_coeffs.iter().map(|&n| T::PI() / T::from_count(n as usize)).collect()
    }

    /// Acceptance rate of uniform sampling in [`Self::bounding_box`]: `1/l!`.
    pub fn box_fraction(&self) -> f64 {
        (1..=self.rank()).fold(1.0, |acc, i| acc / i as f64)
    }
}

pub fn fundamental_region(system: &NonReducedRootSystem) -> FundamentalRegion {
    FundamentalRegion { highest_coeffs: system.highest_coeffs().to_vec() }
}

/// Counts sampled points of `Δ` at which some positive root leaves `[0, π]`;
/// zero confirms that the highest root dominates on the region.
pub fn dominance_spot_check(system: &NonReducedRootSystem, samples: usize, seed: u64) -> usize {
    let region = fundamental_region(system);
    let upper = region.bounding_box::<f64>();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0;
    let mut taken = 0;
    while taken < samples {
        let s: Vec<f64> = upper.iter().map(|&u| rng.random::<f64>() * u).collect();
        if !region.contains(&s) {
            continue;
        }
        taken += 1;
        let bad = system.positive_roots().iter().any(|r| {
            let v: f64 = r.root.coeffs.iter().zip(&s).map(|(&c, &x)| c as f64 * x).sum();
            !(-1e-12..=std::f64::consts::PI + 1e-12).contains(&v)
        });
        violations += usize::from(bad);
    }
    violations
}

/// `|W|/|Z|` against `l! · ∏ ñ_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellCount {
    pub family: String,
    #[serde(serialize_with = "crate::exact::ser_display")]
    pub via_weyl: BigUint,
    #[serde(serialize_with = "crate::exact::ser_display")]
    pub via_highest_root: BigUint,
    pub pass: bool,
}

pub fn cell_count(system: &RootSystem) -> Result<CellCount, GeometryError> {
    let center = BigUint::from(system.center_order());
    let (q, r) = system.weyl_order().div_rem(&center);
    if r != BigUint::ZERO {
        return Err(GeometryError::CenterDoesNotDivide {
            weyl: system.weyl_order().to_string(),
            center: system.center_order(),
        });
    }
    let via_highest_root = system.cell_count();
    Ok(CellCount { family: system.family().to_string(), pass: q == via_highest_root, via_weyl: q, via_highest_root })
}

/// `∏_{α ∈ R⁺} sin^{m_α}(α(s))` with the system's own multiplicities.
/// Integer exponents keep the sign of the sine; fractional ones use `|sin|`.
pub fn measure_density<T: Real>(system: &NonReducedRootSystem, s: &[T]) -> T {
    density_factors::<T>(system).iter().fold(T::one(), |acc, f| acc * f.eval(s))
}

struct DensityFactor<T> {
    coeffs: Vec<T>,
    power: T,
    integral_power: Option<i32>,
}

impl<T: Real> DensityFactor<T> {
    fn eval(&self, s: &[T]) -> T {
        let phase = self.coeffs.iter().zip(s).fold(T::zero(), |acc, (&c, &x)| acc + c * x);
        let v = phase.sin();
        match self.integral_power {
            Some(k) => v.powi(k),
            None => v.abs().powf(self.power),
        }
    }

    fn eval_abs(&self, s: &[T]) -> T {
        let phase = self.coeffs.iter().zip(s).fold(T::zero(), |acc, (&c, &x)| acc + c * x);
        phase.sin().abs().powf(self.power)
    }
}

fn density_factors<T: Real>(system: &NonReducedRootSystem) -> Vec<DensityFactor<T>> {
    system
        .supported_roots()
        .map(|(r, m)| DensityFactor {
            coeffs: r.root.coeffs.iter().map(|&c| T::from_count(c as usize)).collect(),
            power: rational_to_real(&m),
            integral_power: if m.is_integer() { m.to_integer().to_i32() } else { None },
        })
        .collect()
}

fn cap(rank: usize) -> Result<(), IntegralError> {
    if rank > QUADRATURE_RANK_CAP {
        return Err(IntegralError::DimensionCap { dim: rank, cap: QUADRATURE_RANK_CAP });
    }
    Ok(())
}

/// `∫_Δ ∏ sin^{m_α}(α(s)) ds` in simple-root coordinates.
pub fn region_integral<T: Real>(
    system: &NonReducedRootSystem,
    method: Method,
) -> Result<IntegralEstimate<T>, GeometryError> {
    let region = fundamental_region(system);
    let factors = density_factors::<T>(system);
    let density = |s: &[T]| factors.iter().fold(T::one(), |acc, f| acc * f.eval(s));
    match method {
        Method::Quadrature { nodes } => {
            cap(region.rank())?;
            let weights: Vec<T> = region.highest_coeffs.iter().map(|&n| T::from_count(n as usize)).collect();
            let rule = GaussLegendre::new(nodes);
            let v = integrate_weighted_simplex(&weights, T::PI(), &rule, density);
            Ok(IntegralEstimate::quadrature(v, nodes))
        }
        Method::MonteCarlo(plan) => {
            let fraction = region.box_fraction();
            if fraction < MIN_ACCEPTANCE {
                return Err(IntegralError::LowAcceptance(fraction).into());
            }
            let upper = region.bounding_box::<T>();
            let box_volume = upper.iter().fold(T::one(), |a, &b| a * b);
            let est = estimate_mean(&plan, |rng| {
                let s: Vec<T> = upper.iter().map(|&u| T::lit(rng.random::<f64>()) * u).collect();
                if region.contains(&s) {
                    density(&s)
                } else {
                    T::zero()
                }
            });
            Ok(IntegralEstimate::monte_carlo(est.mean, est.std_error, plan).scaled(box_volume))
        }
    }
}

/// `∫_{[0,π]^l} ∏ |sin(α(s))|^{m_α} ds`.
pub fn box_integral<T: Real>(
    system: &NonReducedRootSystem,
    method: Method,
) -> Result<IntegralEstimate<T>, GeometryError> {
    let rank = system.rank();
    let factors = density_factors::<T>(system);
    let density = |s: &[T]| factors.iter().fold(T::one(), |acc, f| acc * f.eval_abs(s));
    let pi = T::PI();
    match method {
        Method::Quadrature { nodes } => {
            cap(rank)?;
            let mut boxed = BoxArrangement::new(vec![T::zero(); rank], vec![pi; rank]);
            for f in &factors {
                // |sin|^m is smooth across its zeros only for even integer m
                if f.integral_power.is_some_and(|k| k % 2 == 0) {
                    continue;
                }
                let span: usize = f.coeffs.iter().map(|c| c.to_f64_lossy() as usize).sum();
                for j in 1..span {
                    boxed = boxed.with_plane(f.coeffs.clone(), pi * T::from_count(j));
                }
            }
            let rule = GaussLegendre::new(nodes);
            Ok(IntegralEstimate::quadrature(boxed.integrate(&rule, density), nodes))
        }
        Method::MonteCarlo(plan) => {
            let est = estimate_mean(&plan, |rng| {
                let s: Vec<T> = (0..rank).map(|_| T::lit(rng.random::<f64>()) * pi).collect();
                density(&s)
            });
            Ok(IntegralEstimate::monte_carlo(est.mean, est.std_error, plan).scaled(pi.powi(rank as i32)))
        }
    }
}
