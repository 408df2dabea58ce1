use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::exact::{int, rat, ExactFactor, Rational};
use crate::integrals::{macdonald_closed, opdam_closed, IntegralError, Method};
use crate::root_systems::{MultiplicityFunction, NonReducedRootSystem, RootSystem};
use crate::scalar::Real;
use crate::symspace::{restricted_root_system, Period, SymmetricSpaceEntry};

use super::region::{box_integral, change_of_variables, fundamental_region, region_integral, FundamentalRegion};
use super::{GeometryError, IdentityReport, Tolerance};

/// Largest restricted rank for which the identity checks use quadrature.
pub const REGION_QUADRATURE_RANK_CAP: usize = 3;

fn big_recip(n: &num_bigint::BigUint) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(n.clone()))
}

fn pow2(e: i64) -> Rational {
    if e >= 0 {
        Rational::from(BigInt::from(2).pow(e as u32))
    } else {
        Rational::new(BigInt::one(), BigInt::from(2).pow((-e) as u32))
    }
}

/// Box integral `∫_{[0,π]^l} ∏ |sin α(s)|^{m_α}` against `l! ∏ ñ_i` copies of
/// the region integral.
pub fn tiling_check<T: Real>(
    system: &NonReducedRootSystem,
    nodes: usize,
    tolerance: Tolerance,
) -> Result<IdentityReport<T>, GeometryError> {
    let method = Method::Quadrature { nodes };
    let boxed = box_integral::<T>(system, method)?;
    let region = region_integral::<T>(system, method)?;
    let cells = system.cell_count();
    let rhs = region.value * crate::exact::rational_to_real::<T>(&Rational::from(BigInt::from(cells.clone())));
    let mut report = IdentityReport::compare(
        format!("tiling {}", system.family()),
        boxed,
        ExactFactor::rational(int(1)),
        rhs,
        tolerance,
    );
    report.notes.push(format!("cells = {cells}"));
    Ok(report)
}

/// Dyson's integral for a reduced system with `m_α = 1`, two ways:
/// the box integral tiled down to the region (numerical) against the
/// equal-parameter gamma product at `k = 1/2`.
///
/// Both sides are the `y`-coordinate integral
/// `I = ∫_{Δ_y} ∏_{α ∈ R⁺} sin α(y) dy = Box / (|det A| ν)
///    = π^r / (2^h |det A| ν) · J_{1/2}`.
pub fn verify_dyson_identity<T: Real>(
    system: &RootSystem,
    method: Method,
    tolerance: Tolerance,
) -> Result<IdentityReport<T>, GeometryError> {
    let reduced = NonReducedRootSystem::reduced(system.clone(), MultiplicityFunction::uniform(int(1)))?;
    let boxed = box_integral::<T>(&reduced, method)?;
    let cv = change_of_variables(system);
    let nu = system.cell_count();
    let r = system.rank() as i32;
    let h = system.positive_roots().len() as i64;
    let lhs_prefactor = cv.wedge.recip() * ExactFactor::rational(big_recip(&nu));
    let rhs_prefactor = cv.wedge.recip() * ExactFactor::new(big_recip(&nu) * pow2(-h), int(1), r);
    let j_half = macdonald_closed::<T>(system, T::lit(0.5))?;
    let rhs = rhs_prefactor.to_real::<T>() * j_half.value;
    let mut report =
        IdentityReport::compare(format!("dyson {}", system.family()), boxed, lhs_prefactor, rhs, tolerance);
    report.notes.push(format!("J_1/2 = {}", j_half.value));
    report.notes.push(format!("|det A| = {}", cv.wedge));
    Ok(report)
}

/// The symmetric-space identity in volume-free form: the `y`-coordinate
/// integral `I = Region_s / |det A|` against
/// `π^l / (2^{h−k} |det A| l! ∏ ñ_i) · J_{m/2}` with `J` from Opdam's product.
/// `I` equals the volume ratio `Vol(G) Vol(K) / Vol(H)²` in this normalization.
pub fn verify_restricted_identity<T: Real>(
    entry: &SymmetricSpaceEntry,
    method: Method,
    tolerance: Tolerance,
) -> Result<IdentityReport<T>, GeometryError> {
    let system = restricted_root_system(entry)?;
    let l = system.rank();
    if matches!(method, Method::Quadrature { .. }) && l > REGION_QUADRATURE_RANK_CAP {
        return Err(IntegralError::DimensionCap { dim: l, cap: REGION_QUADRATURE_RANK_CAP }.into());
    }
    let region = region_integral::<T>(&system, method)?;
    let cv = change_of_variables(system.base());
    let nu = system.cell_count();
    let hk = system.multiplicity_sum();
    if !hk.is_integer() {
        return Err(IntegralError::InvalidParameter(format!("multiplicity sum {hk} is not an integer")).into());
    }
    let hk = hk.to_integer();
    let hk_i64 =
        i64::try_from(&hk).map_err(|_| IntegralError::InvalidParameter("multiplicity sum overflows".into()))?;
    let half_m = system.multiplicity().map(|m| m * rat(1, 2));
    let j = opdam_closed::<T>(&system, &half_m)?;
    let rhs_prefactor = cv.wedge.recip() * ExactFactor::new(big_recip(&nu) * pow2(-hk_i64), int(1), l as i32);
    let rhs = rhs_prefactor.to_real::<T>() * j.value;
    let label = format!("{} {}", entry.label, entry.binding);
    let mut report = IdentityReport::compare(label, region, cv.wedge.recip(), rhs, tolerance);
    report.notes.push(format!("restricted system {} with multiplicity sum {hk}", system.family()));
    report.notes.push(format!("J_m/2 = {}", j.value));
    report.notes.push(format!("implied Vol(G)Vol(K)/Vol(H)^2 = {}", report.lhs));
    Ok(report)
}

/// Coordinate ranges of the Euler parametrization `G = H[x] · exp(y) · H[z]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EulerRangeReport {
    pub label: String,
    pub binding: String,
    pub g: String,
    pub h: String,
    pub k: String,
    /// `dim H − dim K` coordinates, ranging like those of `H` covering `H/K`.
    pub x_count: i64,
    /// `l` coordinates in the fundamental region.
    pub y_count: usize,
    /// `dim H` coordinates, ranging over all of `H`.
    pub z_count: i64,
    pub dim_g: i64,
    pub restricted_system: String,
    pub region: FundamentalRegion,
    pub region_description: String,
    pub region_volume: ExactFactor,
    /// `l! ∏ ñ_i`.
    pub cells: String,
    /// `|K|` when `K` is the discrete group `Z_2^l` of a split form.
    pub discrete_k_order: Option<u64>,
    pub multiplicities: Vec<(String, String)>,
    pub periods: Vec<Period>,
    pub notes: Vec<String>,
}

pub fn euler_range_report(entry: &SymmetricSpaceEntry) -> Result<EulerRangeReport, GeometryError> {
    let system = restricted_root_system(entry)?;
    let region = fundamental_region(&system);
    let terms: Vec<String> = region
        .highest_coeffs
        .iter()
        .enumerate()
        .map(|(i, &n)| if n == 1 { format!("s{}", i + 1) } else { format!("{n}·s{}", i + 1) })
        .collect();
    let region_description = format!("s_i = α_i(y) ≥ 0, {} ≤ π", terms.join(" + "));
    let mut notes = entry.special_notes.clone();
    notes.extend(entry.source_notes.iter().map(|n| format!("{} (printed {}): {}", n.field, n.printed, n.note)));
    let multiplicities = system
        .multiplicity()
        .iter()
        .filter(|(_, v)| **v != Rational::from(BigInt::from(0)))
        .map(|(o, v)| (o.name().to_string(), v.to_string()))
        .collect();
    Ok(EulerRangeReport {
        label: entry.label.clone(),
        binding: entry.binding.to_string(),
        g: entry.g_compact.clone(),
        h: entry.h_name.clone(),
        k: entry.k_name.clone(),
        x_count: entry.dim_h - entry.dim_k,
        y_count: system.rank(),
        z_count: entry.dim_h,
        dim_g: entry.dim_g,
        restricted_system: system.family().to_string(),
        region_volume: region.volume(),
        region,
        region_description,
        cells: system.cell_count().to_string(),
        discrete_k_order: entry.is_split().then(|| 1u64 << entry.restricted_rank),
        multiplicities,
        periods: entry.periods.clone(),
        notes,
    })
}
