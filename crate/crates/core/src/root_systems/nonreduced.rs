use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::Rational;

use super::{build_root_system, Family, RootError, RootFamily, RootSystem, RootVector};

/// Weyl-orbit class of a root. Reduced irreducible systems have at most two
/// orbits (long, short); `BC_n` adds the doubles of its short roots
/// (`BC_1`: the double of its single root, tagged `DoubleLong`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orbit {
    Long,
    Short,
    DoubleLong,
    DoubleShort,
}

impl Orbit {
    pub fn name(self) -> &'static str {
        match self {
            Orbit::Long => "long",
            Orbit::Short => "short",
            Orbit::DoubleLong => "double_long",
            Orbit::DoubleShort => "double_short",
        }
    }

    pub fn is_double(self) -> bool {
        matches!(self, Orbit::DoubleLong | Orbit::DoubleShort)
    }

    fn doubled(self) -> Orbit {
        match self {
            Orbit::Long | Orbit::DoubleLong => Orbit::DoubleLong,
            Orbit::Short | Orbit::DoubleShort => Orbit::DoubleShort,
        }
    }
}

/// Orbit-keyed values `k_α`; Weyl invariant because it never sees individual roots.
/// Missing orbits read as zero.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MultiplicityFunction<V> {
    values: BTreeMap<Orbit, V>,
}

impl<V> Default for MultiplicityFunction<V> {
    fn default() -> Self {
        Self { values: BTreeMap::new() }
    }
}

impl<V: Clone + Zero> MultiplicityFunction<V> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Same value on the long and short orbits, nothing on doubled roots.
    pub fn uniform(v: V) -> Self {
        Self::new().with(Orbit::Long, v.clone()).with(Orbit::Short, v)
    }

    pub fn with(mut self, orbit: Orbit, v: V) -> Self {
        self.values.insert(orbit, v);
        self
    }

    pub fn get(&self, orbit: Orbit) -> V {
        self.values.get(&orbit).cloned().unwrap_or_else(V::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Orbit, &V)> {
        self.values.iter().map(|(o, v)| (*o, v))
    }

    pub fn map<W, F: Fn(&V) -> W>(&self, f: F) -> MultiplicityFunction<W> {
        MultiplicityFunction { values: self.values.iter().map(|(o, v)| (*o, f(v))).collect() }
    }
}

/// One positive root of a possibly non-reduced system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RestrictedRoot {
    pub root: RootVector,
    pub orbit: Orbit,
    /// Orbit of `α/2` when `α/2` is itself a root.
    pub half: Option<Orbit>,
}

/// A reduced root system, or `BC_n` built on `B_n`, with per-orbit multiplicities.
#[derive(Clone, Debug)]
pub struct NonReducedRootSystem {
    family: RootFamily,
    base: RootSystem,
    doubled: Vec<usize>,
    multiplicity: MultiplicityFunction<Rational>,
    roots: Vec<RestrictedRoot>,
    highest: RootVector,
}

/// Builds `base_family` with multiplicities attached; `BC_n` gets the doubles
/// `2λ` of the short roots of `B_n`.
pub fn build_nonreduced(
    base_family: RootFamily,
    mult: MultiplicityFunction<Rational>,
) -> Result<NonReducedRootSystem, RootError> {
    let is_bc = base_family.family() == Family::BC;
    let base = if is_bc {
        build_root_system(RootFamily::new(Family::B, base_family.rank())?)?
    } else {
        build_root_system(base_family)?
    };
    NonReducedRootSystem::assemble(base_family, base, is_bc, mult)
}

impl NonReducedRootSystem {
    /// Wraps a reduced system (no doubled roots).
    pub fn reduced(base: RootSystem, mult: MultiplicityFunction<Rational>) -> Result<Self, RootError> {
        let family = base.family();
        Self::assemble(family, base, false, mult)
    }

    fn assemble(
        family: RootFamily,
        base: RootSystem,
        is_bc: bool,
        mult: MultiplicityFunction<Rational>,
    ) -> Result<Self, RootError> {
        for (orbit, v) in mult.iter() {
            if v.is_negative() {
                return Err(RootError::NegativeMultiplicity(orbit));
            }
        }
        let orbit_of = |r: &RootVector| if base.is_long(r) { Orbit::Long } else { Orbit::Short };
        let mut roots: Vec<RestrictedRoot> = Vec::new();
        let mut doubled = Vec::new();
        for (i, r) in base.positive_roots().iter().enumerate() {
            let orbit = orbit_of(r);
            roots.push(RestrictedRoot { root: r.clone(), orbit, half: None });
            // BC_n doubles the short roots of B_n; BC_1 doubles the lone root of A_1
            let doubles = is_bc && (base.rank() == 1 || orbit == Orbit::Short);
            if doubles {
                doubled.push(i);
                roots.push(RestrictedRoot { root: r.scaled(2), orbit: orbit.doubled(), half: Some(orbit) });
            }
        }
        let double_orbits: Vec<Orbit> = roots.iter().filter(|r| r.half.is_some()).map(|r| r.orbit).collect();
        for (orbit, v) in mult.iter() {
            if orbit.is_double() && !v.is_zero() {
                if !is_bc {
                    return Err(RootError::DoubledOnReduced(family));
                }
                if !double_orbits.contains(&orbit) {
                    return Err(RootError::OrbitAbsent { family, orbit });
                }
            }
        }
        roots.sort_by(|a, b| a.root.height().cmp(&b.root.height()).then_with(|| a.root.coeffs.cmp(&b.root.coeffs)));
        let highest = roots.iter().map(|r| &r.root).max_by_key(|r| r.height()).cloned().expect("non-empty");
        if !roots.iter().all(|r| highest.dominates(&r.root)) {
            return Err(RootError::Inconsistent(format!("{family}: highest root not dominant")));
        }
        Ok(Self { family, base, doubled, multiplicity: mult, roots, highest })
    }

    pub fn family(&self) -> RootFamily {
        self.family
    }

    pub fn base(&self) -> &RootSystem {
        &self.base
    }

    pub fn rank(&self) -> usize {
        self.base.rank()
    }

    pub fn is_non_reduced(&self) -> bool {
        !self.doubled.is_empty()
    }

    /// Indices into `base().positive_roots()` whose doubles are roots.
    pub fn doubled(&self) -> &[usize] {
        &self.doubled
    }

    /// All positive roots, doubled ones included, sorted by height.
    pub fn positive_roots(&self) -> &[RestrictedRoot] {
        &self.roots
    }

    pub fn multiplicity(&self) -> &MultiplicityFunction<Rational> {
        &self.multiplicity
    }

    pub fn with_multiplicity(&self, mult: MultiplicityFunction<Rational>) -> Result<Self, RootError> {
        Self::assemble(self.family, self.base.clone(), self.family.family() == Family::BC, mult)
    }

    /// Highest root of the full system (for `BC_n` the double `2e_1`).
    pub fn highest_root(&self) -> &RootVector {
        &self.highest
    }

    pub fn highest_coeffs(&self) -> &[i64] {
        &self.highest.coeffs
    }

    /// `l! · ∏ ñ_i`: the number of alcoves tiling the torus cube.
    pub fn cell_count(&self) -> BigUint {
        let fact: BigUint = (1..=self.rank() as u64).map(BigUint::from).product();
        fact * self.highest.coeffs.iter().map(|&n| BigUint::from(n as u64)).product::<BigUint>()
    }

    /// `Σ_{α ∈ R⁺} m_α`, which must equal `dim H − dim K` for a symmetric space.
    pub fn multiplicity_sum(&self) -> Rational {
        self.roots.iter().map(|r| self.multiplicity.get(r.orbit)).fold(Rational::zero(), |a, b| a + b)
    }

    /// Positive roots carrying non-zero multiplicity.
    pub fn supported_roots(&self) -> impl Iterator<Item = (&RestrictedRoot, Rational)> {
        self.roots.iter().filter_map(|r| {
            let m = self.multiplicity.get(r.orbit);
            (!m.is_zero()).then_some((r, m))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    #[test]
    fn a1_unit_multiplicity_is_ordinary_a1() {
        let r =
            build_nonreduced(RootFamily::new(Family::A, 1).unwrap(), MultiplicityFunction::uniform(int(1))).unwrap();
        assert_eq!(r.positive_roots().len(), 1);
        assert!(!r.is_non_reduced());
        assert_eq!(r.multiplicity_sum(), int(1));
    }

    #[test]
    fn bc1_aiv_data() {
        // SU(1,n)/S(U(1)×U(n)) at n = 3: m_λ = 2n−2, m_2λ = 1
        let m = MultiplicityFunction::new().with(Orbit::Long, int(4)).with(Orbit::DoubleLong, int(1));
        let r = build_nonreduced(RootFamily::new(Family::BC, 1).unwrap(), m).unwrap();
        assert_eq!(r.positive_roots().len(), 2);
        assert_eq!(r.highest_coeffs(), &[2]);
        assert_eq!(r.positive_roots()[1].half, Some(Orbit::Long));
        assert_eq!(r.multiplicity_sum(), int(5));
        assert_eq!(r.cell_count(), BigUint::from(2u32));
    }

    #[test]
    fn bc2_structure() {
        let r =
            build_nonreduced(RootFamily::new(Family::BC, 2).unwrap(), MultiplicityFunction::uniform(int(1))).unwrap();
        assert_eq!(r.positive_roots().len(), 6);
        assert_eq!(r.highest_coeffs(), &[2, 2]);
        for rr in r.positive_roots().iter().filter(|x| x.half.is_some()) {
            assert_eq!(rr.orbit, Orbit::DoubleShort);
            assert!(rr.root.coeffs.iter().all(|c| c % 2 == 0));
        }
    }

    #[test]
    fn b2_fi_type_data() {
        let r =
            build_nonreduced(RootFamily::new(Family::B, 2).unwrap(), MultiplicityFunction::uniform(int(1))).unwrap();
        assert_eq!(r.multiplicity_sum(), int(4));
    }

    #[test]
    fn doubled_on_reduced_rejected() {
        let m = MultiplicityFunction::uniform(int(1)).with(Orbit::DoubleShort, int(1));
        let err = build_nonreduced(RootFamily::new(Family::B, 2).unwrap(), m).unwrap_err();
        assert!(matches!(err, RootError::DoubledOnReduced(_)));
    }

    #[test]
    fn negative_multiplicity_rejected() {
        let m = MultiplicityFunction::uniform(int(-1));
        assert!(build_nonreduced(RootFamily::new(Family::A, 2).unwrap(), m).is_err());
    }
}
