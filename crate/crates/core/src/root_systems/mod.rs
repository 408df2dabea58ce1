//! Irreducible root systems in exact arithmetic: simple roots, positive roots
//! by reflection closure, highest root, Weyl invariants and the cell-count
//! identity `|W| = |Z| · r! · ∏ ñ_i`.

mod family;
mod nonreduced;
mod weyl;

use std::collections::{BTreeSet, HashSet};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exact::{determinant, int, solve, ExactFactor, Rational};

pub use family::{Family, RootFamily};
pub use nonreduced::{build_nonreduced, MultiplicityFunction, NonReducedRootSystem, Orbit, RestrictedRoot};
pub use weyl::WEYL_ENUMERATION_RANK_CAP;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RootError {
    #[error("unknown root-system family `{0}`")]
    UnknownFamily(String),
    #[error("invalid rank {rank} for family {family}: {reason}")]
    InvalidRank { family: Family, rank: usize, reason: String },
    #[error("{0} is non-reduced; build it with build_nonreduced")]
    NotReduced(RootFamily),
    #[error("Weyl group enumeration is capped at rank {cap} (got {rank})")]
    RankCapExceeded { rank: usize, cap: usize },
    #[error("coroot of the zero vector is undefined")]
    ZeroVector,
    #[error("doubled-root multiplicity given for reduced family {0}")]
    DoubledOnReduced(RootFamily),
    #[error("negative multiplicity on orbit {0:?}")]
    NegativeMultiplicity(Orbit),
    #[error("orbit {orbit:?} does not occur in {family}")]
    OrbitAbsent { family: RootFamily, orbit: Orbit },
    #[error("inconsistent root data: {0}")]
    Inconsistent(String),
}

/// A root written in the simple-root basis together with its exact embedding.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootVector {
    /// Coordinates with respect to the simple roots.
    pub coeffs: Vec<i64>,
    #[serde(serialize_with = "ser_rationals")]
    pub embedding: Vec<Rational>,
    #[serde(serialize_with = "ser_rational")]
    pub norm_sq: Rational,
}

impl RootVector {
    pub fn height(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    pub fn is_positive(&self) -> bool {
        self.coeffs.iter().all(|&c| c >= 0) && self.coeffs.iter().any(|&c| c > 0)
    }

    /// Componentwise `self ≥ other` on simple-root coefficients.
    pub fn dominates(&self, other: &RootVector) -> bool {
        self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a >= b)
    }

    pub(crate) fn scaled(&self, k: i64) -> RootVector {
        RootVector {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
            embedding: self.embedding.iter().map(|x| x * int(k)).collect(),
            norm_sq: &self.norm_sq * int(k * k),
        }
    }
}

pub(crate) fn ser_rational<S: serde::Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

pub(crate) fn ser_rationals<S: serde::Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|q| q.to_string()))
}

/// `2α/‖α‖²` in the same realization as the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coroot {
    pub embedding: Vec<Rational>,
    pub norm_sq: Rational,
}

/// Outcome of the exact check `|W| = |Z| · r! · ∏ ñ_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub family: String,
    #[serde(serialize_with = "crate::exact::ser_display")]
    pub weyl_order: BigUint,
    pub center_order: u64,
    #[serde(serialize_with = "crate::exact::ser_display")]
    pub rank_factorial: BigUint,
    #[serde(serialize_with = "crate::exact::ser_display")]
    pub highest_coeff_product: BigUint,
    /// `r! · ∏ ñ_i`, the number of alcoves in the torus cube.
    #[serde(serialize_with = "crate::exact::ser_display")]
    pub cells: BigUint,
    #[serde(serialize_with = "crate::exact::ser_display")]
    pub lhs: BigUint,
    #[serde(serialize_with = "crate::exact::ser_display")]
    pub rhs: BigUint,
    pub pass: bool,
}

/// An irreducible reduced root system with exact data.
#[derive(Clone, Debug)]
pub struct RootSystem {
    family: RootFamily,
    metric: Rational,
    simple_roots: Vec<RootVector>,
    positive_roots: Vec<RootVector>,
    highest_root: RootVector,
    degrees: Vec<u64>,
    weyl_order: BigUint,
    center_order: u64,
    gram: Vec<Vec<Rational>>,
    cartan: Vec<Vec<i64>>,
}

fn validated_families() -> &'static Mutex<HashSet<RootFamily>> {
    static CACHE: OnceLock<Mutex<HashSet<RootFamily>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashSet::new()))
}

/// Builds the reduced root system of `family`.
///
/// Positive roots come from closing the simple roots under simple
/// reflections. Degree tables are checked against the Weyl group order
/// found by enumeration (once per family, for rank ≤ 6).
pub fn build_root_system(family: RootFamily) -> Result<RootSystem, RootError> {
    if family.family() == Family::BC {
        return Err(RootError::NotReduced(family));
    }
    let rank = family.rank();
    let (embeddings, metric) = family.realization();
    let dot = |a: &[Rational], b: &[Rational]| -> Rational {
        a.iter().zip(b).map(|(x, y)| x * y).fold(Rational::zero(), |s, t| s + t) * &metric
    };
    let gram: Vec<Vec<Rational>> =
        (0..rank).map(|i| (0..rank).map(|j| dot(&embeddings[i], &embeddings[j])).collect()).collect();
    let mut cartan = vec![vec![0i64; rank]; rank];
    for i in 0..rank {
        for j in 0..rank {
            let a = &gram[i][j] * int(2) / &gram[j][j];
            if !a.is_integer() {
                return Err(RootError::Inconsistent(format!("non-integral Cartan entry in {family}")));
            }
            cartan[i][j] =
                a.to_integer().try_into().map_err(|_| RootError::Inconsistent("Cartan entry overflow".into()))?;
        }
    }

    let coeffs = positive_root_closure(&cartan);
    let make = |c: &[i64]| -> RootVector {
        let dim = embeddings[0].len();
        let mut e = vec![Rational::zero(); dim];
        for (i, &ci) in c.iter().enumerate() {
            if ci != 0 {
                for (k, x) in embeddings[i].iter().enumerate() {
                    e[k] += x * int(ci);
                }
            }
        }
        let norm_sq = dot(&e, &e);
        RootVector { coeffs: c.to_vec(), embedding: e, norm_sq }
    };
    let positive_roots: Vec<RootVector> = coeffs.iter().map(|c| make(c)).collect();
    let simple_roots: Vec<RootVector> = (0..rank)
        .map(|i| {
            let mut c = vec![0; rank];
            c[i] = 1;
            make(&c)
        })
        .collect();

    if positive_roots.len() != family.positive_root_count() {
        return Err(RootError::Inconsistent(format!(
            "{family}: closure produced {} positive roots, expected {}",
            positive_roots.len(),
            family.positive_root_count()
        )));
    }
    let highest_root = positive_roots.iter().max_by_key(|r| r.height()).cloned().expect("non-empty root system");
    if !positive_roots.iter().all(|r| highest_root.dominates(r)) {
        return Err(RootError::Inconsistent(format!("{family}: highest root is not dominant")));
    }
    let max_norm = positive_roots.iter().map(|r| r.norm_sq.clone()).max().expect("non-empty");
    if max_norm != int(2) {
        return Err(RootError::Inconsistent(format!("{family}: long roots have norm² {max_norm}")));
    }

    let degrees = family.degrees();
    let weyl_order: BigUint = degrees.iter().map(|&d| BigUint::from(d)).product();
    let rs = RootSystem {
        family,
        metric,
        simple_roots,
        positive_roots,
        highest_root,
        degrees,
        weyl_order,
        center_order: family.center_order(),
        gram,
        cartan,
    };

    if rank <= WEYL_ENUMERATION_RANK_CAP {
        let known = validated_families().lock().map(|s| s.contains(&family)).unwrap_or(false);
        if !known {
            let enumerated = rs.weyl_order_by_enumeration()?;
            if enumerated != rs.weyl_order {
                return Err(RootError::Inconsistent(format!(
                    "{family}: degree product {} but enumeration found {enumerated}",
                    rs.weyl_order
                )));
            }
            if let Ok(mut s) = validated_families().lock() {
                s.insert(family);
            }
        }
    }
    Ok(rs)
}

/// Positive roots (simple-root coordinates) reachable from the simple roots
/// by simple reflections, sorted by height then lexicographically.
fn positive_root_closure(cartan: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let rank = cartan.len();
    let mut seen: BTreeSet<(i64, Vec<i64>)> = BTreeSet::new();
    let mut queue: Vec<Vec<i64>> = Vec::new();
    for i in 0..rank {
        let mut c = vec![0; rank];
        c[i] = 1;
        seen.insert((1, c.clone()));
        queue.push(c);
    }
    while let Some(beta) = queue.pop() {
        for i in 0..rank {
            let pairing: i64 = (0..rank).map(|j| beta[j] * cartan[j][i]).sum();
            if pairing == 0 {
                continue;
            }
            let mut image = beta.clone();
            image[i] -= pairing;
            if image.iter().all(|&c| c >= 0) && image.iter().any(|&c| c > 0) {
                let key = (image.iter().sum(), image.clone());
                if seen.insert(key) {
                    queue.push(image);
                }
            }
        }
    }
    seen.into_iter().map(|(_, c)| c).collect()
}

impl RootSystem {
    pub fn family(&self) -> RootFamily {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.family.rank()
    }

    /// Scale `c` of the ambient inner product `⟨x, y⟩ = c · x·y`.
    pub fn metric(&self) -> &Rational {
        &self.metric
    }

    pub fn simple_roots(&self) -> &[RootVector] {
        &self.simple_roots
    }

    pub fn positive_roots(&self) -> &[RootVector] {
        &self.positive_roots
    }

    pub fn highest_root(&self) -> &RootVector {
        &self.highest_root
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn weyl_order(&self) -> &BigUint {
        &self.weyl_order
    }

    pub fn center_order(&self) -> u64 {
        self.center_order
    }

    /// Gram matrix `⟨α_i, α_j⟩` of the simple roots.
    pub fn gram(&self) -> &[Vec<Rational>] {
        &self.gram
    }

    /// Cartan matrix `⟨α_i, α_j^∨⟩`.
    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    /// Dimension of the corresponding compact simple group.
    pub fn group_dimension(&self) -> usize {
        self.rank() + 2 * self.positive_roots.len()
    }

    /// Inner product of two embedded vectors.
    pub fn inner(&self, a: &[Rational], b: &[Rational]) -> Rational {
        a.iter().zip(b).map(|(x, y)| x * y).fold(Rational::zero(), |s, t| s + t) * &self.metric
    }

    /// Inner product of two vectors given in simple-root coordinates.
    pub fn inner_coeffs(&self, a: &[Rational], b: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if !bj.is_zero() {
                    acc += ai * bj * &self.gram[i][j];
                }
            }
        }
        acc
    }

    /// Whether a root of this system lies in the long-root orbit.
    pub fn is_long(&self, root: &RootVector) -> bool {
        root.norm_sq == int(2)
    }

    /// Highest-root coefficients `ñ_i`.
    pub fn highest_coeffs(&self) -> &[i64] {
        &self.highest_root.coeffs
    }

    /// `r! · ∏ ñ_i`.
    pub fn cell_count(&self) -> BigUint {
        let fact: BigUint = (1..=self.rank() as u64).map(BigUint::from).product();
        let prod: BigUint = self.highest_root.coeffs.iter().map(|&n| BigUint::from(n as u64)).product();
        fact * prod
    }

    /// Exact check of `|W| = |Z| · r! · ∏ ñ_i`.
    pub fn verify_relation(&self) -> RelationReport {
        let rank_factorial: BigUint = (1..=self.rank() as u64).map(BigUint::from).product();
        let highest_coeff_product: BigUint =
            self.highest_root.coeffs.iter().map(|&n| BigUint::from(n as u64)).product();
        let cells = &rank_factorial * &highest_coeff_product;
        let rhs = BigUint::from(self.center_order) * &cells;
        RelationReport {
            family: self.family.to_string(),
            weyl_order: self.weyl_order.clone(),
            center_order: self.center_order,
            rank_factorial,
            highest_coeff_product,
            cells,
            lhs: self.weyl_order.clone(),
            pass: self.weyl_order == rhs,
            rhs,
        }
    }

    /// `2α/‖α‖²` for an embedded vector of this system.
    pub fn coroot(&self, alpha: &[Rational]) -> Result<Coroot, RootError> {
        let n2 = self.inner(alpha, alpha);
        if n2.is_zero() {
            return Err(RootError::ZeroVector);
        }
        let scale = int(2) / &n2;
        let embedding: Vec<Rational> = alpha.iter().map(|x| x * &scale).collect();
        let norm_sq = self.inner(&embedding, &embedding);
        Ok(Coroot { embedding, norm_sq })
    }

    /// Gram determinant of the simple coroots, `V_F²`.
    pub fn coroot_gram_determinant(&self) -> Rational {
        let r = self.rank();
        let m: Vec<Vec<Rational>> = (0..r)
            .map(|i| (0..r).map(|j| &self.gram[i][j] * int(4) / (&self.gram[i][i] * &self.gram[j][j])).collect())
            .collect();
        determinant(m)
    }

    /// Volume of the parallelepiped spanned by the simple coroots.
    pub fn coroot_fundamental_volume(&self) -> ExactFactor {
        ExactFactor::sqrt(self.coroot_gram_determinant())
    }

    /// Gram determinant of the simple roots, `|α_1 ∧ … ∧ α_r|²`.
    pub fn root_gram_determinant(&self) -> Rational {
        determinant(self.gram.clone())
    }

    /// Solves `v = Σ c_i α_i` for `c`; `None` if `v` is outside the root span.
    pub fn coefficients_of(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        let rhs: Vec<Rational> = self.simple_roots.iter().map(|a| self.inner(&a.embedding, v)).collect();
        let c = solve(self.gram.clone(), rhs, &Rational::zero())?;
        // reject components orthogonal to the span
        let dim = v.len();
        let mut back = vec![Rational::zero(); dim];
        for (ci, a) in c.iter().zip(&self.simple_roots) {
            for (k, x) in a.embedding.iter().enumerate() {
                back[k] += ci * x;
            }
        }
        (back == v).then_some(c)
    }

    /// Positive root whose coordinates match `coeffs`, if any.
    pub fn find_positive(&self, coeffs: &[i64]) -> Option<&RootVector> {
        self.positive_roots.iter().find(|r| r.coeffs == coeffs)
    }

    /// `true` iff every stored root lies at norm² 2 or below with long roots at exactly 2.
    pub fn has_long_root_normalization(&self) -> bool {
        self.positive_roots.iter().all(|r| r.norm_sq.is_positive() && r.norm_sq <= int(2))
            && self.positive_roots.iter().any(|r| r.norm_sq == int(2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn rs(f: Family, r: usize) -> RootSystem {
        build_root_system(RootFamily::new(f, r).unwrap()).unwrap()
    }

    #[test]
    fn a1_basic_data() {
        let a1 = rs(Family::A, 1);
        assert_eq!(a1.positive_roots().len(), 1);
        assert_eq!(a1.highest_coeffs(), &[1]);
        assert_eq!(a1.degrees(), &[2]);
        assert_eq!(a1.weyl_order(), &BigUint::from(2u32));
        assert_eq!(a1.center_order(), 2);
    }

    #[test]
    fn g2_highest_root_and_center() {
        let g2 = rs(Family::G, 2);
        assert_eq!(g2.positive_roots().len(), 6);
        assert_eq!(g2.highest_coeffs(), &[3, 2]);
        assert_eq!(g2.center_order(), 1);
        assert_eq!(g2.group_dimension(), 14);
    }

    #[test]
    fn e7_highest_root_and_degrees() {
        let e7 = rs(Family::E, 7);
        assert_eq!(e7.highest_coeffs(), &[2, 2, 3, 4, 3, 2, 1]);
        assert_eq!(e7.degrees(), &[2, 6, 8, 10, 12, 14, 18]);
        assert_eq!(e7.weyl_order(), &BigUint::from(2_903_040u32));
        assert_eq!(e7.cell_count(), BigUint::from(1_451_520u32));
    }

    #[test]
    fn highest_roots_match_table() {
        assert_eq!(rs(Family::A, 5).highest_coeffs(), &[1, 1, 1, 1, 1]);
        assert_eq!(rs(Family::B, 4).highest_coeffs(), &[1, 2, 2, 2]);
        assert_eq!(rs(Family::C, 4).highest_coeffs(), &[2, 2, 2, 1]);
        assert_eq!(rs(Family::D, 5).highest_coeffs(), &[1, 2, 2, 1, 1]);
        assert_eq!(rs(Family::E, 6).highest_coeffs(), &[1, 2, 2, 3, 2, 1]);
        assert_eq!(rs(Family::E, 8).highest_coeffs(), &[2, 3, 4, 6, 5, 4, 3, 2]);
        assert_eq!(rs(Family::F, 4).highest_coeffs(), &[2, 3, 4, 2]);
    }

    #[test]
    fn relation_holds_for_examples() {
        for (f, r) in [(Family::E, 7), (Family::A, 1), (Family::G, 2)] {
            let rep = rs(f, r).verify_relation();
            assert!(rep.pass, "{rep:?}");
        }
        let e7 = rs(Family::E, 7).verify_relation();
        assert_eq!(e7.lhs, BigUint::from(2u32) * BigUint::from(5040u32) * BigUint::from(288u32));
    }

    #[test]
    fn coroots() {
        let a2 = rs(Family::A, 2);
        let long = &a2.simple_roots()[0];
        assert_eq!(a2.coroot(&long.embedding).unwrap().embedding, long.embedding);

        let b2 = rs(Family::B, 2);
        let short = &b2.simple_roots()[1];
        assert_eq!(short.norm_sq, int(1));
        let c = b2.coroot(&short.embedding).unwrap();
        assert_eq!(c.embedding, short.embedding.iter().map(|x| x * int(2)).collect::<Vec<_>>());

        let g2 = rs(Family::G, 2);
        let gs = &g2.simple_roots()[0];
        assert_eq!(gs.norm_sq, rat(2, 3));
        assert_eq!(g2.coroot(&gs.embedding).unwrap().norm_sq, int(6));

        assert_eq!(a2.coroot(&[int(0), int(0), int(0)]), Err(RootError::ZeroVector));
    }

    #[test]
    fn fundamental_volumes() {
        assert_eq!(rs(Family::A, 1).coroot_gram_determinant(), int(2));
        assert_eq!(rs(Family::A, 2).coroot_gram_determinant(), int(3));
        let b2 = rs(Family::B, 2).coroot_fundamental_volume();
        assert_eq!(b2, ExactFactor::rational(int(2)));
    }

    #[test]
    fn bc_is_not_a_reduced_build() {
        let bc = RootFamily::new(Family::BC, 2).unwrap();
        assert!(matches!(build_root_system(bc), Err(RootError::NotReduced(_))));
    }
}
