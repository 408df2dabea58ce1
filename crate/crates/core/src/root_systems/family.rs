use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::exact::{int, rat, Rational};

use super::RootError;

/// Cartan–Killing family letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    BC,
}

impl Family {
    pub fn is_simply_laced(self) -> bool {
        matches!(self, Family::A | Family::D | Family::E)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
            Family::E => "E",
            Family::F => "F",
            Family::G => "G",
            Family::BC => "BC",
        };
        f.write_str(s)
    }
}

impl FromStr for Family {
    type Err = RootError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Family::A),
            "B" => Ok(Family::B),
            "C" => Ok(Family::C),
            "D" => Ok(Family::D),
            "E" => Ok(Family::E),
            "F" => Ok(Family::F),
            "G" => Ok(Family::G),
            "BC" => Ok(Family::BC),
            other => Err(RootError::UnknownFamily(other.to_string())),
        }
    }
}

/// A family letter together with a rank, canonicalized so that small-rank
/// coincidences (`B1 = C1 = A1`, `C2 = B2`, `D3 = A3`) have one spelling.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RootFamily {
    family: Family,
    rank: usize,
}

impl RootFamily {
    pub fn new(family: Family, rank: usize) -> Result<Self, RootError> {
        let invalid = |reason: &str| RootError::InvalidRank { family, rank, reason: reason.to_string() };
        if rank == 0 {
            return Err(invalid("rank must be positive"));
        }
        let (family, rank) = match (family, rank) {
            (Family::B, 1) | (Family::C, 1) => (Family::A, 1),
            (Family::C, 2) => (Family::B, 2),
            (Family::D, 3) => (Family::A, 3),
            (Family::D, 1) | (Family::D, 2) => return Err(invalid("D1 and D2 are not irreducible")),
            (Family::E, r) if !(6..=8).contains(&r) => return Err(invalid("E requires rank 6, 7 or 8")),
            (Family::F, r) if r != 4 => return Err(invalid("F requires rank 4")),
            (Family::G, r) if r != 2 => return Err(invalid("G requires rank 2")),
            other => other,
        };
        Ok(Self { family, rank })
    }

    pub fn family(self) -> Family {
        self.family
    }

    pub fn rank(self) -> usize {
        self.rank
    }

    /// Parses spellings such as `E7`, `BC2`, `a 3`.
    pub fn parse(s: &str) -> Result<Self, RootError> {
        let s = s.trim();
        let split = s.find(|c: char| c.is_ascii_digit()).ok_or_else(|| RootError::UnknownFamily(s.to_string()))?;
        let family: Family = s[..split].trim().parse()?;
        let rank: usize = s[split..].trim().parse().map_err(|_| RootError::UnknownFamily(s.to_string()))?;
        Self::new(family, rank)
    }

    /// Degrees of the basic invariants of the Weyl group.
    pub fn degrees(self) -> Vec<u64> {
        let n = self.rank as u64;
        match self.family {
            Family::A => (2..=n + 1).collect(),
            Family::B | Family::C | Family::BC => (1..=n).map(|i| 2 * i).collect(),
            Family::D => {
                let mut d: Vec<u64> = (1..n).map(|i| 2 * i).collect();
                d.push(n);
                d.sort_unstable();
                d
            }
            Family::E => match n {
                6 => vec![2, 5, 6, 8, 9, 12],
                7 => vec![2, 6, 8, 10, 12, 14, 18],
                _ => vec![2, 8, 12, 14, 18, 20, 24, 30],
            },
            Family::F => vec![2, 6, 8, 12],
            Family::G => vec![2, 6],
        }
    }

    /// Order of the weight lattice modulo the root lattice (centre of the simply connected group).
    pub fn center_order(self) -> u64 {
        match self.family {
            Family::A => self.rank as u64 + 1,
            Family::B | Family::C => 2,
            Family::D => 4,
            Family::E => match self.rank {
                6 => 3,
                7 => 2,
                _ => 1,
            },
            Family::F | Family::G | Family::BC => 1,
        }
    }

    /// Closed-form number of positive roots of the reduced system.
    pub fn positive_root_count(self) -> usize {
        let n = self.rank;
        match self.family {
            Family::A => n * (n + 1) / 2,
            Family::B | Family::C | Family::BC => n * n,
            Family::D => n * (n - 1),
            Family::E => match n {
                6 => 36,
                7 => 63,
                _ => 120,
            },
            Family::F => 24,
            Family::G => 6,
        }
    }

    /// Dimension of the compact simple group with this root system.
    pub fn group_dimension(self) -> usize {
        self.rank + 2 * self.positive_root_count()
    }

    /// Simple roots in a standard Euclidean realization together with the
    /// metric scale `c` (inner product `c · x·y`) that puts long roots at norm² 2.
    pub(crate) fn realization(self) -> (Vec<Vec<Rational>>, Rational) {
        let n = self.rank;
        let unit = |dim: usize, i: usize| -> Vec<Rational> {
            let mut v = vec![int(0); dim];
            v[i] = int(1);
            v
        };
        let diff = |dim: usize, i: usize, j: usize| -> Vec<Rational> {
            let mut v = vec![int(0); dim];
            v[i] = int(1);
            v[j] = int(-1);
            v
        };
        match self.family {
            Family::A => ((0..n).map(|i| diff(n + 1, i, i + 1)).collect(), int(1)),
            Family::B | Family::BC => {
                let mut s: Vec<_> = (0..n - 1).map(|i| diff(n, i, i + 1)).collect();
                s.push(unit(n, n - 1));
                (s, int(1))
            }
            Family::C => {
                let mut s: Vec<_> = (0..n - 1).map(|i| diff(n, i, i + 1)).collect();
                let mut last = vec![int(0); n];
                last[n - 1] = int(2);
                s.push(last);
                (s, rat(1, 2))
            }
            Family::D => {
                let mut s: Vec<_> = (0..n - 1).map(|i| diff(n, i, i + 1)).collect();
                let mut last = vec![int(0); n];
                last[n - 2] = int(1);
                last[n - 1] = int(1);
                s.push(last);
                (s, int(1))
            }
            Family::E => {
                let h = rat(1, 2);
                let mut a1 = vec![-h.clone(); 8];
                a1[0] = h.clone();
                a1[7] = h;
                let mut a2 = vec![int(0); 8];
                a2[0] = int(1);
                a2[1] = int(1);
                let mut s = vec![a1, a2];
                for i in 0..6 {
                    s.push(diff(8, i + 1, i));
                }
                s.truncate(n);
                (s, int(1))
            }
            Family::F => {
                let h = rat(1, 2);
                let a4 = vec![h.clone(), -h.clone(), -h.clone(), -h];
                (vec![diff(4, 1, 2), diff(4, 2, 3), unit(4, 3), a4], int(1))
            }
            Family::G => {
                let a2 = vec![int(-2), int(1), int(1)];
                (vec![diff(3, 0, 1), a2], rat(1, 3))
            }
        }
    }
}

impl fmt::Display for RootFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

impl FromStr for RootFamily {
    type Err = RootError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonicalizes_low_ranks() {
        assert_eq!(RootFamily::new(Family::B, 1).unwrap().to_string(), "A1");
        assert_eq!(RootFamily::new(Family::C, 2).unwrap().to_string(), "B2");
        assert_eq!(RootFamily::new(Family::D, 3).unwrap().to_string(), "A3");
        assert_eq!(RootFamily::new(Family::BC, 1).unwrap().to_string(), "BC1");
    }

    #[test]
    fn rejects_invalid_ranks() {
        assert!(RootFamily::new(Family::E, 5).is_err());
        assert!(RootFamily::new(Family::F, 3).is_err());
        assert!(RootFamily::new(Family::G, 3).is_err());
        assert!(RootFamily::new(Family::D, 2).is_err());
        assert!(RootFamily::new(Family::A, 0).is_err());
    }

    #[test]
    fn parses_compact_spelling() {
        assert_eq!(RootFamily::parse("e7").unwrap(), RootFamily::new(Family::E, 7).unwrap());
        assert_eq!(RootFamily::parse("BC 2").unwrap(), RootFamily::new(Family::BC, 2).unwrap());
        assert!(RootFamily::parse("X3").is_err());
    }
}
