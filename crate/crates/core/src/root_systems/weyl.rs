use std::collections::{HashMap, HashSet};

use num_bigint::BigUint;

use super::{RootError, RootSystem};

/// Largest rank for which the Weyl group is enumerated element by element.
pub const WEYL_ENUMERATION_RANK_CAP: usize = 6;

impl RootSystem {
    /// Order of the group generated by the simple reflections, found by
    /// closing their permutation action on the full root set.
    pub fn weyl_order_by_enumeration(&self) -> Result<BigUint, RootError> {
        let rank = self.rank();
        if rank > WEYL_ENUMERATION_RANK_CAP {
            return Err(RootError::RankCapExceeded { rank, cap: WEYL_ENUMERATION_RANK_CAP });
        }
        let cartan = self.cartan();
        let mut roots: Vec<Vec<i64>> = self.positive_roots().iter().map(|r| r.coeffs.clone()).collect();
        let negatives: Vec<Vec<i64>> = roots.iter().map(|c| c.iter().map(|x| -x).collect()).collect();
        roots.extend(negatives);
        let index: HashMap<&[i64], u16> = roots.iter().enumerate().map(|(i, c)| (c.as_slice(), i as u16)).collect();

        let generators: Vec<Vec<u16>> = (0..rank)
            .map(|i| {
                roots
                    .iter()
                    .map(|beta| {
                        let pairing: i64 = (0..rank).map(|j| beta[j] * cartan[j][i]).sum();
                        let mut image = beta.clone();
                        image[i] -= pairing;
                        index
                            .get(image.as_slice())
                            .copied()
                            .ok_or_else(|| RootError::Inconsistent(format!("reflection left the root set at {beta:?}")))
                    })
                    .collect::<Result<Vec<u16>, RootError>>()
            })
            .collect::<Result<_, _>>()?;

        let identity: Vec<u16> = (0..roots.len() as u16).collect();
        let mut seen: HashSet<Vec<u16>> = HashSet::new();
        seen.insert(identity.clone());
        let mut frontier = vec![identity];
        while let Some(p) = frontier.pop() {
            for g in &generators {
                let q: Vec<u16> = p.iter().map(|&x| g[x as usize]).collect();
                if !seen.contains(&q) {
                    seen.insert(q.clone());
                    frontier.push(q);
                }
            }
        }
        Ok(BigUint::from(seen.len()))
    }
}
