//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library under test.

#![allow(dead_code)]

use std::collections::HashMap;

/// A positive root as an integer exponent vector with its multiplicity.
pub type WeightedRoot = (Vec<i32>, u32);

/// Constant term of `∏ (2 − x^α − x^{−α})^{k_α}` by plain expansion.
pub fn ct_by_expansion(dim: usize, roots: &[WeightedRoot]) -> i128 {
    let mut poly: HashMap<Vec<i32>, i128> = HashMap::from([(vec![0; dim], 1)]);
    for (alpha, k) in roots {
        let neg: Vec<i32> = alpha.iter().map(|c| -c).collect();
        let factor = [(vec![0; dim], 2i128), (alpha.clone(), -1), (neg, -1)];
        for _ in 0..*k {
            let mut next: HashMap<Vec<i32>, i128> = HashMap::new();
            for (e, c) in &poly {
                for (f, d) in &factor {
                    let key: Vec<i32> = e.iter().zip(f).map(|(a, b)| a + b).collect();
                    *next.entry(key).or_insert(0) += c * d;
                }
            }
            next.retain(|_, c| *c != 0);
            poly = next;
        }
    }
    poly.get(&vec![0; dim]).copied().unwrap_or(0)
}

/// `e_i − e_j`, `i < j`, in `n` variables.
pub fn type_a_roots(n: usize, k: u32) -> Vec<WeightedRoot> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut v = vec![0; n];
            v[i] = 1;
            v[j] = -1;
            out.push((v, k));
        }
    }
    out
}

/// `BC_n` in orthogonal coordinates: `e_i ± e_j` carry `long`, `e_i`
/// carries `short`, `2e_i` carries `double`.
pub fn type_bc_roots(n: usize, long: u32, short: u32, double: u32) -> Vec<WeightedRoot> {
    let mut out = Vec::new();
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        out.push((e.clone(), short));
        e[i] = 2;
        out.push((e, double));
        for j in i + 1..n {
            let mut v = vec![0; n];
            v[i] = 1;
            v[j] = -1;
            out.push((v.clone(), long));
            v[j] = 1;
            out.push((v, long));
        }
    }
    out
}

/// Positive roots of the rank-two systems in simple-root coordinates,
/// listed by hand.
pub fn rank_two_roots(name: &str) -> Vec<Vec<i32>> {
    match name {
        "A2" => vec![vec![1, 0], vec![0, 1], vec![1, 1]],
        "B2" => vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![1, 2]],
        "G2" => vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![2, 1], vec![3, 1], vec![3, 2]],
        other => panic!("no hand-listed roots for {other}"),
    }
}

/// Weyl group orders from the classical closed forms.
pub fn weyl_order(family: &str, n: u64) -> u128 {
    let fact = |m: u64| (1..=m as u128).product::<u128>();
    match family {
        "A" => fact(n + 1),
        "B" | "C" => (1u128 << n) * fact(n),
        "D" => (1u128 << (n - 1)) * fact(n),
        "E" => match n {
            6 => 51_840,
            7 => 2_903_040,
            _ => 696_729_600,
        },
        "F" => 1_152,
        "G" => 12,
        _ => panic!("unknown family {family}"),
    }
}

pub fn factorial(n: u64) -> u128 {
    (1..=n as u128).product()
}

pub fn binomial(n: u64, k: u64) -> u128 {
    factorial(n) / (factorial(k) * factorial(n - k))
}
