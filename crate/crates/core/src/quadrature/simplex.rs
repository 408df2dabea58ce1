use crate::scalar::Real;

use super::GaussLegendre;

/// Integrates `f` over `{ s ≥ 0 : Σ weights_i · s_i ≤ bound }` by iterated
/// Gauss–Legendre with variable upper limits (collapsed coordinates).
///
/// Cost is `nodes^dim` integrand evaluations.
pub fn integrate_weighted_simplex<T, F>(weights: &[T], bound: T, rule: &GaussLegendre<T>, f: F) -> T
where
    T: Real,
    F: Fn(&[T]) -> T,
{
    let dim = weights.len();
    let mut point = vec![T::zero(); dim];
    recurse(0, bound, weights, rule, &f, &mut point)
}

fn recurse<T: Real, F: Fn(&[T]) -> T>(
    level: usize,
    remaining: T,
    weights: &[T],
    rule: &GaussLegendre<T>,
    f: &F,
    point: &mut Vec<T>,
) -> T {
    let upper = remaining / weights[level];
    let mut acc = T::zero();
    for (x, w) in rule.mapped(T::zero(), upper) {
        point[level] = x;
        let v = if level + 1 == weights.len() {
            f(point)
        } else {
            recurse(level + 1, remaining - weights[level] * x, weights, rule, f, point)
        };
        acc = acc + w * v;
    }
    acc
}
