use crate::scalar::Real;

use super::GaussLegendre;

/// The hyperplane `normal · x = offset`.
#[derive(Clone, Debug, PartialEq)]
pub struct Hyperplane<T> {
    pub normal: Vec<T>,
    pub offset: T,
}

/// An axis-aligned box together with hyperplanes along which the integrand
/// may fail to be smooth.
///
/// Integration is iterated Gauss–Legendre, one coordinate at a time. At each
/// level the range of the current coordinate is split at the projections of
/// every vertex of the arrangement restricted to the remaining sub-box, so
/// each partial integral is smooth on every piece.
#[derive(Clone, Debug)]
pub struct BoxArrangement<T> {
    lower: Vec<T>,
    upper: Vec<T>,
    planes: Vec<Hyperplane<T>>,
}

impl<T: Real> BoxArrangement<T> {
    pub fn new(lower: Vec<T>, upper: Vec<T>) -> Self {
        assert_eq!(lower.len(), upper.len(), "box bounds must have equal length");
        Self { lower, upper, planes: Vec::new() }
    }

    pub fn with_plane(mut self, normal: Vec<T>, offset: T) -> Self {
        assert_eq!(normal.len(), self.lower.len(), "plane normal has wrong dimension");
        if normal.iter().any(|c| *c != T::zero()) {
            self.planes.push(Hyperplane { normal, offset });
        }
        self
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn planes(&self) -> &[Hyperplane<T>] {
        &self.planes
    }

    pub fn integrate<F: Fn(&[T]) -> T>(&self, rule: &GaussLegendre<T>, f: F) -> T {
        let mut point = vec![T::zero(); self.dim()];
        self.level(0, rule, &f, &mut point)
    }

    fn level<F: Fn(&[T]) -> T>(&self, j: usize, rule: &GaussLegendre<T>, f: &F, point: &mut Vec<T>) -> T {
        let cuts = self.breakpoints(j, &point[..j]);
        let mut acc = T::zero();
        for pair in cuts.windows(2) {
            for (x, w) in rule.mapped(pair[0], pair[1]) {
                point[j] = x;
                let v = if j + 1 == self.dim() { f(point) } else { self.level(j + 1, rule, f, point) };
                acc = acc + w * v;
            }
        }
        acc
    }

    /// Sorted cut points for coordinate `j` given fixed `prefix = x[..j]`.
    fn breakpoints(&self, j: usize, prefix: &[T]) -> Vec<T> {
        let r = self.dim();
        let d = r - j;
        let (lo, hi) = (self.lower[j], self.upper[j]);
        let scale = (hi - lo).abs().max(T::one());
        let tol = T::epsilon().sqrt() * scale;

        // Planes restricted to the slice x[..j] = prefix, in coordinates j..r.
        let mut candidates: Vec<(Vec<T>, T)> = Vec::new();
        for p in &self.planes {
            let normal: Vec<T> = p.normal[j..].to_vec();
            if normal.iter().all(|c| *c == T::zero()) {
                continue;
            }
            let shift = p.normal[..j].iter().zip(prefix).fold(T::zero(), |s, (a, b)| s + *a * *b);
            candidates.push((normal, p.offset - shift));
        }
        let mut cuts = vec![lo, hi];
        if candidates.is_empty() {
            return cuts;
        }
        // Faces of the remaining sub-box.
        for i in 1..d {
            for bound in [self.lower[j + i], self.upper[j + i]] {
                let mut normal = vec![T::zero(); d];
                normal[i] = T::one();
                candidates.push((normal, bound));
            }
        }
        let inside = |x: &[T]| (1..d).all(|i| x[i] >= self.lower[j + i] - tol && x[i] <= self.upper[j + i] + tol);
        let plane_count = candidates.len() - 2 * (d - 1);
        for combo in Combinations::new(candidates.len(), d) {
            // at least one member must be a genuine kink plane
            if combo[0] >= plane_count {
                continue;
            }
            let a: Vec<Vec<T>> = combo.iter().map(|&c| candidates[c].0.clone()).collect();
            let b: Vec<T> = combo.iter().map(|&c| candidates[c].1).collect();
            if let Some(x) = solve_real(a, b) {
                if x[0] > lo + tol && x[0] < hi - tol && inside(&x) {
                    cuts.push(x[0]);
                }
            }
        }
        cuts.sort_by(|a, b| a.partial_cmp(b).expect("finite cut points"));
        cuts.dedup_by(|a, b| (*a - *b).abs() <= tol);
        // keep the exact endpoints
        let last = cuts.len() - 1;
        cuts[0] = lo;
        cuts[last] = hi;
        cuts
    }
}

/// Gaussian elimination with partial pivoting; `None` for (near-)singular systems.
#[allow(clippy::needless_range_loop)]
fn solve_real<T: Real>(mut a: Vec<Vec<T>>, mut b: Vec<T>) -> Option<Vec<T>> {
    let n = a.len();
    let eps = T::epsilon() * T::lit(64.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| a[x][col].abs().partial_cmp(&a[y][col].abs()).unwrap_or(std::cmp::Ordering::Equal))?;
        if a[pivot][col].abs() <= eps {
            return None;
        }
        a.swap(pivot, col);
        b.swap(pivot, col);
        for row in 0..n {
            if row == col {
                continue;
            }
            let factor = a[row][col] / a[col][col];
            if factor == T::zero() {
                continue;
            }
            for k in col..n {
                a[row][k] = a[row][k] - factor * a[col][k];
            }
            b[row] = b[row] - factor * b[col];
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

/// k-subsets of `0..n` in lexicographic order.
struct Combinations {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Self { n, idx: (0..k).collect(), done: k > n || k == 0 }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for t in i + 1..k {
                    self.idx[t] = self.idx[t - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}
