//! Instance generators and brute-force oracles shared by the integration
//! tests. Nothing here calls the library's solvers; the oracles recompute
//! everything from raw entries.

#![allow(dead_code)]

use nalgebra::DMatrix;
use pcm_core::{CompleteMatrix, IncompleteMatrix, PreferenceDag};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The seven-item, eleven-arc preference graph used as the minimal
/// counterexample (1-based arcs in the comment order).
pub fn reference_dag() -> PreferenceDag {
    let arcs = [
        (1, 2),
        (1, 6),
        (1, 7),
        (2, 3),
        (2, 4),
        (3, 4),
        (3, 5),
        (4, 5),
        (4, 6),
        (5, 6),
        (5, 7),
    ];
    PreferenceDag::new(7, arcs.iter().map(|&(a, b)| (a - 1, b - 1))).unwrap()
}

pub const WORKED_EXAMPLE_TEXT: &str = "4\n1 2 * *\n1/2 1 1 8\n* 1 1 1\n* 1/8 1 1\n";

/// a12 = 2, a23 = 1, a24 = 8, a34 = 1, a13 and a14 missing.
pub fn worked_example() -> IncompleteMatrix {
    IncompleteMatrix::from_upper(4, |i, j| match (i, j) {
        (0, 1) => Some(2.0),
        (1, 2) => Some(1.0),
        (1, 3) => Some(8.0),
        (2, 3) => Some(1.0),
        _ => None,
    })
    .unwrap()
}

/// A value from the 1/9..9 scale.
pub fn scale_value(rng: &mut ChaCha8Rng) -> f64 {
    let v = rng.random_range(1..=9) as f64;
    if rng.random::<bool>() {
        v
    } else {
        1.0 / v
    }
}

pub fn random_complete(n: usize, rng: &mut ChaCha8Rng) -> CompleteMatrix {
    CompleteMatrix::from_upper(n, |_, _| scale_value(rng)).unwrap()
}

/// Random matrix with a continuous positive value in `[1/9, 9]` above the diagonal.
pub fn random_complete_continuous(n: usize, rng: &mut ChaCha8Rng) -> CompleteMatrix {
    let l = 9f64.ln();
    CompleteMatrix::from_upper(n, |_, _| rng.random_range(-l..=l).exp()).unwrap()
}

/// `n x n` matrix with between 1 and `max_missing` missing pairs that keeps
/// the comparison graph connected.
pub fn random_few_missing(n: usize, max_missing: usize, rng: &mut ChaCha8Rng) -> IncompleteMatrix {
    loop {
        let mut pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        pairs.shuffle(rng);
        let k = rng.random_range(1..=max_missing);
        let missing = &pairs[..k];
        let full = random_complete(n, rng);
        let a = IncompleteMatrix::from_upper(n, |i, j| {
            (!missing.contains(&(i, j))).then(|| full.get(i, j))
        })
        .unwrap();
        if a.is_connected() {
            return a;
        }
    }
}

/// Random spanning tree with scale values on its edges; everything else missing.
pub fn random_tree(n: usize, rng: &mut ChaCha8Rng) -> IncompleteMatrix {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = std::collections::HashMap::new();
    for p in 1..n {
        let parent = order[rng.random_range(0..p)];
        let child = order[p];
        let v = scale_value(rng);
        let (i, j, v) = if parent < child { (parent, child, v) } else { (child, parent, 1.0 / v) };
        edges.insert((i, j), v);
    }
    IncompleteMatrix::from_upper(n, |i, j| edges.get(&(i, j)).copied()).unwrap()
}

/// Random matrix rearranged so that `a_ij > 1` and `a_ik >= a_jk` for every
/// other `k`. Returns the matrix and the pair.
pub fn random_dominance_instance(n: usize, rng: &mut ChaCha8Rng) -> (CompleteMatrix, usize, usize) {
    let base = random_complete_continuous(n, rng);
    let i = rng.random_range(0..n);
    let mut j = rng.random_range(0..n - 1);
    if j >= i {
        j += 1;
    }
    let mut rows = base.to_rows();
    let aij = if rng.random::<bool>() {
        rng.random_range(1.01..9.0)
    } else {
        rng.random_range(2..=9) as f64
    };
    rows[i][j] = aij;
    rows[j][i] = 1.0 / aij;
    for k in (0..n).filter(|&k| k != i && k != j) {
        if rows[i][k] < rows[j][k] {
            let (hi, lo) = (rows[j][k], rows[i][k]);
            rows[i][k] = hi;
            rows[k][i] = 1.0 / hi;
            rows[j][k] = lo;
            rows[k][j] = 1.0 / lo;
        }
    }
    (CompleteMatrix::from_rows(&rows).unwrap(), i, j)
}

/// Every triad's inconsistency, sorted non-increasingly.
pub fn oracle_theta(n: usize, a: impl Fn(usize, usize) -> f64) -> Vec<f64> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let x = a(i, k) / (a(i, j) * a(j, k));
                out.push(x.max(1.0 / x));
            }
        }
    }
    out.sort_by(|x, y| y.total_cmp(x));
    out
}

pub fn theta_of(m: &CompleteMatrix) -> Vec<f64> {
    oracle_theta(m.n(), |i, j| m.get(i, j))
}

/// `a <= b` lexicographically, treating components within `tol` as equal.
pub fn lex_le(a: &[f64], b: &[f64], tol: f64) -> bool {
    for (x, y) in a.iter().zip(b) {
        if *x < *y - tol {
            return true;
        }
        if *x > *y + tol {
            return false;
        }
    }
    true
}

/// Strict lexicographic comparison used to pick the best grid point.
fn lex_lt(a: &[f64], b: &[f64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if x < y {
            return true;
        }
        if x > y {
            return false;
        }
    }
    false
}

/// Entry accessor for `a` with missing pair `p` (i < j) set to `exp(u[p])`.
fn filled(a: &IncompleteMatrix, missing: &[(usize, usize)], u: &[f64], i: usize, j: usize) -> f64 {
    if let Some(v) = a.get(i, j) {
        return v;
    }
    let (p, q, sign) = if i < j { (i, j, 1.0) } else { (j, i, -1.0) };
    let idx = missing.iter().position(|&m| m == (p, q)).expect("missing pair");
    (sign * u[idx]).exp()
}

/// Grid points of a box of half-width `radius` around `center` with `steps`
/// points per side (1-D or 2-D).
fn box_points(center: &[f64], radius: f64, steps: usize) -> Vec<Vec<f64>> {
    let axis: Vec<f64> = (0..=steps)
        .map(|s| -radius + 2.0 * radius * s as f64 / steps as f64)
        .collect();
    match center.len() {
        1 => axis.iter().map(|d| vec![center[0] + d]).collect(),
        2 => axis
            .iter()
            .flat_map(|d0| axis.iter().map(move |d1| vec![center[0] + d0, center[1] + d1]))
            .collect(),
        k => panic!("grid oracle supports 1 or 2 missing pairs, got {k}"),
    }
}

fn argmin_by<F, K>(points: Vec<Vec<f64>>, key: F, better: fn(&K, &K) -> bool) -> (Vec<f64>, K)
where
    F: Fn(&[f64]) -> K + Sync,
    K: Send,
{
    points
        .into_par_iter()
        .map(|p| {
            let k = key(&p);
            (p, k)
        })
        .reduce_with(|a, b| if better(&b.1, &a.1) { b } else { a })
        .expect("non-empty grid")
}

/// Best sorted TI vector over a log-space grid of the missing entries
/// (step 0.02 on [-8, 8], then repeated local refinement).
pub fn lex_grid_oracle(a: &IncompleteMatrix) -> Vec<f64> {
    let missing = a.missing_pairs();
    let n = a.n();
    let theta = |u: &[f64]| oracle_theta(n, |i, j| filled(a, &missing, u, i, j));
    let better = |x: &Vec<f64>, y: &Vec<f64>| lex_lt(x, y);
    let center = vec![0.0; missing.len()];
    let (mut best, mut best_theta) = argmin_by(box_points(&center, 8.0, 800), theta, better);
    let mut radius = 0.04;
    while radius > 1e-9 {
        let (p, t) = argmin_by(box_points(&best, radius, 40), theta, better);
        if lex_lt(&t, &best_theta) {
            best = p;
            best_theta = t;
        }
        radius /= 10.0;
    }
    best_theta
}

/// Perron root by plain power iteration on a dense row-major matrix,
/// continuing from (and updating) the unit-sum vector `x`.
pub fn power_lambda(n: usize, m: &[f64], x: &mut [f64], tol: f64) -> f64 {
    let mut y = [0.0f64; 16];
    assert!(n <= y.len());
    let mut lambda = 0.0;
    for _ in 0..100_000 {
        let mut s = 0.0;
        for i in 0..n {
            let row = &m[i * n..(i + 1) * n];
            y[i] = row.iter().zip(x.iter()).map(|(a, b)| a * b).sum();
            s += y[i];
        }
        let mut change: f64 = 0.0;
        for i in 0..n {
            let v = y[i] / s;
            change = change.max((v - x[i]).abs());
            x[i] = v;
        }
        lambda = s;
        if change < tol {
            break;
        }
    }
    lambda
}

/// Dense matrix of `a` with slots for the missing pairs, rewritten in place.
struct Filler {
    n: usize,
    m: Vec<f64>,
    /// `(upper index, lower index)` per missing pair.
    slots: Vec<(usize, usize)>,
}

impl Filler {
    fn new(a: &IncompleteMatrix) -> Self {
        let n = a.n();
        let m = (0..n * n)
            .map(|k| a.get(k / n, k % n).unwrap_or(1.0))
            .collect();
        let slots = a
            .missing_pairs()
            .iter()
            .map(|&(i, j)| (i * n + j, j * n + i))
            .collect();
        Self { n, m, slots }
    }

    fn set(&mut self, u: &[f64]) {
        for (&(up, lo), &v) in self.slots.iter().zip(u) {
            self.m[up] = v.exp();
            self.m[lo] = (-v).exp();
        }
    }

    fn lambda(&mut self, u: &[f64], x: &mut [f64], tol: f64) -> f64 {
        self.set(u);
        power_lambda(self.n, &self.m, x, tol)
    }

    /// λ_max at `u` to relative width `tol`, or `None` as soon as the
    /// Collatz-Wielandt lower bound `min_i (Ax)_i / x_i` reaches `cutoff`.
    fn lambda_below(&mut self, u: &[f64], x: &mut [f64], cutoff: f64, tol: f64) -> Option<f64> {
        self.set(u);
        let n = self.n;
        let mut y = [0.0f64; 16];
        loop {
            let (mut lo, mut hi, mut s) = (f64::INFINITY, 0.0f64, 0.0);
            for i in 0..n {
                let row = &self.m[i * n..(i + 1) * n];
                y[i] = row.iter().zip(x.iter()).map(|(a, b)| a * b).sum();
                let r = y[i] / x[i];
                lo = lo.min(r);
                hi = hi.max(r);
                s += y[i];
            }
            for i in 0..n {
                x[i] = y[i] / s;
            }
            if lo >= cutoff {
                return None;
            }
            if hi - lo <= tol * lo {
                return Some(0.5 * (lo + hi));
            }
        }
    }
}

/// Smallest λ_max over a log-space grid of the missing entries
/// (step 0.01 on [-8, 8], then repeated local refinement).
pub fn cr_grid_oracle(a: &IncompleteMatrix) -> f64 {
    let k = a.missing_pairs().len();
    assert!(k == 1 || k == 2, "grid oracle supports 1 or 2 missing pairs");
    let n = a.n();
    let uniform = vec![1.0 / n as f64; n];
    // Coarse pass: walk the grid row by row, warm-starting each power
    // iteration from the neighbouring point's vector.
    let axis: Vec<f64> = (0..=1600).map(|s| -8.0 + 0.01 * s as f64).collect();
    let rows: Vec<Option<f64>> = if k == 1 { vec![None] } else { axis.iter().map(|&v| Some(v)).collect() };
    let mut filler = Filler::new(a);
    let mut x = uniform.clone();
    let mut best = vec![0.0; k];
    let mut coarse = f64::INFINITY;
    let mut u = vec![0.0; k];
    for row in &rows {
        for &v in &axis {
            match row {
                Some(r) => {
                    u[0] = *r;
                    u[1] = v;
                }
                None => u[0] = v,
            }
            if let Some(l) = filler.lambda_below(&u, &mut x, coarse, 1e-9) {
                if l < coarse {
                    coarse = l;
                    best.copy_from_slice(&u);
                }
            }
        }
    }
    let exact = |u: &[f64]| {
        let mut f = Filler::new(a);
        f.lambda(u, &mut uniform.clone(), 1e-15)
    };
    let better = |x: &f64, y: &f64| x < y;
    let mut best_lambda = exact(&best);
    let mut radius = 0.02;
    while radius > 1e-9 {
        let (p, l) = argmin_by(box_points(&best, radius, 40), exact, better);
        if l < best_lambda {
            best = p;
            best_lambda = l;
        }
        radius /= 10.0;
    }
    best_lambda
}

/// Perron root and unit-sum Perron vector from a general eigensolver.
pub fn eigen_oracle(m: &CompleteMatrix) -> (f64, Vec<f64>) {
    let n = m.n();
    let a = DMatrix::from_row_slice(n, n, m.as_slice());
    let lambda = a
        .clone()
        .complex_eigenvalues()
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max);
    let shifted = a - DMatrix::identity(n, n) * lambda;
    let svd = shifted.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors");
    let (k, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|x, y| x.1.total_cmp(y.1))
        .unwrap();
    let v: Vec<f64> = v_t.row(k).iter().copied().collect();
    let s: f64 = v.iter().sum();
    (lambda, v.iter().map(|x| x / s).collect())
}

/// Row geometric means, normalized.
pub fn geometric_mean_oracle(m: &CompleteMatrix) -> Vec<f64> {
    let n = m.n();
    let g: Vec<f64> = (0..n)
        .map(|i| (0..n).map(|j| m.get(i, j)).product::<f64>().powf(1.0 / n as f64))
        .collect();
    let s: f64 = g.iter().sum();
    g.iter().map(|x| x / s).collect()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
