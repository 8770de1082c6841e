//! Priority derivation: eigenvector method, row geometric mean, and the
//! incomplete logarithmic least squares method.

use std::fmt;
use std::str::FromStr;

use crate::error::{PcmError, Result};
use crate::linalg::solve_dense;
use crate::matrix::{CompleteMatrix, IncompleteMatrix, WeightVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeightingMethod {
    /// Eigenvector method.
    Em,
    /// Logarithmic least squares (row geometric mean).
    Llsm,
}

impl WeightingMethod {
    pub const ALL: [WeightingMethod; 2] = [Self::Em, Self::Llsm];

    pub fn name(self) -> &'static str {
        match self {
            Self::Em => "em",
            Self::Llsm => "llsm",
        }
    }

    /// Weights of a complete matrix.
    pub fn weights(self, m: &CompleteMatrix) -> Result<WeightVector> {
        match self {
            Self::Em => Ok(eigenvector_weights(m, EigenOptions::default())?.weights),
            Self::Llsm => Ok(llsm_weights(m)),
        }
    }
}

impl fmt::Display for WeightingMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WeightingMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "em" => Ok(Self::Em),
            "llsm" => Ok(Self::Llsm),
            other => Err(format!("unknown weighting method '{other}' (expected em or llsm)")),
        }
    }
}

/// Power-iteration controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenOptions {
    /// Stop once successive normalized iterates differ by at most this in the max norm.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 10_000,
        }
    }
}

/// Perron eigenpair of a positive matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenResult {
    pub weights: WeightVector,
    pub lambda_max: f64,
    pub iterations: usize,
    /// `||A w - lambda w||_inf / lambda`.
    pub residual: f64,
}

/// Eigenvector method, starting from the uniform vector.
pub fn eigenvector_weights(m: &CompleteMatrix, opts: EigenOptions) -> Result<EigenResult> {
    let n = m.n();
    power_iteration(m, vec![1.0 / n as f64; n], opts)
}

/// Power iteration from a caller-supplied positive start vector (normalized
/// internally). Used for warm starts inside the CR-optimal search.
pub(crate) fn power_iteration(
    m: &CompleteMatrix,
    start: Vec<f64>,
    opts: EigenOptions,
) -> Result<EigenResult> {
    let s: f64 = start.iter().sum();
    let mut x: Vec<f64> = start.into_iter().map(|v| v / s).collect();
    for iter in 1..=opts.max_iter {
        let y = m.mul_vec(&x);
        let sum: f64 = y.iter().sum();
        let next: Vec<f64> = y.iter().map(|v| v / sum).collect();
        let delta = next
            .iter()
            .zip(&x)
            .fold(0.0_f64, |d, (a, b)| d.max((a - b).abs()));
        x = next;
        if delta <= opts.tol {
            let ax = m.mul_vec(&x);
            // x sums to one, so the Rayleigh-type estimate is the sum of A x.
            let lambda: f64 = ax.iter().sum();
            let residual = ax
                .iter()
                .zip(&x)
                .fold(0.0_f64, |r, (a, b)| r.max((a - lambda * b).abs()))
                / lambda;
            return Ok(EigenResult {
                weights: WeightVector::new(x)?,
                lambda_max: lambda,
                iterations: iter,
                residual,
            });
        }
    }
    Err(PcmError::ConvergenceFailure {
        what: "power iteration",
        iterations: opts.max_iter,
    })
}

/// Row geometric means, computed in log space.
pub fn llsm_weights(m: &CompleteMatrix) -> WeightVector {
    let n = m.n() as f64;
    let logs: Vec<f64> = (0..m.n())
        .map(|i| m.row(i).iter().map(|a| a.ln()).sum::<f64>() / n)
        .collect();
    WeightVector::from_log(&logs).expect("row geometric means are positive")
}

/// Incomplete LLSM: minimizes the squared log residuals over the known
/// pairs by solving the comparison-graph Laplacian system with the first
/// log-weight pinned to zero.
pub fn incomplete_llsm_weights(a: &IncompleteMatrix) -> Result<WeightVector> {
    a.require_connected()?;
    let n = a.n();
    let mut laplacian = vec![0.0; n * n];
    let mut rhs = vec![0.0; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            if let Some(v) = a.get(i, j) {
                laplacian[i * n + i] += 1.0;
                laplacian[i * n + j] -= 1.0;
                rhs[i] += v.ln();
            }
        }
    }
    // Drop row and column 0 (gauge y_0 = 0).
    let m = n - 1;
    let mut reduced = vec![0.0; m * m];
    for r in 0..m {
        for c in 0..m {
            reduced[r * m + c] = laplacian[(r + 1) * n + (c + 1)];
        }
    }
    let y = solve_dense(reduced, rhs[1..].to_vec())?;
    let mut logs = Vec::with_capacity(n);
    logs.push(0.0);
    logs.extend(y);
    WeightVector::from_log(&logs)
}

/// Hypothesis under which both weighting methods must rank `i` above `j`:
/// `a_ij > 1 > a_ji` and `a_ik >= a_jk` for every other `k`.
pub fn lemma3_check(m: &CompleteMatrix, i: usize, j: usize) -> bool {
    if i == j || m.get(i, j) <= 1.0 || m.get(j, i) >= 1.0 {
        return false;
    }
    (0..m.n())
        .filter(|&k| k != i && k != j)
        .all(|k| m.get(i, k) >= m.get(j, k))
}
