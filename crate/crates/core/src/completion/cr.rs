//! CR-optimal completion: missing entries chosen to minimize the Perron root.
//!
//! `lambda_max` is minimized over the log-space unknowns by cyclic
//! coordinate descent, each coordinate handled by a bracketed
//! golden-section search.

use crate::error::{PcmError, Result};
use crate::matrix::{CompleteMatrix, IncompleteMatrix};
use crate::weighting::{eigenvector_weights, power_iteration, EigenOptions};

use super::gci::gci_optimal_completion;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrOptions {
    /// Stop once a full sweep lowers `lambda_max` by at most this.
    pub sweep_tol: f64,
    pub max_sweeps: usize,
    /// Width at which a golden-section search stops (log units).
    pub line_tol: f64,
    pub eigen: EigenOptions,
}

impl Default for CrOptions {
    fn default() -> Self {
        Self {
            sweep_tol: 1e-10,
            max_sweeps: 500,
            line_tol: 1e-8,
            eigen: EigenOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrCompletion {
    pub matrix: CompleteMatrix,
    pub lambda_max: f64,
    pub sweeps: usize,
}

/// CR-optimal completion warm-started from the GCI-optimal one.
pub fn cr_optimal_completion(a: &IncompleteMatrix) -> Result<CrCompletion> {
    cr_optimal_completion_with(a, None, CrOptions::default())
}

/// As [`cr_optimal_completion`], optionally from explicit initial log
/// values (one per missing pair `i < j`, row-major).
pub fn cr_optimal_completion_with(
    a: &IncompleteMatrix,
    initial_logs: Option<&[f64]>,
    opts: CrOptions,
) -> Result<CrCompletion> {
    a.require_connected()?;
    let missing = a.missing_pairs();
    if missing.is_empty() {
        let matrix = a.clone().into_complete()?;
        let lambda_max = eigenvector_weights(&matrix, opts.eigen)?.lambda_max;
        return Ok(CrCompletion {
            matrix,
            lambda_max,
            sweeps: 0,
        });
    }
    let mut logs: Vec<f64> = match initial_logs {
        Some(init) => {
            if init.len() != missing.len() {
                return Err(PcmError::DimensionMismatch {
                    expected: missing.len(),
                    got: init.len(),
                });
            }
            init.to_vec()
        }
        None => {
            let gci = gci_optimal_completion(a)?;
            missing.iter().map(|&(i, j)| gci.get(i, j).ln()).collect()
        }
    };
    let mut objective = LambdaObjective::new(a, &missing, opts.eigen);
    let mut current = objective.eval(&logs)?;
    // lambda_max >= n always, so reaching n certifies the global minimum.
    let floor = a.n() as f64 * (1.0 + CONSISTENT_REL_TOL);
    for sweep in 1..=opts.max_sweeps {
        let before = current;
        if current > floor {
            for coord in 0..logs.len() {
                current = minimize_coordinate(&mut objective, &mut logs, coord, current, opts.line_tol)?;
            }
        }
        if before - current <= opts.sweep_tol {
            let matrix = objective.matrix(&logs)?;
            let lambda_max = eigenvector_weights(&matrix, opts.eigen)?.lambda_max;
            return Ok(CrCompletion {
                matrix,
                lambda_max,
                sweeps: sweep,
            });
        }
    }
    Err(PcmError::ConvergenceFailure {
        what: "CR-optimal coordinate descent",
        iterations: opts.max_sweeps,
    })
}

/// `lambda_max` as a function of the missing log values, warm-starting
/// each power iteration from the previous eigenvector.
struct LambdaObjective<'a> {
    a: &'a IncompleteMatrix,
    slot: Vec<usize>,
    eigen: EigenOptions,
    last_vector: Vec<f64>,
}

impl<'a> LambdaObjective<'a> {
    fn new(a: &'a IncompleteMatrix, missing: &[(usize, usize)], eigen: EigenOptions) -> Self {
        let n = a.n();
        let mut slot = vec![usize::MAX; n * n];
        for (v, &(i, j)) in missing.iter().enumerate() {
            slot[i * n + j] = v;
        }
        Self {
            a,
            slot,
            eigen,
            last_vector: vec![1.0 / n as f64; n],
        }
    }

    fn matrix(&self, logs: &[f64]) -> Result<CompleteMatrix> {
        let n = self.a.n();
        self.a.fill(|i, j| logs[self.slot[i * n + j]].exp())
    }

    fn eval(&mut self, logs: &[f64]) -> Result<f64> {
        let m = self.matrix(logs)?;
        let r = power_iteration(&m, self.last_vector.clone(), self.eigen)?;
        self.last_vector = r.weights.into_vec();
        Ok(r.lambda_max)
    }
}

/// Relative gap to `n` below which `lambda_max` counts as attained.
const CONSISTENT_REL_TOL: f64 = 1e-13;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Moves `logs[coord]` to the minimizer along that axis; returns the new value.
fn minimize_coordinate(
    f: &mut LambdaObjective<'_>,
    logs: &mut [f64],
    coord: usize,
    f0: f64,
    tol: f64,
) -> Result<f64> {
    let t0 = logs[coord];
    let mut at = |t: f64, logs: &mut [f64]| -> Result<f64> {
        logs[coord] = t;
        f.eval(logs)
    };
    let h = 0.5;
    let fl = at(t0 - h, logs)?;
    let fr = at(t0 + h, logs)?;
    let (lo, hi) = if fl >= f0 && fr >= f0 {
        (t0 - h, t0 + h)
    } else {
        // walk downhill with doubling steps until the value rises
        let dir = if fr < fl { 1.0 } else { -1.0 };
        let mut prev = t0;
        let mut cur = t0 + dir * h;
        let mut fcur = fl.min(fr);
        let mut step = h;
        loop {
            step *= 2.0;
            let next = cur + dir * step;
            let fnext = at(next, logs)?;
            if fnext >= fcur {
                break if dir > 0.0 { (prev, next) } else { (next, prev) };
            }
            if step > 1e6 {
                return Err(PcmError::ConvergenceFailure {
                    what: "CR-optimal line search bracketing",
                    iterations: 0,
                });
            }
            prev = cur;
            cur = next;
            fcur = fnext;
        }
    };
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = at(c, logs)?;
    let mut fd = at(d, logs)?;
    while b - a > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = at(c, logs)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = at(d, logs)?;
        }
    }
    let (t_best, f_best) = if fc < fd { (c, fc) } else { (d, fd) };
    if f_best < f0 {
        logs[coord] = t_best;
        Ok(f_best)
    } else {
        logs[coord] = t0;
        Ok(f0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inconsistency::is_consistent;

    #[test]
    fn tree_gives_consistent_completion() {
        let a = IncompleteMatrix::from_upper(4, |i, j| match (i, j) {
            (0, 1) => Some(2.0),
            (1, 2) => Some(3.0),
            (1, 3) => Some(0.25),
            _ => None,
        })
        .unwrap();
        let cr = cr_optimal_completion(&a).unwrap();
        assert!(is_consistent(&cr.matrix, 1e-9));
        assert!((cr.lambda_max - 4.0).abs() < 1e-8);
    }

    #[test]
    fn independent_of_initial_point() {
        let a = IncompleteMatrix::from_upper(4, |i, j| match (i, j) {
            (0, 1) => Some(2.0),
            (1, 2) | (2, 3) => Some(1.0),
            (1, 3) => Some(8.0),
            _ => None,
        })
        .unwrap();
        let warm = cr_optimal_completion(&a).unwrap();
        let cold = cr_optimal_completion_with(&a, Some(&[3.0, -2.0]), CrOptions::default()).unwrap();
        assert!((warm.lambda_max - cold.lambda_max).abs() < 1e-9);
        for (i, j) in [(0, 2), (0, 3)] {
            assert!((warm.matrix.get(i, j).ln() - cold.matrix.get(i, j).ln()).abs() < 1e-3);
        }
    }

    #[test]
    fn complete_input_is_identity() {
        let m = CompleteMatrix::from_upper(3, |i, j| (i + j + 1) as f64).unwrap();
        let cr = cr_optimal_completion(&m.to_incomplete()).unwrap();
        assert_eq!(cr.matrix, m);
        assert_eq!(cr.sweeps, 0);
    }

    #[test]
    fn wrong_initial_length() {
        let a = IncompleteMatrix::from_upper(3, |i, j| (j == i + 1).then_some(2.0)).unwrap();
        assert!(matches!(
            cr_optimal_completion_with(&a, Some(&[0.0, 0.0]), CrOptions::default()),
            Err(PcmError::DimensionMismatch { .. })
        ));
    }
}
