//! Triad inconsistency, the Koczkodaj index and the Perron root.

use std::collections::BTreeMap;

use crate::error::{PcmError, Result};
use crate::matrix::{CompleteMatrix, TriadIndex};
use crate::weighting::{self, EigenOptions};

/// True iff `|a_ik - a_ij a_jk| <= tol * a_ik` for every triple.
pub fn is_consistent(m: &CompleteMatrix, tol: f64) -> bool {
    let n = m.n();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let aik = m.get(i, k);
                if (aik - m.get(i, j) * m.get(j, k)).abs() > tol * aik {
                    return false;
                }
            }
        }
    }
    true
}

/// `max{ a_ik / (a_ij a_jk), a_ij a_jk / a_ik }`; always `>= 1`.
///
/// Any ordering of three distinct items gives the same value.
pub fn triad_ti(m: &CompleteMatrix, i: usize, j: usize, k: usize) -> f64 {
    let r = m.get(i, k) / (m.get(i, j) * m.get(j, k));
    r.max(1.0 / r)
}

/// Per-triad inconsistencies sorted non-increasingly.
#[derive(Debug, Clone, PartialEq)]
pub struct InconsistencyProfile {
    theta: Vec<f64>,
    triad_map: BTreeMap<TriadIndex, f64>,
}

impl InconsistencyProfile {
    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn triad_map(&self) -> &BTreeMap<TriadIndex, f64> {
        &self.triad_map
    }

    pub fn max(&self) -> f64 {
        self.theta[0]
    }
}

pub fn inconsistency_profile(m: &CompleteMatrix) -> Result<InconsistencyProfile> {
    require_triads(m)?;
    let triad_map: BTreeMap<TriadIndex, f64> = TriadIndex::all(m.n())
        .map(|t| (t, triad_ti(m, t.i, t.j, t.k)))
        .collect();
    let mut theta: Vec<f64> = triad_map.values().copied().collect();
    theta.sort_by(|a, b| b.total_cmp(a));
    Ok(InconsistencyProfile { theta, triad_map })
}

/// Largest triad inconsistency; 1 for matrices without triads.
pub fn max_ti(m: &CompleteMatrix) -> f64 {
    TriadIndex::all(m.n())
        .map(|t| triad_ti(m, t.i, t.j, t.k))
        .fold(1.0, f64::max)
}

/// Koczkodaj index `1 - 1 / max TI`, in `[0, 1)`.
pub fn koczkodaj_ki(m: &CompleteMatrix) -> Result<f64> {
    require_triads(m)?;
    Ok(1.0 - 1.0 / max_ti(m))
}

/// Dominant eigenvalue by power iteration with the default options.
pub fn saaty_lambda_max(m: &CompleteMatrix) -> Result<f64> {
    Ok(weighting::eigenvector_weights(m, EigenOptions::default())?.lambda_max)
}

fn require_triads(m: &CompleteMatrix) -> Result<()> {
    if m.n() < 3 {
        Err(PcmError::MatrixTooSmall { n: m.n(), min: 3 })
    } else {
        Ok(())
    }
}
