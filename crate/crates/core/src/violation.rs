//! Ordinal-violation audit of a weight vector against the stated preferences.

use crate::error::{PcmError, Result};
use crate::matrix::{IncompleteMatrix, WeightVector};

/// Known entries within this distance of 1 count as stated indifference.
pub const INDIFFERENCE_TOL: f64 = 1e-9;

/// Default relative tolerance for comparing weights of indifferent items.
pub const DEFAULT_EQ_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// `a_ij > 1` but `w_i <= w_j`.
    Reversed,
    /// `a_ij = 1` but the weights differ.
    Unequal,
}

/// One contradicted comparison; `i` is the preferred item for [`ViolationKind::Reversed`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub i: usize,
    pub j: usize,
    pub a_ij: f64,
    pub w_i: f64,
    pub w_j: f64,
    pub kind: ViolationKind,
}

/// Every known comparison contradicted by `w`. Each unordered pair appears
/// at most once; an empty list means no ordinal violation.
pub fn check_ordinal_violation(
    a: &IncompleteMatrix,
    w: &WeightVector,
    eq_tol: f64,
) -> Result<Vec<Violation>> {
    let n = a.n();
    if w.len() != n {
        return Err(PcmError::DimensionMismatch {
            expected: n,
            got: w.len(),
        });
    }
    let mut out = Vec::new();
    for (p, q) in a.known_pairs() {
        let apq = a.get(p, q).expect("known pair");
        if (apq - 1.0).abs() <= INDIFFERENCE_TOL {
            let (wp, wq) = (w[p], w[q]);
            if (wp - wq).abs() > eq_tol * wp.max(wq) {
                out.push(Violation {
                    i: p,
                    j: q,
                    a_ij: apq,
                    w_i: wp,
                    w_j: wq,
                    kind: ViolationKind::Unequal,
                });
            }
            continue;
        }
        let (i, j) = if apq > 1.0 { (p, q) } else { (q, p) };
        if w[i] <= w[j] {
            out.push(Violation {
                i,
                j,
                a_ij: a.get(i, j).expect("known pair"),
                w_i: w[i],
                w_j: w[j],
                kind: ViolationKind::Reversed,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::CompleteMatrix;
    use crate::weighting::{eigenvector_weights, llsm_weights, EigenOptions};

    fn pair(a12: f64) -> IncompleteMatrix {
        IncompleteMatrix::from_upper(2, |_, _| Some(a12)).unwrap()
    }

    #[test]
    fn agreeing_weights() {
        let w = WeightVector::new(vec![0.6, 0.4]).unwrap();
        assert!(check_ordinal_violation(&pair(2.0), &w, DEFAULT_EQ_TOL).unwrap().is_empty());
    }

    #[test]
    fn reversed_weights() {
        let w = WeightVector::new(vec![0.4, 0.6]).unwrap();
        let v = check_ordinal_violation(&pair(2.0), &w, DEFAULT_EQ_TOL).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!((v[0].i, v[0].j, v[0].kind), (0, 1, ViolationKind::Reversed));
        // stated from the other side
        let v = check_ordinal_violation(&pair(0.5), &WeightVector::new(vec![0.6, 0.4]).unwrap(), 1e-9)
            .unwrap();
        assert_eq!((v[0].i, v[0].j), (1, 0));
    }

    #[test]
    fn tie_counts_as_violation_of_strict_preference() {
        let w = WeightVector::new(vec![0.5, 0.5]).unwrap();
        assert_eq!(check_ordinal_violation(&pair(2.0), &w, 1e-9).unwrap().len(), 1);
    }

    #[test]
    fn indifference_branch() {
        let w = WeightVector::new(vec![0.5, 0.5]).unwrap();
        assert!(check_ordinal_violation(&pair(1.0), &w, 1e-9).unwrap().is_empty());
        let w = WeightVector::new(vec![0.51, 0.49]).unwrap();
        let v = check_ordinal_violation(&pair(1.0), &w, 1e-9).unwrap();
        assert_eq!(v[0].kind, ViolationKind::Unequal);
        assert!(check_ordinal_violation(&pair(1.0), &w, 0.1).unwrap().is_empty());
    }

    #[test]
    fn dimension_mismatch() {
        let w = WeightVector::new(vec![0.2, 0.3, 0.5]).unwrap();
        assert!(matches!(
            check_ordinal_violation(&pair(2.0), &w, 1e-9),
            Err(PcmError::DimensionMismatch { expected: 2, got: 3 })
        ));
    }

    #[test]
    fn consistent_matrix_has_no_violation() {
        let m = CompleteMatrix::from_weights(&[5.0, 1.0, 3.0, 3.0, 0.5]).unwrap();
        let a = m.to_incomplete();
        let em = eigenvector_weights(&m, EigenOptions::default()).unwrap().weights;
        assert!(check_ordinal_violation(&a, &em, 1e-9).unwrap().is_empty());
        assert!(check_ordinal_violation(&a, &llsm_weights(&m), 1e-9).unwrap().is_empty());
    }
}
