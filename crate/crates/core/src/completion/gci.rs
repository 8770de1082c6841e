//! GCI-optimal completion: missing entries become weight ratios of the
//! incomplete logarithmic least squares solution.

use crate::error::Result;
use crate::matrix::{CompleteMatrix, IncompleteMatrix};
use crate::weighting::incomplete_llsm_weights;

pub fn gci_optimal_completion(a: &IncompleteMatrix) -> Result<CompleteMatrix> {
    let w = incomplete_llsm_weights(a)?;
    a.fill(|i, j| w[i] / w[j])
}
