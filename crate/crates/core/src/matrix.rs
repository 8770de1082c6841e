//! Pairwise comparison matrices, complete and incomplete, plus the weight
//! vector and triad index types shared by the rest of the crate.
//!
//! Matrices are stored row-major. Every constructor makes each pair exactly
//! reciprocal up to a single floating-point division: `from_upper` keeps the
//! upper entry, while raw input keeps whichever entry of the pair is at
//! least 1.

use std::fmt;

use crate::error::{PcmError, Result};

/// Relative tolerance used when validating reciprocity of raw input.
pub const RECIPROCITY_TOL: f64 = 1e-9;

/// A fully specified positive reciprocal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CompleteMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl CompleteMatrix {
    /// Builds a matrix from its strict upper triangle, `upper(i, j)` being
    /// called once for every `i < j`.
    pub fn from_upper<F>(n: usize, mut upper: F) -> Result<Self>
    where
        F: FnMut(usize, usize) -> f64,
    {
        if n < 2 {
            return Err(PcmError::MatrixTooSmall { n, min: 2 });
        }
        let mut entries = vec![1.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = upper(i, j);
                check_positive(i, j, v)?;
                entries[i * n + j] = v;
                entries[j * n + i] = 1.0 / v;
            }
        }
        Ok(Self { n, entries })
    }

    /// The ratio matrix `v_i / v_j`, which is always consistent.
    pub fn from_weights(v: &[f64]) -> Result<Self> {
        for (index, &value) in v.iter().enumerate() {
            if !(value.is_finite() && value > 0.0) {
                return Err(PcmError::InvalidWeights { index, value });
            }
        }
        Self::from_upper(v.len(), |i, j| v[i] / v[j])
    }

    /// Validates a dense row-major array. Reciprocity is checked to
    /// [`RECIPROCITY_TOL`] and then made exact.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let raw: Vec<Vec<Option<f64>>> = rows
            .iter()
            .map(|r| r.iter().copied().map(Some).collect())
            .collect();
        IncompleteMatrix::from_raw(&raw)?.into_complete()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.entries
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Views the matrix as an incomplete one with nothing missing.
    pub fn to_incomplete(&self) -> IncompleteMatrix {
        IncompleteMatrix {
            n: self.n,
            entries: self.entries.iter().copied().map(Some).collect(),
        }
    }
}

/// A reciprocal matrix whose off-diagonal entries may be missing.
///
/// Missing entries come in symmetric pairs. The known off-diagonal pairs
/// are the edges of the comparison graph.
#[derive(Debug, Clone, PartialEq)]
pub struct IncompleteMatrix {
    n: usize,
    entries: Vec<Option<f64>>,
}

impl IncompleteMatrix {
    /// Validates a raw array where `None` marks a missing entry.
    ///
    /// Known/missing symmetry and positivity are enforced; reciprocity is
    /// checked to [`RECIPROCITY_TOL`] (relative) and the worst offending
    /// pair is reported. Each pair is then made exactly reciprocal by
    /// keeping the entry that is at least 1 and inverting it.
    pub fn from_raw(raw: &[Vec<Option<f64>>]) -> Result<Self> {
        let n = raw.len();
        for (row, r) in raw.iter().enumerate() {
            if r.len() != n {
                return Err(PcmError::NonSquare {
                    row,
                    len: r.len(),
                    expected: n,
                });
            }
        }
        if n < 2 {
            return Err(PcmError::MatrixTooSmall { n, min: 2 });
        }
        for i in 0..n {
            for j in 0..n {
                if let Some(v) = raw[i][j] {
                    check_positive(i, j, v)?;
                }
            }
        }
        for i in 0..n {
            match raw[i][i] {
                Some(v) if (v - 1.0).abs() <= RECIPROCITY_TOL => {}
                _ => return Err(PcmError::InvalidDiagonal { i }),
            }
        }
        let mut worst: Option<(usize, usize, f64, f64)> = None;
        for i in 0..n {
            for j in (i + 1)..n {
                match (raw[i][j], raw[j][i]) {
                    (Some(a), Some(b)) => {
                        let product = a * b;
                        let err = (product - 1.0).abs();
                        if err > RECIPROCITY_TOL && worst.is_none_or(|w| err > w.3) {
                            worst = Some((i, j, product, err));
                        }
                    }
                    (None, None) => {}
                    (Some(_), None) => return Err(PcmError::AsymmetricMissingness { i: j, j: i }),
                    (None, Some(_)) => return Err(PcmError::AsymmetricMissingness { i, j }),
                }
            }
        }
        if let Some((i, j, product, _)) = worst {
            return Err(PcmError::ReciprocityViolation { i, j, product });
        }
        let mut entries = vec![Some(1.0); n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                if let (Some(up), Some(low)) = (raw[i][j], raw[j][i]) {
                    let (up, low) = canonical_pair(up, low);
                    entries[i * n + j] = Some(up);
                    entries[j * n + i] = Some(low);
                } else {
                    entries[i * n + j] = None;
                    entries[j * n + i] = None;
                }
            }
        }
        Ok(Self { n, entries })
    }

    /// Builds a matrix from its strict upper triangle.
    pub fn from_upper<F>(n: usize, mut upper: F) -> Result<Self>
    where
        F: FnMut(usize, usize) -> Option<f64>,
    {
        if n < 2 {
            return Err(PcmError::MatrixTooSmall { n, min: 2 });
        }
        let mut entries = vec![Some(1.0); n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = upper(i, j);
                if let Some(x) = v {
                    check_positive(i, j, x)?;
                }
                entries[i * n + j] = v;
                entries[j * n + i] = v.map(|x| 1.0 / x);
            }
        }
        Ok(Self { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.entries[i * self.n + j]
    }

    pub fn is_known(&self, i: usize, j: usize) -> bool {
        self.get(i, j).is_some()
    }

    /// Missing pairs `(i, j)` with `i < j`, in row-major order.
    pub fn missing_pairs(&self) -> Vec<(usize, usize)> {
        self.upper_pairs().filter(|&(i, j)| !self.is_known(i, j)).collect()
    }

    /// Known off-diagonal pairs `(i, j)` with `i < j`: the comparison graph edges.
    pub fn known_pairs(&self) -> Vec<(usize, usize)> {
        self.upper_pairs().filter(|&(i, j)| self.is_known(i, j)).collect()
    }

    fn upper_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| ((i + 1)..self.n).map(move |j| (i, j)))
    }

    pub fn is_complete(&self) -> bool {
        self.entries.iter().all(Option::is_some)
    }

    /// Connected components of the comparison graph, each sorted, ordered
    /// by smallest member.
    pub fn comparison_components(&self) -> Vec<Vec<usize>> {
        let mut label = vec![usize::MAX; self.n];
        let mut components = Vec::new();
        for start in 0..self.n {
            if label[start] != usize::MAX {
                continue;
            }
            let id = components.len();
            let mut members = vec![start];
            label[start] = id;
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for u in 0..self.n {
                    if u != v && label[u] == usize::MAX && self.is_known(v, u) {
                        label[u] = id;
                        members.push(u);
                        stack.push(u);
                    }
                }
            }
            members.sort_unstable();
            components.push(members);
        }
        components
    }

    pub fn is_connected(&self) -> bool {
        self.comparison_components().len() == 1
    }

    /// Fails with [`PcmError::DisconnectedComparisonGraph`] unless connected.
    pub fn require_connected(&self) -> Result<()> {
        let components = self.comparison_components();
        if components.len() == 1 {
            Ok(())
        } else {
            Err(PcmError::DisconnectedComparisonGraph { components })
        }
    }

    /// Converts to a complete matrix, failing on the first missing entry.
    pub fn into_complete(self) -> Result<CompleteMatrix> {
        if let Some((i, j)) = self.missing_pairs().first().copied() {
            return Err(PcmError::MissingEntry { i, j });
        }
        Ok(CompleteMatrix {
            n: self.n,
            entries: self.entries.into_iter().map(|v| v.unwrap_or(1.0)).collect(),
        })
    }

    /// Fills every missing pair `(i, j)`, `i < j`, with `fill(i, j)` (and
    /// its inverse below the diagonal). Known entries are copied unchanged.
    pub fn fill<F>(&self, mut fill: F) -> Result<CompleteMatrix>
    where
        F: FnMut(usize, usize) -> f64,
    {
        let n = self.n;
        let mut entries: Vec<f64> = self.entries.iter().map(|e| e.unwrap_or(f64::NAN)).collect();
        for (i, j) in self.missing_pairs() {
            let v = fill(i, j);
            check_positive(i, j, v)?;
            entries[i * n + j] = v;
            entries[j * n + i] = 1.0 / v;
        }
        Ok(CompleteMatrix { n, entries })
    }
}

impl From<&CompleteMatrix> for IncompleteMatrix {
    fn from(m: &CompleteMatrix) -> Self {
        m.to_incomplete()
    }
}

/// Exactly reciprocal version of a validated pair: the entry that is at
/// least 1 is kept and the other becomes its inverse.
fn canonical_pair(upper: f64, lower: f64) -> (f64, f64) {
    if upper >= 1.0 {
        (upper, 1.0 / upper)
    } else {
        (1.0 / lower, lower)
    }
}

fn check_positive(i: usize, j: usize, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(PcmError::NonPositiveEntry { i, j, value })
    }
}

/// A positive priority vector normalized to unit sum.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    /// Normalizes `raw` to sum 1. All components must be positive and finite.
    pub fn new(raw: Vec<f64>) -> Result<Self> {
        for (index, &value) in raw.iter().enumerate() {
            if !(value.is_finite() && value > 0.0) {
                return Err(PcmError::InvalidWeights { index, value });
            }
        }
        if raw.is_empty() {
            return Err(PcmError::DimensionMismatch {
                expected: 1,
                got: 0,
            });
        }
        let sum: f64 = raw.iter().sum();
        Ok(Self(raw.into_iter().map(|v| v / sum).collect()))
    }

    /// Weights proportional to `exp(log_weights)`, shifted by the maximum
    /// first so nothing overflows.
    pub fn from_log(log_weights: &[f64]) -> Result<Self> {
        let max = log_weights
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        Self::new(log_weights.iter().map(|y| (y - max).exp()).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// Item indices ordered by decreasing weight (ties by index).
    pub fn ranking(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.0.len()).collect();
        idx.sort_by(|&a, &b| self.0[b].total_cmp(&self.0[a]).then(a.cmp(&b)));
        idx
    }
}

impl std::ops::Index<usize> for WeightVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Three distinct items `i < j < k` (zero-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TriadIndex {
    pub i: usize,
    pub j: usize,
    pub k: usize,
}

impl TriadIndex {
    pub fn new(i: usize, j: usize, k: usize, n: usize) -> Result<Self> {
        if i < j && j < k && k < n {
            Ok(Self { i, j, k })
        } else {
            Err(PcmError::InvalidTriad { i, j, k, n })
        }
    }

    /// All `n(n-1)(n-2)/6` triads in lexicographic order.
    pub fn all(n: usize) -> impl Iterator<Item = TriadIndex> {
        (0..n).flat_map(move |i| {
            ((i + 1)..n).flat_map(move |j| ((j + 1)..n).map(move |k| TriadIndex { i, j, k }))
        })
    }

    pub fn count(n: usize) -> usize {
        if n < 3 {
            0
        } else {
            n * (n - 1) * (n - 2) / 6
        }
    }

    pub fn contains(&self, v: usize) -> bool {
        self.i == v || self.j == v || self.k == v
    }
}

impl fmt::Display for TriadIndex {
    /// One-based, as written in the CLI audit.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.i + 1, self.j + 1, self.k + 1)
    }
}
