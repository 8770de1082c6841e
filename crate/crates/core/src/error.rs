use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PcmError {
    #[error("matrix is not square: row {row} has {len} entries, expected {expected}")]
    NonSquare {
        row: usize,
        len: usize,
        expected: usize,
    },

    #[error("matrix of order {n} is too small (need at least {min})")]
    MatrixTooSmall { n: usize, min: usize },

    #[error("diagonal entry ({0},{0}) must be 1", i + 1)]
    InvalidDiagonal { i: usize },

    #[error("entry ({},{}) = {value} is not a positive finite number", i + 1, j + 1)]
    NonPositiveEntry { i: usize, j: usize, value: f64 },

    #[error("entry ({0},{1}) is missing but ({1},{0}) is known", i + 1, j + 1)]
    AsymmetricMissingness { i: usize, j: usize },

    #[error("reciprocity violated at ({},{}): product of the pair is {product}", i + 1, j + 1)]
    ReciprocityViolation { i: usize, j: usize, product: f64 },

    #[error("entry ({},{}) is missing", i + 1, j + 1)]
    MissingEntry { i: usize, j: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("weight vector must be positive and finite (component {index} = {value})")]
    InvalidWeights { index: usize, value: f64 },

    #[error("invalid triad ({},{},{}) for order {n}", i + 1, j + 1, k + 1)]
    InvalidTriad {
        i: usize,
        j: usize,
        k: usize,
        n: usize,
    },

    #[error("comparison graph is disconnected; components: {}", fmt_components(components))]
    DisconnectedComparisonGraph { components: Vec<Vec<usize>> },

    #[error("singular linear system")]
    SingularSystem,

    #[error("{what} did not converge after {iterations} iterations")]
    ConvergenceFailure {
        what: &'static str,
        iterations: usize,
    },

    #[error("arc ({},{}) is out of range for {n} vertices", from + 1, to + 1)]
    ArcOutOfRange { from: usize, to: usize, n: usize },

    #[error("self-loop at vertex {}", vertex + 1)]
    SelfLoop { vertex: usize },

    #[error("arc ({},{}) appears in both directions", from + 1, to + 1)]
    BidirectionalArc { from: usize, to: usize },

    #[error("directed cycle: {}", fmt_path(cycle))]
    CycleDetected { cycle: Vec<usize> },

    #[error("graph is not weakly connected; components: {}", fmt_components(components))]
    Disconnected { components: Vec<Vec<usize>> },

    #[error("alpha must be greater than one (got {alpha})")]
    AlphaNotGreaterThanOne { alpha: f64 },

    #[error("arc density must lie in (0, 1] (got {density})")]
    InvalidDensity { density: f64 },

    #[error("matrix has no missing entries")]
    NoMissingEntries,

    #[error("no binding constraint found while objective is {objective}")]
    NoBindingDualFound { objective: f64 },

    #[error("linear program: {0}")]
    Lp(#[from] LpError),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Indices in messages are 1-based, matching the file formats.
fn fmt_components(components: &[Vec<usize>]) -> String {
    let sets: Vec<String> = components
        .iter()
        .map(|c| {
            let items: Vec<String> = c.iter().map(|v| (v + 1).to_string()).collect();
            format!("{{{}}}", items.join(","))
        })
        .collect();
    sets.join(" ")
}

fn fmt_path(path: &[usize]) -> String {
    let items: Vec<String> = path.iter().map(|v| (v + 1).to_string()).collect();
    items.join(" -> ")
}

/// Coarse classification used for exit codes and C status codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ErrorCategory {
    /// Malformed or invalid input.
    Input,
    /// The comparison graph or preference graph is not connected.
    Disconnected,
    /// A numerical routine failed on valid input.
    Solver,
}

impl PcmError {
    pub fn category(&self) -> ErrorCategory {
        match self {
            Self::DisconnectedComparisonGraph { .. } | Self::Disconnected { .. } => {
                ErrorCategory::Disconnected
            }
            Self::SingularSystem
            | Self::ConvergenceFailure { .. }
            | Self::NoBindingDualFound { .. }
            | Self::Lp(_) => ErrorCategory::Solver,
            _ => ErrorCategory::Input,
        }
    }
}

/// Failures of the simplex solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("problem is infeasible")]
    Infeasible,
    #[error("problem is unbounded")]
    Unbounded,
    #[error("iteration limit reached")]
    IterationLimit,
}

pub type Result<T, E = PcmError> = std::result::Result<T, E>;
