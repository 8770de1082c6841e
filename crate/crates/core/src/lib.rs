//! Completion of incomplete pairwise comparison matrices and ordinal
//! consistency of the priorities derived from them.
//!
//! The crate covers the whole chain from a preference graph to a weight
//! vector:
//!
//! * [`graph`]: connected DAGs of stated preferences and the matrices they induce;
//! * [`completion`]: lexicographically optimal, GCI-optimal and CR-optimal completions;
//! * [`weighting`]: eigenvector and logarithmic least squares weights;
//! * [`violation`]: the ordinal-violation audit;
//! * [`pipeline`]: the end-to-end driver and experiment harnesses.
//!
//! ```
//! use pcm_core::{completion, io};
//!
//! let a = io::parse_matrix("4\n1 2 * *\n1/2 1 1 8\n* 1 1 1\n* 1/8 1 1\n").unwrap();
//! let lex = completion::lex_optimal_completion(&a).unwrap();
//! assert!((lex.matrix.get(0, 2) - 4.0).abs() < 1e-9);
//! assert!((lex.matrix.get(0, 3) - 8.0).abs() < 1e-9);
//! ```

#![allow(clippy::needless_range_loop)]

pub mod completion;
pub mod error;
pub mod graph;
pub mod inconsistency;
pub mod io;
mod linalg;
pub mod lp;
pub mod matrix;
pub mod pipeline;
pub mod violation;
pub mod weighting;

pub use completion::{complete, CompletionMethod};
pub use error::{ErrorCategory, LpError, PcmError, Result};
pub use graph::PreferenceDag;
pub use matrix::{CompleteMatrix, IncompleteMatrix, TriadIndex, WeightVector};
pub use weighting::WeightingMethod;
