//! The three completion methods behind one dispatch.

pub mod cr;
pub mod gci;
pub mod lex;

use std::fmt;
use std::str::FromStr;

use crate::error::Result;
use crate::matrix::{CompleteMatrix, IncompleteMatrix};

pub use cr::{cr_optimal_completion, cr_optimal_completion_with, CrCompletion, CrOptions};
pub use gci::gci_optimal_completion;
pub use lex::{lex_optimal_completion, FrozenTriad, LexCompletion, LexLpState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CompletionMethod {
    Lex,
    Gci,
    Cr,
}

impl CompletionMethod {
    pub const ALL: [CompletionMethod; 3] = [Self::Lex, Self::Gci, Self::Cr];

    pub fn name(self) -> &'static str {
        match self {
            Self::Lex => "lex",
            Self::Gci => "gci",
            Self::Cr => "cr",
        }
    }
}

impl fmt::Display for CompletionMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CompletionMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "lex" => Ok(Self::Lex),
            "gci" => Ok(Self::Gci),
            "cr" => Ok(Self::Cr),
            other => Err(format!("unknown completion method '{other}' (expected lex, gci or cr)")),
        }
    }
}

/// A completed matrix plus whatever the method reports alongside it.
#[derive(Debug, Clone, PartialEq)]
pub struct Completion {
    pub method: CompletionMethod,
    pub matrix: CompleteMatrix,
    /// Present for [`CompletionMethod::Lex`].
    pub lex: Option<LexCompletion>,
    /// Present for [`CompletionMethod::Cr`].
    pub lambda_max: Option<f64>,
}

pub fn complete(a: &IncompleteMatrix, method: CompletionMethod) -> Result<Completion> {
    a.require_connected()?;
    Ok(match method {
        CompletionMethod::Lex => {
            let lex = lex_optimal_completion(a)?;
            Completion {
                method,
                matrix: lex.matrix.clone(),
                lex: Some(lex),
                lambda_max: None,
            }
        }
        CompletionMethod::Gci => Completion {
            method,
            matrix: gci_optimal_completion(a)?,
            lex: None,
            lambda_max: None,
        },
        CompletionMethod::Cr => {
            let cr = cr_optimal_completion(a)?;
            Completion {
                method,
                matrix: cr.matrix,
                lex: None,
                lambda_max: Some(cr.lambda_max),
            }
        }
    })
}
