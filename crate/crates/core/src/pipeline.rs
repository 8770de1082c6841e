//! Graph -> incomplete matrix -> completion -> weights -> violation audit,
//! plus the two experiment drivers built on it: the randomized check that
//! lexicographic completion never produces ordinal violations on DAG
//! inputs, and the alpha sweep used to find counterexamples for the other
//! completion methods.

use std::fmt::Write as _;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::completion::{complete, CompletionMethod, FrozenTriad};
use crate::error::Result;
use crate::graph::PreferenceDag;
use crate::inconsistency::{inconsistency_profile, max_ti, saaty_lambda_max};
use crate::io::format_number;
use crate::matrix::{CompleteMatrix, IncompleteMatrix, WeightVector};
use crate::violation::{check_ordinal_violation, Violation};
use crate::weighting::WeightingMethod;

/// How many of the largest triad inconsistencies a summary keeps.
pub const THETA_PREFIX: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct InconsistencySummary {
    pub max_ti: f64,
    pub ki: f64,
    pub lambda_max: f64,
    pub theta_prefix: Vec<f64>,
}

impl InconsistencySummary {
    pub fn of(m: &CompleteMatrix) -> Result<Self> {
        let max_ti = max_ti(m);
        let theta_prefix = if m.n() >= 3 {
            inconsistency_profile(m)?
                .theta()
                .iter()
                .take(THETA_PREFIX)
                .copied()
                .collect()
        } else {
            Vec::new()
        };
        Ok(Self {
            max_ti,
            ki: 1.0 - 1.0 / max_ti,
            lambda_max: saaty_lambda_max(m)?,
            theta_prefix,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineReport {
    pub completion: CompletionMethod,
    pub weighting: WeightingMethod,
    pub completed: CompleteMatrix,
    pub weights: WeightVector,
    pub violations: Vec<Violation>,
    pub summary: InconsistencySummary,
    pub lex_audit: Option<Vec<FrozenTriad>>,
    pub runtime_ms: f64,
}

impl PipelineReport {
    pub fn method_pair(&self) -> String {
        method_pair(self.completion, self.weighting)
    }
}

pub fn method_pair(c: CompletionMethod, w: WeightingMethod) -> String {
    format!("{c}+{w}")
}

/// Completes `a`, derives weights and audits them against `a`.
pub fn run_pipeline(
    a: &IncompleteMatrix,
    completion: CompletionMethod,
    weighting: WeightingMethod,
    eq_tol: f64,
) -> Result<PipelineReport> {
    let start = Instant::now();
    let done = complete(a, completion)?;
    let weights = weighting.weights(&done.matrix)?;
    let violations = check_ordinal_violation(a, &weights, eq_tol)?;
    let summary = InconsistencySummary::of(&done.matrix)?;
    Ok(PipelineReport {
        completion,
        weighting,
        completed: done.matrix,
        weights,
        violations,
        summary,
        lex_audit: done.lex.map(|l| l.audit),
        runtime_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Settings for the randomized lexicographic-completion check.
#[derive(Debug, Clone, PartialEq)]
pub struct Theorem1Config {
    pub trials: usize,
    pub n_min: usize,
    pub n_max: usize,
    pub alphas: Vec<f64>,
    pub seed: u64,
    pub eq_tol: f64,
}

impl Default for Theorem1Config {
    fn default() -> Self {
        Self {
            trials: 1000,
            n_min: 3,
            n_max: 8,
            alphas: vec![2.0, 5.0, 9.0],
            seed: 0,
            eq_tol: crate::violation::DEFAULT_EQ_TOL,
        }
    }
}

/// A trial whose audit was not clean.
#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub trial: usize,
    pub alpha: f64,
    pub dag: PreferenceDag,
    pub weighting: WeightingMethod,
    pub completed: CompleteMatrix,
    pub violations: Vec<Violation>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Theorem1Summary {
    pub trials: usize,
    /// Weight vectors audited (two per successful trial).
    pub audits: usize,
    pub counterexamples: Vec<Counterexample>,
    /// `(trial, message)` for trials whose solver failed.
    pub solver_failures: Vec<(usize, String)>,
}

impl Theorem1Summary {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty() && self.solver_failures.is_empty()
    }
}

/// The graph and alpha used by one trial, derived only from `(seed, trial)`.
pub fn theorem1_instance(cfg: &Theorem1Config, trial: usize) -> Result<(PreferenceDag, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(trial as u64);
    let n = rng.random_range(cfg.n_min..=cfg.n_max.max(cfg.n_min));
    let density = rng.random_range(0.15..=0.9);
    let dag = PreferenceDag::random(n, density, rng.random())?;
    let alpha = cfg.alphas[trial % cfg.alphas.len()];
    Ok((dag, alpha))
}

/// Random DAG -> matrix -> lexicographic completion -> both weightings ->
/// audit, for every trial. Trials run in parallel; results are ordered by
/// trial index.
pub fn verify_theorem1(cfg: &Theorem1Config) -> Theorem1Summary {
    enum Outcome {
        Audited(Vec<Counterexample>),
        Failed(String),
    }
    let outcomes: Vec<Outcome> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let run = || -> Result<Vec<Counterexample>> {
                let (dag, alpha) = theorem1_instance(cfg, trial)?;
                let a = dag.to_incomplete_matrix(alpha)?;
                let done = complete(&a, CompletionMethod::Lex)?;
                let mut found = Vec::new();
                for weighting in WeightingMethod::ALL {
                    let w = weighting.weights(&done.matrix)?;
                    let violations = check_ordinal_violation(&a, &w, cfg.eq_tol)?;
                    if !violations.is_empty() {
                        found.push(Counterexample {
                            trial,
                            alpha,
                            dag: dag.clone(),
                            weighting,
                            completed: done.matrix.clone(),
                            violations,
                        });
                    }
                }
                Ok(found)
            };
            match run() {
                Ok(found) => Outcome::Audited(found),
                Err(e) => Outcome::Failed(e.to_string()),
            }
        })
        .collect();
    let mut summary = Theorem1Summary {
        trials: cfg.trials,
        audits: 0,
        counterexamples: Vec::new(),
        solver_failures: Vec::new(),
    };
    for (trial, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Outcome::Audited(found) => {
                summary.audits += WeightingMethod::ALL.len();
                summary.counterexamples.extend(found);
            }
            Outcome::Failed(msg) => summary.solver_failures.push((trial, msg)),
        }
    }
    summary
}

/// `from, from + step, ...` up to `to` inclusive (with a little slack for rounding).
pub fn alpha_grid(from: f64, to: f64, step: f64) -> Vec<f64> {
    if step.is_nan() || step <= 0.0 || to < from {
        return vec![from];
    }
    let count = ((to - from) / step + 1e-9).floor() as usize + 1;
    (0..count)
        .map(|i| ((from + i as f64 * step) * 1e9).round() / 1e9)
        .collect()
}

/// One alpha of a sweep. The numeric fields are `None` when the solver failed.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub alpha: f64,
    pub completion: CompletionMethod,
    pub weighting: WeightingMethod,
    pub n_violations: Option<usize>,
    pub max_ti: Option<f64>,
    pub ki: Option<f64>,
    pub lambda_max: Option<f64>,
    pub runtime_ms: f64,
    pub error: Option<String>,
}

pub fn sweep_alpha(
    dag: &PreferenceDag,
    completion: CompletionMethod,
    weighting: WeightingMethod,
    alphas: &[f64],
    eq_tol: f64,
) -> Vec<SweepRow> {
    alphas
        .par_iter()
        .map(|&alpha| {
            let start = Instant::now();
            let result = dag
                .to_incomplete_matrix(alpha)
                .and_then(|a| run_pipeline(&a, completion, weighting, eq_tol));
            let runtime_ms = start.elapsed().as_secs_f64() * 1e3;
            match result {
                Ok(r) => SweepRow {
                    alpha,
                    completion,
                    weighting,
                    n_violations: Some(r.violations.len()),
                    max_ti: Some(r.summary.max_ti),
                    ki: Some(r.summary.ki),
                    lambda_max: Some(r.summary.lambda_max),
                    runtime_ms,
                    error: None,
                },
                Err(e) => SweepRow {
                    alpha,
                    completion,
                    weighting,
                    n_violations: None,
                    max_ti: None,
                    ki: None,
                    lambda_max: None,
                    runtime_ms,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect()
}

pub const CSV_HEADER: &str = "alpha,method_pair,n_violations,max_ti,ki,lambda_max,runtime_ms";

/// CSV rendering; failed rows leave the numeric columns empty.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = format!("{CSV_HEADER}\n");
    let opt = |v: Option<f64>| v.map(format_number).unwrap_or_default();
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{:.3}",
            format_number(r.alpha),
            method_pair(r.completion, r.weighting),
            r.n_violations.map(|v| v.to_string()).unwrap_or_default(),
            opt(r.max_ti),
            opt(r.ki),
            opt(r.lambda_max),
            r.runtime_ms
        );
    }
    out
}
