//! Lexicographically optimal completion by successive linear programs.
//!
//! Work happens in log space: the unknowns are `u_ij = ln x_ij` for the
//! missing pairs `i < j`, and the log cycle sum of a triad `(i, j, k)` is
//! `ln a_ij + ln a_jk - ln a_ik`, whose absolute value is `ln TI`. The
//! pair `(j, i)` always enters as `-u_ij`, so reciprocity needs no extra
//! variable.
//!
//! Each stage minimizes `z` subject to `|cycle sum| <= z` for the active
//! triads and `|cycle sum| <= bound` for the frozen ones. A triad whose
//! `z_l <= z` row carries a nonzero dual cannot get below the optimum, so
//! its bound is frozen there and the next stage is solved. The stage LPs
//! keep `z_l` implicit: with `z_l` eliminated, the dual of `z_l <= z` is
//! the sum of the duals of the triad's two absolute-value rows.

use crate::error::{PcmError, Result};
use crate::lp::{LinearProgram, Relation, VarKind};
use crate::matrix::{CompleteMatrix, IncompleteMatrix, TriadIndex};

/// Stage objectives at or below this (log space) end the iteration.
pub const OBJECTIVE_ZERO_TOL: f64 = 1e-9;
/// Duals smaller than this in magnitude are treated as zero.
pub const DUAL_ZERO_TOL: f64 = 1e-9;
/// Fallback matching tolerance between a cycle sum and the stage optimum.
pub const FALLBACK_MATCH_TOL: f64 = 1e-7;

/// Log cycle sum of one triad as `constant + sum(coef * u[var])`.
#[derive(Debug, Clone, PartialEq)]
pub struct TriadTerm {
    pub triad: TriadIndex,
    pub constant: f64,
    pub vars: Vec<(usize, f64)>,
}

impl TriadTerm {
    pub fn cycle_sum(&self, u: &[f64]) -> f64 {
        self.constant + self.vars.iter().map(|&(v, c)| c * u[v]).sum::<f64>()
    }

    /// True when all three entries are known.
    pub fn is_fixed(&self) -> bool {
        self.vars.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TriadStatus {
    /// Still bounded by the stage objective `z`.
    Active,
    /// Bounded by a fixed log-space value.
    Frozen { bound: f64 },
}

/// The family of stage LPs for one incomplete matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct LexLpState {
    n: usize,
    missing: Vec<(usize, usize)>,
    terms: Vec<TriadTerm>,
    status: Vec<TriadStatus>,
}

/// One solved stage.
#[derive(Debug, Clone, PartialEq)]
pub struct StageSolution {
    /// Optimal `z`, i.e. `ln` of the smallest achievable max TI over active triads.
    pub objective: f64,
    /// Optimal `u` for each missing pair, in [`LexLpState::missing`] order.
    pub values: Vec<f64>,
    /// Dual of `z_l <= z` for each active triad, in term order.
    pub duals: Vec<(TriadIndex, f64)>,
    pub pivots: usize,
}

/// The stage LP plus the bookkeeping needed to read it back.
#[derive(Debug, Clone)]
pub struct StageProgram {
    pub lp: LinearProgram,
    /// Value `u` was shifted by: `u = anchor + d`.
    pub anchor: Vec<f64>,
    /// `z = z_offset + z'`.
    pub z_offset: f64,
    /// Index of `z'` among the LP variables (the `d` come first).
    pub z_var: usize,
    /// For each active term: its index and the LP rows bounding it by `z`.
    pub active_rows: Vec<(usize, [usize; 2])>,
}

impl LexLpState {
    /// Sets up the LP family for `a`. Every triad starts active, including
    /// those whose three entries are all known.
    pub fn build(a: &IncompleteMatrix) -> Result<Self> {
        a.require_connected()?;
        let missing = a.missing_pairs();
        if missing.is_empty() {
            return Err(PcmError::NoMissingEntries);
        }
        let n = a.n();
        let mut var_of = vec![usize::MAX; n * n];
        for (v, &(i, j)) in missing.iter().enumerate() {
            var_of[i * n + j] = v;
        }
        let terms: Vec<TriadTerm> = TriadIndex::all(n)
            .map(|t| {
                let mut constant = 0.0;
                let mut vars = Vec::new();
                for (p, q, sign) in [(t.i, t.j, 1.0), (t.j, t.k, 1.0), (t.i, t.k, -1.0)] {
                    match a.get(p, q) {
                        Some(v) => constant += sign * v.ln(),
                        None => vars.push((var_of[p * n + q], sign)),
                    }
                }
                TriadTerm {
                    triad: t,
                    constant,
                    vars,
                }
            })
            .collect();
        let status = vec![TriadStatus::Active; terms.len()];
        Ok(Self {
            n,
            missing,
            terms,
            status,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Missing pairs `(i, j)`, `i < j`, one LP variable each.
    pub fn missing(&self) -> &[(usize, usize)] {
        &self.missing
    }

    pub fn terms(&self) -> &[TriadTerm] {
        &self.terms
    }

    pub fn status(&self) -> &[TriadStatus] {
        &self.status
    }

    pub fn active_count(&self) -> usize {
        self.status.iter().filter(|s| **s == TriadStatus::Active).count()
    }

    /// Reorders the triads, which changes row order in every stage LP.
    /// `order` must be a permutation of `0..terms().len()`.
    pub fn permute_triads(&mut self, order: &[usize]) {
        let mut seen = vec![false; self.terms.len()];
        assert_eq!(order.len(), self.terms.len(), "not a permutation");
        for &o in order {
            assert!(!std::mem::replace(&mut seen[o], true), "not a permutation");
        }
        self.terms = order.iter().map(|&o| self.terms[o].clone()).collect();
        self.status = order.iter().map(|&o| self.status[o]).collect();
    }

    /// Freezes the triad at `term` with log-space bound `bound`.
    pub fn freeze(&mut self, term: usize, bound: f64) {
        self.status[term] = TriadStatus::Frozen { bound };
    }

    /// The stage LP in coordinates shifted by `anchor`, which must satisfy
    /// every frozen bound. Shifting makes the origin feasible so no phase-1
    /// pass is needed.
    pub fn stage_program(&self, anchor: &[f64]) -> StageProgram {
        let m = self.missing.len();
        let mut lp = LinearProgram::new();
        for _ in 0..m {
            lp.add_var(0.0, VarKind::Free);
        }
        let z_var = lp.add_var(1.0, VarKind::Free);
        let z_offset = self
            .terms
            .iter()
            .zip(&self.status)
            .filter(|(_, s)| **s == TriadStatus::Active)
            .map(|(t, _)| t.cycle_sum(anchor).abs())
            .fold(0.0, f64::max);
        let mut active_rows = Vec::new();
        for (idx, (term, status)) in self.terms.iter().zip(&self.status).enumerate() {
            let s = term.cycle_sum(anchor);
            let plus = term.vars.clone();
            let minus: Vec<(usize, f64)> = term.vars.iter().map(|&(v, c)| (v, -c)).collect();
            match *status {
                TriadStatus::Active => {
                    let mut p = plus;
                    p.push((z_var, -1.0));
                    let mut q = minus;
                    q.push((z_var, -1.0));
                    let r1 = lp.add_constraint(p, Relation::Le, z_offset - s);
                    let r2 = lp.add_constraint(q, Relation::Le, z_offset + s);
                    active_rows.push((idx, [r1, r2]));
                }
                TriadStatus::Frozen { .. } if term.is_fixed() => {}
                TriadStatus::Frozen { bound } => {
                    // The anchor satisfies the bound up to rounding.
                    lp.add_constraint(plus, Relation::Le, (bound - s).max(0.0));
                    lp.add_constraint(minus, Relation::Le, (bound + s).max(0.0));
                }
            }
        }
        StageProgram {
            lp,
            anchor: anchor.to_vec(),
            z_offset,
            z_var,
            active_rows,
        }
    }

    /// Solves the current stage starting from `anchor`.
    pub fn solve(&self, anchor: &[f64]) -> Result<StageSolution> {
        let program = self.stage_program(anchor);
        let sol = program.lp.solve()?;
        let values = anchor
            .iter()
            .zip(&sol.primal)
            .map(|(a, d)| a + d)
            .collect();
        let duals = program
            .active_rows
            .iter()
            .map(|(idx, rows)| {
                let y: f64 = rows.iter().map(|&r| sol.duals[r]).sum();
                (self.terms[*idx].triad, y)
            })
            .collect();
        Ok(StageSolution {
            objective: program.z_offset + sol.primal[program.z_var],
            values,
            duals,
            pivots: sol.pivots,
        })
    }
}

/// One freezing step of the iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrozenTriad {
    pub triad: TriadIndex,
    /// `exp(bound)`, the triad's final inconsistency.
    pub ti: f64,
    /// One-based index of the LP solve that fixed it.
    pub stage: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LexCompletion {
    pub matrix: CompleteMatrix,
    /// Frozen triads in freeze order; `ti` is non-increasing.
    pub audit: Vec<FrozenTriad>,
    /// Optimal `z` of every stage LP, natural-log units.
    pub stage_objectives: Vec<f64>,
}

impl LexCompletion {
    pub fn lp_solves(&self) -> usize {
        self.stage_objectives.len()
    }
}

/// Lexicographically optimal completion. A complete input is returned unchanged.
pub fn lex_optimal_completion(a: &IncompleteMatrix) -> Result<LexCompletion> {
    if a.is_complete() {
        return Ok(LexCompletion {
            matrix: a.clone().into_complete()?,
            audit: Vec::new(),
            stage_objectives: Vec::new(),
        });
    }
    run(a, LexLpState::build(a)?)
}

/// Runs the freezing iteration on a prepared state (possibly with permuted triads).
pub fn run(a: &IncompleteMatrix, mut state: LexLpState) -> Result<LexCompletion> {
    let mut values = vec![0.0; state.missing.len()];
    let mut audit = Vec::new();
    let mut stage_objectives: Vec<f64> = Vec::new();
    while state.active_count() > 0 {
        let sol = state.solve(&values)?;
        values = sol.values;
        // Later stages can only relax; clip rounding noise above the last bound.
        let objective = match stage_objectives.last() {
            Some(&prev) => sol.objective.min(prev),
            None => sol.objective,
        };
        stage_objectives.push(objective);
        if objective <= OBJECTIVE_ZERO_TOL {
            break;
        }
        let term = select_binding(&state, &sol.duals, &values, objective)?;
        state.freeze(term, objective);
        audit.push(FrozenTriad {
            triad: state.terms[term].triad,
            ti: objective.exp(),
            stage: stage_objectives.len(),
        });
    }
    let index: std::collections::HashMap<(usize, usize), usize> = state
        .missing
        .iter()
        .enumerate()
        .map(|(v, &p)| (p, v))
        .collect();
    let matrix = a.fill(|i, j| values[index[&(i, j)]].exp())?;
    Ok(LexCompletion {
        matrix,
        audit,
        stage_objectives,
    })
}

/// Picks the active triad to freeze: the largest |dual|, ties to the
/// smallest triad; under full dual degeneracy, the smallest triad whose
/// cycle sum sits at the optimum.
fn select_binding(
    state: &LexLpState,
    duals: &[(TriadIndex, f64)],
    values: &[f64],
    objective: f64,
) -> Result<usize> {
    let mut best: Option<(TriadIndex, f64)> = None;
    for &(t, y) in duals {
        let mag = y.abs();
        if mag <= DUAL_ZERO_TOL {
            continue;
        }
        best = match best {
            None => Some((t, mag)),
            Some((bt, bm)) => {
                let tie = (mag - bm).abs() <= 1e-12;
                if (mag > bm && !tie) || (tie && t < bt) {
                    Some((t, mag))
                } else {
                    Some((bt, bm))
                }
            }
        };
    }
    let position = |t: TriadIndex| {
        state
            .terms
            .iter()
            .position(|term| term.triad == t)
            .expect("triad present")
    };
    if let Some((t, _)) = best {
        return Ok(position(t));
    }
    state
        .terms
        .iter()
        .enumerate()
        .filter(|(idx, term)| {
            state.status[*idx] == TriadStatus::Active
                && (term.cycle_sum(values).abs() - objective).abs() <= FALLBACK_MATCH_TOL
        })
        .min_by_key(|(_, term)| term.triad)
        .map(|(idx, _)| idx)
        .ok_or(PcmError::NoBindingDualFound { objective })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inconsistency::inconsistency_profile;

    fn worked_example() -> IncompleteMatrix {
        IncompleteMatrix::from_upper(4, |i, j| match (i, j) {
            (0, 1) => Some(2.0),
            (1, 2) | (2, 3) => Some(1.0),
            (1, 3) => Some(8.0),
            _ => None,
        })
        .unwrap()
    }

    #[test]
    fn worked_example_first_lp_has_eight_constraints() {
        let state = LexLpState::build(&worked_example()).unwrap();
        assert_eq!(state.missing(), &[(0, 2), (0, 3)]);
        let program = state.stage_program(&[0.0, 0.0]);
        assert_eq!(program.lp.constraints().len(), 8);
        let fixed: Vec<_> = state.terms().iter().filter(|t| t.is_fixed()).collect();
        assert_eq!(fixed.len(), 1);
        assert_eq!(fixed[0].triad, TriadIndex { i: 1, j: 2, k: 3 });
        assert!((fixed[0].constant.abs() - 8f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn worked_example_stages() {
        let a = worked_example();
        let state = LexLpState::build(&a).unwrap();
        let first = state.solve(&[0.0, 0.0]).unwrap();
        assert!((first.objective - 8f64.ln()).abs() < 1e-12);
        let lex = lex_optimal_completion(&a).unwrap();
        assert!((lex.matrix.get(0, 2) - 4.0).abs() < 1e-9);
        assert!((lex.matrix.get(0, 3) - 8.0).abs() < 1e-9);
        assert_eq!(lex.audit[0].triad, TriadIndex { i: 1, j: 2, k: 3 });
        assert!((lex.audit[0].ti - 8.0).abs() < 1e-9);
        assert!((lex.stage_objectives[1] - 2f64.ln()).abs() < 1e-12);
        let theta = inconsistency_profile(&lex.matrix).unwrap();
        for (got, want) in theta.theta().iter().zip([8.0, 2.0, 2.0, 2.0]) {
            assert!((got - want).abs() < 1e-9);
        }
        assert!(lex.lp_solves() <= TriadIndex::count(4));
    }

    #[test]
    fn single_missing_entry_is_made_consistent() {
        let a = IncompleteMatrix::from_upper(3, |i, j| match (i, j) {
            (0, 1) => Some(3.0),
            (1, 2) => Some(2.0),
            _ => None,
        })
        .unwrap();
        let state = LexLpState::build(&a).unwrap();
        assert_eq!(state.stage_program(&[0.0]).lp.constraints().len(), 2);
        let lex = lex_optimal_completion(&a).unwrap();
        assert!((lex.matrix.get(0, 2) - 6.0).abs() < 1e-12);
        assert!(lex.audit.is_empty());
        assert_eq!(lex.stage_objectives.len(), 1);
        assert!(lex.stage_objectives[0] <= OBJECTIVE_ZERO_TOL);
    }

    #[test]
    fn complete_input_is_rejected_by_builder_and_passed_through() {
        let m = CompleteMatrix::from_weights(&[1.0, 2.0, 3.0]).unwrap();
        let a = m.to_incomplete();
        assert_eq!(LexLpState::build(&a), Err(PcmError::NoMissingEntries));
        assert_eq!(lex_optimal_completion(&a).unwrap().matrix, m);
    }

    #[test]
    fn disconnected_is_rejected() {
        let a = IncompleteMatrix::from_upper(4, |i, j| ((i, j) == (0, 1) || (i, j) == (2, 3)).then_some(2.0))
            .unwrap();
        assert!(matches!(
            LexLpState::build(&a),
            Err(PcmError::DisconnectedComparisonGraph { .. })
        ));
    }

    #[test]
    fn reversed_triad_order_gives_same_completion() {
        let a = worked_example();
        let mut state = LexLpState::build(&a).unwrap();
        let order: Vec<usize> = (0..state.terms().len()).rev().collect();
        state.permute_triads(&order);
        let lex = run(&a, state).unwrap();
        assert!((lex.matrix.get(0, 2) - 4.0).abs() < 1e-9);
        assert!((lex.matrix.get(0, 3) - 8.0).abs() < 1e-9);
    }
}
