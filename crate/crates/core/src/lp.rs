//! Dense two-phase primal simplex with dual values.
//!
//! Entering columns follow Dantzig's rule with lowest-index tie-breaking;
//! after a run of degenerate pivots the solver switches to Bland's rule for
//! the remainder of the phase, which rules out cycling. Given the same
//! problem the pivot sequence, and therefore the returned basic solution,
//! is always the same.
//!
//! Duals are reported as `d(objective) / d(rhs)`: for a minimization,
//! binding `<=` rows carry non-positive duals and binding `>=` rows
//! non-negative ones.

use crate::error::LpError;

const PIVOT_EPS: f64 = 1e-11;
const COST_EPS: f64 = 1e-11;
const DEGENERATE_RUN: usize = 50;
const MAX_PIVOTS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    NonNegative,
    Free,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<(usize, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

/// `minimize c.x` subject to linear rows; variables are non-negative or free.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LinearProgram {
    costs: Vec<f64>,
    kinds: Vec<VarKind>,
    constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub objective: f64,
    pub primal: Vec<f64>,
    /// One dual per constraint, in insertion order.
    pub duals: Vec<f64>,
    pub pivots: usize,
}

impl LinearProgram {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a variable and returns its index.
    pub fn add_var(&mut self, cost: f64, kind: VarKind) -> usize {
        self.costs.push(cost);
        self.kinds.push(kind);
        self.costs.len() - 1
    }

    /// Adds a row and returns its index (used to look up its dual).
    pub fn add_constraint(&mut self, coeffs: Vec<(usize, f64)>, relation: Relation, rhs: f64) -> usize {
        debug_assert!(coeffs.iter().all(|&(v, _)| v < self.costs.len()));
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
        self.constraints.len() - 1
    }

    pub fn num_vars(&self) -> usize {
        self.costs.len()
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    /// Largest violation of any row at `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut worst = 0.0_f64;
        for c in &self.constraints {
            let lhs: f64 = c.coeffs.iter().map(|&(v, a)| a * x[v]).sum();
            let viol = match c.relation {
                Relation::Le => lhs - c.rhs,
                Relation::Ge => c.rhs - lhs,
                Relation::Eq => (lhs - c.rhs).abs(),
            };
            worst = worst.max(viol);
        }
        for (v, k) in self.kinds.iter().enumerate() {
            if *k == VarKind::NonNegative {
                worst = worst.max(-x[v]);
            }
        }
        worst
    }

    /// Objective of the dual problem at `duals` (valid when `duals` are
    /// dual feasible): `sum_i b_i y_i`.
    pub fn dual_objective(&self, duals: &[f64]) -> f64 {
        self.constraints.iter().zip(duals).map(|(c, y)| c.rhs * y).sum()
    }

    pub fn solve(&self) -> Result<LpSolution, LpError> {
        Tableau::build(self).run(self)
    }
}

struct Tableau {
    rows: usize,
    /// Structural + slack/surplus + artificial columns (rhs excluded).
    cols: usize,
    /// Row-major, `rows x (cols + 1)`, last entry of each row is the rhs.
    t: Vec<f64>,
    basis: Vec<usize>,
    /// Column of each row's identity column (slack or artificial).
    unit_col: Vec<usize>,
    /// Row multiplier applied to make the rhs non-negative.
    flip: Vec<f64>,
    first_artificial: usize,
    /// Structural column -> (variable, sign).
    structural: Vec<(usize, f64)>,
    pivots: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let mut structural = Vec::new();
        let mut var_cols = Vec::with_capacity(lp.kinds.len());
        for (v, kind) in lp.kinds.iter().enumerate() {
            var_cols.push(structural.len());
            structural.push((v, 1.0));
            if *kind == VarKind::Free {
                structural.push((v, -1.0));
            }
        }
        let rows = lp.constraints.len();
        let mut flip = Vec::with_capacity(rows);
        let mut relations = Vec::with_capacity(rows);
        for c in &lp.constraints {
            let f = if c.rhs < 0.0 { -1.0 } else { 1.0 };
            flip.push(f);
            relations.push(match (c.relation, f < 0.0) {
                (Relation::Le, true) => Relation::Ge,
                (Relation::Ge, true) => Relation::Le,
                (r, _) => r,
            });
        }
        let n_struct = structural.len();
        let n_slack = relations.iter().filter(|r| **r != Relation::Eq).count();
        let n_art = relations.iter().filter(|r| **r != Relation::Le).count();
        let cols = n_struct + n_slack + n_art;
        let width = cols + 1;
        let mut t = vec![0.0; rows * width];
        let mut basis = vec![0; rows];
        let mut unit_col = vec![0; rows];
        let mut next_slack = n_struct;
        let first_artificial = n_struct + n_slack;
        let mut next_art = first_artificial;
        for (r, c) in lp.constraints.iter().enumerate() {
            let f = flip[r];
            let row = &mut t[r * width..(r + 1) * width];
            for &(v, a) in &c.coeffs {
                let col = var_cols[v];
                row[col] += f * a;
                if lp.kinds[v] == VarKind::Free {
                    row[col + 1] -= f * a;
                }
            }
            row[cols] = f * c.rhs;
            match relations[r] {
                Relation::Le => {
                    row[next_slack] = 1.0;
                    basis[r] = next_slack;
                    unit_col[r] = next_slack;
                    next_slack += 1;
                }
                Relation::Ge => {
                    row[next_slack] = -1.0;
                    next_slack += 1;
                    row[next_art] = 1.0;
                    basis[r] = next_art;
                    unit_col[r] = next_art;
                    next_art += 1;
                }
                Relation::Eq => {
                    row[next_art] = 1.0;
                    basis[r] = next_art;
                    unit_col[r] = next_art;
                    next_art += 1;
                }
            }
        }
        Self {
            rows,
            cols,
            t,
            basis,
            unit_col,
            flip,
            first_artificial,
            structural,
            pivots: 0,
        }
    }

    #[inline]
    fn width(&self) -> usize {
        self.cols + 1
    }

    /// Reduced-cost row for the given column costs (rhs slot holds `-objective`).
    fn reduced_costs(&self, costs: &[f64]) -> Vec<f64> {
        let w = self.width();
        let mut r = vec![0.0; w];
        r[..self.cols].copy_from_slice(costs);
        for (row, &b) in self.basis.iter().enumerate() {
            let cb = costs[b];
            if cb != 0.0 {
                let tr = &self.t[row * w..(row + 1) * w];
                for (rc, v) in r.iter_mut().zip(tr) {
                    *rc -= cb * v;
                }
            }
        }
        r
    }

    fn pivot(&mut self, p: usize, q: usize, reduced: &mut [f64]) {
        let w = self.width();
        let inv = 1.0 / self.t[p * w + q];
        for v in &mut self.t[p * w..(p + 1) * w] {
            *v *= inv;
        }
        self.t[p * w + q] = 1.0;
        let (before, rest) = self.t.split_at_mut(p * w);
        let (prow, after) = rest.split_at_mut(w);
        let eliminate = |row: &mut [f64]| {
            let f = row[q];
            if f != 0.0 {
                for (v, pv) in row.iter_mut().zip(prow.iter()) {
                    *v -= f * pv;
                }
                row[q] = 0.0;
            }
        };
        before.chunks_mut(w).for_each(eliminate);
        after.chunks_mut(w).for_each(eliminate);
        eliminate(reduced);
        self.basis[p] = q;
        self.pivots += 1;
    }

    /// Runs simplex iterations on `reduced` until optimal. Columns at or
    /// beyond `col_limit` may not enter.
    fn optimize(&mut self, reduced: &mut [f64], col_limit: usize) -> Result<(), LpError> {
        let w = self.width();
        let mut degenerate = 0usize;
        let mut bland = false;
        loop {
            if self.pivots >= MAX_PIVOTS {
                return Err(LpError::IterationLimit);
            }
            let entering = if bland {
                (0..col_limit).find(|&j| reduced[j] < -COST_EPS)
            } else {
                let mut best: Option<usize> = None;
                for j in 0..col_limit {
                    if reduced[j] < -COST_EPS && best.is_none_or(|b| reduced[j] < reduced[b]) {
                        best = Some(j);
                    }
                }
                best
            };
            let Some(q) = entering else {
                return Ok(());
            };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.rows {
                let a = self.t[r * w + q];
                if a > PIVOT_EPS {
                    let ratio = self.t[r * w + self.cols].max(0.0) / a;
                    leave = match leave {
                        None => Some((r, ratio)),
                        Some((lr, lratio)) => {
                            let tie = (ratio - lratio).abs() <= 1e-12 * (1.0 + lratio.abs());
                            if ratio < lratio && !tie
                                || tie && self.basis[r] < self.basis[lr]
                            {
                                Some((r, ratio))
                            } else {
                                Some((lr, lratio))
                            }
                        }
                    };
                }
            }
            let Some((p, ratio)) = leave else {
                return Err(LpError::Unbounded);
            };
            if ratio <= 1e-12 {
                degenerate += 1;
                if degenerate >= DEGENERATE_RUN {
                    bland = true;
                }
            } else {
                degenerate = 0;
            }
            self.pivot(p, q, reduced);
        }
    }

    fn run(mut self, lp: &LinearProgram) -> Result<LpSolution, LpError> {
        let w = self.width();
        let has_artificials = self.first_artificial < self.cols;
        if has_artificials {
            let mut phase1 = vec![0.0; self.cols];
            for c in phase1.iter_mut().skip(self.first_artificial) {
                *c = 1.0;
            }
            let mut reduced = self.reduced_costs(&phase1);
            self.optimize(&mut reduced, self.cols)?;
            let infeasibility = -reduced[self.cols];
            let scale = (0..self.rows)
                .map(|r| self.t[r * w + self.cols].abs())
                .fold(1.0_f64, f64::max);
            if infeasibility > 1e-9 * scale {
                return Err(LpError::Infeasible);
            }
            // Drive remaining (zero-valued) artificials out of the basis.
            for r in 0..self.rows {
                if self.basis[r] >= self.first_artificial {
                    let q = (0..self.first_artificial)
                        .max_by(|&a, &b| self.t[r * w + a].abs().total_cmp(&self.t[r * w + b].abs()));
                    if let Some(q) = q {
                        if self.t[r * w + q].abs() > 1e-9 {
                            self.pivot(r, q, &mut reduced);
                        }
                    }
                }
            }
        }
        let mut costs = vec![0.0; self.cols];
        for (col, &(v, sign)) in self.structural.iter().enumerate() {
            costs[col] = sign * lp.costs[v];
        }
        let mut reduced = self.reduced_costs(&costs);
        self.optimize(&mut reduced, self.first_artificial)?;

        let mut primal = vec![0.0; lp.kinds.len()];
        for (r, &b) in self.basis.iter().enumerate() {
            if b < self.structural.len() {
                let (v, sign) = self.structural[b];
                primal[v] += sign * self.t[r * w + self.cols];
            }
        }
        // Each row's identity column has zero cost, so its reduced cost is -y.
        let duals: Vec<f64> = (0..self.rows)
            .map(|r| -reduced[self.unit_col[r]] * self.flip[r])
            .map(|y| if y == 0.0 { 0.0 } else { y })
            .collect();
        let objective = primal.iter().zip(&lp.costs).map(|(x, c)| x * c).sum();
        Ok(LpSolution {
            objective,
            primal,
            duals,
            pivots: self.pivots,
        })
    }
}
