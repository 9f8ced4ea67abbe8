//! Revised bounded-variable primal simplex.
//!
//! Every row `a_i x` gets an activity variable `s_i = a_i x` whose bounds
//! encode the row sense, so the working system is `A x - s = 0` with all
//! variables boxed (possibly by infinite bounds) and the all-activity basis
//! `-I` always available.
//!
//! The basis is held as a sparse LU factorization plus a product-form update
//! per pivot and is refactored every [`REFACTOR_EVERY`] pivots, when the
//! basic values are also recomputed from the original data.
//!
//! Phase 1 minimizes the sum of bound violations of the basic variables
//! directly, without artificials, which also makes warm starts from an
//! arbitrary basis trivial. Dantzig pricing is used with a two-pass (Harris)
//! ratio test; after a run of degenerate pivots Bland's rule takes over until
//! the next improving step.

use super::lu::SparseLu;
use super::{Basis, LpSolution, LpSolver, LpStatus, SolverCapabilities, VarRef};
use crate::model::{LinearProgram, RowSense, Sense};
use crate::Error;
use std::time::{Duration, Instant};

const REFACTOR_EVERY: usize = 64;
const MAX_PERTURBATIONS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PivotRule {
    /// Largest reduced cost, switching to Bland's rule while stalled.
    Dantzig,
    /// Smallest-index rule throughout.
    Bland,
}

#[derive(Debug, Clone)]
pub struct SimplexOptions {
    pub pivot_rule: PivotRule,
    pub max_iterations: usize,
    pub time_limit: Option<Duration>,
    pub feasibility_tol: f64,
    pub optimality_tol: f64,
    pub pivot_tol: f64,
    /// Degenerate pivots in a row before Bland's rule kicks in.
    pub stall_threshold: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions {
            pivot_rule: PivotRule::Dantzig,
            max_iterations: 1_000_000,
            time_limit: None,
            feasibility_tol: 1e-9,
            optimality_tol: 1e-9,
            pivot_tol: 1e-9,
            stall_threshold: 40,
        }
    }
}

/// The built-in solver.
#[derive(Debug, Clone, Default)]
pub struct SimplexSolver {
    pub options: SimplexOptions,
}

impl SimplexSolver {
    pub fn new(options: SimplexOptions) -> Self {
        SimplexSolver { options }
    }
}

impl LpSolver for SimplexSolver {
    fn name(&self) -> &str {
        "builtin"
    }

    fn capabilities(&self) -> SolverCapabilities {
        SolverCapabilities {
            max_rows: Some(2000),
            max_cols: Some(2000),
            warm_start: true,
        }
    }

    fn solve(&mut self, lp: &LinearProgram) -> Result<LpSolution, Error> {
        Ok(run(lp, None, &self.options))
    }

    fn solve_from(
        &mut self,
        lp: &LinearProgram,
        basis: Option<&Basis>,
    ) -> Result<LpSolution, Error> {
        Ok(run(lp, basis, &self.options))
    }
}

/// Solves `lp` with default options.
pub fn simplex_solve(lp: &LinearProgram) -> LpSolution {
    run(lp, None, &SimplexOptions::default())
}

pub fn simplex_solve_with(
    lp: &LinearProgram,
    basis: Option<&Basis>,
    options: &SimplexOptions,
) -> LpSolution {
    run(lp, basis, options)
}

const NOT_BASIC: usize = usize::MAX;

struct Eta {
    pos: usize,
    pivot: f64,
    others: Vec<(usize, f64)>,
}

struct Revised {
    m: usize,
    n: usize,
    cols: usize,
    a_cols: Vec<Vec<(usize, f64)>>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    val: Vec<f64>,
    cost: Vec<f64>,
    basis: Vec<usize>,
    pos_of: Vec<usize>,
    lu: SparseLu,
    etas: Vec<Eta>,
    /// Original bounds while some are widened against stalling.
    saved_bounds: Option<(Vec<f64>, Vec<f64>)>,
}

enum Step {
    Flip,
    Pivot(usize),
}

fn initial_value(lo: f64, hi: f64) -> f64 {
    if lo.is_finite() {
        lo
    } else if hi.is_finite() {
        hi
    } else {
        0.0
    }
}

impl Revised {
    fn new(lp: &LinearProgram, hint: Option<&Basis>) -> Self {
        let m = lp.num_rows();
        let n = lp.num_vars();
        let cols = n + m;
        let mut a_cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for (i, row) in lp.rows.iter().enumerate() {
            for &(j, a) in row {
                if a != 0.0 {
                    a_cols[j].push((i, a));
                }
            }
        }
        let mut lo = lp.var_lower.clone();
        let mut hi = lp.var_upper.clone();
        for i in 0..m {
            let b = lp.rhs[i];
            let (l, h) = match lp.row_sense[i] {
                RowSense::Le => (f64::NEG_INFINITY, b),
                RowSense::Ge => (b, f64::INFINITY),
                RowSense::Eq => (b, b),
            };
            lo.push(l);
            hi.push(h);
        }
        let sign = match lp.sense {
            Sense::Minimize => 1.0,
            Sense::Maximize => -1.0,
        };
        let mut cost: Vec<f64> = lp.objective.iter().map(|c| sign * c).collect();
        cost.resize(cols, 0.0);
        let mut val: Vec<f64> = (0..cols).map(|j| initial_value(lo[j], hi[j])).collect();

        let index_of = |r: VarRef| match r {
            VarRef::Column(j) if j < n => Some(j),
            VarRef::Row(i) if i < m => Some(n + i),
            _ => None,
        };
        let mut basis = Vec::with_capacity(m);
        let mut pos_of = vec![NOT_BASIC; cols];
        if let Some(h) = hint {
            for &r in &h.basic {
                if let Some(j) = index_of(r) {
                    if pos_of[j] == NOT_BASIC && basis.len() < m {
                        pos_of[j] = basis.len();
                        basis.push(j);
                    }
                }
            }
            for &r in &h.at_upper {
                if let Some(j) = index_of(r) {
                    if hi[j].is_finite() {
                        val[j] = hi[j];
                    }
                }
            }
        }
        // appended rows come last, so their activities are the natural fill
        for i in (0..m).rev() {
            if basis.len() == m {
                break;
            }
            if pos_of[n + i] == NOT_BASIC {
                pos_of[n + i] = basis.len();
                basis.push(n + i);
            }
        }
        let mut s = Revised {
            m,
            n,
            cols,
            a_cols,
            lo,
            hi,
            val,
            cost,
            basis,
            pos_of,
            lu: SparseLu::factor(0, &[], 0.0).expect("empty factorization"),
            etas: Vec::new(),
            saved_bounds: None,
        };
        s.refactor();
        s
    }

    fn column(&self, j: usize) -> Vec<(usize, f64)> {
        if j < self.n {
            self.a_cols[j].clone()
        } else {
            vec![(j - self.n, -1.0)]
        }
    }

    fn refactor(&mut self) {
        loop {
            let columns: Vec<Vec<(usize, f64)>> =
                self.basis.iter().map(|&j| self.column(j)).collect();
            match SparseLu::factor(self.m, &columns, 1e-11) {
                Ok(lu) => {
                    self.lu = lu;
                    break;
                }
                Err(sing) => {
                    // swap dependent columns for the activities of uncovered rows
                    for (&p, &r) in sing.positions.iter().zip(&sing.rows) {
                        let out = self.basis[p];
                        self.pos_of[out] = NOT_BASIC;
                        self.val[out] = nearest_bound(self.val[out], self.lo[out], self.hi[out]);
                        let slack = self.n + r;
                        self.basis[p] = slack;
                        self.pos_of[slack] = p;
                    }
                }
            }
        }
        self.etas.clear();
        self.recompute_basic_values();
    }

    fn recompute_basic_values(&mut self) {
        let mut rhs = vec![0.0; self.m];
        for j in 0..self.cols {
            if self.pos_of[j] != NOT_BASIC || self.val[j] == 0.0 {
                continue;
            }
            for (i, a) in self.column(j) {
                rhs[i] -= a * self.val[j];
            }
        }
        let z = self.ftran_dense(rhs);
        for p in 0..self.m {
            self.val[self.basis[p]] = z[p];
        }
    }

    fn ftran_dense(&self, mut a: Vec<f64>) -> Vec<f64> {
        let mut z = vec![0.0; self.m];
        self.lu.ftran(&mut a, &mut z);
        for eta in &self.etas {
            let zp = z[eta.pos] / eta.pivot;
            z[eta.pos] = zp;
            if zp != 0.0 {
                for &(i, a) in &eta.others {
                    z[i] -= a * zp;
                }
            }
        }
        z
    }

    fn ftran(&self, j: usize) -> Vec<f64> {
        let mut a = vec![0.0; self.m];
        for (i, v) in self.column(j) {
            a[i] = v;
        }
        self.ftran_dense(a)
    }

    /// `y` with `B^T y = c_B`, indexed by row.
    fn btran(&self, mut c: Vec<f64>) -> Vec<f64> {
        for eta in self.etas.iter().rev() {
            let mut v = c[eta.pos];
            for &(i, a) in &eta.others {
                v -= a * c[i];
            }
            c[eta.pos] = v / eta.pivot;
        }
        let mut y = vec![0.0; self.m];
        self.lu.btran(&mut c, &mut y);
        y
    }

    fn reduced_costs(&self, cost: &[f64], basic_cost: Vec<f64>) -> Vec<f64> {
        let y = self.btran(basic_cost);
        let mut d = cost.to_vec();
        for j in 0..self.n {
            if self.pos_of[j] == NOT_BASIC {
                d[j] -= self.a_cols[j].iter().map(|&(i, a)| y[i] * a).sum::<f64>();
            } else {
                d[j] = 0.0;
            }
        }
        for i in 0..self.m {
            let j = self.n + i;
            d[j] = if self.pos_of[j] == NOT_BASIC {
                cost[j] + y[i]
            } else {
                0.0
            };
        }
        d
    }

    fn tol_at(bound: f64, tol: f64) -> f64 {
        tol * (1.0 + bound.abs())
    }

    fn below(&self, j: usize, tol: f64) -> bool {
        self.val[j] < self.lo[j] - Self::tol_at(self.lo[j], tol)
    }

    fn above(&self, j: usize, tol: f64) -> bool {
        self.val[j] > self.hi[j] + Self::tol_at(self.hi[j], tol)
    }

    /// Phase-1 cost per basis position, or `None` when the basis is feasible.
    fn infeasibility_costs(&self, tol: f64) -> Option<Vec<f64>> {
        let mut any = false;
        let c = self
            .basis
            .iter()
            .map(|&b| {
                if self.below(b, tol) {
                    any = true;
                    -1.0
                } else if self.above(b, tol) {
                    any = true;
                    1.0
                } else {
                    0.0
                }
            })
            .collect();
        any.then_some(c)
    }

    fn price(&self, d: &[f64], tol: f64, bland: bool) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64, f64)> = None;
        for j in 0..self.cols {
            if self.pos_of[j] != NOT_BASIC || self.lo[j] == self.hi[j] {
                continue;
            }
            let dir = if d[j] < -tol && self.val[j] < self.hi[j] {
                1.0
            } else if d[j] > tol && self.val[j] > self.lo[j] {
                -1.0
            } else {
                continue;
            };
            if bland {
                return Some((j, dir));
            }
            let score = d[j].abs();
            if best.is_none_or(|(_, _, s)| score > s) {
                best = Some((j, dir, score));
            }
        }
        best.map(|(j, dir, _)| (j, dir))
    }

    /// Bound that basic variable `b` runs into when moving at `rate`, if any.
    fn blocking_bound(&self, b: usize, rate: f64, phase1: bool, tol: f64) -> Option<f64> {
        let target = if rate > 0.0 {
            if phase1 && self.above(b, tol) {
                return None;
            }
            if phase1 && self.below(b, tol) {
                self.lo[b]
            } else {
                self.hi[b]
            }
        } else {
            if phase1 && self.below(b, tol) {
                return None;
            }
            if phase1 && self.above(b, tol) {
                self.hi[b]
            } else {
                self.lo[b]
            }
        };
        target.is_finite().then_some(target)
    }

    fn ratio_test(
        &self,
        q: usize,
        dir: f64,
        alpha: &[f64],
        phase1: bool,
        opts: &SimplexOptions,
        bland: bool,
    ) -> Option<(f64, Step)> {
        let tol = opts.feasibility_tol;
        let own = if dir > 0.0 {
            self.hi[q] - self.val[q]
        } else {
            self.val[q] - self.lo[q]
        };
        let candidates: Vec<(usize, f64, f64, f64)> = (0..self.m)
            .filter(|&p| alpha[p].abs() > opts.pivot_tol)
            .filter_map(|p| {
                let b = self.basis[p];
                let rate = -dir * alpha[p];
                let target = self.blocking_bound(b, rate, phase1, tol)?;
                let exact = ((target - self.val[b]) / rate).max(0.0);
                let relaxed =
                    ((target - self.val[b]) + rate.signum() * Self::tol_at(target, tol)) / rate;
                Some((p, exact, relaxed.max(0.0), alpha[p].abs()))
            })
            .collect();
        if bland {
            let mut best: Option<(usize, f64)> = None;
            for &(p, exact, _, _) in &candidates {
                let better = match best {
                    None => true,
                    Some((bp, bt)) => exact < bt || (exact == bt && self.basis[p] < self.basis[bp]),
                };
                if better {
                    best = Some((p, exact));
                }
            }
            return match best {
                Some((_, t)) if own <= t => Some((own, Step::Flip)),
                Some((p, t)) => Some((t, Step::Pivot(p))),
                None if own.is_finite() => Some((own, Step::Flip)),
                None => None,
            };
        }
        let bound = candidates.iter().map(|c| c.2).fold(f64::INFINITY, f64::min);
        if own.is_finite() && own <= bound {
            return Some((own, Step::Flip));
        }
        let chosen = candidates
            .iter()
            .filter(|c| c.1 <= bound)
            .max_by(|a, b| a.3.total_cmp(&b.3).then(b.0.cmp(&a.0)))?;
        Some((chosen.1, Step::Pivot(chosen.0)))
    }

    #[allow(clippy::too_many_arguments)]
    fn apply(
        &mut self,
        q: usize,
        dir: f64,
        t: f64,
        alpha: Vec<f64>,
        step: Step,
        phase1: bool,
        tol: f64,
    ) {
        // the leaving bound depends on which side of its bounds the variable starts
        let leaving_target = match step {
            Step::Pivot(p) => {
                let b = self.basis[p];
                Some(
                    self.blocking_bound(b, -dir * alpha[p], phase1, tol)
                        .unwrap_or_else(|| nearest_bound(self.val[b], self.lo[b], self.hi[b])),
                )
            }
            Step::Flip => None,
        };
        if t > 0.0 {
            self.val[q] += dir * t;
            for p in 0..self.m {
                if alpha[p] != 0.0 {
                    let b = self.basis[p];
                    self.val[b] -= dir * alpha[p] * t;
                }
            }
        }
        match step {
            Step::Flip => {
                self.val[q] = if dir > 0.0 { self.hi[q] } else { self.lo[q] };
            }
            Step::Pivot(p) => {
                let b = self.basis[p];
                self.val[b] = leaving_target.expect("pivot has a target");
                self.pos_of[b] = NOT_BASIC;
                self.basis[p] = q;
                self.pos_of[q] = p;
                let others = alpha
                    .iter()
                    .enumerate()
                    .filter(|&(i, &a)| i != p && a != 0.0)
                    .map(|(i, &a)| (i, a))
                    .collect();
                self.etas.push(Eta {
                    pos: p,
                    pivot: alpha[p],
                    others,
                });
                if self.etas.len() >= REFACTOR_EVERY {
                    self.refactor();
                }
            }
        }
    }

    /// Widens the bounds of the basic variables by small, distinct amounts so
    /// that degenerate basics gain room to move.
    fn perturb(&mut self, tol: f64) {
        if self.saved_bounds.is_none() {
            self.saved_bounds = Some((self.lo.clone(), self.hi.clone()));
        }
        let (orig_lo, orig_hi) = self.saved_bounds.as_ref().expect("saved bounds");
        for &b in &self.basis {
            let spread = 1.0 + ((b as u64).wrapping_mul(2_654_435_761) % 1000) as f64 / 1000.0;
            if self.lo[b] == orig_lo[b] && self.lo[b].is_finite() {
                self.lo[b] -= 1e3 * tol * spread * (1.0 + self.lo[b].abs());
            }
            if self.hi[b] == orig_hi[b] && self.hi[b].is_finite() {
                self.hi[b] += 1e3 * tol * spread * (1.0 + self.hi[b].abs());
            }
        }
    }

    /// Restores the original bounds, moving nonbasic variables back onto them.
    fn unperturb(&mut self) {
        let Some((lo, hi)) = self.saved_bounds.take() else {
            return;
        };
        self.lo = lo;
        self.hi = hi;
        for j in 0..self.cols {
            if self.pos_of[j] == NOT_BASIC {
                let v = self.val[j];
                if v != self.lo[j] && v != self.hi[j] {
                    self.val[j] = nearest_bound(v, self.lo[j], self.hi[j]);
                }
            }
        }
        self.refactor();
    }

    fn var_ref(&self, j: usize) -> VarRef {
        if j < self.n {
            VarRef::Column(j)
        } else {
            VarRef::Row(j - self.n)
        }
    }

    fn basis_snapshot(&self) -> Basis {
        Basis {
            basic: self.basis.iter().map(|&j| self.var_ref(j)).collect(),
            at_upper: (0..self.cols)
                .filter(|&j| {
                    self.pos_of[j] == NOT_BASIC
                        && self.val[j] == self.hi[j]
                        && self.lo[j] != self.hi[j]
                })
                .map(|j| self.var_ref(j))
                .collect(),
        }
    }
}

fn nearest_bound(v: f64, lo: f64, hi: f64) -> f64 {
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => {
            if (v - lo).abs() <= (hi - v).abs() {
                lo
            } else {
                hi
            }
        }
        (true, false) => lo,
        (false, true) => hi,
        (false, false) => 0.0,
    }
}

fn run(lp: &LinearProgram, hint: Option<&Basis>, opts: &SimplexOptions) -> LpSolution {
    let start = Instant::now();
    let n = lp.num_vars();
    let finish = |status: LpStatus, s: Option<&Revised>, iterations: usize| {
        let x: Vec<f64> = match s {
            Some(s) => s.val[..n].to_vec(),
            None => vec![0.0; n],
        };
        let duals = match s {
            Some(s) if status == LpStatus::Optimal => {
                let sign = if lp.sense == Sense::Maximize {
                    -1.0
                } else {
                    1.0
                };
                let cb: Vec<f64> = s.basis.iter().map(|&b| s.cost[b]).collect();
                let y = s.btran(cb);
                Some(y.into_iter().map(|v| sign * v).collect())
            }
            _ => None,
        };
        LpSolution {
            status,
            objective: lp.objective_value(&x),
            x,
            duals,
            iterations,
            wall_time: start.elapsed(),
            basis: s
                .filter(|_| status == LpStatus::Optimal)
                .map(Revised::basis_snapshot),
        }
    };

    if lp
        .var_lower
        .iter()
        .zip(&lp.var_upper)
        .any(|(l, h)| l > h || *l == f64::INFINITY || *h == f64::NEG_INFINITY)
    {
        return finish(LpStatus::Infeasible, None, 0);
    }

    let mut s = Revised::new(lp, hint);
    let tol = opts.feasibility_tol;
    let mut iterations = 0;
    let mut degenerate_run = 0;
    let mut perturbations = 0;
    // a conclusion is only trusted right after a refactorization
    let mut fresh = true;
    loop {
        if iterations >= opts.max_iterations
            || opts
                .time_limit
                .is_some_and(|lim| iterations % 16 == 0 && start.elapsed() > lim)
        {
            return finish(LpStatus::Limit, Some(&s), iterations);
        }
        if degenerate_run >= opts.stall_threshold && perturbations < MAX_PERTURBATIONS {
            s.perturb(tol);
            perturbations += 1;
            degenerate_run = 0;
        }
        let bland = opts.pivot_rule == PivotRule::Bland || degenerate_run >= opts.stall_threshold;

        let infeasible = s.infeasibility_costs(tol);
        let phase1 = infeasible.is_some();
        let d = match infeasible {
            Some(c1) => s.reduced_costs(&vec![0.0; s.cols], c1),
            None => {
                let cb = s.basis.iter().map(|&b| s.cost[b]).collect();
                s.reduced_costs(&s.cost, cb)
            }
        };
        let Some((q, dir)) = s.price(&d, opts.optimality_tol, bland) else {
            if s.saved_bounds.is_some() {
                s.unperturb();
                fresh = true;
                continue;
            }
            if !fresh {
                s.refactor();
                fresh = true;
                continue;
            }
            let status = if phase1 {
                LpStatus::Infeasible
            } else {
                LpStatus::Optimal
            };
            return finish(status, Some(&s), iterations);
        };

        let alpha = s.ftran(q);
        let Some((t, step)) = s.ratio_test(q, dir, &alpha, phase1, opts, bland) else {
            if s.saved_bounds.is_some() {
                s.unperturb();
                fresh = true;
                continue;
            }
            if !fresh {
                s.refactor();
                fresh = true;
                continue;
            }
            if phase1 {
                // an improving phase-1 ray would be a numerical artifact
                return finish(LpStatus::Limit, Some(&s), iterations);
            }
            return finish(LpStatus::Unbounded, Some(&s), iterations);
        };
        if t <= 1e-12 {
            degenerate_run += 1;
        } else {
            degenerate_run = 0;
        }
        s.apply(q, dir, t, alpha, step, phase1, tol);
        fresh = false;
        iterations += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64) {
        assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }

    #[test]
    fn single_bound() {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![1.0]);
        lp.add_row(vec![(0, 1.0)], RowSense::Le, 10.0);
        let s = simplex_solve(&lp);
        assert_eq!(s.status, LpStatus::Optimal);
        assert_close(s.x[0], 10.0);
        assert_close(s.duals.unwrap()[0], 1.0);
    }

    #[test]
    fn textbook_max() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), 36
        let mut lp = LinearProgram::new(Sense::Maximize, vec![3.0, 5.0]);
        lp.add_row(vec![(0, 1.0)], RowSense::Le, 4.0);
        lp.add_row(vec![(1, 2.0)], RowSense::Le, 12.0);
        lp.add_row(vec![(0, 3.0), (1, 2.0)], RowSense::Le, 18.0);
        let s = simplex_solve(&lp);
        assert_eq!(s.status, LpStatus::Optimal);
        assert_close(s.objective, 36.0);
        assert_close(s.x[0], 2.0);
        assert_close(s.x[1], 6.0);
        let y = s.duals.unwrap();
        assert_close(y[0], 0.0);
        assert_close(y[1], 1.5);
        assert_close(y[2], 1.0);
    }

    #[test]
    fn phase_one_with_ge_and_eq_rows() {
        // min x + y, x + y >= 2, x - y = 1 -> (1.5, 0.5)
        let mut lp = LinearProgram::new(Sense::Minimize, vec![1.0, 1.0]);
        lp.add_row(vec![(0, 1.0), (1, 1.0)], RowSense::Ge, 2.0);
        lp.add_row(vec![(0, 1.0), (1, -1.0)], RowSense::Eq, 1.0);
        let s = simplex_solve(&lp);
        assert_eq!(s.status, LpStatus::Optimal);
        assert_close(s.x[0], 1.5);
        assert_close(s.x[1], 0.5);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![1.0]);
        lp.add_row(vec![(0, 1.0)], RowSense::Le, 1.0);
        lp.add_row(vec![(0, 1.0)], RowSense::Ge, 2.0);
        assert_eq!(simplex_solve(&lp).status, LpStatus::Infeasible);

        let mut lp = LinearProgram::new(Sense::Maximize, vec![1.0, 1.0]);
        lp.add_row(vec![(0, 1.0), (1, -1.0)], RowSense::Le, 1.0);
        assert_eq!(simplex_solve(&lp).status, LpStatus::Unbounded);

        let lp = LinearProgram::new(Sense::Minimize, vec![1.0]).with_bounds(vec![2.0], vec![1.0]);
        assert_eq!(simplex_solve(&lp).status, LpStatus::Infeasible);
    }

    #[test]
    fn variable_bounds_and_free_columns() {
        // min -x + y, x in [1, 3], y free, y >= x - 10, y >= -x
        let mut lp = LinearProgram::new(Sense::Minimize, vec![-1.0, 1.0])
            .with_bounds(vec![1.0, f64::NEG_INFINITY], vec![3.0, f64::INFINITY]);
        lp.add_row(vec![(1, 1.0), (0, -1.0)], RowSense::Ge, -10.0);
        lp.add_row(vec![(1, 1.0), (0, 1.0)], RowSense::Ge, 0.0);
        let s = simplex_solve(&lp);
        assert_eq!(s.status, LpStatus::Optimal);
        assert_close(s.x[0], 3.0);
        assert_close(s.x[1], -3.0);
        assert_close(s.objective, -6.0);
    }

    #[test]
    fn no_rows() {
        let lp = LinearProgram::new(Sense::Maximize, vec![1.0, -1.0])
            .with_bounds(vec![0.0, -2.0], vec![4.0, 5.0]);
        let s = simplex_solve(&lp);
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.x, vec![4.0, -2.0]);
    }

    #[test]
    fn degenerate_redundant_rows_terminate_under_bland() {
        // Repeated copies of the same constraints produce heavy degeneracy.
        let mut lp = LinearProgram::new(Sense::Maximize, vec![10.0, -57.0, -9.0, -24.0]);
        for _ in 0..3 {
            lp.add_row(
                vec![(0, 0.5), (1, -5.5), (2, -2.5), (3, 9.0)],
                RowSense::Le,
                0.0,
            );
            lp.add_row(
                vec![(0, 0.5), (1, -1.5), (2, -0.5), (3, 1.0)],
                RowSense::Le,
                0.0,
            );
        }
        lp.add_row(vec![(0, 1.0)], RowSense::Le, 1.0);
        lp.add_row(vec![(0, 1.0)], RowSense::Le, 1.0);
        for rule in [PivotRule::Bland, PivotRule::Dantzig] {
            let opts = SimplexOptions {
                pivot_rule: rule,
                stall_threshold: 0,
                ..Default::default()
            };
            let s = simplex_solve_with(&lp, None, &opts);
            assert_eq!(s.status, LpStatus::Optimal);
            assert_close(s.objective, 1.0);
        }
    }

    #[test]
    fn warm_start_after_adding_a_row() {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![3.0, 5.0]);
        lp.add_row(vec![(0, 1.0)], RowSense::Le, 4.0);
        lp.add_row(vec![(1, 2.0)], RowSense::Le, 12.0);
        lp.add_row(vec![(0, 3.0), (1, 2.0)], RowSense::Le, 18.0);
        let mut solver = SimplexSolver::default();
        let first = solver.solve(&lp).unwrap();
        lp.add_row(vec![(0, 1.0), (1, 1.0)], RowSense::Le, 7.0);
        let cold = solver.solve(&lp).unwrap();
        let warm = solver.solve_from(&lp, first.basis.as_ref()).unwrap();
        assert_eq!(warm.status, LpStatus::Optimal);
        assert_close(warm.objective, cold.objective);
        assert!(warm.iterations <= cold.iterations);
    }

    #[test]
    fn iteration_limit() {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![3.0, 5.0]);
        lp.add_row(vec![(0, 3.0), (1, 2.0)], RowSense::Le, 18.0);
        let opts = SimplexOptions {
            max_iterations: 0,
            ..Default::default()
        };
        assert_eq!(simplex_solve_with(&lp, None, &opts).status, LpStatus::Limit);
    }
}
