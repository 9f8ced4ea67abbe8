use super::{Basis, LpSolver, LpStatus};
use crate::model::{LinearProgram, MultiBandUncertaintySet, RowSense};
use crate::reformulate::{build_compact, CompactOptions};
use crate::separation::{
    assignment_cut, check_robust_with_tol, emit_cut, worst_case_deviation, BandChoice,
    VIOLATION_TOL,
};
use crate::Error;
use std::collections::HashSet;
use std::time::{Duration, Instant};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Compact,
    Cuts,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutLimits {
    /// Maximum number of separation rounds; `None` means `10 * m * n`.
    pub max_rounds: Option<usize>,
    pub tol: f64,
    pub time_limit: Option<Duration>,
}

impl Default for CutLimits {
    fn default() -> Self {
        CutLimits {
            max_rounds: None,
            tol: VIOLATION_TOL,
            time_limit: None,
        }
    }
}

/// Result of either robust route, in terms of the original columns.
#[derive(Debug, Clone, PartialEq)]
pub struct RobustSolution {
    pub route: Route,
    pub status: LpStatus,
    pub x: Vec<f64>,
    pub objective: f64,
    /// Separation rounds (zero for the compact route).
    pub rounds: usize,
    pub lp_iterations: usize,
    pub cuts_added: usize,
    /// Objective of each master LP solved, in order.
    pub objective_trace: Vec<f64>,
    /// Size of the LP that was solved last.
    pub final_lp_size: (usize, usize),
    pub solve_time: Duration,
    pub separate_time: Duration,
    pub total_time: Duration,
}

/// Builds the compact counterpart of a canonical instance and solves it once.
pub fn solve_compact(
    lp: &LinearProgram,
    u: &MultiBandUncertaintySet,
    solver: &mut dyn LpSolver,
    options: CompactOptions,
) -> Result<RobustSolution, Error> {
    let start = Instant::now();
    let cc = build_compact(lp, u, options)?;
    let t_solve = Instant::now();
    let sol = solver.solve(&cc.rlp)?;
    let solve_time = t_solve.elapsed();
    let x = cc.original_part(&sol.x);
    Ok(RobustSolution {
        route: Route::Compact,
        status: sol.status,
        objective: lp.objective_value(&x),
        x,
        rounds: 0,
        lp_iterations: sol.iterations,
        cuts_added: 0,
        objective_trace: vec![sol.objective],
        final_lp_size: (cc.rlp.num_vars(), cc.rlp.num_rows()),
        solve_time,
        separate_time: Duration::ZERO,
        total_time: start.elapsed(),
    })
}

/// Solves the nominal LP, then repeatedly adds one robustness cut per
/// violated row until the master solution is robust feasible.
///
/// A row whose profile forces coefficients into nonzero bands does not
/// admit the nominal scenario, so its nominal row need not be a relaxation.
/// The master replaces such a row by the cut of its worst-case assignment at
/// `x = 1`.
///
/// Cuts are never removed and each master LP is warm-started from the
/// previous basis. A round whose cuts were all added before ends the loop
/// with [`LpStatus::Limit`], as does running out of rounds or time.
pub fn solve_cutting_planes(
    lp: &LinearProgram,
    u: &MultiBandUncertaintySet,
    solver: &mut dyn LpSolver,
    limits: CutLimits,
) -> Result<RobustSolution, Error> {
    if let Some(row) = (0..lp.num_rows()).find(|&i| lp.row_sense[i] != RowSense::Le) {
        return Err(Error::NotCanonical { row });
    }
    let report = crate::model::validate(lp, u);
    if !report.is_valid() {
        return Err(Error::Invalid(report));
    }
    let start = Instant::now();
    let max_rounds = limits
        .max_rounds
        .unwrap_or(10 * lp.num_rows().max(1) * lp.num_vars().max(1));
    let mut working = lp.clone();
    let mut seen: HashSet<(usize, Vec<BandChoice>)> = HashSet::new();
    let ones = vec![1.0; lp.num_vars()];
    for i in 0..lp.num_rows() {
        let view = u.row(i);
        if view.profile.nonzero_lower_sum() == 0 || view.is_certain() {
            continue;
        }
        let (_, assignment) = worst_case_deviation(i, lp, u, &ones)?;
        let cut = assignment_cut(i, lp, u, &assignment);
        working.rows[i] = cut.coefs;
        seen.insert((i, assignment));
    }
    let mut basis: Option<Basis> = None;
    let mut out = RobustSolution {
        route: Route::Cuts,
        status: LpStatus::Limit,
        x: vec![0.0; lp.num_vars()],
        objective: f64::NAN,
        rounds: 0,
        lp_iterations: 0,
        cuts_added: 0,
        objective_trace: Vec::new(),
        final_lp_size: (lp.num_vars(), lp.num_rows()),
        solve_time: Duration::ZERO,
        separate_time: Duration::ZERO,
        total_time: Duration::ZERO,
    };
    loop {
        let t = Instant::now();
        let sol = solver.solve_from(&working, basis.as_ref())?;
        out.solve_time += t.elapsed();
        out.lp_iterations += sol.iterations;
        out.final_lp_size = (working.num_vars(), working.num_rows());
        out.status = sol.status;
        if sol.status != LpStatus::Optimal {
            break;
        }
        out.objective = lp.objective_value(&sol.x);
        out.objective_trace.push(sol.objective);
        out.x = sol.x;
        basis = sol.basis;

        let t = Instant::now();
        let certs = check_robust_with_tol(lp, u, &out.x, limits.tol)?;
        let mut added = 0;
        for cert in certs.iter().filter(|c| c.violated) {
            if seen.insert((cert.row, cert.assignment.clone())) {
                let cut = emit_cut(cert, lp, u)?;
                working.add_row(cut.coefs, RowSense::Le, cut.rhs);
                added += 1;
            }
        }
        out.separate_time += t.elapsed();
        let any_violated = certs.iter().any(|c| c.violated);
        if !any_violated {
            break;
        }
        out.cuts_added += added;
        out.rounds += 1;
        if added == 0
            || out.rounds >= max_rounds
            || limits.time_limit.is_some_and(|lim| start.elapsed() > lim)
        {
            out.status = LpStatus::Limit;
            break;
        }
    }
    out.total_time = start.elapsed();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{BandProfile, Sense};
    use crate::solver::SimplexSolver;

    fn one_by_one() -> (LinearProgram, MultiBandUncertaintySet) {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![1.0]);
        lp.add_row(vec![(0, 1.0)], RowSense::Le, 10.0);
        let mut u =
            MultiBandUncertaintySet::new(BandProfile::new(vec![0, 1], vec![0, 0], vec![1, 1]));
        u.insert(0, 0, vec![0.0, 0.5]);
        (lp, u)
    }

    #[test]
    fn one_cut_closes_the_gap() {
        let (lp, u) = one_by_one();
        let mut s = SimplexSolver::default();
        let r = solve_cutting_planes(&lp, &u, &mut s, CutLimits::default()).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert_eq!(r.cuts_added, 1);
        assert_eq!(r.rounds, 1);
        assert!((r.objective - 20.0 / 3.0).abs() < 1e-9);
        assert_eq!(r.objective_trace.len(), 2);
        assert!((r.objective_trace[0] - 10.0).abs() < 1e-12);
    }

    #[test]
    fn routes_agree_on_small_instance() {
        let (lp, u) = one_by_one();
        let mut s = SimplexSolver::default();
        let a = solve_compact(&lp, &u, &mut s, CompactOptions::default()).unwrap();
        let b = solve_cutting_planes(&lp, &u, &mut s, CutLimits::default()).unwrap();
        assert!((a.objective - b.objective).abs() < 1e-9);
    }

    #[test]
    fn forced_band_loosens_the_row() {
        // the only coefficient must drop to 0.5, so x may reach 20
        let mut lp = LinearProgram::new(Sense::Maximize, vec![1.0]);
        lp.add_row(vec![(0, 1.0)], RowSense::Le, 10.0);
        let mut u =
            MultiBandUncertaintySet::new(BandProfile::new(vec![-1, 0], vec![1, 0], vec![1, 1]));
        u.insert(0, 0, vec![-0.5, 0.0]);
        let mut s = SimplexSolver::default();
        let a = solve_compact(&lp, &u, &mut s, CompactOptions::default()).unwrap();
        let b = solve_cutting_planes(&lp, &u, &mut s, CutLimits::default()).unwrap();
        assert!((a.objective - 20.0).abs() < 1e-9);
        assert!((b.objective - 20.0).abs() < 1e-9);
        assert_eq!(b.cuts_added, 0);
    }

    #[test]
    fn round_limit() {
        let (lp, u) = one_by_one();
        let mut s = SimplexSolver::default();
        let limits = CutLimits {
            max_rounds: Some(1),
            ..Default::default()
        };
        let r = solve_cutting_planes(&lp, &u, &mut s, limits).unwrap();
        // the single round adds the cut, but its master LP is never re-solved
        assert_eq!(r.status, LpStatus::Limit);
    }
}
