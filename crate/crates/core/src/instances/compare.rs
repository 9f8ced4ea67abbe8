use super::{bs_from_mb, evaluate_protection, DeviationDistribution};
use crate::model::{canonicalize, CanonicalizeMode, LinearProgram, MultiBandUncertaintySet};
use crate::reformulate::{build_compact, CompactOptions};
use crate::solver::{
    price_of_robustness, solve_compact, solve_cutting_planes, CutLimits, LpSolver, LpStatus,
    RobustSolution,
};
use crate::Error;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompareOptions {
    pub realizations: usize,
    pub seed: u64,
    pub cut_limits: CutLimits,
    pub compact: CompactOptions,
    /// Condition protection draws on this maximum relative deviation.
    pub truncate: Option<f64>,
}

impl Default for CompareOptions {
    fn default() -> Self {
        CompareOptions {
            realizations: 1000,
            seed: 1,
            cut_limits: CutLimits::default(),
            compact: CompactOptions::default(),
            truncate: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareTimings {
    pub compact_ms: f64,
    pub cuts_ms: f64,
    /// `100 * (t_cuts - t_compact) / t_compact`.
    pub dt_pct: f64,
}

/// One line of the route and model comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub rows: usize,
    pub cols: usize,
    /// Rows and columns added by the compact counterpart of the multi-band set.
    pub added_rows: usize,
    pub added_vars: usize,
    pub nominal_objective: f64,
    pub mb_objective: f64,
    pub mb_cuts_objective: f64,
    pub bs_objective: f64,
    pub por_mb: Option<f64>,
    pub por_bs: Option<f64>,
    pub cuts_added: usize,
    pub rounds: usize,
    pub protect_nominal: f64,
    pub protect_mb: f64,
    pub protect_bs: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timings: Option<CompareTimings>,
}

fn require_optimal(context: &str, status: LpStatus) -> Result<(), Error> {
    if status == LpStatus::Optimal {
        Ok(())
    } else {
        Err(Error::Solver {
            context: context.into(),
            status,
        })
    }
}

/// Solves the nominal problem, the multi-band robust problem by both routes
/// and the budgeted baseline derived with [`bs_from_mb`], then measures each
/// solution's protection against `dist` on the original rows.
pub fn compare(
    lp: &LinearProgram,
    u: &MultiBandUncertaintySet,
    dist: &DeviationDistribution,
    solver: &mut dyn LpSolver,
    opts: &CompareOptions,
) -> Result<CompareRow, Error> {
    let canon = canonicalize(lp, u, CanonicalizeMode::SplitEqualities)?;
    let nominal = solver.solve(lp)?;
    require_optimal("nominal", nominal.status)?;

    let cc = build_compact(&canon.lp, &canon.uncertainty, opts.compact)?;
    let mb: RobustSolution = solve_compact(&canon.lp, &canon.uncertainty, solver, opts.compact)?;
    require_optimal("multi-band compact", mb.status)?;
    let cuts = solve_cutting_planes(&canon.lp, &canon.uncertainty, solver, opts.cut_limits)?;
    require_optimal("multi-band cutting planes", cuts.status)?;

    let bs = bs_from_mb(&canon.uncertainty, canon.lp.num_rows()).to_multiband(canon.lp.num_vars());
    let bs_sol = solve_compact(&canon.lp, &bs, solver, opts.compact)?;
    require_optimal("budgeted baseline", bs_sol.status)?;

    let protect = |x: &[f64]| -> Result<f64, Error> {
        Ok(
            evaluate_protection(lp, x, dist, opts.realizations, opts.seed, opts.truncate)?
                .protect_pct,
        )
    };
    let t_compact = mb.total_time.as_secs_f64();
    let t_cuts = cuts.total_time.as_secs_f64();
    Ok(CompareRow {
        rows: lp.num_rows(),
        cols: lp.num_vars(),
        added_rows: cc.added_rows(),
        added_vars: cc.added_vars(),
        nominal_objective: nominal.objective,
        mb_objective: mb.objective,
        mb_cuts_objective: cuts.objective,
        bs_objective: bs_sol.objective,
        por_mb: price_of_robustness(lp.sense, nominal.objective, mb.objective),
        por_bs: price_of_robustness(lp.sense, nominal.objective, bs_sol.objective),
        cuts_added: cuts.cuts_added,
        rounds: cuts.rounds,
        protect_nominal: protect(&nominal.x)?,
        protect_mb: protect(&mb.x)?,
        protect_bs: protect(&bs_sol.x)?,
        timings: Some(CompareTimings {
            compact_ms: t_compact * 1e3,
            cuts_ms: t_cuts * 1e3,
            dt_pct: if t_compact > 0.0 {
                100.0 * (t_cuts - t_compact) / t_compact
            } else {
                0.0
            },
        }),
    })
}
