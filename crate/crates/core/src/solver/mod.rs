//! LP solving: the solver abstraction, the built-in simplex, an external
//! process adapter, and the two robust solution routes.

mod cuts;
mod external;
mod lu;
mod report;
pub mod simplex;

pub use cuts::{solve_compact, solve_cutting_planes, CutLimits, RobustSolution, Route};
pub use external::{parse_reply, ExecSolver};
pub use report::{price_of_robustness, SolveReport, Timings};
pub use simplex::{simplex_solve, PivotRule, SimplexOptions, SimplexSolver};

use crate::model::LinearProgram;
use crate::Error;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::time::Duration;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    /// Iteration or time limit reached before a conclusion.
    Limit,
}

impl fmt::Display for LpStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LpStatus::Optimal => "optimal",
            LpStatus::Infeasible => "infeasible",
            LpStatus::Unbounded => "unbounded",
            LpStatus::Limit => "limit",
        })
    }
}

impl std::str::FromStr for LpStatus {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "optimal" => Ok(LpStatus::Optimal),
            "infeasible" => Ok(LpStatus::Infeasible),
            "unbounded" => Ok(LpStatus::Unbounded),
            "limit" => Ok(LpStatus::Limit),
            other => Err(format!("unknown status `{other}`")),
        }
    }
}

/// A structural column or the activity variable of a row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarRef {
    Column(usize),
    Row(usize),
}

/// Basis description usable as a warm start. Variables not listed as basic
/// sit at their lower bound unless listed in `at_upper`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Basis {
    pub basic: Vec<VarRef>,
    pub at_upper: Vec<VarRef>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub x: Vec<f64>,
    pub objective: f64,
    /// Row duals in the sign convention of the LP's own sense, when known.
    pub duals: Option<Vec<f64>>,
    pub iterations: usize,
    pub wall_time: Duration,
    pub basis: Option<Basis>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverCapabilities {
    pub max_rows: Option<usize>,
    pub max_cols: Option<usize>,
    pub warm_start: bool,
}

pub trait LpSolver {
    fn name(&self) -> &str;

    fn capabilities(&self) -> SolverCapabilities;

    fn solve(&mut self, lp: &LinearProgram) -> Result<LpSolution, Error>;

    /// Solve starting from `basis` when the solver supports warm starts.
    fn solve_from(
        &mut self,
        lp: &LinearProgram,
        basis: Option<&Basis>,
    ) -> Result<LpSolution, Error> {
        let _ = basis;
        self.solve(lp)
    }
}

impl<S: LpSolver + ?Sized> LpSolver for Box<S> {
    fn name(&self) -> &str {
        (**self).name()
    }

    fn capabilities(&self) -> SolverCapabilities {
        (**self).capabilities()
    }

    fn solve(&mut self, lp: &LinearProgram) -> Result<LpSolution, Error> {
        (**self).solve(lp)
    }

    fn solve_from(
        &mut self,
        lp: &LinearProgram,
        basis: Option<&Basis>,
    ) -> Result<LpSolution, Error> {
        (**self).solve_from(lp, basis)
    }
}
