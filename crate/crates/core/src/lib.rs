//! Robust linear programming under multi-band coefficient uncertainty.
//!
//! Every uncertain coefficient `a_ij` deviates from its nominal value by an
//! amount that falls into one of a few bands, and per-row bounds limit how
//! many coefficients may fall into each band. The crate checks robust
//! feasibility with a min-cost flow, builds the compact robust counterpart,
//! and solves the robust problem either through that counterpart or by
//! separating robustness cuts.

#![allow(clippy::needless_range_loop)]

mod error;
pub mod instances;
pub mod model;
pub mod reformulate;
pub mod separation;
pub mod solver;

pub use error::Error;
pub use model::{
    canonicalize, validate, BandProfile, CanonicalForm, CanonicalizeMode, LinearProgram,
    MultiBandUncertaintySet, RowSense, Sense, ValidationReport,
};
pub use reformulate::{build_compact, CompactCounterpart, CompactOptions};
pub use separation::{
    check_robust, emit_cut, worst_case_deviation, BudgetedSet, RobustnessCertificate, RobustnessCut,
};
pub use solver::{
    solve_compact, solve_cutting_planes, CutLimits, LpSolution, LpSolver, LpStatus, RobustSolution,
    SimplexSolver,
};
