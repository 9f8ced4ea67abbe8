//! Nominal linear programs and multi-band uncertainty sets.

mod bands;
mod canonical;
pub mod io;
mod validate;

pub use bands::{BandProfile, MultiBandUncertaintySet, RowUncertainty};
pub use canonical::{canonicalize, CanonicalForm, CanonicalizeMode, RowOrigin};
pub use validate::{validate, ValidationReport, Violation};

use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Maximize,
    Minimize,
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sense::Maximize => f.write_str("maximize"),
            Sense::Minimize => f.write_str("minimize"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RowSense {
    Le,
    Ge,
    Eq,
}

impl RowSense {
    pub fn symbol(self) -> &'static str {
        match self {
            RowSense::Le => "<=",
            RowSense::Ge => ">=",
            RowSense::Eq => "=",
        }
    }

    /// Whether `lhs` satisfies `lhs (sense) rhs` up to `tol`.
    pub fn holds(self, lhs: f64, rhs: f64, tol: f64) -> bool {
        match self {
            RowSense::Le => lhs <= rhs + tol,
            RowSense::Ge => lhs >= rhs - tol,
            RowSense::Eq => (lhs - rhs).abs() <= tol,
        }
    }
}

impl fmt::Display for RowSense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// A nominal linear program with sparse rows.
///
/// Rows hold `(column, nominal coefficient)` pairs. Variable bounds default to
/// `[0, +inf)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<f64>,
    pub rows: Vec<Vec<(usize, f64)>>,
    pub row_sense: Vec<RowSense>,
    pub rhs: Vec<f64>,
    pub var_lower: Vec<f64>,
    pub var_upper: Vec<f64>,
}

impl LinearProgram {
    /// An LP with `objective.len()` nonnegative variables and no rows.
    pub fn new(sense: Sense, objective: Vec<f64>) -> Self {
        let n = objective.len();
        LinearProgram {
            sense,
            objective,
            rows: Vec::new(),
            row_sense: Vec::new(),
            rhs: Vec::new(),
            var_lower: vec![0.0; n],
            var_upper: vec![f64::INFINITY; n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// Appends a row and returns its index.
    pub fn add_row(&mut self, coefs: Vec<(usize, f64)>, sense: RowSense, rhs: f64) -> usize {
        self.rows.push(coefs);
        self.row_sense.push(sense);
        self.rhs.push(rhs);
        self.rows.len() - 1
    }

    pub fn with_bounds(mut self, lower: Vec<f64>, upper: Vec<f64>) -> Self {
        self.var_lower = lower;
        self.var_upper = upper;
        self
    }

    /// Nominal coefficient at `(row, col)`, zero when structurally absent.
    pub fn coef(&self, row: usize, col: usize) -> f64 {
        self.rows[row]
            .iter()
            .find(|&&(j, _)| j == col)
            .map_or(0.0, |&(_, v)| v)
    }

    pub fn row_activity(&self, row: usize, x: &[f64]) -> f64 {
        self.rows[row].iter().map(|&(j, a)| a * x[j]).sum()
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    pub fn is_canonical(&self) -> bool {
        self.row_sense.iter().all(|&s| s == RowSense::Le)
    }

    /// Largest violation of rows and bounds at `x`, scaled per row by `1 + |b|`.
    pub fn max_scaled_residual(&self, x: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.num_rows() {
            let lhs = self.row_activity(i, x);
            let b = self.rhs[i];
            let viol = match self.row_sense[i] {
                RowSense::Le => lhs - b,
                RowSense::Ge => b - lhs,
                RowSense::Eq => (lhs - b).abs(),
            };
            worst = worst.max(viol / (1.0 + b.abs()));
        }
        for (j, &v) in x.iter().enumerate() {
            worst = worst.max(self.var_lower[j] - v).max(v - self.var_upper[j]);
        }
        worst
    }
}
