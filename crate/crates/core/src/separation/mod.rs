//! Robust feasibility checks and robustness cuts.
//!
//! For a fixed `x >= 0`, the worst-case deviation of a `<=` row is the
//! optimum of a 0-1 assignment of coefficients to bands under per-band
//! cardinality bounds. That assignment problem is solved exactly as a
//! min-cost flow `s -> v_j -> w_k -> t`, whose cost is minus the deviation.
//!
//! Certain coefficients keep a `v_j` node with a single zero-cost arc into
//! band 0, so the flow value is always the number of columns.

mod budgeted;
mod flow;
pub mod oracle;

pub use budgeted::{bs_separation, BudgetedSet};
pub use flow::{min_cost_flow, FlowArc, FlowError, FlowNetwork, FlowNode, FlowSolution};

use crate::model::{LinearProgram, MultiBandUncertaintySet, RowSense};
use crate::Error;
use rayon::prelude::*;

/// Default relative tolerance for declaring a row violated.
pub const VIOLATION_TOL: f64 = 1e-6;

/// Entries of `x` above `-NEGATIVE_TOL` are accepted and clamped at zero.
pub const NEGATIVE_TOL: f64 = 1e-9;

/// Band `band` chosen for column `col`.
pub type BandChoice = (usize, i32);

/// Outcome of separating one row at a given `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct RobustnessCertificate {
    pub row: usize,
    pub worst_case_deviation: f64,
    /// Band of every uncertain coefficient in the worst case, by column.
    pub assignment: Vec<BandChoice>,
    pub lhs_nominal: f64,
    pub rhs: f64,
    pub violated: bool,
    pub violation_amount: f64,
}

/// A pure-`x` inequality `coefs . x <= rhs` cutting off a non-robust point.
#[derive(Debug, Clone, PartialEq)]
pub struct RobustnessCut {
    pub row: usize,
    pub assignment: Vec<BandChoice>,
    pub coefs: Vec<(usize, f64)>,
    pub rhs: f64,
}

impl RobustnessCut {
    pub fn lhs(&self, x: &[f64]) -> f64 {
        self.coefs.iter().map(|&(j, a)| a * x[j]).sum()
    }
}

fn check_row_canonical(lp: &LinearProgram, row: usize) -> Result<(), Error> {
    if lp.row_sense[row] != RowSense::Le {
        return Err(Error::NotCanonical { row });
    }
    Ok(())
}

/// Validates `x` against the column count and sign, clamping tiny negatives.
pub(crate) fn nonnegative_point(lp: &LinearProgram, x: &[f64]) -> Result<Vec<f64>, Error> {
    if x.len() != lp.num_vars() {
        return Err(Error::Dimension {
            expected: lp.num_vars(),
            found: x.len(),
        });
    }
    x.iter()
        .enumerate()
        .map(|(j, &v)| {
            if v < -NEGATIVE_TOL || v.is_nan() {
                Err(Error::NegativeValue { col: j, value: v })
            } else {
                Ok(v.max(0.0))
            }
        })
        .collect()
}

/// Builds the separation network of `row` at `x`.
///
/// Node order: `s`, `t`, one `v_j` per column, one `w_k` per band. Arc order:
/// `(s, v_j)` by `j`, `(v_j, w_k)` by `(j, k)`, `(w_k, t)` by `k`.
pub fn build_flow_instance(
    row: usize,
    lp: &LinearProgram,
    u: &MultiBandUncertaintySet,
    x: &[f64],
) -> Result<FlowNetwork, Error> {
    check_row_canonical(lp, row)?;
    let x = nonnegative_point(lp, x)?;
    let n = lp.num_vars();
    let view = u.row(row);
    let profile = view.profile;
    let nb = profile.num_bands();
    let zero = profile
        .zero_position()
        .ok_or_else(|| Error::Invalid(crate::model::validate(lp, u)))?;

    let mut nodes = vec![FlowNode::Source, FlowNode::Sink];
    nodes.extend((0..n).map(FlowNode::Coefficient));
    nodes.extend(profile.band_ids.iter().map(|&k| FlowNode::Band(k)));
    let v_node = |j: usize| 2 + j;
    let w_node = |p: usize| 2 + n + p;

    let mut arcs = Vec::with_capacity(n + n * nb + nb);
    for j in 0..n {
        arcs.push(FlowArc {
            from: 0,
            to: v_node(j),
            lower: 0,
            upper: 1,
            cost: 0.0,
        });
    }
    for j in 0..n {
        match view.breakpoints(j) {
            Some(d) => {
                for (p, &dk) in d.iter().enumerate() {
                    arcs.push(FlowArc {
                        from: v_node(j),
                        to: w_node(p),
                        lower: 0,
                        upper: 1,
                        cost: -dk * x[j],
                    });
                }
            }
            None => arcs.push(FlowArc {
                from: v_node(j),
                to: w_node(zero),
                lower: 0,
                upper: 1,
                cost: 0.0,
            }),
        }
    }
    for p in 0..nb {
        arcs.push(FlowArc {
            from: w_node(p),
            to: 1,
            lower: profile.lower[p] as i64,
            upper: profile.upper[p] as i64,
            cost: 0.0,
        });
    }
    Ok(FlowNetwork {
        nodes,
        arcs,
        source: 0,
        sink: 1,
        required_flow: n as i64,
    })
}

/// Reads the band of every column off an integral flow of a separation network.
pub fn decode_assignment(net: &FlowNetwork, flow: &[i64]) -> Vec<BandChoice> {
    let mut out = Vec::new();
    for (a, &f) in net.arcs.iter().zip(flow) {
        if f == 0 {
            continue;
        }
        if let (FlowNode::Coefficient(j), FlowNode::Band(k)) = (net.nodes[a.from], net.nodes[a.to])
        {
            out.push((j, k));
        }
    }
    out
}

/// Worst-case deviation of `row` at `x` and the band of each uncertain coefficient.
pub fn worst_case_deviation(
    row: usize,
    lp: &LinearProgram,
    u: &MultiBandUncertaintySet,
    x: &[f64],
) -> Result<(f64, Vec<BandChoice>), Error> {
    let view = u.row(row);
    if view.is_certain() {
        check_row_canonical(lp, row)?;
        nonnegative_point(lp, x)?;
        return Ok((0.0, Vec::new()));
    }
    let net = build_flow_instance(row, lp, u, x)?;
    let sol = min_cost_flow(&net)?;
    let assignment: Vec<BandChoice> = decode_assignment(&net, &sol.flow)
        .into_iter()
        .filter(|&(j, _)| view.breakpoints(j).is_some())
        .collect();
    let dev = deviation_of(lp, u, row, x, &assignment);
    Ok((dev, assignment))
}

/// `sum_j d_j^{k(j)} x_j` for an explicit assignment.
pub fn deviation_of(
    _lp: &LinearProgram,
    u: &MultiBandUncertaintySet,
    row: usize,
    x: &[f64],
    assignment: &[BandChoice],
) -> f64 {
    let view = u.row(row);
    assignment
        .iter()
        .map(|&(j, k)| {
            let d = view
                .breakpoints(j)
                .expect("assignment uses uncertain columns");
            let p = view.profile.position(k).expect("band in profile");
            d[p] * x[j].max(0.0)
        })
        .sum()
}

pub fn certify_row(
    row: usize,
    lp: &LinearProgram,
    u: &MultiBandUncertaintySet,
    x: &[f64],
    tol: f64,
) -> Result<RobustnessCertificate, Error> {
    let (dev, assignment) = worst_case_deviation(row, lp, u, x)?;
    let lhs = lp.row_activity(row, x);
    let b = lp.rhs[row];
    let excess = lhs + dev - b;
    Ok(RobustnessCertificate {
        row,
        worst_case_deviation: dev,
        assignment,
        lhs_nominal: lhs,
        rhs: b,
        violated: excess > tol * b.abs().max(1.0),
        violation_amount: excess.max(0.0),
    })
}

/// One certificate per row; `x` is robust feasible iff none is violated.
pub fn check_robust(
    lp: &LinearProgram,
    u: &MultiBandUncertaintySet,
    x: &[f64],
) -> Result<Vec<RobustnessCertificate>, Error> {
    check_robust_with_tol(lp, u, x, VIOLATION_TOL)
}

pub fn check_robust_with_tol(
    lp: &LinearProgram,
    u: &MultiBandUncertaintySet,
    x: &[f64],
    tol: f64,
) -> Result<Vec<RobustnessCertificate>, Error> {
    nonnegative_point(lp, x)?;
    (0..lp.num_rows())
        .into_par_iter()
        .map(|i| certify_row(i, lp, u, x, tol))
        .collect()
}

/// Cut from a violated certificate: column `j` gets `a_ij + d_ij^{k(j)}`.
pub fn emit_cut(
    cert: &RobustnessCertificate,
    lp: &LinearProgram,
    u: &MultiBandUncertaintySet,
) -> Result<RobustnessCut, Error> {
    if !cert.violated {
        return Err(Error::NotViolated { row: cert.row });
    }
    Ok(assignment_cut(cert.row, lp, u, &cert.assignment))
}

/// The row of `lp` with every coefficient moved to its band in `assignment`.
/// Valid for all robust solutions whenever the assignment is feasible for the
/// row's band bounds.
pub fn assignment_cut(
    row: usize,
    lp: &LinearProgram,
    u: &MultiBandUncertaintySet,
    assignment: &[BandChoice],
) -> RobustnessCut {
    let view = u.row(row);
    let mut coefs: std::collections::BTreeMap<usize, f64> = lp.rows[row].iter().copied().collect();
    for &(j, k) in assignment {
        let d = view
            .breakpoints(j)
            .expect("assignment uses uncertain columns");
        let p = view.profile.position(k).expect("band in profile");
        *coefs.entry(j).or_insert(0.0) += d[p];
    }
    RobustnessCut {
        row,
        assignment: assignment.to_vec(),
        coefs: coefs.into_iter().filter(|&(_, a)| a != 0.0).collect(),
        rhs: lp.rhs[row],
    }
}
