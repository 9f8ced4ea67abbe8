#![allow(dead_code)]

use multiband_core::instances::random::{random_instance, RandomSpec};
use multiband_core::{BandProfile, LinearProgram, MultiBandUncertaintySet, RowSense, Sense};

/// Every band assignment of a row's uncertain coefficients that the profile
/// admits, as `(column, band)` lists. Certain coefficients may only occupy
/// band 0 and are counted there as needed.
pub fn feasible_assignments(
    lp: &LinearProgram,
    u: &MultiBandUncertaintySet,
    row: usize,
) -> Vec<Vec<(usize, i32)>> {
    let profile = u.profile_for(row).clone();
    let cols: Vec<usize> = (0..lp.num_vars())
        .filter(|j| u.deviations.contains_key(&(row, *j)))
        .collect();
    let certain = lp.num_vars() - cols.len();
    let zero = profile
        .band_ids
        .iter()
        .position(|&k| k == 0)
        .expect("band 0");
    let mut out = Vec::new();
    let mut current = Vec::new();
    let mut counts = vec![0; profile.band_ids.len()];
    walk(
        &cols,
        0,
        &profile,
        zero,
        certain,
        &mut counts,
        &mut current,
        &mut out,
    );
    out
}

#[allow(clippy::too_many_arguments)]
fn walk(
    cols: &[usize],
    idx: usize,
    profile: &BandProfile,
    zero: usize,
    certain: usize,
    counts: &mut Vec<usize>,
    current: &mut Vec<(usize, i32)>,
    out: &mut Vec<Vec<(usize, i32)>>,
) {
    if idx == cols.len() {
        let ok = (0..counts.len()).all(|p| {
            if p == zero {
                counts[p] <= profile.upper[p] && counts[p] + certain >= profile.lower[p]
            } else {
                profile.lower[p] <= counts[p] && counts[p] <= profile.upper[p]
            }
        });
        if ok {
            out.push(current.clone());
        }
        return;
    }
    walk(cols, idx + 1, profile, zero, certain, counts, current, out);
    for p in 0..counts.len() {
        if counts[p] < profile.upper[p] {
            counts[p] += 1;
            current.push((cols[idx], profile.band_ids[p]));
            walk(cols, idx + 1, profile, zero, certain, counts, current, out);
            current.pop();
            counts[p] -= 1;
        }
    }
}

pub fn assignment_value(
    u: &MultiBandUncertaintySet,
    row: usize,
    x: &[f64],
    assignment: &[(usize, i32)],
) -> f64 {
    let profile = u.profile_for(row);
    assignment
        .iter()
        .map(|&(j, k)| {
            let p = profile.band_ids.iter().position(|&b| b == k).unwrap();
            u.deviations[&(row, j)][p] * x[j]
        })
        .sum()
}

/// Largest and smallest total deviation of a row at `x` over all admissible
/// assignments.
pub fn deviation_range(
    lp: &LinearProgram,
    u: &MultiBandUncertaintySet,
    row: usize,
    x: &[f64],
) -> (f64, f64) {
    let values: Vec<f64> = feasible_assignments(lp, u, row)
        .iter()
        .map(|a| assignment_value(u, row, x, a))
        .collect();
    assert!(!values.is_empty(), "row {row} admits no assignment");
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    (max, min)
}

/// Robust feasibility of every row by enumeration; rows may be `<=` or `>=`.
pub fn robust_by_enumeration(
    lp: &LinearProgram,
    u: &MultiBandUncertaintySet,
    x: &[f64],
    tol: f64,
) -> bool {
    (0..lp.num_rows()).all(|i| {
        let lhs = lp.row_activity(i, x);
        let (max, min) = deviation_range(lp, u, i, x);
        let b = lp.rhs[i];
        let slack = tol * (1.0 + b.abs());
        match lp.row_sense[i] {
            RowSense::Le => lhs + max <= b + slack,
            RowSense::Ge => lhs + min >= b - slack,
            RowSense::Eq => lhs + max <= b + slack && lhs + min >= b - slack,
        }
    })
}

pub fn small_instance(
    seed: u64,
    rows: usize,
    cols: usize,
    ge_rows: f64,
) -> (LinearProgram, MultiBandUncertaintySet) {
    random_instance(&RandomSpec {
        rows,
        cols,
        neg_bands: (seed % 3) as u32,
        pos_bands: 1 + (seed % 2) as u32,
        density: 0.75,
        uncertain: 0.7,
        ge_rows,
        seed,
    })
}

/// `max x s.t. x <= 10` with `d^1 = 0.5` and at most one coefficient in band 1.
pub fn one_by_one() -> (LinearProgram, MultiBandUncertaintySet) {
    let mut lp = LinearProgram::new(Sense::Maximize, vec![1.0]);
    lp.add_row(vec![(0, 1.0)], RowSense::Le, 10.0);
    let mut u = MultiBandUncertaintySet::new(BandProfile::new(vec![0, 1], vec![0, 0], vec![1, 1]));
    u.insert(0, 0, vec![0.0, 0.5]);
    (lp, u)
}
