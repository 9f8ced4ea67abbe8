//! Reference computations of the worst-case row deviation, for testing the
//! flow-based oracle: exhaustive enumeration of the 0-1 band assignment, and
//! its LP relaxation as an ordinary linear program.

use super::{nonnegative_point, BandChoice};
use crate::model::{LinearProgram, MultiBandUncertaintySet, RowSense, Sense};
use crate::Error;

pub const MAX_ENUM_COEFFICIENTS: usize = 12;
/// Nonzero bands; band 0 comes on top.
pub const MAX_ENUM_BANDS: usize = 6;

struct Search<'a> {
    values: Vec<Vec<f64>>,
    cols: Vec<usize>,
    lower: &'a [usize],
    upper: &'a [usize],
    zero: usize,
    certain: usize,
    counts: Vec<usize>,
    choice: Vec<Option<usize>>,
    best: Option<(f64, Vec<Option<usize>>)>,
}

impl Search<'_> {
    fn missing_lower(&self) -> usize {
        (0..self.counts.len())
            .map(|p| {
                let have = self.counts[p] + if p == self.zero { self.certain } else { 0 };
                self.lower[p].saturating_sub(have)
            })
            .sum()
    }

    fn go(&mut self, idx: usize, acc: f64) {
        if self.missing_lower() > self.values.len() - idx {
            return;
        }
        if idx == self.values.len() {
            // certain coefficients may sit in band 0 or stay unassigned
            let z = self.zero;
            if self.counts[z] > self.upper[z] {
                return;
            }
            if self.best.as_ref().is_none_or(|(b, _)| acc > *b) {
                self.best = Some((acc, self.choice.clone()));
            }
            return;
        }
        self.choice[idx] = None;
        self.go(idx + 1, acc);
        for p in 0..self.counts.len() {
            if self.counts[p] >= self.upper[p] {
                continue;
            }
            self.counts[p] += 1;
            self.choice[idx] = Some(p);
            let v = self.values[idx][p];
            self.go(idx + 1, acc + v);
            self.counts[p] -= 1;
        }
        self.choice[idx] = None;
    }
}

/// Exact worst-case deviation of `row` by enumerating every assignment of
/// coefficients to at most one band each, subject to `l_k <= count_k <= u_k`.
/// Certain coefficients may only take band 0.
pub fn dev_bruteforce(
    row: usize,
    lp: &LinearProgram,
    u: &MultiBandUncertaintySet,
    x: &[f64],
) -> Result<(f64, Vec<BandChoice>), Error> {
    if lp.row_sense[row] != RowSense::Le {
        return Err(Error::NotCanonical { row });
    }
    let x = nonnegative_point(lp, x)?;
    let view = u.row(row);
    let profile = view.profile;
    let entries: Vec<(usize, &[f64])> = view.entries().collect();
    let nonzero_bands = profile.num_bands().saturating_sub(1);
    if entries.len() > MAX_ENUM_COEFFICIENTS || nonzero_bands > MAX_ENUM_BANDS {
        return Err(Error::TooLarge {
            uncertain: entries.len(),
            bands: profile.num_bands(),
        });
    }
    if entries.is_empty() {
        return Ok((0.0, Vec::new()));
    }
    let zero = profile.zero_position().ok_or(Error::TooLarge {
        uncertain: entries.len(),
        bands: profile.num_bands(),
    })?;
    let mut search = Search {
        values: entries
            .iter()
            .map(|(j, d)| d.iter().map(|dk| dk * x[*j]).collect())
            .collect(),
        cols: entries.iter().map(|(j, _)| *j).collect(),
        lower: &profile.lower,
        upper: &profile.upper,
        zero,
        certain: lp.num_vars() - entries.len(),
        counts: vec![0; profile.num_bands()],
        choice: vec![None; entries.len()],
        best: None,
    };
    search.go(0, 0.0);
    let (dev, choice) = search
        .best
        .ok_or(Error::Flow(super::FlowError::Infeasible {
            source_side: Vec::new(),
            shortfall: 0,
        }))?;
    let assignment = choice
        .iter()
        .zip(&search.cols)
        .filter_map(|(c, &j)| c.map(|p| (j, profile.band_ids[p])))
        .collect();
    Ok((dev, assignment))
}

/// Column of the relaxation LP: coefficient `col` in band `band`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RelaxationVar {
    pub col: usize,
    pub band: i32,
}

/// LP relaxation of the worst-case assignment problem of `row` at `x`:
/// `max sum d_j^k x_j y_jk` s.t. `l_k <= sum_j y_jk <= u_k`,
/// `sum_k y_jk <= 1`, `y >= 0`.
pub fn dev_relaxation_lp(
    row: usize,
    lp: &LinearProgram,
    u: &MultiBandUncertaintySet,
    x: &[f64],
) -> Result<(LinearProgram, Vec<RelaxationVar>), Error> {
    if lp.row_sense[row] != RowSense::Le {
        return Err(Error::NotCanonical { row });
    }
    let x = nonnegative_point(lp, x)?;
    let view = u.row(row);
    let profile = view.profile;
    let mut vars = Vec::new();
    let mut obj = Vec::new();
    for j in 0..lp.num_vars() {
        match view.breakpoints(j) {
            Some(d) => {
                for (p, &k) in profile.band_ids.iter().enumerate() {
                    vars.push(RelaxationVar { col: j, band: k });
                    obj.push(d[p] * x[j]);
                }
            }
            None => {
                vars.push(RelaxationVar { col: j, band: 0 });
                obj.push(0.0);
            }
        }
    }
    let mut relax = LinearProgram::new(Sense::Maximize, obj);
    for (p, &k) in profile.band_ids.iter().enumerate() {
        let members: Vec<(usize, f64)> = vars
            .iter()
            .enumerate()
            .filter(|(_, v)| v.band == k)
            .map(|(idx, _)| (idx, 1.0))
            .collect();
        if profile.lower[p] > 0 {
            relax.add_row(members.clone(), RowSense::Ge, profile.lower[p] as f64);
        }
        relax.add_row(members, RowSense::Le, profile.upper[p] as f64);
    }
    for j in 0..lp.num_vars() {
        let members = vars
            .iter()
            .enumerate()
            .filter(|(_, v)| v.col == j)
            .map(|(idx, _)| (idx, 1.0))
            .collect();
        relax.add_row(members, RowSense::Le, 1.0);
    }
    Ok((relax, vars))
}
