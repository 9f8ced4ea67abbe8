use super::nonnegative_point;
use crate::model::{BandProfile, LinearProgram, MultiBandUncertaintySet};
use crate::Error;
use std::collections::BTreeMap;

/// Single-band uncertainty with a per-row budget on deviating coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct BudgetedSet {
    /// Budget of each row.
    pub gamma: Vec<usize>,
    /// Maximum (positive) deviation of each uncertain coefficient.
    pub max_dev: BTreeMap<(usize, usize), f64>,
}

impl BudgetedSet {
    pub fn uniform(rows: usize, gamma: usize) -> Self {
        BudgetedSet {
            gamma: vec![gamma; rows],
            max_dev: BTreeMap::new(),
        }
    }

    /// The same set as a multi-band set with bands `{0, 1}`, `l = (0, 0)`,
    /// `u = (n, gamma_i)` and `d^1 = d^+`. Coefficients whose maximum
    /// deviation is not positive are left certain.
    pub fn to_multiband(&self, n: usize) -> MultiBandUncertaintySet {
        let default_gamma = self.gamma.first().copied().unwrap_or(0);
        let band = |g: usize| BandProfile::new(vec![0, 1], vec![0, 0], vec![n, g]);
        let mut u = MultiBandUncertaintySet::new(band(default_gamma));
        for (i, &g) in self.gamma.iter().enumerate() {
            if g != default_gamma {
                u.set_row_profile(i, band(g));
            }
        }
        for (&(i, j), &d) in &self.max_dev {
            if d > 0.0 {
                u.insert(i, j, vec![0.0, d]);
            }
        }
        u
    }
}

/// Sum of the `gamma_i` largest positive terms `d+_ij x_j`, by sorting.
/// Returns the deviation and the chosen columns in decreasing term order.
pub fn bs_separation(
    row: usize,
    lp: &LinearProgram,
    bs: &BudgetedSet,
    x: &[f64],
) -> Result<(f64, Vec<usize>), Error> {
    let x = nonnegative_point(lp, x)?;
    let n = lp.num_vars();
    let gamma = bs.gamma.get(row).copied().unwrap_or(0);
    if gamma > n {
        return Err(Error::Budget { gamma, n });
    }
    let mut terms: Vec<(usize, f64)> = bs
        .max_dev
        .range((row, 0)..=(row, usize::MAX))
        .map(|(&(_, j), &d)| (j, d * x[j]))
        .filter(|&(_, t)| t > 0.0)
        .collect();
    terms.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    terms.truncate(gamma);
    let dev = terms.iter().map(|t| t.1).sum();
    Ok((dev, terms.into_iter().map(|t| t.0).collect()))
}
