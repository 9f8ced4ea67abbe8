use super::calibrate::DeviationDistribution;
use crate::model::LinearProgram;
use crate::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtectionReport {
    pub realizations: usize,
    pub feasible_count: usize,
    pub protect_pct: f64,
    /// Fraction of realizations violating each row.
    pub row_violation_freq: Vec<f64>,
    pub seed: u64,
}

/// Generator for realization `index`: the same draws whatever the thread count.
pub(crate) fn realization_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Share of coefficient-matrix realizations under which `x` stays feasible.
///
/// Every structural nonzero is multiplied by an independent draw of the
/// distribution's factor, in the row sense given by `lp`. With `truncate`
/// set, draws are conditioned on a relative deviation of at most that much.
/// A row holds if it is satisfied within `1e-9 * (1 + |b|)`.
pub fn evaluate_protection(
    lp: &LinearProgram,
    x: &[f64],
    dist: &DeviationDistribution,
    realizations: usize,
    seed: u64,
    truncate: Option<f64>,
) -> Result<ProtectionReport, Error> {
    match truncate {
        Some(t) => dist.check_truncation(t)?,
        None => dist.check()?,
    }
    if x.len() != lp.num_vars() {
        return Err(Error::Dimension {
            expected: lp.num_vars(),
            found: x.len(),
        });
    }
    if realizations == 0 {
        return Err(Error::Calibration("need at least one realization".into()));
    }
    let violated: Vec<Vec<bool>> = (0..realizations)
        .into_par_iter()
        .map(|r| {
            let mut rng = realization_rng(seed, r);
            (0..lp.num_rows())
                .map(|i| {
                    let lhs: f64 = lp.rows[i]
                        .iter()
                        .map(|&(j, a)| {
                            if a == 0.0 {
                                0.0
                            } else {
                                let f = match truncate {
                                    Some(t) => dist.sample_factor_within(&mut rng, t),
                                    None => dist.sample_factor(&mut rng),
                                };
                                a * f * x[j]
                            }
                        })
                        .sum();
                    let b = lp.rhs[i];
                    !lp.row_sense[i].holds(lhs, b, 1e-9 * (1.0 + b.abs()))
                })
                .collect()
        })
        .collect();
    let feasible_count = violated.iter().filter(|v| !v.iter().any(|&b| b)).count();
    let row_violation_freq = (0..lp.num_rows())
        .map(|i| violated.iter().filter(|v| v[i]).count() as f64 / realizations as f64)
        .collect();
    Ok(ProtectionReport {
        realizations,
        feasible_count,
        protect_pct: 100.0 * feasible_count as f64 / realizations as f64,
        row_violation_freq,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{RowSense, Sense};

    fn lognormal() -> DeviationDistribution {
        DeviationDistribution::LogNormalDb { sigma_db: 5.5 }
    }

    #[test]
    fn slack_point_always_feasible() {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![1.0]);
        lp.add_row(vec![(0, 1.0)], RowSense::Le, 1e6);
        let r = evaluate_protection(&lp, &[1.0], &lognormal(), 200, 3, None).unwrap();
        assert_eq!(r.protect_pct, 100.0);
        assert_eq!(r.row_violation_freq, vec![0.0]);
    }

    #[test]
    fn tight_point_is_often_violated() {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![1.0]);
        lp.add_row(vec![(0, 1.0)], RowSense::Le, 10.0);
        let r = evaluate_protection(&lp, &[10.0], &lognormal(), 1000, 1, None).unwrap();
        assert!(r.protect_pct < 99.0);
        assert_eq!(
            r,
            evaluate_protection(&lp, &[10.0], &lognormal(), 1000, 1, None).unwrap()
        );
    }

    #[test]
    fn truncated_draws_stay_in_range() {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![1.0]);
        lp.add_row(vec![(0, 1.0)], RowSense::Le, 1.15);
        // the point survives every factor up to 1.15 and nothing beyond
        let r = evaluate_protection(&lp, &[1.0], &lognormal(), 500, 2, Some(0.15)).unwrap();
        assert_eq!(r.protect_pct, 100.0);
        let r = evaluate_protection(&lp, &[1.0], &lognormal(), 500, 2, None).unwrap();
        assert!(r.protect_pct < 90.0);
    }
}
