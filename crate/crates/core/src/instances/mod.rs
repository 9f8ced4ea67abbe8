//! Instance generation, calibration of band profiles, the budgeted baseline,
//! and Monte Carlo evaluation.

mod calibrate;
mod compare;
mod pap;
mod protection;
pub mod random;
mod stress;

pub use calibrate::{
    band_probabilities, calibrate_bands, calibrated_uncertainty, BreakpointRule, Calibration,
    CalibrationSpec, DeviationDistribution,
};
pub use compare::{compare, CompareOptions, CompareRow, CompareTimings};
pub use pap::{generate_pap, PapInstance, PapParams};
pub use protection::{evaluate_protection, ProtectionReport};
pub use stress::{in_set_stress, sample_scenario, StressReport};

use crate::model::MultiBandUncertaintySet;
use crate::separation::BudgetedSet;

/// `ceil(0.8 * u)` in exact integer arithmetic.
pub fn budget_from_upper(u_max: usize) -> usize {
    (4 * u_max).div_ceil(5)
}

/// Budgeted baseline of a multi-band set on `rows` rows: per row,
/// `gamma = ceil(0.8 * max_{k != 0} u_k)` and `d+` equal to the top
/// breakpoint of each coefficient.
///
/// Apply it to a canonical instance: for a negated `>=` row the top band is
/// the mirror of the original bottom band, so `d+` is the largest drop of the
/// original coefficient.
pub fn bs_from_mb(u: &MultiBandUncertaintySet, rows: usize) -> BudgetedSet {
    let mut bs = BudgetedSet::uniform(rows, 0);
    for i in 0..rows {
        bs.gamma[i] = budget_from_upper(u.profile_for(i).max_nonzero_upper());
    }
    for (&(i, j), d) in &u.deviations {
        if i < rows {
            if let Some(&top) = d.last() {
                if top > 0.0 {
                    bs.max_dev.insert((i, j), top);
                }
            }
        }
    }
    bs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::BandProfile;

    #[test]
    fn budget_rounding() {
        assert_eq!(budget_from_upper(5), 4);
        assert_eq!(budget_from_upper(10), 8);
        assert_eq!(budget_from_upper(0), 0);
        assert_eq!(budget_from_upper(1), 1);
    }

    #[test]
    fn bs_parameters() {
        let mut u = MultiBandUncertaintySet::new(BandProfile::new(
            vec![0, 1, 2],
            vec![0, 0, 0],
            vec![9, 5, 3],
        ));
        u.insert(0, 2, vec![0.0, 0.1, 0.15]);
        let bs = bs_from_mb(&u, 2);
        assert_eq!(bs.gamma, vec![4, 4]);
        assert_eq!(bs.max_dev.get(&(0, 2)), Some(&0.15));

        let u = MultiBandUncertaintySet::new(BandProfile::new(vec![0, 1], vec![0, 0], vec![9, 0]));
        assert_eq!(bs_from_mb(&u, 1).gamma, vec![0]);
    }
}
