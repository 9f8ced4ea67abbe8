use super::{LinearProgram, MultiBandUncertaintySet, RowSense};
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CanonicalizeMode {
    /// `=` rows become a `<=` row and a negated `>=` row whose deviations are
    /// treated independently.
    #[default]
    SplitEqualities,
    /// `=` rows are rejected.
    Strict,
}

/// Where a canonical row came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RowOrigin {
    pub row: usize,
    pub negated: bool,
}

/// An all-`<=` instance plus the map back to the original rows.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalForm {
    pub lp: LinearProgram,
    pub uncertainty: MultiBandUncertaintySet,
    pub origin: Vec<RowOrigin>,
}

/// Rewrites every row into `<=` form.
///
/// A `>=` row is negated together with its breakpoints; the breakpoint order is
/// reversed so band `k` of the original row becomes band `-k` of the new one,
/// carrying the same cardinality bounds.
pub fn canonicalize(
    lp: &LinearProgram,
    u: &MultiBandUncertaintySet,
    mode: CanonicalizeMode,
) -> Result<CanonicalForm, Error> {
    let mut out_lp = LinearProgram {
        sense: lp.sense,
        objective: lp.objective.clone(),
        rows: Vec::with_capacity(lp.num_rows()),
        row_sense: Vec::with_capacity(lp.num_rows()),
        rhs: Vec::with_capacity(lp.num_rows()),
        var_lower: lp.var_lower.clone(),
        var_upper: lp.var_upper.clone(),
    };
    let mut out_u = MultiBandUncertaintySet::new(u.profile.clone());
    let mut origin = Vec::with_capacity(lp.num_rows());

    for i in 0..lp.num_rows() {
        let copies: &[bool] = match lp.row_sense[i] {
            RowSense::Le => &[false],
            RowSense::Ge => &[true],
            RowSense::Eq => match mode {
                CanonicalizeMode::SplitEqualities => &[false, true],
                CanonicalizeMode::Strict => return Err(Error::EqualityRow { row: i }),
            },
        };
        for &negated in copies {
            let new_row = out_lp.num_rows();
            let sign = if negated { -1.0 } else { 1.0 };
            let coefs = lp.rows[i].iter().map(|&(j, a)| (j, sign * a)).collect();
            out_lp.add_row(coefs, RowSense::Le, sign * lp.rhs[i]);
            origin.push(RowOrigin { row: i, negated });

            let profile = if negated {
                u.profile_for(i).mirrored()
            } else {
                u.profile_for(i).clone()
            };
            if profile != u.profile {
                out_u.set_row_profile(new_row, profile);
            }
            for (j, d) in u.row(i).entries() {
                let d = if negated {
                    d.iter().rev().map(|v| -v).collect()
                } else {
                    d.to_vec()
                };
                out_u.insert(new_row, j, d);
            }
        }
    }

    Ok(CanonicalForm {
        lp: out_lp,
        uncertainty: out_u,
        origin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{BandProfile, Sense};

    #[test]
    fn ge_row_is_negated_and_mirrored() {
        let mut lp = LinearProgram::new(Sense::Minimize, vec![1.0]);
        lp.add_row(vec![(0, 2.0)], RowSense::Ge, 5.0);
        let mut u =
            MultiBandUncertaintySet::new(BandProfile::new(vec![0, 1], vec![0, 0], vec![1, 1]));
        u.insert(0, 0, vec![0.0, 0.1]);

        let c = canonicalize(&lp, &u, CanonicalizeMode::default()).unwrap();
        assert_eq!(c.lp.rows[0], vec![(0, -2.0)]);
        assert_eq!(c.lp.rhs[0], -5.0);
        assert_eq!(c.lp.row_sense[0], RowSense::Le);
        let p = c.uncertainty.profile_for(0);
        assert_eq!(p.band_ids, vec![-1, 0]);
        assert_eq!(p.upper, vec![1, 1]);
        assert_eq!(c.uncertainty.deviations[&(0, 0)], vec![-0.1, 0.0]);
        assert_eq!(
            c.origin,
            vec![RowOrigin {
                row: 0,
                negated: true
            }]
        );
    }

    #[test]
    fn le_instance_is_unchanged_and_idempotent() {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![1.0, 2.0]);
        lp.add_row(vec![(0, 1.0), (1, 1.0)], RowSense::Le, 3.0);
        let mut u = MultiBandUncertaintySet::new(BandProfile::symmetric(1, 1, vec![1, 2, 1]));
        u.insert(0, 1, vec![-0.2, 0.0, 0.3]);
        let c = canonicalize(&lp, &u, CanonicalizeMode::Strict).unwrap();
        assert_eq!(c.lp, lp);
        assert_eq!(c.uncertainty, u);
        let again = canonicalize(&c.lp, &c.uncertainty, CanonicalizeMode::Strict).unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn equality_rows_split_or_rejected() {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![1.0]);
        lp.add_row(vec![(0, 1.0)], RowSense::Eq, 2.0);
        let mut u = MultiBandUncertaintySet::new(BandProfile::symmetric(1, 1, vec![1, 1, 1]));
        u.insert(0, 0, vec![-0.5, 0.0, 0.25]);
        assert!(matches!(
            canonicalize(&lp, &u, CanonicalizeMode::Strict),
            Err(Error::EqualityRow { row: 0 })
        ));
        let c = canonicalize(&lp, &u, CanonicalizeMode::SplitEqualities).unwrap();
        assert_eq!(c.lp.num_rows(), 2);
        assert_eq!(c.lp.rhs, vec![2.0, -2.0]);
        assert_eq!(c.uncertainty.deviations[&(0, 0)], vec![-0.5, 0.0, 0.25]);
        assert_eq!(c.uncertainty.deviations[&(1, 0)], vec![-0.25, 0.0, 0.5]);
        assert_eq!(
            c.origin[1],
            RowOrigin {
                row: 0,
                negated: true
            }
        );
    }
}
