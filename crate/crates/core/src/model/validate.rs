use super::{BandProfile, LinearProgram, MultiBandUncertaintySet};
use std::collections::BTreeSet;
use std::fmt;

/// Tolerance for `d^0 = 0`.
pub const ZERO_BREAKPOINT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    LengthMismatch {
        field: &'static str,
        expected: usize,
        found: usize,
    },
    NonFinite {
        what: String,
    },
    ColumnOutOfRange {
        row: usize,
        col: usize,
    },
    DuplicateColumn {
        row: usize,
        col: usize,
    },
    BoundsInverted {
        col: usize,
    },
    /// `row` is `None` for the shared profile.
    Profile {
        row: Option<usize>,
        problem: ProfileProblem,
    },
    ProfileRowOutOfRange {
        row: usize,
    },
    DeviationOutOfRange {
        row: usize,
        col: usize,
    },
    BreakpointCount {
        row: usize,
        col: usize,
        expected: usize,
        found: usize,
    },
    ZeroBreakpoint {
        row: usize,
        col: usize,
        value: f64,
    },
    NotIncreasing {
        row: usize,
        col: usize,
    },
    UnattainableLowerCounts {
        row: usize,
        required: usize,
        uncertain: usize,
    },
    NegativeUncertainColumn {
        col: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProfileProblem {
    Shape,
    Unsorted,
    MissingZeroBand,
    CountRange {
        band: i32,
        lower: usize,
        upper: usize,
    },
    ZeroBandCapacity {
        upper: usize,
    },
    LowerSumExceeds {
        sum: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::LengthMismatch {
                field,
                expected,
                found,
            } => write!(f, "{field} has length {found}, expected {expected}"),
            Violation::NonFinite { what } => write!(f, "non-finite value in {what}"),
            Violation::ColumnOutOfRange { row, col } => {
                write!(f, "row {row} references column {col} out of range")
            }
            Violation::DuplicateColumn { row, col } => {
                write!(f, "row {row} lists column {col} more than once")
            }
            Violation::BoundsInverted { col } => {
                write!(f, "variable {col} has lower bound above upper bound")
            }
            Violation::Profile { row, problem } => {
                match row {
                    Some(i) => write!(f, "band profile of row {i}: ")?,
                    None => write!(f, "band profile: ")?,
                }
                match problem {
                    ProfileProblem::Shape => f.write_str("ids, lower and upper differ in length"),
                    ProfileProblem::Unsorted => f.write_str("band ids must be strictly increasing"),
                    ProfileProblem::MissingZeroBand => f.write_str("band 0 is missing"),
                    ProfileProblem::CountRange { band, lower, upper } => write!(
                        f,
                        "band {band} needs 0 <= l <= u <= n, got l = {lower}, u = {upper}"
                    ),
                    ProfileProblem::ZeroBandCapacity { upper } => {
                        write!(f, "u_0 must equal n (found {upper})")
                    }
                    ProfileProblem::LowerSumExceeds { sum } => {
                        write!(f, "sum of lower counts exceeds n (sum = {sum})")
                    }
                }
            }
            Violation::ProfileRowOutOfRange { row } => {
                write!(f, "band profile override for missing row {row}")
            }
            Violation::DeviationOutOfRange { row, col } => {
                write!(f, "deviation entry ({row}, {col}) outside the LP")
            }
            Violation::BreakpointCount {
                row,
                col,
                expected,
                found,
            } => write!(
                f,
                "coefficient ({row}, {col}) has {found} breakpoints, expected {expected}"
            ),
            Violation::ZeroBreakpoint { row, col, value } => {
                write!(f, "coefficient ({row}, {col}) has d^0 = {value}, expected 0")
            }
            Violation::NotIncreasing { row, col } => {
                write!(f, "breakpoints of coefficient ({row}, {col}) are not strictly increasing")
            }
            Violation::UnattainableLowerCounts {
                row,
                required,
                uncertain,
            } => write!(
                f,
                "row {row} has {uncertain} uncertain coefficients but nonzero bands require {required}"
            ),
            Violation::NegativeUncertainColumn { col } => write!(
                f,
                "variable {col} carries uncertain coefficients but may be negative"
            ),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    /// Messages, one per violation.
    pub fn messages(&self) -> Vec<String> {
        self.violations.iter().map(ToString::to_string).collect()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Lists every structural problem of the pair. Never panics.
pub fn validate(lp: &LinearProgram, u: &MultiBandUncertaintySet) -> ValidationReport {
    let mut out = Vec::new();
    let n = lp.num_vars();
    let m = lp.num_rows();

    let mut len = |field: &'static str, found: usize, expected: usize| {
        if found != expected {
            out.push(Violation::LengthMismatch {
                field,
                expected,
                found,
            });
        }
    };
    len("row_sense", lp.row_sense.len(), m);
    len("rhs", lp.rhs.len(), m);
    len("var_lower", lp.var_lower.len(), n);
    len("var_upper", lp.var_upper.len(), n);

    if lp.objective.iter().any(|v| !v.is_finite()) {
        out.push(Violation::NonFinite {
            what: "objective".into(),
        });
    }
    if lp.rhs.iter().any(|v| !v.is_finite()) {
        out.push(Violation::NonFinite { what: "rhs".into() });
    }

    for (i, row) in lp.rows.iter().enumerate() {
        let mut seen = BTreeSet::new();
        for &(j, a) in row {
            if j >= n {
                out.push(Violation::ColumnOutOfRange { row: i, col: j });
            } else if !seen.insert(j) {
                out.push(Violation::DuplicateColumn { row: i, col: j });
            }
            if !a.is_finite() {
                out.push(Violation::NonFinite {
                    what: format!("coefficient ({i}, {j})"),
                });
            }
        }
    }

    for (j, (lo, hi)) in lp.var_lower.iter().zip(&lp.var_upper).enumerate() {
        if lo > hi || lo.is_nan() || hi.is_nan() {
            out.push(Violation::BoundsInverted { col: j });
        }
    }

    check_profile(&u.profile, None, n, &mut out);
    for (&i, p) in &u.row_profiles {
        if i >= m {
            out.push(Violation::ProfileRowOutOfRange { row: i });
        }
        check_profile(p, Some(i), n, &mut out);
    }

    let mut uncertain_cols = BTreeSet::new();
    for (&(i, j), d) in &u.deviations {
        if i >= m || j >= n {
            out.push(Violation::DeviationOutOfRange { row: i, col: j });
            continue;
        }
        uncertain_cols.insert(j);
        let profile = u.profile_for(i);
        if d.len() != profile.num_bands() {
            out.push(Violation::BreakpointCount {
                row: i,
                col: j,
                expected: profile.num_bands(),
                found: d.len(),
            });
            continue;
        }
        if d.iter().any(|v| !v.is_finite()) {
            out.push(Violation::NonFinite {
                what: format!("breakpoints of ({i}, {j})"),
            });
            continue;
        }
        if let Some(z) = profile.zero_position() {
            if d[z].abs() > ZERO_BREAKPOINT_TOL {
                out.push(Violation::ZeroBreakpoint {
                    row: i,
                    col: j,
                    value: d[z],
                });
            }
        }
        if d.windows(2).any(|w| w[0] >= w[1]) {
            out.push(Violation::NotIncreasing { row: i, col: j });
        }
    }

    for i in 0..m {
        let view = u.row(i);
        let uncertain = view.num_uncertain();
        if uncertain == 0 {
            continue;
        }
        let required = view.profile.nonzero_lower_sum();
        if required > uncertain {
            out.push(Violation::UnattainableLowerCounts {
                row: i,
                required,
                uncertain,
            });
        }
    }

    for j in uncertain_cols {
        if lp.var_lower.get(j).is_some_and(|&lo| lo < 0.0) {
            out.push(Violation::NegativeUncertainColumn { col: j });
        }
    }

    ValidationReport { violations: out }
}

fn check_profile(p: &BandProfile, row: Option<usize>, n: usize, out: &mut Vec<Violation>) {
    let mut push = |problem| out.push(Violation::Profile { row, problem });
    if p.band_ids.len() != p.lower.len() || p.band_ids.len() != p.upper.len() {
        push(ProfileProblem::Shape);
        return;
    }
    if p.band_ids.windows(2).any(|w| w[0] >= w[1]) {
        push(ProfileProblem::Unsorted);
    }
    match p.zero_position() {
        None => push(ProfileProblem::MissingZeroBand),
        Some(z) if p.upper[z] != n => push(ProfileProblem::ZeroBandCapacity { upper: p.upper[z] }),
        Some(_) => {}
    }
    for (q, &k) in p.band_ids.iter().enumerate() {
        let (l, u) = (p.lower[q], p.upper[q]);
        if l > u || u > n {
            push(ProfileProblem::CountRange {
                band: k,
                lower: l,
                upper: u,
            });
        }
    }
    let sum = p.lower_sum();
    if sum > n {
        push(ProfileProblem::LowerSumExceeds { sum });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{RowSense, Sense};

    fn lp_2x3() -> LinearProgram {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![1.0, 1.0, 1.0]);
        lp.add_row(vec![(0, 1.0), (1, 2.0), (2, 1.0)], RowSense::Le, 4.0);
        lp.add_row(vec![(0, 3.0), (2, 1.0)], RowSense::Le, 6.0);
        lp
    }

    fn set_2x3() -> MultiBandUncertaintySet {
        let mut u = MultiBandUncertaintySet::new(BandProfile::new(
            vec![-1, 0, 1],
            vec![0, 0, 0],
            vec![1, 3, 2],
        ));
        u.insert(0, 0, vec![-0.1, 0.0, 0.2]);
        u.insert(0, 1, vec![-0.5, 0.0, 0.5]);
        u.insert(1, 2, vec![-1.0, 0.0, 1.0]);
        u
    }

    #[test]
    fn well_formed_instance_has_empty_report() {
        let r = validate(&lp_2x3(), &set_2x3());
        assert!(r.is_valid(), "{r}");
    }

    #[test]
    fn zero_band_capacity_must_be_n() {
        let mut u = set_2x3();
        u.profile.upper[1] = 2;
        let r = validate(&lp_2x3(), &u);
        assert!(r.messages().iter().any(|m| m.contains("u_0 must equal n")));
    }

    #[test]
    fn lower_sum_may_not_exceed_n() {
        let mut u = set_2x3();
        u.profile.lower = vec![1, 2, 1];
        u.profile.upper = vec![1, 3, 1];
        let r = validate(&lp_2x3(), &u);
        assert!(r
            .messages()
            .iter()
            .any(|m| m.contains("sum of lower counts exceeds n")));
    }

    #[test]
    fn structural_problems_are_reported() {
        let mut lp = lp_2x3();
        lp.rows[0].push((7, 1.0));
        lp.rows[1].push((0, 1.0));
        lp.var_lower[1] = 5.0;
        lp.var_upper[1] = 1.0;
        let mut u = set_2x3();
        u.insert(0, 2, vec![0.1, 0.0, 0.2]);
        u.insert(4, 0, vec![-1.0, 0.0, 1.0]);
        u.insert(1, 0, vec![0.0, 1.0]);
        u.profile.band_ids = vec![-1, 1, 2];
        let v = validate(&lp, &u).violations;
        assert!(v.contains(&Violation::ColumnOutOfRange { row: 0, col: 7 }));
        assert!(v.contains(&Violation::DuplicateColumn { row: 1, col: 0 }));
        assert!(v.contains(&Violation::BoundsInverted { col: 1 }));
        assert!(v.contains(&Violation::DeviationOutOfRange { row: 4, col: 0 }));
        assert!(v
            .iter()
            .any(|x| matches!(x, Violation::BreakpointCount { row: 1, col: 0, .. })));
        assert!(v.iter().any(|x| matches!(
            x,
            Violation::Profile {
                problem: ProfileProblem::MissingZeroBand,
                ..
            }
        )));
    }

    #[test]
    fn breakpoint_shape_checks() {
        let mut u = set_2x3();
        u.insert(1, 0, vec![-0.1, 1e-9, 0.2]);
        u.insert(0, 2, vec![-0.1, 0.0, -0.05]);
        let v = validate(&lp_2x3(), &u).violations;
        assert!(v
            .iter()
            .any(|x| matches!(x, Violation::ZeroBreakpoint { row: 1, col: 0, .. })));
        assert!(v.contains(&Violation::NotIncreasing { row: 0, col: 2 }));
    }

    #[test]
    fn unattainable_lower_counts_flagged_per_row() {
        let mut u = set_2x3();
        u.profile.lower = vec![0, 0, 2];
        // row 0 has two uncertain coefficients, row 1 only one
        let v = validate(&lp_2x3(), &u).violations;
        assert_eq!(
            v,
            vec![Violation::UnattainableLowerCounts {
                row: 1,
                required: 2,
                uncertain: 1
            }]
        );
    }

    #[test]
    fn validate_tolerates_garbage() {
        let mut lp = lp_2x3();
        lp.rhs.clear();
        lp.objective[0] = f64::NAN;
        let mut u = set_2x3();
        u.profile.lower.pop();
        let r = validate(&lp, &u);
        assert!(r.violations.len() >= 3);
    }
}
