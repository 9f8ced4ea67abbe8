//! Compact robust counterpart.
//!
//! For a `<=` row with uncertain coefficients, the worst-case deviation at a
//! fixed `x` is the LP
//!
//! ```text
//! max  sum_{j,k} d_j^k x_j y_jk
//! s.t. l_k <= sum_j y_jk <= u_k     (v^k, w^k)
//!      sum_k y_jk <= 1              (z^j)
//! ```
//!
//! whose constraint matrix is totally unimodular. Replacing it by its dual
//! turns the robust row into one linear row plus `|K|` dual rows per uncertain
//! coefficient:
//!
//! ```text
//! a x - sum_k l_k v^k + sum_k u_k w^k + sum_j z^j <= b
//! -v^k + w^k + z^j - d_j^k x_j >= 0
//! ```
//!
//! Columns whose coefficient is certain can only sit in band 0 at zero cost,
//! so they are folded into the band-0 lower count: its coefficient becomes
//! `max(0, l_0 - c)` with `c` the number of certain columns of the row. With
//! every coefficient uncertain this is the plain dual above.

use crate::model::io::{parse_instance, write_lp, ParseError};
use crate::model::{validate, LinearProgram, MultiBandUncertaintySet, RowSense};
use crate::Error;
use std::fmt::Write as _;

/// Meaning of a column of the compact counterpart.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RlpVar {
    X(usize),
    V { row: usize, band: i32 },
    W { row: usize, band: i32 },
    Z { row: usize, col: usize },
}

/// Meaning of a row of the compact counterpart.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RlpRow {
    Robust(usize),
    Dual { row: usize, col: usize, band: i32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CompactOptions {
    /// Leave out `v^k` whose coefficient in the robust row is zero, the dual
    /// rows that are then trivially satisfied, and `w^k` left without a dual
    /// row. Off by default so the size is exactly the textbook one.
    pub elide_trivial_rows: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompactCounterpart {
    pub rlp: LinearProgram,
    pub var_map: Vec<RlpVar>,
    pub row_map: Vec<RlpRow>,
}

impl CompactCounterpart {
    pub fn num_original_vars(&self) -> usize {
        self.var_map
            .iter()
            .filter(|v| matches!(v, RlpVar::X(_)))
            .count()
    }

    pub fn added_vars(&self) -> usize {
        self.var_map.len() - self.num_original_vars()
    }

    pub fn added_rows(&self) -> usize {
        self.row_map
            .iter()
            .filter(|r| matches!(r, RlpRow::Dual { .. }))
            .count()
    }

    /// The `x` part of a solution of the counterpart.
    pub fn original_part(&self, y: &[f64]) -> Vec<f64> {
        self.var_map
            .iter()
            .zip(y)
            .filter(|(v, _)| matches!(v, RlpVar::X(_)))
            .map(|(_, &val)| val)
            .collect()
    }

    /// `[lp]` section followed by `[varmap]` and `[rowmap]`.
    pub fn write(&self) -> String {
        let mut out = String::new();
        write_lp(&mut out, &self.rlp);
        let _ = writeln!(out, "[varmap]");
        for v in &self.var_map {
            let _ = match v {
                RlpVar::X(j) => writeln!(out, "x {j}"),
                RlpVar::V { row, band } => writeln!(out, "v {row} {band}"),
                RlpVar::W { row, band } => writeln!(out, "w {row} {band}"),
                RlpVar::Z { row, col } => writeln!(out, "z {row} {col}"),
            };
        }
        let _ = writeln!(out, "[rowmap]");
        for r in &self.row_map {
            let _ = match r {
                RlpRow::Robust(i) => writeln!(out, "robust {i}"),
                RlpRow::Dual { row, col, band } => writeln!(out, "dual {row} {col} {band}"),
            };
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let inst = parse_instance(text)?;
        let lines = |name: &str| inst.extra.get(name).cloned().unwrap_or_default();
        let bad = |line: usize, what: &str| ParseError {
            line,
            message: format!("malformed {what} entry"),
        };
        let mut var_map = Vec::new();
        for (ln, text) in lines("varmap") {
            let tok: Vec<&str> = text.split_whitespace().collect();
            let u = |s: &str| s.parse::<usize>().map_err(|_| bad(ln, "varmap"));
            let k = |s: &str| s.parse::<i32>().map_err(|_| bad(ln, "varmap"));
            var_map.push(match tok.as_slice() {
                ["x", j] => RlpVar::X(u(j)?),
                ["v", i, b] => RlpVar::V {
                    row: u(i)?,
                    band: k(b)?,
                },
                ["w", i, b] => RlpVar::W {
                    row: u(i)?,
                    band: k(b)?,
                },
                ["z", i, j] => RlpVar::Z {
                    row: u(i)?,
                    col: u(j)?,
                },
                _ => return Err(bad(ln, "varmap")),
            });
        }
        let mut row_map = Vec::new();
        for (ln, text) in lines("rowmap") {
            let tok: Vec<&str> = text.split_whitespace().collect();
            let u = |s: &str| s.parse::<usize>().map_err(|_| bad(ln, "rowmap"));
            row_map.push(match tok.as_slice() {
                ["robust", i] => RlpRow::Robust(u(i)?),
                ["dual", i, j, b] => RlpRow::Dual {
                    row: u(i)?,
                    col: u(j)?,
                    band: b.parse().map_err(|_| bad(ln, "rowmap"))?,
                },
                _ => return Err(bad(ln, "rowmap")),
            });
        }
        if var_map.len() != inst.lp.num_vars() || row_map.len() != inst.lp.num_rows() {
            return Err(ParseError {
                line: 0,
                message: format!(
                    "maps cover {} columns and {} rows, LP has {} and {}",
                    var_map.len(),
                    row_map.len(),
                    inst.lp.num_vars(),
                    inst.lp.num_rows()
                ),
            });
        }
        Ok(CompactCounterpart {
            rlp: inst.lp,
            var_map,
            row_map,
        })
    }
}

/// Builds the compact counterpart of a canonical (all `<=`) instance.
///
/// Columns: `x`, then for each row with uncertainty `v^k`, `w^k` over all
/// bands and `z^j` over its uncertain columns. Rows: the robust rows in the
/// original order, then the dual rows ordered by row, column and band.
pub fn build_compact(
    lp: &LinearProgram,
    u: &MultiBandUncertaintySet,
    options: CompactOptions,
) -> Result<CompactCounterpart, Error> {
    if let Some(row) = (0..lp.num_rows()).find(|&i| lp.row_sense[i] != RowSense::Le) {
        return Err(Error::NotCanonical { row });
    }
    let report = validate(lp, u);
    if !report.is_valid() {
        return Err(Error::Invalid(report));
    }

    let n = lp.num_vars();
    let mut rlp = LinearProgram {
        sense: lp.sense,
        objective: lp.objective.clone(),
        rows: Vec::new(),
        row_sense: Vec::new(),
        rhs: Vec::new(),
        var_lower: lp.var_lower.clone(),
        var_upper: lp.var_upper.clone(),
    };
    let mut var_map: Vec<RlpVar> = (0..n).map(RlpVar::X).collect();
    let mut row_map = Vec::new();
    let mut dual_rows: Vec<(Vec<(usize, f64)>, RlpRow)> = Vec::new();

    let mut new_var = |rlp: &mut LinearProgram, var: RlpVar| {
        rlp.objective.push(0.0);
        rlp.var_lower.push(0.0);
        rlp.var_upper.push(f64::INFINITY);
        var_map.push(var);
        var_map.len() - 1
    };

    for i in 0..lp.num_rows() {
        let mut robust = lp.rows[i].clone();
        let view = u.row(i);
        let entries: Vec<(usize, &[f64])> = view.entries().collect();
        if !entries.is_empty() {
            let p = view.profile;
            let certain = n - entries.len();
            let lower_coef: Vec<usize> = (0..p.num_bands())
                .map(|q| {
                    if p.band_ids[q] == 0 {
                        p.lower[q].saturating_sub(certain)
                    } else {
                        p.lower[q]
                    }
                })
                .collect();
            let elide = options.elide_trivial_rows;
            let mut v_idx = vec![None; p.num_bands()];
            let mut w_idx = vec![None; p.num_bands()];
            for q in 0..p.num_bands() {
                if !elide || lower_coef[q] > 0 {
                    let c = new_var(
                        &mut rlp,
                        RlpVar::V {
                            row: i,
                            band: p.band_ids[q],
                        },
                    );
                    robust.push((c, -(lower_coef[q] as f64)));
                    v_idx[q] = Some(c);
                }
            }
            // without v^k, a band whose breakpoints are all <= 0 only yields
            // rows `w + z >= d x` that hold for any nonnegative w, z
            let keep =
                |q: usize| !elide || v_idx[q].is_some() || entries.iter().any(|(_, d)| d[q] > 0.0);
            for q in 0..p.num_bands() {
                if keep(q) {
                    let c = new_var(
                        &mut rlp,
                        RlpVar::W {
                            row: i,
                            band: p.band_ids[q],
                        },
                    );
                    robust.push((c, p.upper[q] as f64));
                    w_idx[q] = Some(c);
                }
            }
            for &(j, d) in &entries {
                let z = new_var(&mut rlp, RlpVar::Z { row: i, col: j });
                robust.push((z, 1.0));
                for q in 0..p.num_bands() {
                    let Some(w) = w_idx[q] else { continue };
                    if elide && v_idx[q].is_none() && d[q] <= 0.0 {
                        continue;
                    }
                    let mut coefs = Vec::with_capacity(4);
                    if d[q] != 0.0 {
                        coefs.push((j, -d[q]));
                    }
                    if let Some(v) = v_idx[q] {
                        coefs.push((v, -1.0));
                    }
                    coefs.push((w, 1.0));
                    coefs.push((z, 1.0));
                    dual_rows.push((
                        coefs,
                        RlpRow::Dual {
                            row: i,
                            col: j,
                            band: p.band_ids[q],
                        },
                    ));
                }
            }
        }
        rlp.rows.push(robust);
        rlp.row_sense.push(RowSense::Le);
        rlp.rhs.push(lp.rhs[i]);
        row_map.push(RlpRow::Robust(i));
    }
    for (coefs, tag) in dual_rows {
        rlp.add_row(coefs, RowSense::Ge, 0.0);
        row_map.push(tag);
    }
    Ok(CompactCounterpart {
        rlp,
        var_map,
        row_map,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{BandProfile, Sense};
    use crate::separation::oracle::dev_bruteforce;
    use crate::solver::{simplex_solve, LpStatus};

    fn one_by_one() -> (LinearProgram, MultiBandUncertaintySet) {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![1.0]);
        lp.add_row(vec![(0, 1.0)], RowSense::Le, 10.0);
        let mut u =
            MultiBandUncertaintySet::new(BandProfile::new(vec![0, 1], vec![0, 0], vec![1, 1]));
        u.insert(0, 0, vec![0.0, 0.5]);
        (lp, u)
    }

    #[test]
    fn dense_size_formula() {
        let (m, n) = (2, 3);
        let mut lp = LinearProgram::new(Sense::Maximize, vec![1.0; n]);
        for _ in 0..m {
            lp.add_row((0..n).map(|j| (j, 1.0)).collect(), RowSense::Le, 10.0);
        }
        let profile = BandProfile::symmetric(3, 3, vec![1, 1, 1, n, 1, 1, 1]);
        let mut u = MultiBandUncertaintySet::new(profile);
        for i in 0..m {
            for j in 0..n {
                u.insert(i, j, vec![-0.3, -0.2, -0.1, 0.0, 0.1, 0.2, 0.3]);
            }
        }
        let cc = build_compact(&lp, &u, CompactOptions::default()).unwrap();
        let k = 7;
        assert_eq!(cc.added_vars(), 2 * k * m + n * m);
        assert_eq!(cc.added_rows(), k * n * m);
        assert_eq!(cc.rlp.num_vars(), 3 + 34);
        assert_eq!(cc.rlp.num_rows(), 2 + 42);
    }

    #[test]
    fn no_uncertainty_adds_nothing() {
        let (lp, _) = one_by_one();
        let u = MultiBandUncertaintySet::new(BandProfile::new(vec![0], vec![0], vec![1]));
        let cc = build_compact(&lp, &u, CompactOptions::default()).unwrap();
        assert_eq!(cc.added_vars(), 0);
        assert_eq!(cc.added_rows(), 0);
        assert_eq!(cc.rlp, lp);
    }

    #[test]
    fn one_by_one_optimum() {
        let (lp, u) = one_by_one();
        for elide in [false, true] {
            let cc = build_compact(
                &lp,
                &u,
                CompactOptions {
                    elide_trivial_rows: elide,
                },
            )
            .unwrap();
            let sol = simplex_solve(&cc.rlp);
            assert_eq!(sol.status, LpStatus::Optimal);
            assert!((sol.objective - 20.0 / 3.0).abs() < 1e-9);
            assert!((cc.original_part(&sol.x)[0] - 20.0 / 3.0).abs() < 1e-9);
        }
        let full = build_compact(&lp, &u, CompactOptions::default()).unwrap();
        assert_eq!((full.added_vars(), full.added_rows()), (5, 2));
        let small = build_compact(
            &lp,
            &u,
            CompactOptions {
                elide_trivial_rows: true,
            },
        )
        .unwrap();
        assert_eq!((small.added_vars(), small.added_rows()), (2, 1));
    }

    #[test]
    fn rejects_non_canonical() {
        let (mut lp, u) = one_by_one();
        lp.row_sense[0] = RowSense::Ge;
        assert!(matches!(
            build_compact(&lp, &u, CompactOptions::default()),
            Err(Error::NotCanonical { row: 0 })
        ));
    }

    /// At fixed x, minimizing the dual part over (v, w, z) gives the brute-force deviation.
    #[test]
    fn dual_part_matches_enumeration() {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![1.0; 4]);
        lp.add_row((0..4).map(|j| (j, 1.0)).collect(), RowSense::Le, 100.0);
        let mut u = MultiBandUncertaintySet::new(BandProfile::new(
            vec![-1, 0, 1, 2],
            vec![1, 1, 0, 0],
            vec![2, 4, 2, 1],
        ));
        u.insert(0, 0, vec![-1.0, 0.0, 2.0, 5.0]);
        u.insert(0, 1, vec![-0.5, 0.0, 1.0, 1.5]);
        u.insert(0, 3, vec![-2.0, 0.0, 0.5, 3.0]);
        let x = [1.0, 3.0, 2.0, 0.5];
        let cc = build_compact(&lp, &u, CompactOptions::default()).unwrap();
        let mut fixed = cc.rlp.clone();
        fixed.sense = Sense::Minimize;
        for (c, v) in cc.var_map.iter().enumerate() {
            fixed.objective[c] = 0.0;
            if let RlpVar::X(j) = v {
                fixed.var_lower[c] = x[*j];
                fixed.var_upper[c] = x[*j];
            }
        }
        // objective: the robust row's left side without the nominal part
        for &(c, a) in &cc.rlp.rows[0] {
            if !matches!(cc.var_map[c], RlpVar::X(_)) {
                fixed.objective[c] = a;
            }
        }
        fixed.rhs[0] = f64::INFINITY;
        let sol = simplex_solve(&fixed);
        assert_eq!(sol.status, LpStatus::Optimal);
        let (dev, _) = dev_bruteforce(0, &lp, &u, &x).unwrap();
        assert!(
            (sol.objective - dev).abs() < 1e-7,
            "{} vs {dev}",
            sol.objective
        );
    }

    #[test]
    fn file_round_trip() {
        let (lp, u) = one_by_one();
        let cc = build_compact(&lp, &u, CompactOptions::default()).unwrap();
        let text = cc.write();
        assert!(text.contains("[varmap]\nx 0\nv 0 0\n"));
        assert!(text.contains("dual 0 0 1"));
        assert_eq!(CompactCounterpart::parse(&text).unwrap(), cc);
    }
}
