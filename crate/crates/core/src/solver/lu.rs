//! Sparse LU factorization of a simplex basis.
//!
//! Right-looking Gaussian elimination. Each step picks the active column
//! with the fewest nonzeros and, inside it, the sparsest row among the
//! entries within a factor of the column's largest one (threshold partial
//! pivoting). Slack columns are singletons and are eliminated for free.

/// Columns at these basis positions were dependent; `rows` lists the rows
/// left without a pivot, one per position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Singular {
    pub positions: Vec<usize>,
    pub rows: Vec<usize>,
}

#[derive(Debug, Clone)]
pub(crate) struct SparseLu {
    piv_row: Vec<usize>,
    piv_pos: Vec<usize>,
    l_start: Vec<usize>,
    l_idx: Vec<usize>,
    l_val: Vec<f64>,
    u_start: Vec<usize>,
    u_idx: Vec<usize>,
    u_val: Vec<f64>,
    u_diag: Vec<f64>,
}

const THRESHOLD: f64 = 0.1;

impl SparseLu {
    /// Factors the `m x m` matrix whose column `p` is `columns[p]`.
    pub fn factor(
        m: usize,
        columns: &[Vec<(usize, f64)>],
        abs_tol: f64,
    ) -> Result<SparseLu, Singular> {
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); m];
        let mut col_rows: Vec<Vec<usize>> = vec![Vec::new(); m];
        for (p, col) in columns.iter().enumerate() {
            for &(i, v) in col {
                rows[i].push((p, v));
                col_rows[p].push(i);
            }
        }
        let mut col_count: Vec<usize> = col_rows.iter().map(Vec::len).collect();
        let mut row_done = vec![false; m];
        let mut col_done = vec![false; m];
        let mut slot = vec![usize::MAX; m];

        let mut lu = SparseLu {
            piv_row: Vec::with_capacity(m),
            piv_pos: Vec::with_capacity(m),
            l_start: vec![0],
            l_idx: Vec::new(),
            l_val: Vec::new(),
            u_start: vec![0],
            u_idx: Vec::new(),
            u_val: Vec::new(),
            u_diag: Vec::with_capacity(m),
        };
        let mut singular = Vec::new();

        for _ in 0..m {
            // column of minimum count
            let mut c = usize::MAX;
            for p in 0..m {
                if !col_done[p] && (c == usize::MAX || col_count[p] < col_count[c]) {
                    c = p;
                    if col_count[p] <= 1 {
                        break;
                    }
                }
            }
            if c == usize::MAX {
                break;
            }
            col_done[c] = true;

            let value_in = |rows: &Vec<Vec<(usize, f64)>>, i: usize| {
                rows[i].iter().find(|e| e.0 == c).map_or(0.0, |e| e.1)
            };
            let mut max_abs: f64 = 0.0;
            for &i in &col_rows[c] {
                if !row_done[i] {
                    max_abs = max_abs.max(value_in(&rows, i).abs());
                }
            }
            if max_abs < abs_tol {
                singular.push(c);
                for &i in &col_rows[c] {
                    if !row_done[i] {
                        if let Some(k) = rows[i].iter().position(|e| e.0 == c) {
                            rows[i].swap_remove(k);
                        }
                    }
                }
                continue;
            }
            let mut r = usize::MAX;
            for &i in &col_rows[c] {
                if row_done[i] {
                    continue;
                }
                let v = value_in(&rows, i).abs();
                if v >= THRESHOLD * max_abs
                    && v >= abs_tol
                    && (r == usize::MAX
                        || rows[i].len() < rows[r].len()
                        || (rows[i].len() == rows[r].len() && i < r))
                {
                    r = i;
                }
            }
            row_done[r] = true;
            let pivot_row = std::mem::take(&mut rows[r]);
            let piv = pivot_row.iter().find(|e| e.0 == c).expect("pivot entry").1;
            for &(p, _) in &pivot_row {
                if p != c {
                    col_count[p] -= 1;
                }
            }

            let others: Vec<usize> = col_rows[c]
                .iter()
                .copied()
                .filter(|&i| !row_done[i])
                .collect();
            for i in others {
                let Some(k) = rows[i].iter().position(|e| e.0 == c) else {
                    continue;
                };
                let a = rows[i].swap_remove(k).1;
                let l = a / piv;
                lu.l_idx.push(i);
                lu.l_val.push(l);
                let row = &mut rows[i];
                for (k, e) in row.iter().enumerate() {
                    slot[e.0] = k;
                }
                for &(p, v) in &pivot_row {
                    if p == c {
                        continue;
                    }
                    if slot[p] != usize::MAX {
                        row[slot[p]].1 -= l * v;
                    } else {
                        slot[p] = row.len();
                        row.push((p, -l * v));
                        col_rows[p].push(i);
                        col_count[p] += 1;
                    }
                }
                for e in row.iter() {
                    slot[e.0] = usize::MAX;
                }
            }
            lu.l_start.push(lu.l_idx.len());
            for &(p, v) in &pivot_row {
                if p != c {
                    lu.u_idx.push(p);
                    lu.u_val.push(v);
                }
            }
            lu.u_start.push(lu.u_idx.len());
            lu.u_diag.push(piv);
            lu.piv_row.push(r);
            lu.piv_pos.push(c);
        }

        if singular.is_empty() {
            Ok(lu)
        } else {
            let rows = (0..m).filter(|&i| !row_done[i]).collect();
            Err(Singular {
                positions: singular,
                rows,
            })
        }
    }

    /// Solves `B z = a`; `a` is indexed by row and is overwritten, `z` by position.
    pub fn ftran(&self, a: &mut [f64], z: &mut [f64]) {
        for k in 0..self.piv_row.len() {
            let ar = a[self.piv_row[k]];
            if ar != 0.0 {
                for t in self.l_start[k]..self.l_start[k + 1] {
                    a[self.l_idx[t]] -= self.l_val[t] * ar;
                }
            }
        }
        for k in (0..self.piv_row.len()).rev() {
            let mut v = a[self.piv_row[k]];
            for t in self.u_start[k]..self.u_start[k + 1] {
                v -= self.u_val[t] * z[self.u_idx[t]];
            }
            z[self.piv_pos[k]] = v / self.u_diag[k];
        }
    }

    /// Solves `B^T y = c`; `c` is indexed by position and is overwritten, `y` by row.
    pub fn btran(&self, c: &mut [f64], y: &mut [f64]) {
        for k in 0..self.piv_row.len() {
            let t = c[self.piv_pos[k]] / self.u_diag[k];
            y[self.piv_row[k]] = t;
            if t != 0.0 {
                for s in self.u_start[k]..self.u_start[k + 1] {
                    c[self.u_idx[s]] -= self.u_val[s] * t;
                }
            }
        }
        for k in (0..self.piv_row.len()).rev() {
            let mut acc = 0.0;
            for s in self.l_start[k]..self.l_start[k + 1] {
                acc += self.l_val[s] * y[self.l_idx[s]];
            }
            y[self.piv_row[k]] -= acc;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_to_cols(a: &[Vec<f64>]) -> Vec<Vec<(usize, f64)>> {
        let m = a.len();
        (0..m)
            .map(|p| {
                (0..m)
                    .filter(|&i| a[i][p] != 0.0)
                    .map(|i| (i, a[i][p]))
                    .collect()
            })
            .collect()
    }

    #[test]
    fn solves_both_ways() {
        let a = vec![
            vec![2.0, 0.0, 1.0, 0.0],
            vec![1.0, 3.0, 0.0, 0.0],
            vec![0.0, 1.0, 4.0, 1.0],
            vec![0.0, 0.0, 1.0, -1.0],
        ];
        let lu = SparseLu::factor(4, &dense_to_cols(&a), 1e-12).unwrap();
        let x = [1.0, -2.0, 0.5, 3.0];
        let mut b: Vec<f64> = (0..4)
            .map(|i| (0..4).map(|j| a[i][j] * x[j]).sum())
            .collect();
        let mut z = vec![0.0; 4];
        lu.ftran(&mut b, &mut z);
        for j in 0..4 {
            assert!((z[j] - x[j]).abs() < 1e-12);
        }
        let mut c: Vec<f64> = (0..4)
            .map(|j| (0..4).map(|i| a[i][j] * x[i]).sum())
            .collect();
        let mut y = vec![0.0; 4];
        lu.btran(&mut c, &mut y);
        for i in 0..4 {
            assert!((y[i] - x[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn reports_dependent_columns() {
        let a = vec![
            vec![1.0, 2.0, 0.0],
            vec![2.0, 4.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ];
        let err = SparseLu::factor(3, &dense_to_cols(&a), 1e-12).unwrap_err();
        assert_eq!(err.positions.len(), 1);
        assert_eq!(err.rows.len(), 1);
    }
}
