//! Sparse LU factorization of a simplex basis with product-form updates.

/// Entries below this magnitude are dropped during elimination.
const DROP: f64 = 1e-14;
/// Smallest acceptable pivot magnitude.
const SINGULAR: f64 = 1e-11;
const NONE: usize = usize::MAX;

/// B = L U up to row and column permutations, built column by column
/// (left-looking) with partial pivoting.
#[derive(Debug, Clone)]
pub(crate) struct Lu {
    m: usize,
    /// Row chosen as the k-th pivot.
    pivot_row: Vec<usize>,
    /// Multipliers below pivot k, keyed by original row.
    l_cols: Vec<Vec<(usize, f64)>>,
    /// Strictly-upper part of U column j, keyed by pivot index.
    u_cols: Vec<Vec<(usize, f64)>>,
    u_diag: Vec<f64>,
    /// Basis position factored as the j-th column.
    col_perm: Vec<usize>,
    etas: Vec<Eta>,
}

#[derive(Debug, Clone)]
struct Eta {
    r: usize,
    pivot: f64,
    /// Off-pivot entries of the entering column in basis-position space.
    entries: Vec<(usize, f64)>,
}

impl Lu {
    /// Factors the m×m matrix whose column `p` is `cols[p]` (row, value)
    /// pairs. Returns the offending basis position if it is singular.
    pub(crate) fn factor(m: usize, cols: &[Vec<(usize, f64)>]) -> Result<Lu, usize> {
        debug_assert_eq!(cols.len(), m);
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by_key(|&p| cols[p].len());

        let mut lu = Lu {
            m,
            pivot_row: Vec::with_capacity(m),
            l_cols: Vec::with_capacity(m),
            u_cols: Vec::with_capacity(m),
            u_diag: Vec::with_capacity(m),
            col_perm: order.clone(),
            etas: Vec::new(),
        };
        let mut row_piv = vec![NONE; m];
        let mut work = vec![0.0; m];
        let mut in_pattern = vec![false; m];
        let mut pattern: Vec<usize> = Vec::new();
        let mut visited = vec![NONE; m];
        let mut topo: Vec<usize> = Vec::new();
        let mut stack: Vec<(usize, usize)> = Vec::new();

        for (j, &p) in order.iter().enumerate() {
            pattern.clear();
            for &(i, v) in &cols[p] {
                work[i] += v;
                if !in_pattern[i] {
                    in_pattern[i] = true;
                    pattern.push(i);
                }
            }

            // pivots reachable from the column's rows, in topological order
            topo.clear();
            for &(i, _) in &cols[p] {
                let k0 = row_piv[i];
                if k0 == NONE || visited[k0] == j {
                    continue;
                }
                visited[k0] = j;
                stack.push((k0, 0));
                while let Some(top) = stack.last_mut() {
                    let k = top.0;
                    let col = &lu.l_cols[k];
                    let mut child = None;
                    while top.1 < col.len() {
                        let kk = row_piv[col[top.1].0];
                        top.1 += 1;
                        if kk != NONE && visited[kk] != j {
                            child = Some(kk);
                            break;
                        }
                    }
                    match child {
                        Some(kk) => {
                            visited[kk] = j;
                            stack.push((kk, 0));
                        }
                        None => {
                            topo.push(k);
                            stack.pop();
                        }
                    }
                }
            }

            let mut u_col = Vec::new();
            for &k in topo.iter().rev() {
                let xk = work[lu.pivot_row[k]];
                if xk.abs() <= DROP {
                    continue;
                }
                u_col.push((k, xk));
                for &(i, l) in &lu.l_cols[k] {
                    work[i] -= l * xk;
                    if !in_pattern[i] {
                        in_pattern[i] = true;
                        pattern.push(i);
                    }
                }
            }

            let mut best = NONE;
            let mut best_abs = 0.0;
            for &i in &pattern {
                if row_piv[i] == NONE && work[i].abs() > best_abs {
                    best_abs = work[i].abs();
                    best = i;
                }
            }
            if best == NONE || best_abs < SINGULAR {
                return Err(p);
            }
            let piv = work[best];
            let mut l_col = Vec::new();
            for &i in &pattern {
                if row_piv[i] == NONE && i != best && work[i].abs() > DROP {
                    l_col.push((i, work[i] / piv));
                }
            }
            for &i in &pattern {
                work[i] = 0.0;
                in_pattern[i] = false;
            }
            row_piv[best] = j;
            lu.pivot_row.push(best);
            lu.l_cols.push(l_col);
            lu.u_cols.push(u_col);
            lu.u_diag.push(piv);
        }
        Ok(lu)
    }

    pub(crate) fn eta_count(&self) -> usize {
        self.etas.len()
    }

    /// Records that the column at basis position `r` was replaced by one whose
    /// representation in the old basis is `alpha`.
    pub(crate) fn push_eta(&mut self, r: usize, alpha: &[f64]) {
        let entries = alpha
            .iter()
            .enumerate()
            .filter(|&(i, &a)| i != r && a.abs() > DROP)
            .map(|(i, &a)| (i, a))
            .collect();
        self.etas.push(Eta {
            r,
            pivot: alpha[r],
            entries,
        });
    }

    /// Solves B w = a for a dense right-hand side indexed by row; the result
    /// is indexed by basis position.
    pub(crate) fn ftran(&self, a: &mut [f64]) -> Vec<f64> {
        let m = self.m;
        let mut v = vec![0.0; m];
        for k in 0..m {
            let vk = a[self.pivot_row[k]];
            if vk != 0.0 {
                for &(i, l) in &self.l_cols[k] {
                    a[i] -= l * vk;
                }
            }
            v[k] = vk;
        }
        let mut w = vec![0.0; m];
        for j in (0..m).rev() {
            let wj = v[j] / self.u_diag[j];
            if wj != 0.0 {
                for &(k, u) in &self.u_cols[j] {
                    v[k] -= u * wj;
                }
            }
            w[self.col_perm[j]] = wj;
        }
        for eta in &self.etas {
            let wr = w[eta.r] / eta.pivot;
            w[eta.r] = wr;
            if wr != 0.0 {
                for &(i, a) in &eta.entries {
                    w[i] -= a * wr;
                }
            }
        }
        w
    }

    /// Solves Bᵀ y = c for `c` indexed by basis position; the result is
    /// indexed by row.
    pub(crate) fn btran(&self, c: &[f64]) -> Vec<f64> {
        let m = self.m;
        let mut z = c.to_vec();
        for eta in self.etas.iter().rev() {
            let s: f64 = eta.entries.iter().map(|&(i, a)| a * z[i]).sum();
            z[eta.r] = (z[eta.r] - s) / eta.pivot;
        }
        let mut g = vec![0.0; m];
        for j in 0..m {
            let s: f64 = self.u_cols[j].iter().map(|&(k, u)| u * g[k]).sum();
            g[j] = (z[self.col_perm[j]] - s) / self.u_diag[j];
        }
        let mut y = vec![0.0; m];
        for k in (0..m).rev() {
            let s: f64 = self.l_cols[k].iter().map(|&(i, l)| l * y[i]).sum();
            y[self.pivot_row[k]] = g[k] - s;
        }
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_mul(cols: &[Vec<(usize, f64)>], w: &[f64], m: usize) -> Vec<f64> {
        let mut out = vec![0.0; m];
        for (p, col) in cols.iter().enumerate() {
            for &(i, v) in col {
                out[i] += v * w[p];
            }
        }
        out
    }

    fn dense_mul_t(cols: &[Vec<(usize, f64)>], y: &[f64]) -> Vec<f64> {
        cols.iter()
            .map(|col| col.iter().map(|&(i, v)| v * y[i]).sum())
            .collect()
    }

    #[test]
    fn solves_small_system() {
        // [[2, 0, 1], [1, 3, 0], [0, 1, 4]] by columns
        let cols = vec![
            vec![(0, 2.0), (1, 1.0)],
            vec![(1, 3.0), (2, 1.0)],
            vec![(0, 1.0), (2, 4.0)],
        ];
        let lu = Lu::factor(3, &cols).unwrap();
        let rhs = [1.0, 2.0, 3.0];
        let w = lu.ftran(&mut rhs.to_vec());
        let back = dense_mul(&cols, &w, 3);
        for i in 0..3 {
            assert!((back[i] - rhs[i]).abs() < 1e-12);
        }
        let y = lu.btran(&rhs);
        let back = dense_mul_t(&cols, &y);
        for i in 0..3 {
            assert!((back[i] - rhs[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn eta_updates_track_column_replacement() {
        let mut cols = vec![vec![(0, 1.0)], vec![(1, 1.0)], vec![(2, 1.0)]];
        let mut lu = Lu::factor(3, &cols).unwrap();
        let entering = vec![(0, 1.0), (1, 2.0), (2, 3.0)];
        let mut dense = vec![1.0, 2.0, 3.0];
        let alpha = lu.ftran(&mut dense);
        lu.push_eta(1, &alpha);
        cols[1] = entering;
        let rhs = [4.0, 5.0, 6.0];
        let w = lu.ftran(&mut rhs.to_vec());
        let back = dense_mul(&cols, &w, 3);
        for i in 0..3 {
            assert!((back[i] - rhs[i]).abs() < 1e-12);
        }
        let y = lu.btran(&rhs);
        let back = dense_mul_t(&cols, &y);
        for i in 0..3 {
            assert!((back[i] - rhs[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn detects_singularity() {
        let cols = vec![vec![(0, 1.0), (1, 1.0)], vec![(0, 2.0), (1, 2.0)]];
        assert!(Lu::factor(2, &cols).is_err());
    }
}
