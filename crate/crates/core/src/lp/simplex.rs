use serde::{Deserialize, Serialize};

use super::lu::Lu;
use super::{LpError, LpModel, Sense};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Feasibility tolerance on every row of the returned point.
    pub tol: f64,
    pub max_iterations: usize,
    /// Pivots between basis refactorizations.
    pub refactor_every: usize,
    /// Consecutive non-improving pivots before switching to Bland's rule.
    pub bland_after: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: 1e-7,
            max_iterations: 1_000_000,
            refactor_every: 64,
            bland_after: 50,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpSolution {
    /// Optimal values of the model's columns.
    pub x: Vec<f64>,
    pub objective: f64,
    /// Row duals in the model's own sign convention: nonnegative on ≥ rows
    /// and nonpositive on ≤ rows of a minimization.
    pub duals: Vec<f64>,
    pub iterations: usize,
    /// Largest row or bound violation of `x`.
    pub max_violation: f64,
}

/// Reduced-cost threshold for entering columns.
const DUAL_TOL: f64 = 1e-9;
/// Smallest usable entry of the entering column in the ratio test.
const PIVOT_TOL: f64 = 1e-9;
/// Phase-one objective below which the problem counts as feasible.
const PHASE_ONE_TOL: f64 = 1e-8;
const NONBASIC: usize = usize::MAX;

/// Two-phase revised simplex.
///
/// Rows are brought to equality form with slacks and flipped to a
/// nonnegative right-hand side; rows without a usable slack get an
/// artificial column for phase one. Pricing is Dantzig's rule, replaced by
/// Bland's rule after a run of non-improving pivots until the objective
/// moves again.
pub fn solve_lp(model: &LpModel, opts: &SolverOptions) -> Result<LpSolution, LpError> {
    let mut s = Simplex::new(model, opts);
    s.refactor()?;

    if s.has_artificials() {
        s.set_phase_one_costs();
        s.run(false)?;
        let residual: f64 = s
            .basis
            .iter()
            .zip(&s.xb)
            .filter(|&(&j, _)| s.is_art[j])
            .map(|(_, &v)| v)
            .sum();
        let scale = 1.0 + s.b.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
        if residual > PHASE_ONE_TOL * scale {
            return Err(LpError::Infeasible(residual));
        }
        s.drive_out_artificials()?;
    }
    s.set_phase_two_costs();
    s.run(true)?;
    s.refactor()?;
    Ok(s.solution())
}

struct Simplex<'a> {
    model: &'a LpModel,
    opts: &'a SolverOptions,
    m: usize,
    n_struct: usize,
    /// Standard-form columns: structural, then slack, then artificial.
    cols: Vec<Vec<(usize, f64)>>,
    is_art: Vec<bool>,
    /// Row multipliers applied to make b nonnegative.
    flip: Vec<f64>,
    b: Vec<f64>,
    cost: Vec<f64>,
    basis: Vec<usize>,
    position: Vec<usize>,
    xb: Vec<f64>,
    lu: Option<Lu>,
    iterations: usize,
}

impl<'a> Simplex<'a> {
    fn new(model: &'a LpModel, opts: &'a SolverOptions) -> Self {
        let m = model.num_rows();
        let n_struct = model.num_cols();
        let flip: Vec<f64> = (0..m)
            .map(|i| if model.rhs(i) < 0.0 { -1.0 } else { 1.0 })
            .collect();
        let b: Vec<f64> = (0..m).map(|i| model.rhs(i) * flip[i]).collect();

        let mut cols: Vec<Vec<(usize, f64)>> = (0..n_struct)
            .map(|j| {
                let (rows, vals) = model.column(j);
                rows.iter()
                    .zip(vals)
                    .map(|(&i, &v)| (i, v * flip[i]))
                    .collect()
            })
            .collect();
        let mut start = vec![NONBASIC; m];
        for i in 0..m {
            let slack = match model.sense(i) {
                Sense::Ge => -1.0,
                Sense::Le => 1.0,
                Sense::Eq => continue,
            } * flip[i];
            cols.push(vec![(i, slack)]);
            if slack > 0.0 {
                start[i] = cols.len() - 1;
            }
        }
        let mut is_art = vec![false; cols.len()];
        for i in 0..m {
            if start[i] == NONBASIC {
                cols.push(vec![(i, 1.0)]);
                is_art.push(true);
                start[i] = cols.len() - 1;
            }
        }
        let mut position = vec![NONBASIC; cols.len()];
        for (p, &j) in start.iter().enumerate() {
            position[j] = p;
        }
        let ncols = cols.len();
        Simplex {
            model,
            opts,
            m,
            n_struct,
            cols,
            is_art,
            flip,
            xb: b.clone(),
            b,
            cost: vec![0.0; ncols],
            basis: start,
            position,
            lu: None,
            iterations: 0,
        }
    }

    fn has_artificials(&self) -> bool {
        self.basis.iter().any(|&j| self.is_art[j])
    }

    fn set_phase_one_costs(&mut self) {
        for (c, &a) in self.cost.iter_mut().zip(&self.is_art) {
            *c = if a { 1.0 } else { 0.0 };
        }
    }

    fn set_phase_two_costs(&mut self) {
        self.cost.iter_mut().for_each(|c| *c = 0.0);
        self.cost[..self.n_struct].copy_from_slice(self.model.cost());
    }

    fn lu(&self) -> &Lu {
        self.lu.as_ref().expect("basis is factored")
    }

    fn refactor(&mut self) -> Result<(), LpError> {
        let basis_cols: Vec<Vec<(usize, f64)>> =
            self.basis.iter().map(|&j| self.cols[j].clone()).collect();
        let lu = Lu::factor(self.m, &basis_cols)
            .map_err(|p| LpError::Numerical(format!("singular basis at position {p}")))?;
        let mut rhs = self.b.clone();
        self.xb = lu.ftran(&mut rhs);
        for v in &mut self.xb {
            if *v < 0.0 && *v > -PIVOT_TOL {
                *v = 0.0;
            }
        }
        self.lu = Some(lu);
        Ok(())
    }

    fn column_dense(&self, j: usize) -> Vec<f64> {
        let mut a = vec![0.0; self.m];
        for &(i, v) in &self.cols[j] {
            a[i] = v;
        }
        a
    }

    fn duals(&self) -> Vec<f64> {
        let cb: Vec<f64> = self.basis.iter().map(|&j| self.cost[j]).collect();
        self.lu().btran(&cb)
    }

    fn reduced_cost(&self, j: usize, y: &[f64]) -> f64 {
        self.cost[j] - self.cols[j].iter().map(|&(i, v)| v * y[i]).sum::<f64>()
    }

    fn objective(&self) -> f64 {
        self.basis
            .iter()
            .zip(&self.xb)
            .map(|(&j, &v)| self.cost[j] * v)
            .sum()
    }

    fn pivot(&mut self, r: usize, q: usize, alpha: &[f64]) -> Result<(), LpError> {
        let theta = self.xb[r] / alpha[r];
        for (i, x) in self.xb.iter_mut().enumerate() {
            if i != r {
                *x -= theta * alpha[i];
                if *x < 0.0 && *x > -PIVOT_TOL {
                    *x = 0.0;
                }
            }
        }
        self.xb[r] = theta;
        let leaving = self.basis[r];
        self.position[leaving] = NONBASIC;
        self.position[q] = r;
        self.basis[r] = q;
        self.iterations += 1;
        let lu = self.lu.as_mut().expect("basis is factored");
        lu.push_eta(r, alpha);
        if lu.eta_count() >= self.opts.refactor_every {
            self.refactor()?;
        }
        Ok(())
    }

    fn run(&mut self, phase_two: bool) -> Result<(), LpError> {
        let mut stalled = 0usize;
        let mut bland = false;
        let mut obj = self.objective();
        loop {
            if self.iterations >= self.opts.max_iterations {
                return Err(LpError::IterationLimit(self.opts.max_iterations));
            }
            let y = self.duals();
            let mut entering: Option<(usize, f64)> = None;
            for j in 0..self.cols.len() {
                if self.position[j] != NONBASIC || self.is_art[j] {
                    continue;
                }
                let d = self.reduced_cost(j, &y);
                if d < -DUAL_TOL {
                    if bland {
                        entering = Some((j, d));
                        break;
                    }
                    if entering.is_none_or(|(_, best)| d < best) {
                        entering = Some((j, d));
                    }
                }
            }
            let Some((q, dq)) = entering else {
                return Ok(());
            };

            let mut a = self.column_dense(q);
            let alpha = self.lu().ftran(&mut a);
            let Some(r) = self.ratio_test(&alpha, phase_two, bland) else {
                if phase_two {
                    return Err(LpError::Unbounded);
                }
                return Err(LpError::Numerical(
                    "phase one found an unbounded ray".into(),
                ));
            };
            let theta = self.xb[r] / alpha[r];
            self.pivot(r, q, &alpha)?;

            let next = obj + theta * dq;
            if theta * dq.abs() > 1e-12 * obj.abs().max(1.0) {
                stalled = 0;
                bland = false;
            } else {
                stalled += 1;
                if stalled >= self.opts.bland_after {
                    bland = true;
                }
            }
            obj = next;
        }
    }

    /// Leaving basis position for entering column representation `alpha`.
    fn ratio_test(&self, alpha: &[f64], phase_two: bool, bland: bool) -> Option<usize> {
        let amax = alpha.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
        let tol = PIVOT_TOL.max(1e-11 * amax);
        let mut best: Option<(usize, f64)> = None;
        for (i, &a) in alpha.iter().enumerate() {
            let j = self.basis[i];
            let ratio = if phase_two && self.is_art[j] && a.abs() > tol {
                0.0
            } else if a > tol {
                self.xb[i].max(0.0) / a
            } else {
                continue;
            };
            best = match best {
                None => Some((i, ratio)),
                Some((bi, br)) => {
                    let slack = 1e-12 * br.max(1.0);
                    if ratio < br - slack {
                        Some((i, ratio))
                    } else if ratio <= br + slack {
                        let better = if bland {
                            j < self.basis[bi]
                        } else {
                            a.abs() > alpha[bi].abs()
                        };
                        if better {
                            Some((i, ratio.min(br)))
                        } else {
                            Some((bi, br))
                        }
                    } else {
                        Some((bi, br))
                    }
                }
            };
        }
        best.map(|(i, _)| i)
    }

    /// Pivots zero-valued artificials out of the basis where some real column
    /// can replace them; the rest sit on redundant rows.
    fn drive_out_artificials(&mut self) -> Result<(), LpError> {
        for r in 0..self.m {
            if !self.is_art[self.basis[r]] {
                continue;
            }
            let mut e = vec![0.0; self.m];
            e[r] = 1.0;
            let rho = self.lu().btran(&e);
            let mut pick: Option<(usize, f64)> = None;
            for j in 0..self.cols.len() {
                if self.position[j] != NONBASIC || self.is_art[j] {
                    continue;
                }
                let v: f64 = self.cols[j].iter().map(|&(i, a)| a * rho[i]).sum();
                if v.abs() > 1e-7 && pick.is_none_or(|(_, best)| v.abs() > best) {
                    pick = Some((j, v.abs()));
                }
            }
            if let Some((q, _)) = pick {
                let mut a = self.column_dense(q);
                let alpha = self.lu().ftran(&mut a);
                self.pivot(r, q, &alpha)?;
            }
        }
        Ok(())
    }

    fn solution(&self) -> LpSolution {
        let mut x = vec![0.0; self.n_struct];
        for (&j, &v) in self.basis.iter().zip(&self.xb) {
            if j < self.n_struct {
                x[j] = v.max(0.0);
            }
        }
        let y = self.duals();
        let duals = y.iter().zip(&self.flip).map(|(v, f)| v * f).collect();
        LpSolution {
            objective: self.model.objective(&x),
            max_violation: self.model.max_violation(&x),
            x,
            duals,
            iterations: self.iterations,
        }
    }
}
