use serde::{Deserialize, Serialize};

use super::{KernelKind, KernelSpec, MsscError};

/// Absolute tolerance on kernel row sums.
const ROW_TOL: f64 = 1e-9;
/// Relative slack granted to floating-point rounding in the inequality checks.
const REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelReport {
    pub kind: KernelKind,
    pub c: usize,
    pub t_max: usize,
    /// max_t |Σ_{t'≤t} K(t,t') - β|
    pub max_row_error: f64,
    /// max over t' of T/t', where T is the first time the column sum from t'
    /// passes 1.
    pub worst_column_ratio: f64,
}

/// Checks that every kernel row sums to β and that every column sum starting
/// at t' passes 1 by time 64 t', for all times up to `t_max`.
pub fn verify_kernel_bounds(k: &KernelSpec, t_max: usize) -> Result<KernelReport, MsscError> {
    if t_max == 0 {
        return Err(MsscError::InvalidArgument("t_max must be positive".into()));
    }
    let beta = k.beta();
    let horizon = 64 * t_max;
    let a = k.row_factors(horizon);
    let b = k.column_factors(horizon);

    let mut max_row_error: f64 = 0.0;
    for t in 1..=t_max {
        let sum: f64 = (0..t).map(|j| a[t - 1] * b[j]).sum();
        let err = (sum - beta).abs();
        if err > ROW_TOL {
            return Err(MsscError::BoundViolated {
                check: format!("row sum = {beta}"),
                witness: format!("t = {t} (sum {sum})"),
            });
        }
        max_row_error = max_row_error.max(err);
    }

    let mut worst_column_ratio: f64 = 0.0;
    for tp in 1..=t_max {
        let mut sum = 0.0;
        let reached = (tp..=64 * tp).find(|&t| {
            sum += a[t - 1] * b[tp - 1];
            sum > 1.0
        });
        match reached {
            Some(t) => worst_column_ratio = worst_column_ratio.max(t as f64 / tp as f64),
            None => {
                return Err(MsscError::BoundViolated {
                    check: "column sum exceeds 1".into(),
                    witness: format!("t' = {tp} (sum {sum} at T = {})", 64 * tp),
                })
            }
        }
    }

    Ok(KernelReport {
        kind: k.kind,
        c: k.c,
        t_max,
        max_row_error,
        worst_column_ratio,
    })
}

/// (u, v, q) points for the integral inequality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaGrid {
    pub points: Vec<(f64, f64, f64)>,
}

impl LemmaGrid {
    /// v in 1..=20, u = v k/21 for k in 1..=20, q = -j/10 for j in 0..10.
    pub fn standard() -> Self {
        let mut points = Vec::with_capacity(4000);
        for vi in 1..=20 {
            let v = vi as f64;
            for k in 1..=20 {
                let u = v * k as f64 / 21.0;
                for j in 0..10 {
                    points.push((u, v, -(j as f64) / 10.0));
                }
            }
        }
        LemmaGrid { points }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub power_sum_checks: usize,
    /// Largest observed lhs/rhs for the power-sum bound.
    pub power_sum_max_ratio: f64,
    pub integral_checks: usize,
    /// Largest observed lhs/rhs for the integral bound.
    pub integral_max_ratio: f64,
}

/// Compensated running sum.
#[derive(Default)]
struct Neumaier {
    sum: f64,
    carry: f64,
}

impl Neumaier {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Checks Σ_{i≤t} i^p ≤ (p/(p+1)) t^p (t+1)^p / ((t+1)^p - t^p) for all
/// t ≤ `t_max` and each p, and ∫_u^v x^q dx ≤ (v-u) u^{q/2} v^{q/2} on `grid`.
pub fn verify_lemmas(
    t_max: usize,
    p_grid: &[f64],
    grid: &LemmaGrid,
) -> Result<LemmaReport, MsscError> {
    if let Some(p) = p_grid.iter().find(|&&p| !(p > 0.0 && p <= 1.0)) {
        return Err(MsscError::InvalidArgument(format!(
            "p = {p} outside (0, 1]"
        )));
    }
    if let Some(pt) = grid
        .points
        .iter()
        .find(|&&(u, v, q)| !(q > -1.0 && q <= 0.0 && u > 0.0 && u < v && v >= 1.0))
    {
        return Err(MsscError::InvalidArgument(format!(
            "grid point {pt:?} outside the domain"
        )));
    }

    let mut power_sum_max_ratio: f64 = 0.0;
    for &p in p_grid {
        let mut lhs = Neumaier::default();
        for t in 1..=t_max {
            let tf = t as f64;
            lhs.add(tf.powf(p));
            // (t+1)^p - t^p = t^p expm1(p ln(1 + 1/t)), cancelling t^p
            let rhs = p / (p + 1.0) * (tf + 1.0).powf(p) / (p * (1.0 / tf).ln_1p()).exp_m1();
            let ratio = lhs.value() / rhs;
            if ratio > 1.0 + REL_TOL {
                return Err(MsscError::BoundViolated {
                    check: "power-sum bound".into(),
                    witness: format!("p = {p}, t = {t} (lhs {} > rhs {rhs})", lhs.value()),
                });
            }
            power_sum_max_ratio = power_sum_max_ratio.max(ratio);
        }
    }

    let mut integral_max_ratio: f64 = 0.0;
    for &(u, v, q) in &grid.points {
        let lhs = (v.powf(q + 1.0) - u.powf(q + 1.0)) / (q + 1.0);
        let rhs = (v - u) * u.powf(q / 2.0) * v.powf(q / 2.0);
        let ratio = lhs / rhs;
        if ratio > 1.0 + REL_TOL {
            return Err(MsscError::BoundViolated {
                check: "integral bound".into(),
                witness: format!("u = {u}, v = {v}, q = {q} (lhs {lhs} > rhs {rhs})"),
            });
        }
        integral_max_ratio = integral_max_ratio.max(ratio);
    }

    Ok(LemmaReport {
        power_sum_checks: p_grid.len() * t_max,
        power_sum_max_ratio,
        integral_checks: grid.points.len(),
        integral_max_ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_sum_c3_t10() {
        let k = KernelSpec::power_law(3);
        let s: f64 = (1..=10).map(|tp| k.value(10, tp)).sum();
        assert!((s - 1.5).abs() < 1e-12);
    }

    #[test]
    fn all_kernels_pass_small_sweep() {
        for k in [
            KernelSpec::harmonic(),
            KernelSpec::msvc(),
            KernelSpec::power_law(5),
        ] {
            let r = verify_kernel_bounds(&k, 40).unwrap();
            assert!(r.max_row_error < 1e-12);
            assert!(r.worst_column_ratio <= 64.0);
        }
    }

    #[test]
    fn power_sum_equality_at_p1() {
        let r = verify_lemmas(3, &[1.0], &LemmaGrid { points: vec![] }).unwrap();
        assert!((r.power_sum_max_ratio - 1.0).abs() < 1e-15);
    }

    #[test]
    fn integral_equality_at_q0() {
        let r = verify_lemmas(
            1,
            &[0.5],
            &LemmaGrid {
                points: vec![(0.5, 2.0, 0.0)],
            },
        )
        .unwrap();
        assert!((r.integral_max_ratio - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_out_of_domain() {
        assert!(verify_lemmas(1, &[1.5], &LemmaGrid::standard()).is_err());
        assert!(verify_lemmas(
            1,
            &[0.5],
            &LemmaGrid {
                points: vec![(2.0, 1.0, 0.0)]
            }
        )
        .is_err());
    }
}
