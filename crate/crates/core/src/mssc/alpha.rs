use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{strip_dummies, KernelSpec, MsscError, MsscInstance, Ordering};

/// Fractional vertex schedule x_{v,t}, t = 1..=horizon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    n: usize,
    horizon: usize,
    /// Row-major by vertex: x[v * horizon + (t - 1)].
    x: Vec<f64>,
}

impl Schedule {
    pub fn new(n: usize, horizon: usize, x: Vec<f64>) -> Result<Self, MsscError> {
        if x.len() != n * horizon {
            return Err(MsscError::ScheduleMismatch {
                expected: format!("{n} x {horizon}"),
                got: format!("{} values", x.len()),
            });
        }
        if let Some(bad) = x.iter().find(|v| !v.is_finite()) {
            return Err(MsscError::InvalidArgument(format!("schedule value {bad}")));
        }
        Ok(Schedule { n, horizon, x })
    }

    /// The 0/1 schedule placing `order[i]` at time i + 1.
    pub fn from_order(order: &[usize]) -> Self {
        let n = order.len();
        let mut x = vec![0.0; n * n];
        for (i, &v) in order.iter().enumerate() {
            x[v * n + i] = 1.0;
        }
        Schedule { n, horizon: n, x }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// x_{v,t} with 1-based t.
    pub fn get(&self, v: usize, t: usize) -> f64 {
        self.x[v * self.horizon + t - 1]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaRun {
    /// Lowest-objective sample, on the real (non-dummy) vertices.
    pub best: Ordering,
    pub best_sample: usize,
    /// Objective of every sample, in sample order.
    pub objectives: Vec<f64>,
    /// Time horizon over which the smoothed schedule was accumulated.
    pub horizon_used: usize,
    /// Vertices whose smoothed mass stayed below 1 at the horizon cap.
    pub short_vertices: usize,
}

/// Mass below which cumulative smoothed weight is treated as complete.
const MASS_SLACK: f64 = 1e-9;

/// Randomized α-point rounding of a fractional schedule.
///
/// The schedule is smoothed by `kernel`, each vertex draws α uniform on
/// [0, 1) and is scheduled at the first time its cumulative smoothed weight
/// reaches α. Sample i draws from stream i of a generator seeded with
/// `seed`, so adding samples never changes earlier ones. Dummy vertices are
/// stripped before scoring.
pub fn alpha_point_round(
    inst: &MsscInstance,
    schedule: &Schedule,
    kernel: &KernelSpec,
    seed: u64,
    samples: usize,
) -> Result<AlphaRun, MsscError> {
    let n = inst.vertex_count();
    if n == 0 {
        return Err(MsscError::EmptyInstance);
    }
    if schedule.n != n {
        return Err(MsscError::ScheduleMismatch {
            expected: format!("{n} vertices"),
            got: format!("{} vertices", schedule.n),
        });
    }
    if samples == 0 {
        return Err(MsscError::InvalidArgument(
            "at least one sample is required".into(),
        ));
    }

    let h = schedule.horizon;
    let cap = (8 * n).max(h);
    let a = kernel.row_factors(cap);
    let b = kernel.column_factors(h);

    // inner[v] = Σ_{t' ≤ min(t, h)} b(t') x_{v,t'}; z_{v,t} = a(t) inner[v]
    let mut inner = vec![0.0; n];
    let mut cumulative = vec![0.0; n];
    // history[t-1][v] = Z_v(t)
    let mut history: Vec<Vec<f64>> = Vec::new();
    for t in 1..=cap {
        if t <= h {
            for (v, acc) in inner.iter_mut().enumerate() {
                *acc += b[t - 1] * schedule.get(v, t);
            }
        }
        for v in 0..n {
            cumulative[v] += a[t - 1] * inner[v];
        }
        history.push(cumulative.clone());
        if t >= h && cumulative.iter().all(|&z| z >= 1.0 - MASS_SLACK) {
            break;
        }
    }
    let horizon_used = history.len();
    let last = history.last().expect("cap is at least 1").clone();
    let short_vertices = last.iter().filter(|&&z| z < 1.0 - MASS_SLACK).count();

    let mut objectives = Vec::with_capacity(samples);
    let mut best: Option<(Ordering, usize)> = None;
    for sample in 0..samples {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(sample as u64);
        let alpha: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
        let tie: Vec<u64> = (0..n).map(|_| rng.gen()).collect();

        let tau: Vec<Option<usize>> = (0..n)
            .map(|v| {
                let t = history.partition_point(|row| row[v] < alpha[v]);
                (t < horizon_used).then_some(t)
            })
            .collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&x, &y| match (tau[x], tau[y]) {
            (Some(tx), Some(ty)) => tx.cmp(&ty).then(tie[x].cmp(&tie[y])).then(x.cmp(&y)),
            (Some(_), None) => std::cmp::Ordering::Less,
            (None, Some(_)) => std::cmp::Ordering::Greater,
            (None, None) => last[y]
                .total_cmp(&last[x])
                .then(tie[x].cmp(&tie[y]))
                .then(x.cmp(&y)),
        });

        let ordering = if inst.has_dummies() {
            strip_dummies(inst, &order)?
        } else {
            inst.evaluate(&order)?
        };
        objectives.push(ordering.objective);
        if best
            .as_ref()
            .is_none_or(|(o, _)| ordering.objective < o.objective)
        {
            best = Some((ordering, sample));
        }
    }
    let (best, best_sample) = best.expect("samples >= 1");
    Ok(AlphaRun {
        best,
        best_sample,
        objectives,
        horizon_used,
        short_vertices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mssc::KernelSpec;

    #[test]
    fn single_vertex() {
        let inst = MsscInstance::new(1, vec![(vec![0], 1.0)]).unwrap();
        let sched = Schedule::from_order(&[0]);
        let run = alpha_point_round(&inst, &sched, &KernelSpec::harmonic(), 1, 10).unwrap();
        assert_eq!(run.best.order, vec![0]);
        assert!(run.objectives.iter().all(|&o| o == 1.0));
    }

    #[test]
    fn samples_are_prefix_stable() {
        let inst = MsscInstance::new(
            4,
            vec![(vec![0, 1], 1.0), (vec![2, 3], 2.0), (vec![1, 2], 1.0)],
        )
        .unwrap();
        let sched = Schedule::new(4, 4, vec![0.25; 16]).unwrap();
        let k = KernelSpec::msvc();
        let short = alpha_point_round(&inst, &sched, &k, 9, 5).unwrap();
        let long = alpha_point_round(&inst, &sched, &k, 9, 12).unwrap();
        assert_eq!(short.objectives[..], long.objectives[..5]);
    }

    #[test]
    fn integral_schedule_stays_within_four_times_cost() {
        let inst = MsscInstance::new(
            4,
            vec![
                (vec![0], 3.0),
                (vec![1, 2], 1.0),
                (vec![3], 2.0),
                (vec![2, 3], 1.0),
            ],
        )
        .unwrap();
        let order = [0, 3, 2, 1];
        let cost = inst.evaluate(&order).unwrap().objective;
        let sched = Schedule::from_order(&order);
        let run = alpha_point_round(&inst, &sched, &KernelSpec::harmonic(), 5, 50).unwrap();
        assert!(run.objectives.iter().all(|&o| o <= 4.0 * cost));
    }

    #[test]
    fn rejects_bad_inputs() {
        let inst = MsscInstance::new(2, vec![(vec![0, 1], 1.0)]).unwrap();
        let sched = Schedule::from_order(&[0]);
        assert!(alpha_point_round(&inst, &sched, &KernelSpec::msvc(), 0, 1).is_err());
        let sched = Schedule::from_order(&[0, 1]);
        assert!(alpha_point_round(&inst, &sched, &KernelSpec::msvc(), 0, 0).is_err());
    }
}
