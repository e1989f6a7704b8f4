use super::{LpBuilder, LpError, LpModel, LpSolution, Sense};
use crate::mssc::{MsscError, MsscInstance, Ordering, Schedule};

/// The time-indexed relaxation of a min sum set cover instance.
///
/// Columns are x_{v,t} at `v * H + (t - 1)` followed by u_{e,t} at
/// `n * H + e * H + (t - 1)`. Rows are the cover rows
/// Σ_{v∈e} x_{v,t} - u_{e,t} ≥ 0 (m H of them), then Σ_t u_{e,t} = 1 per
/// hyperedge, then Σ_v x_{v,t} = 1 per time slot.
#[derive(Debug, Clone, PartialEq)]
pub struct MsscLp {
    pub model: LpModel,
    pub n: usize,
    pub m: usize,
    pub horizon: usize,
}

/// Size of a set cover found by repeatedly taking the vertex that hits the
/// most unhit hyperedges.
pub fn greedy_cover_size(inst: &MsscInstance) -> usize {
    let inc = inst.incidence();
    let mut hit = vec![false; inst.edges().len()];
    let mut remaining = hit.len();
    let mut picks = 0;
    while remaining > 0 {
        let (v, gain) = (0..inst.vertex_count())
            .map(|v| (v, inc[v].iter().filter(|&&e| !hit[e]).count()))
            .max_by_key(|&(v, g)| (g, std::cmp::Reverse(v)))
            .expect("instance has vertices");
        if gain == 0 {
            break;
        }
        for &e in &inc[v] {
            if !hit[e] {
                hit[e] = true;
                remaining -= 1;
            }
        }
        picks += 1;
    }
    picks
}

/// Builds the relaxation with `horizon` time slots (`None` for one slot per
/// vertex). A horizon shorter than a greedy set cover is refused, since the
/// model may then have no feasible point.
pub fn build_mssc_lp(inst: &MsscInstance, horizon: Option<usize>) -> Result<MsscLp, LpError> {
    let n = inst.vertex_count();
    let m = inst.edges().len();
    if m == 0 {
        return Err(LpError::EmptyInstance);
    }
    let h = horizon.unwrap_or(n);
    let needed = greedy_cover_size(inst);
    if h < needed.max(1) {
        return Err(LpError::HorizonTooShort { horizon: h, needed });
    }

    let mut b = LpBuilder::new();
    for v in 0..n {
        for t in 1..=h {
            b.add_col(format!("x_{v}_{t}"), 0.0);
        }
    }
    for (e, edge) in inst.edges().iter().enumerate() {
        for t in 1..=h {
            b.add_col(format!("u_{e}_{t}"), t as f64 * edge.weight);
        }
    }
    let x = |v: usize, t: usize| v * h + t - 1;
    let u = |e: usize, t: usize| n * h + e * h + t - 1;

    let mut coefs = Vec::new();
    for (e, edge) in inst.edges().iter().enumerate() {
        for t in 1..=h {
            coefs.clear();
            coefs.extend(edge.vertices.iter().map(|&v| (x(v, t), 1.0)));
            coefs.push((u(e, t), -1.0));
            b.add_row(format!("cover_{e}_{t}"), Sense::Ge, 0.0, &coefs);
        }
    }
    for e in 0..m {
        coefs.clear();
        coefs.extend((1..=h).map(|t| (u(e, t), 1.0)));
        b.add_row(format!("assign_{e}"), Sense::Eq, 1.0, &coefs);
    }
    for t in 1..=h {
        coefs.clear();
        coefs.extend((0..n).map(|v| (x(v, t), 1.0)));
        b.add_row(format!("slot_{t}"), Sense::Eq, 1.0, &coefs);
    }
    Ok(MsscLp {
        model: b.build()?,
        n,
        m,
        horizon: h,
    })
}

impl MsscLp {
    #[inline]
    pub fn x_index(&self, v: usize, t: usize) -> usize {
        v * self.horizon + t - 1
    }

    #[inline]
    pub fn u_index(&self, e: usize, t: usize) -> usize {
        self.n * self.horizon + e * self.horizon + t - 1
    }

    /// The x part of a solution as a vertex schedule.
    pub fn schedule(&self, sol: &LpSolution) -> Result<Schedule, MsscError> {
        let x = sol.x[..self.n * self.horizon]
            .iter()
            .map(|&v| v.max(0.0))
            .collect();
        Schedule::new(self.n, self.horizon, x)
    }

    /// Full column vector from a schedule and u_{e,t} values (row-major by
    /// hyperedge).
    pub fn assemble(&self, schedule: &Schedule, u: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.model.num_cols());
        for v in 0..self.n {
            out.extend((1..=self.horizon).map(|t| {
                if t <= schedule.horizon() {
                    schedule.get(v, t)
                } else {
                    0.0
                }
            }));
        }
        out.extend_from_slice(u);
        out
    }

    /// The 0/1 point encoding an ordering; needs a horizon of at least n.
    pub fn integral_point(&self, ordering: &Ordering) -> Vec<f64> {
        let mut p = vec![0.0; self.model.num_cols()];
        for (i, &v) in ordering.order.iter().enumerate().take(self.horizon) {
            p[self.x_index(v, i + 1)] = 1.0;
        }
        for (e, &t) in ordering.cover_times.iter().enumerate() {
            p[self.u_index(e, t)] = 1.0;
        }
        p
    }
}
