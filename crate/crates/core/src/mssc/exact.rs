use super::greedy::TIE_TOL;
use super::{MsscError, MsscInstance, Ordering};

/// Most non-private vertices the subset DP accepts.
pub const DP_MAX_FREE_VERTICES: usize = 24;
/// Most DP states (subsets times private-prefix lengths) the DP accepts.
pub const DP_MAX_STATES: usize = 1 << 25;

/// Globally optimal ordering by dynamic programming over placed subsets.
///
/// A vertex whose only hyperedge is the singleton containing it is private:
/// privates are interchangeable up to weight, so they are placed heaviest
/// first and only their count enters the state. Vertices in no hyperedge go
/// last. Among optimal orders the lexicographically smallest is returned.
pub fn exact_order_dp(inst: &MsscInstance) -> Result<Ordering, MsscError> {
    let n = inst.vertex_count();
    if n == 0 {
        return Err(MsscError::EmptyInstance);
    }
    let norm = inst.normalized();
    let edges = norm.edges();
    let inc = norm.incidence();

    let mut free = Vec::new();
    let mut private = Vec::new();
    let mut isolated = Vec::new();
    for v in 0..n {
        match inc[v].as_slice() {
            [] => isolated.push(v),
            &[e] if edges[e].vertices.len() == 1 => private.push(v),
            _ => free.push(v),
        }
    }
    let nf = free.len();
    let np = private.len();
    if nf > DP_MAX_FREE_VERTICES {
        return Err(MsscError::TooLarge(format!(
            "{nf} vertices share hyperedges (limit {DP_MAX_FREE_VERTICES})"
        )));
    }
    let layer = 1usize << nf;
    let states = layer
        .checked_mul(np + 1)
        .filter(|&s| s <= DP_MAX_STATES)
        .ok_or_else(|| {
            MsscError::TooLarge(format!(
                "{nf} shared and {np} private vertices need more than {DP_MAX_STATES} states"
            ))
        })?;

    let private_weight = |v: usize| edges[inc[v][0]].weight;
    private.sort_by(|&a, &b| {
        private_weight(b)
            .total_cmp(&private_weight(a))
            .then(a.cmp(&b))
    });
    // tail[k]: weight of the privates not among the first k
    let mut tail = vec![0.0; np + 1];
    for k in (0..np).rev() {
        tail[k] = tail[k + 1] + private_weight(private[k]);
    }

    let mut is_private = vec![false; n];
    for &v in &private {
        is_private[v] = true;
    }
    let mut bit = vec![usize::MAX; n];
    for (i, &v) in free.iter().enumerate() {
        bit[v] = i;
    }
    // uncovered[Q]: weight of shared hyperedges missed by the free subset Q
    let mut uncovered = vec![0.0; layer];
    for e in edges {
        if is_private[e.vertices[0]] {
            continue;
        }
        let mask = e.vertices.iter().fold(0usize, |m, &v| m | (1 << bit[v]));
        uncovered[mask] += e.weight;
    }
    for i in 0..nf {
        for m in 0..layer {
            if m & (1 << i) != 0 {
                uncovered[m] += uncovered[m ^ (1 << i)];
            }
        }
    }
    // that gave the weight inside each mask; flip to the weight outside
    uncovered.reverse();

    // cost[k * layer + Q]: least remaining cost once Q and k privates are placed
    let full = layer - 1;
    let mut cost = vec![0.0f64; states];
    for k in (0..=np).rev() {
        for q in (0..layer).rev() {
            if q == full && k == np {
                continue;
            }
            let mut best = f64::INFINITY;
            let mut rest = !q & full;
            while rest != 0 {
                let b = rest & rest.wrapping_neg();
                best = best.min(cost[k * layer + (q | b)]);
                rest ^= b;
            }
            if k < np {
                best = best.min(cost[(k + 1) * layer + q]);
            }
            cost[k * layer + q] = uncovered[q] + tail[k] + best;
        }
    }

    let mut order = Vec::with_capacity(n);
    let (mut q, mut k) = (0usize, 0usize);
    while q != full || k != np {
        let mut options: Vec<(usize, f64, bool)> = (0..nf)
            .filter(|&i| q & (1 << i) == 0)
            .map(|i| (free[i], cost[k * layer + (q | (1 << i))], false))
            .collect();
        if k < np {
            options.push((private[k], cost[(k + 1) * layer + q], true));
        }
        let best = options.iter().map(|o| o.1).fold(f64::INFINITY, f64::min);
        let floor = best + TIE_TOL * best.abs();
        let &(v, _, is_private) = options
            .iter()
            .filter(|o| o.1 <= floor)
            .min_by_key(|o| o.0)
            .expect("at least one option remains");
        order.push(v);
        if is_private {
            k += 1;
        } else {
            q |= 1 << bit[v];
        }
    }
    order.extend(isolated);
    inst.evaluate(&order)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gap_instance() {
        // {s1,s2}, {s2}, {s1,s3}, {s3}
        let inst = MsscInstance::new(
            3,
            vec![
                (vec![0, 1], 1.0),
                (vec![1], 1.0),
                (vec![0, 2], 1.0),
                (vec![2], 1.0),
            ],
        )
        .unwrap();
        let o = exact_order_dp(&inst).unwrap();
        assert_eq!(o.order, vec![1, 2, 0]);
        assert_eq!(o.objective, 6.0);
    }

    #[test]
    fn privates_and_isolated() {
        let inst =
            MsscInstance::new(5, vec![(vec![0], 1.0), (vec![1], 5.0), (vec![2, 3], 2.0)]).unwrap();
        let o = exact_order_dp(&inst).unwrap();
        assert_eq!(o.order, vec![1, 2, 0, 3, 4]);
        assert_eq!(o.objective, 5.0 + 4.0 + 3.0);
    }

    #[test]
    fn refuses_large_instances() {
        let edges = (0..25).map(|v| (vec![v, (v + 1) % 25], 1.0)).collect();
        let inst = MsscInstance::new(25, edges).unwrap();
        assert!(matches!(exact_order_dp(&inst), Err(MsscError::TooLarge(_))));
        // many privates are fine
        let edges = (0..40).map(|v| (vec![v], v as f64)).collect();
        let inst = MsscInstance::new(40, edges).unwrap();
        let o = exact_order_dp(&inst).unwrap();
        assert_eq!(o.order, (0..40).rev().collect::<Vec<_>>());
    }
}
