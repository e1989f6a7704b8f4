use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{MsscError, MsscInstance, Ordering};

/// How greedy breaks ties between vertices of equal marginal weight.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum TieRule {
    /// Lowest vertex id wins.
    #[default]
    Lexicographic,
    /// Uniform among the tied vertices, from a seeded generator.
    Random(u64),
}

/// Relative slack under which two marginal gains count as equal.
pub(crate) const TIE_TOL: f64 = 1e-12;

/// Repeatedly picks the vertex covering the most uncovered weight.
pub fn greedy_order(inst: &MsscInstance, tie_rule: TieRule) -> Result<Ordering, MsscError> {
    let n = inst.vertex_count();
    if n == 0 {
        return Err(MsscError::EmptyInstance);
    }
    let inc = inst.incidence();
    let edges = inst.edges();
    let mut covered = vec![false; edges.len()];
    let mut placed = vec![false; n];
    let mut rng = match tie_rule {
        TieRule::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        TieRule::Lexicographic => None,
    };
    let mut order = Vec::with_capacity(n);
    let mut gains = vec![0.0; n];
    let mut ties = Vec::with_capacity(n);
    for _ in 0..n {
        let mut best = f64::NEG_INFINITY;
        for v in (0..n).filter(|&v| !placed[v]) {
            gains[v] = inc[v]
                .iter()
                .filter(|&&e| !covered[e])
                .map(|&e| edges[e].weight)
                .sum();
            best = best.max(gains[v]);
        }
        let floor = best - TIE_TOL * best.abs();
        ties.clear();
        ties.extend((0..n).filter(|&v| !placed[v] && gains[v] >= floor));
        let pick = match rng.as_mut() {
            Some(r) => ties[r.gen_range(0..ties.len())],
            None => ties[0],
        };
        placed[pick] = true;
        for &e in &inc[pick] {
            covered[e] = true;
        }
        order.push(pick);
    }
    inst.evaluate(&order)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_edge() {
        let inst = MsscInstance::new(1, vec![(vec![0], 2.5)]).unwrap();
        let o = greedy_order(&inst, TieRule::Lexicographic).unwrap();
        assert_eq!(o.order, vec![0]);
        assert_eq!(o.objective, 2.5);
    }

    #[test]
    fn disjoint_edges_in_weight_order() {
        let inst =
            MsscInstance::new(3, vec![(vec![0], 1.0), (vec![1], 3.0), (vec![2], 2.0)]).unwrap();
        let o = greedy_order(&inst, TieRule::Lexicographic).unwrap();
        assert_eq!(o.order, vec![1, 2, 0]);
        assert_eq!(o.objective, 10.0);
    }

    #[test]
    fn random_ties_are_seeded() {
        let edges = (0..8).map(|v| (vec![v], 1.0)).collect();
        let inst = MsscInstance::new(8, edges).unwrap();
        let a = greedy_order(&inst, TieRule::Random(3)).unwrap();
        let b = greedy_order(&inst, TieRule::Random(3)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.objective, 36.0);
        let distinct = (0..20)
            .map(|s| greedy_order(&inst, TieRule::Random(s)).unwrap().order)
            .collect::<std::collections::HashSet<_>>();
        assert!(distinct.len() > 1);
    }
}
