use super::GenError;
use crate::localsearch::Objective;
use crate::mssc::{exact_order_dp, instance_from_coverage};
use crate::netgraph::{
    build_tree_config, compute_coverage, evaluate_metrics, EdgeId, Network, UncoveredMode,
};

/// Largest network `brute_force_joint` accepts.
pub const JOINT_MAX_VERTICES: usize = 8;
/// Largest switch count for which composite orderings are enumerated.
const COMPOSITE_MAX_SWITCHES: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct JointOptimum {
    pub tree: Vec<EdgeId>,
    pub order: Vec<EdgeId>,
    pub value: f64,
    /// Spanning trees examined.
    pub trees: usize,
}

struct UndoUnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UndoUnionFind {
    fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    /// Returns the root that was attached, for `undo`.
    fn union(&mut self, a: usize, b: usize) -> Option<usize> {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return None;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        Some(b)
    }

    fn undo(&mut self, b: usize) {
        let a = self.parent[b];
        self.size[a] -= self.size[b];
        self.parent[b] = b;
    }
}

/// Every spanning tree as an ascending edge list, in lexicographic order.
pub fn enumerate_spanning_trees(net: &Network) -> Result<Vec<Vec<EdgeId>>, GenError> {
    let n = net.vertex_count();
    if n > JOINT_MAX_VERTICES {
        return Err(GenError::TooLarge(format!(
            "{n} vertices (limit {JOINT_MAX_VERTICES})"
        )));
    }
    let ends: Vec<(usize, usize)> = net
        .edges()
        .iter()
        .map(|e| (e.endpoints.0 .0, e.endpoints.1 .0))
        .collect();
    let mut uf = UndoUnionFind {
        parent: (0..n).collect(),
        size: vec![1; n],
    };
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(n.saturating_sub(1));
    fn rec(
        i: usize,
        need: usize,
        ends: &[(usize, usize)],
        uf: &mut UndoUnionFind,
        chosen: &mut Vec<EdgeId>,
        out: &mut Vec<Vec<EdgeId>>,
    ) {
        if chosen.len() == need {
            out.push(chosen.clone());
            return;
        }
        if ends.len() - i < need - chosen.len() {
            return;
        }
        if let Some(b) = uf.union(ends[i].0, ends[i].1) {
            chosen.push(EdgeId(i));
            rec(i + 1, need, ends, uf, chosen, out);
            chosen.pop();
            uf.undo(b);
        }
        rec(i + 1, need, ends, uf, chosen, out);
    }
    rec(
        0,
        n.saturating_sub(1),
        &ends,
        &mut uf,
        &mut chosen,
        &mut out,
    );
    Ok(out)
}

fn next_permutation(p: &mut [EdgeId]) -> bool {
    let Some(i) = p.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = p
        .iter()
        .rposition(|&x| x > p[i])
        .expect("a larger element exists");
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

/// Minimizes `objective` jointly over spanning trees and switch orders.
///
/// R-Time and SAIDI orders come from the exact DP with weights p(e) and
/// f(e)p(e); Energy does not depend on the order, which is then the R-Time
/// optimum. Composite orders are enumerated outright, so trees with more than
/// 8 switches are refused. Uncovered edges are excluded. Ties keep the
/// lexicographically first tree.
pub fn brute_force_joint(net: &Network, objective: Objective) -> Result<JointOptimum, GenError> {
    let trees = enumerate_spanning_trees(net)?;
    let mut best: Option<JointOptimum> = None;
    let count = trees.len();
    for edges in trees {
        let tree = build_tree_config(net, &edges)?;
        let cov = compute_coverage(net, &tree);
        let mut order = tree.switches().to_vec();
        let value = if objective == Objective::Composite && !order.is_empty() {
            if order.len() > COMPOSITE_MAX_SWITCHES {
                return Err(GenError::TooLarge(format!(
                    "{} switches to permute (limit {COMPOSITE_MAX_SWITCHES})",
                    order.len()
                )));
            }
            let mut perm = order.clone();
            let mut best_value = f64::INFINITY;
            loop {
                let v = evaluate_metrics(net, &tree, &perm, UncoveredMode::Exclude)?.product;
                if v < best_value {
                    best_value = v;
                    order.clone_from(&perm);
                }
                if !next_permutation(&mut perm) {
                    break;
                }
            }
            best_value
        } else {
            if !order.is_empty() {
                let weights: Vec<f64> = net
                    .edge_ids()
                    .map(|e| {
                        let p = net.edge(e).failure;
                        match objective {
                            Objective::Saidi if tree.is_tree_edge(e) => tree.flow(e) * p,
                            _ => p,
                        }
                    })
                    .collect();
                let ci = instance_from_coverage(net, &tree, &cov, &weights)?;
                if !ci.instance.edges().is_empty() {
                    order = ci.switch_order(&exact_order_dp(&ci.instance)?);
                }
            }
            objective.value(&evaluate_metrics(
                net,
                &tree,
                &order,
                UncoveredMode::Exclude,
            )?)
        };
        if best.as_ref().is_none_or(|b| value < b.value) {
            best = Some(JointOptimum {
                tree: edges,
                order,
                value,
                trees: count,
            });
        }
    }
    best.ok_or_else(|| GenError::Infeasible("the network has no spanning tree".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::gen_wheel;
    use crate::netgraph::NetworkBuilder;

    /// Matrix-tree theorem: determinant of the reduced Laplacian.
    fn kirchhoff(net: &Network) -> f64 {
        let n = net.vertex_count();
        let mut l = vec![vec![0.0; n]; n];
        for e in net.edges() {
            let (a, b) = (e.endpoints.0 .0, e.endpoints.1 .0);
            l[a][a] += 1.0;
            l[b][b] += 1.0;
            l[a][b] -= 1.0;
            l[b][a] -= 1.0;
        }
        let mut m: Vec<Vec<f64>> = l[1..].iter().map(|r| r[1..].to_vec()).collect();
        let k = n - 1;
        let mut det = 1.0;
        for c in 0..k {
            let p = (c..k)
                .max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs()))
                .unwrap();
            if m[p][c] == 0.0 {
                return 0.0;
            }
            if p != c {
                m.swap(p, c);
                det = -det;
            }
            det *= m[c][c];
            for r in c + 1..k {
                let f = m[r][c] / m[c][c];
                for j in c..k {
                    m[r][j] -= f * m[c][j];
                }
            }
        }
        det
    }

    fn complete(n: usize) -> Network {
        let mut b = NetworkBuilder::new();
        let v: Vec<_> = (0..n).map(|i| b.add_vertex(format!("k{i}"), 1.0)).collect();
        for i in 0..n {
            for j in i + 1..n {
                b.add_edge(v[i], v[j], 1.0, 1.0);
            }
        }
        b.build(v[0]).unwrap()
    }

    #[test]
    fn tree_counts_match_kirchhoff() {
        let k4 = complete(4);
        assert_eq!(enumerate_spanning_trees(&k4).unwrap().len(), 16);
        assert_eq!(kirchhoff(&k4).round(), 16.0);
        let w7 = gen_wheel(7).unwrap().net;
        let trees = enumerate_spanning_trees(&w7).unwrap();
        assert_eq!(trees.len() as f64, kirchhoff(&w7).round());
        assert_eq!(trees.len(), 320);
        let k6 = complete(6);
        assert_eq!(enumerate_spanning_trees(&k6).unwrap().len(), 1296);
    }

    #[test]
    fn wheel_joint_optima() {
        let w = gen_wheel(7).unwrap();
        let energy = brute_force_joint(&w.net, Objective::Energy).unwrap();
        assert_eq!(energy.value, 6.0);
        assert_eq!(energy.tree, w.spoke);
        let rtime = brute_force_joint(&w.net, Objective::RTime).unwrap();
        assert_eq!(rtime.value, 1.0);
    }

    #[test]
    fn k4_composite_matches_tree_scan() {
        let k4 = complete(4);
        let best = brute_force_joint(&k4, Objective::Composite).unwrap();
        assert_eq!(best.trees, 16);
        let tree = build_tree_config(&k4, &best.tree).unwrap();
        let v = evaluate_metrics(&k4, &tree, &best.order, UncoveredMode::Exclude)
            .unwrap()
            .product;
        assert_eq!(v, best.value);
    }

    #[test]
    fn permutations() {
        let mut p = vec![EdgeId(1), EdgeId(2), EdgeId(3)];
        let mut n = 1;
        while next_permutation(&mut p) {
            n += 1;
        }
        assert_eq!(n, 6);
    }
}
