use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::PrepError;
use crate::netgraph::{
    build_tree_config, compute_coverage, Edge, EdgeId, Network, TreeConfig, VertexId,
};

/// Above this many vertices, candidate pairs are found by grid bucketing.
pub const GRID_THRESHOLD: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub u: VertexId,
    pub v: VertexId,
    /// Euclidean length.
    pub length: f64,
}

fn coords(net: &Network) -> Result<Vec<(f64, f64)>, PrepError> {
    net.vertices()
        .iter()
        .map(|v| {
            v.coords
                .ok_or_else(|| PrepError::MissingCoordinates(v.name.clone()))
        })
        .collect()
}

/// Vertex pairs at most `radius` apart that are not already joined by an
/// edge, shortest first (ties by vertex ids), truncated to `cap`.
pub fn candidate_switches(
    net: &Network,
    radius: f64,
    cap: Option<usize>,
) -> Result<Vec<Candidate>, PrepError> {
    if radius.is_nan() || radius < 0.0 {
        return Err(PrepError::InvalidArgument(format!("radius {radius}")));
    }
    let pts = coords(net)?;
    if radius == 0.0 {
        return Ok(Vec::new());
    }
    let n = pts.len();
    let mut out = Vec::new();
    let mut consider = |i: usize, j: usize| {
        let d = (pts[i].0 - pts[j].0).hypot(pts[i].1 - pts[j].1);
        if d <= radius && net.find_edge(VertexId(i), VertexId(j)).is_none() {
            out.push(Candidate {
                u: VertexId(i),
                v: VertexId(j),
                length: d,
            });
        }
    };
    if n <= GRID_THRESHOLD {
        for i in 0..n {
            for j in i + 1..n {
                consider(i, j);
            }
        }
    } else {
        let cell = |p: (f64, f64)| ((p.0 / radius).floor() as i64, (p.1 / radius).floor() as i64);
        let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        for (i, &p) in pts.iter().enumerate() {
            grid.entry(cell(p)).or_default().push(i);
        }
        for (i, &p) in pts.iter().enumerate() {
            let (cx, cy) = cell(p);
            for dx in -1..=1 {
                for dy in -1..=1 {
                    if let Some(bucket) = grid.get(&(cx + dx, cy + dy)) {
                        for &j in bucket.iter().filter(|&&j| j > i) {
                            consider(i, j);
                        }
                    }
                }
            }
        }
    }
    out.sort_by(|a, b| {
        a.length
            .total_cmp(&b.length)
            .then(a.u.cmp(&b.u))
            .then(a.v.cmp(&b.v))
    });
    if let Some(cap) = cap {
        out.truncate(cap);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AddedSwitch {
    pub candidate: Candidate,
    /// Σ 2^{-cover count} x(e) over the tree edges it covers, at selection.
    pub score: f64,
    /// Exposure of the edges it covered for the first time.
    pub gain: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwitchPlan {
    pub added: Vec<AddedSwitch>,
    /// Covered exposure fraction before any addition, then after each.
    pub curve: Vec<f64>,
    /// Σ x(e) over tree edges.
    pub total_exposure: f64,
}

impl SwitchPlan {
    pub fn final_coverage(&self) -> f64 {
        *self.curve.last().expect("curve holds the starting point")
    }
}

fn exposures(net: &Network, tree: &TreeConfig) -> Vec<f64> {
    net.edge_ids()
        .map(|e| {
            if tree.is_tree_edge(e) {
                tree.flow(e) * net.edge(e).failure
            } else {
                0.0
            }
        })
        .collect()
}

/// Share of tree-edge exposure x(e) = f(e)p(e) sitting on edges that some
/// switch covers (1 when there is no exposure at all).
pub fn covered_exposure_fraction(net: &Network, tree: &TreeConfig) -> f64 {
    let x = exposures(net, tree);
    let total: f64 = x.iter().sum();
    if total <= 0.0 {
        return 1.0;
    }
    let cov = compute_coverage(net, tree);
    let covered: f64 = tree
        .tree_edges()
        .iter()
        .filter(|&&e| !cov.covering(e).is_empty())
        .map(|e| x[e.0])
        .sum();
    covered / total
}

/// Adds candidates one at a time, each time taking the one maximizing
/// Σ_{e on its path} 2^{-c(e)} x(e), where c(e) counts the switches already
/// covering e. Stops after `k` additions, once the covered exposure fraction
/// reaches `target`, or when no candidate scores above zero. Ties go to the
/// earlier candidate.
pub fn greedy_add_switches(
    net: &Network,
    tree: &TreeConfig,
    candidates: &[Candidate],
    k: usize,
    target: f64,
) -> Result<SwitchPlan, PrepError> {
    if k == 0 {
        return Err(PrepError::InvalidArgument("k must be at least 1".into()));
    }
    let x = exposures(net, tree);
    let total: f64 = x.iter().sum();
    let cov = compute_coverage(net, tree);
    let mut count: Vec<u32> = net
        .edge_ids()
        .map(|e| cov.covering(e).len() as u32)
        .collect();
    let mut covered: f64 = tree
        .tree_edges()
        .iter()
        .filter(|e| count[e.0] > 0)
        .map(|e| x[e.0])
        .sum();
    let frac = |c: f64| if total > 0.0 { c / total } else { 1.0 };
    let paths: Vec<Vec<EdgeId>> = candidates
        .iter()
        .map(|c| tree.path_edges(c.u, c.v))
        .collect();
    let mut used = vec![false; candidates.len()];
    let mut plan = SwitchPlan {
        added: Vec::new(),
        curve: vec![frac(covered)],
        total_exposure: total,
    };
    while plan.added.len() < k && plan.final_coverage() < target {
        let mut best: Option<(usize, f64)> = None;
        for (i, path) in paths.iter().enumerate() {
            if used[i] {
                continue;
            }
            let score: f64 = path
                .iter()
                .map(|e| x[e.0] * 0.5f64.powi(count[e.0] as i32))
                .sum();
            if best.is_none_or(|(_, s)| score > s) {
                best = Some((i, score));
            }
        }
        let Some((i, score)) = best.filter(|&(_, s)| s > 0.0) else {
            break;
        };
        used[i] = true;
        let mut gain = 0.0;
        for e in &paths[i] {
            if count[e.0] == 0 {
                gain += x[e.0];
            }
            count[e.0] += 1;
        }
        covered += gain;
        plan.added.push(AddedSwitch {
            candidate: candidates[i],
            score,
            gain,
        });
        plan.curve.push(frac(covered).min(1.0));
    }
    Ok(plan)
}

/// Appends the planned switches as edges `sw1`, `sw2`, … with failure weight
/// equal to their length and resistance scaled by the network's mean
/// resistance per unit of failure weight.
pub fn apply_switch_plan(
    net: &Network,
    tree: &TreeConfig,
    plan: &SwitchPlan,
) -> Result<(Network, TreeConfig), PrepError> {
    let (mut r, mut p) = (0.0, 0.0);
    for e in net.edges() {
        r += e.resistance;
        p += e.failure;
    }
    let per_unit = if p > 0.0 { r / p } else { 1.0 };
    let mut edges = net.edges().to_vec();
    for (i, a) in plan.added.iter().enumerate() {
        let c = a.candidate;
        edges.push(Edge::new(
            format!("sw{}", i + 1),
            c.u,
            c.v,
            c.length,
            c.length * per_unit,
        ));
    }
    let out = Network::new(net.vertices().to_vec(), edges, net.root())?;
    let out_tree = build_tree_config(&out, tree.tree_edges())?;
    Ok((out, out_tree))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::gen_grid;
    use crate::netgraph::NetworkBuilder;

    #[test]
    fn grid_diagonals() {
        let (net, _) = gen_grid(4, 5).unwrap();
        assert!(candidate_switches(&net, 0.0, None).unwrap().is_empty());
        let cands = candidate_switches(&net, 1.5, None).unwrap();
        // every unit square contributes its two diagonals
        assert_eq!(cands.len(), 2 * 3 * 4);
        assert!(cands.iter().all(|c| (c.length - 2f64.sqrt()).abs() < 1e-12));
        let capped = candidate_switches(&net, 2.5, Some(5)).unwrap();
        assert_eq!(capped.len(), 5);
        assert_eq!(capped, cands[..5]);
    }

    #[test]
    fn grid_bucketing_matches_all_pairs() {
        let (net, _) = gen_grid(50, 45).unwrap();
        assert!(net.vertex_count() > GRID_THRESHOLD);
        let fast = candidate_switches(&net, 2.0, None).unwrap();
        // per vertex: 4 diagonals and 4 straight pairs at distance 2, halved
        let pts = coords(&net).unwrap();
        let mut slow = 0;
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                let d = (pts[i].0 - pts[j].0).hypot(pts[i].1 - pts[j].1);
                if d <= 2.0 && net.find_edge(VertexId(i), VertexId(j)).is_none() {
                    slow += 1;
                }
            }
        }
        assert_eq!(fast.len(), slow);
    }

    #[test]
    fn missing_coordinates() {
        let mut b = NetworkBuilder::new();
        let r = b.add_vertex("r", 0.0);
        let a = b.add_vertex("a", 1.0);
        b.add_edge(r, a, 1.0, 1.0);
        let net = b.build(r).unwrap();
        assert_eq!(
            candidate_switches(&net, 1.0, None).unwrap_err(),
            PrepError::MissingCoordinates("r".into())
        );
    }

    #[test]
    fn scores_halve_for_covered_edges() {
        // path r - a - b - c with one existing switch r-b
        let mut nb = NetworkBuilder::new();
        let v: Vec<_> = (0..4)
            .map(|i| nb.add_vertex(format!("p{i}"), if i == 0 { 0.0 } else { 1.0 }))
            .collect();
        let t = vec![
            nb.add_edge(v[0], v[1], 1.0, 1.0),
            nb.add_edge(v[1], v[2], 1.0, 1.0),
            nb.add_edge(v[2], v[3], 1.0, 1.0),
        ];
        nb.add_edge(v[0], v[2], 1.0, 1.0);
        let net = nb.build(v[0]).unwrap();
        let tree = build_tree_config(&net, &t).unwrap();
        // exposures: 3, 2, 1; edges 0 and 1 already covered
        let cands = [
            Candidate {
                u: v[1],
                v: v[3],
                length: 1.0,
            },
            Candidate {
                u: v[0],
                v: v[3],
                length: 2.0,
            },
        ];
        let plan = greedy_add_switches(&net, &tree, &cands, 1, 1.0).unwrap();
        assert_eq!(plan.curve[0], 5.0 / 6.0);
        // r-c: 3/2 + 2/2 + 1 beats a-c: 2/2 + 1
        assert_eq!(plan.added[0].candidate, cands[1]);
        assert_eq!(plan.added[0].score, 3.5);
        assert_eq!(plan.added[0].gain, 1.0);
        assert_eq!(plan.final_coverage(), 1.0);
        let (net2, tree2) = apply_switch_plan(&net, &tree, &plan).unwrap();
        assert_eq!(net2.edge_count(), 5);
        assert_eq!(covered_exposure_fraction(&net2, &tree2), 1.0);
    }
}
