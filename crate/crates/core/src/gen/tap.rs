use super::GenError;
use crate::netgraph::{
    build_tree_config, CoverageMap, EdgeId, Network, NetworkBuilder, TreeConfig, VertexId,
};

/// Largest switch count `brute_force_tap` enumerates over.
pub const TAP_MAX_SWITCHES: usize = 20;

#[derive(Debug, Clone)]
pub struct TapReduction {
    pub net: Network,
    pub tree: TreeConfig,
    /// Hyperedge weight b(e) by edge id: 1 on original tree edges, 1/2 on
    /// path edges, 0 on switches.
    pub weights: Vec<f64>,
    /// The vertex every path hangs from (the root).
    pub hub: VertexId,
    /// Edges `0..original_edges` are the input edges, with the same ids.
    pub original_edges: usize,
    /// The switches {hub, v_{i,2}}.
    pub path_switches: Vec<EdgeId>,
}

/// Appends m·n two-edge paths hub–v_{i,1}–v_{i,2} (tree edges, weight 1/2)
/// closed by switches hub–v_{i,2}, where n = |V| and m = |E|. The output
/// has |V| + 2mn vertices and |E| + 3mn edges; more than `max_vertices`
/// vertices is refused.
pub fn gen_tap_reduction(
    net: &Network,
    tree: &TreeConfig,
    max_vertices: usize,
) -> Result<TapReduction, GenError> {
    let n = net.vertex_count();
    let m = net.edge_count();
    let copies = m * n;
    let out_vertices = n + 2 * copies;
    if out_vertices > max_vertices {
        return Err(GenError::TooLarge(format!(
            "reduction would have {out_vertices} vertices (limit {max_vertices})"
        )));
    }
    let hub = net.root();
    let mut b = NetworkBuilder::new();
    for v in net.vertices() {
        b.vertex(v.clone());
    }
    for e in net.edges() {
        b.edge(e.clone());
    }
    let mut weights: Vec<f64> = net
        .edge_ids()
        .map(|e| if tree.is_tree_edge(e) { 1.0 } else { 0.0 })
        .collect();
    let mut tree_edges = tree.tree_edges().to_vec();
    let mut path_switches = Vec::with_capacity(copies);
    for i in 1..=copies {
        let a = b.add_vertex(format!("p{i}a"), 0.0);
        let c = b.add_vertex(format!("p{i}b"), 0.0);
        tree_edges.push(b.add_named_edge(format!("p{i}t1"), hub, a, 0.5, 1.0));
        tree_edges.push(b.add_named_edge(format!("p{i}t2"), a, c, 0.5, 1.0));
        path_switches.push(b.add_named_edge(format!("p{i}s"), hub, c, 1.0, 1.0));
        weights.extend([0.5, 0.5, 0.0]);
    }
    let red = b.build(hub)?;
    let red_tree = build_tree_config(&red, &tree_edges)?;
    Ok(TapReduction {
        net: red,
        tree: red_tree,
        weights,
        hub,
        original_edges: m,
        path_switches,
    })
}

/// Number of original switches in `order` that are the first to cover some
/// original tree edge.
pub fn tap_prefix_size(red: &TapReduction, cov: &CoverageMap, order: &[EdgeId]) -> usize {
    let mut covered = vec![false; red.original_edges];
    let mut count = 0;
    for &s in order.iter().filter(|s| s.0 < red.original_edges) {
        let mut fresh = false;
        for &e in cov.covered_by(s) {
            if e.0 < red.original_edges && !covered[e.0] {
                covered[e.0] = true;
                fresh = true;
            }
        }
        if fresh {
            count += 1;
        }
    }
    count
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TapSolution {
    pub size: usize,
    /// A minimum augmentation, ascending by edge id.
    pub augmentation: Vec<EdgeId>,
}

/// True when the multigraph on `n` vertices is connected and bridgeless.
pub fn two_edge_connected(n: usize, edges: &[(usize, usize)]) -> bool {
    if n <= 1 {
        return true;
    }
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (i, &(a, b)) in edges.iter().enumerate() {
        adj[a].push((b, i));
        adj[b].push((a, i));
    }
    const UNSEEN: usize = usize::MAX;
    let mut disc = vec![UNSEEN; n];
    let mut low = vec![0; n];
    // (vertex, edge used to enter, next adjacency index)
    let mut stack = vec![(0usize, usize::MAX, 0usize)];
    disc[0] = 0;
    low[0] = 0;
    let mut clock = 1;
    while let Some(&mut (v, via, ref mut next)) = stack.last_mut() {
        if *next < adj[v].len() {
            let (w, id) = adj[v][*next];
            *next += 1;
            if id == via {
                continue;
            }
            if disc[w] == UNSEEN {
                disc[w] = clock;
                low[w] = clock;
                clock += 1;
                stack.push((w, id, 0));
            } else {
                low[v] = low[v].min(disc[w]);
            }
        } else {
            stack.pop();
            if let Some(&(u, _, _)) = stack.last() {
                if low[v] > disc[u] {
                    return false;
                }
                low[u] = low[u].min(low[v]);
            }
        }
    }
    clock == n
}

/// Smallest switch set F with T ∪ F two-edge-connected, by enumerating
/// subsets in order of size (and colex order within a size).
pub fn brute_force_tap(net: &Network, tree: &TreeConfig) -> Result<TapSolution, GenError> {
    let switches = tree.switches();
    if switches.len() > TAP_MAX_SWITCHES {
        return Err(GenError::TooLarge(format!(
            "{} switches (limit {TAP_MAX_SWITCHES})",
            switches.len()
        )));
    }
    let ends = |e: EdgeId| {
        let (a, b) = net.edge(e).endpoints;
        (a.0, b.0)
    };
    let base: Vec<(usize, usize)> = tree.tree_edges().iter().map(|&e| ends(e)).collect();
    let n = net.vertex_count();
    let check = |mask: u32, buf: &mut Vec<(usize, usize)>| {
        buf.clear();
        buf.extend_from_slice(&base);
        for (i, &s) in switches.iter().enumerate() {
            if mask >> i & 1 == 1 {
                buf.push(ends(s));
            }
        }
        two_edge_connected(n, buf)
    };
    let k = switches.len();
    let mut buf = Vec::new();
    let full = if k == 32 { u32::MAX } else { (1u32 << k) - 1 };
    if !check(full, &mut buf) {
        return Err(GenError::Infeasible(
            "the tree stays bridged even with every switch closed".into(),
        ));
    }
    for size in 0..=k {
        let mut mask: u32 = if size == 0 { 0 } else { (1u32 << size) - 1 };
        loop {
            if check(mask, &mut buf) {
                let augmentation = (0..k)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| switches[i])
                    .collect();
                return Ok(TapSolution { size, augmentation });
            }
            if size == 0 {
                break;
            }
            // next subset of the same size (Gosper)
            let c = mask & mask.wrapping_neg();
            let r = mask + c;
            mask = (((r ^ mask) >> 2) / c) | r;
            if mask > full {
                break;
            }
        }
    }
    unreachable!("the full switch set is feasible")
}

/// ⌈leaves / 2⌉: every leaf of T needs an added edge at it, and an edge
/// touches at most two leaves.
pub fn tap_leaf_lower_bound(net: &Network, tree: &TreeConfig) -> usize {
    let mut deg = vec![0usize; net.vertex_count()];
    for &e in tree.tree_edges() {
        let (a, b) = net.edge(e).endpoints;
        deg[a.0] += 1;
        deg[b.0] += 1;
    }
    deg.iter().filter(|&&d| d == 1).count().div_ceil(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netgraph::compute_coverage;

    fn cycle(n: usize) -> (Network, TreeConfig) {
        let mut b = NetworkBuilder::new();
        let v: Vec<_> = (0..n).map(|i| b.add_vertex(format!("c{i}"), 1.0)).collect();
        let edges: Vec<_> = (0..n)
            .map(|i| b.add_edge(v[i], v[(i + 1) % n], 1.0, 1.0))
            .collect();
        let net = b.build(v[0]).unwrap();
        let tree = build_tree_config(&net, &edges[..n - 1]).unwrap();
        (net, tree)
    }

    #[test]
    fn bridges() {
        assert!(two_edge_connected(3, &[(0, 1), (1, 2), (2, 0)]));
        assert!(!two_edge_connected(3, &[(0, 1), (1, 2)]));
        assert!(two_edge_connected(2, &[(0, 1), (0, 1)]));
        assert!(!two_edge_connected(4, &[(0, 1), (1, 0), (2, 3), (3, 2)]));
        // two triangles joined by a bridge
        assert!(!two_edge_connected(
            6,
            &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)]
        ));
    }

    #[test]
    fn cycle_needs_one_edge() {
        let (net, tree) = cycle(5);
        let sol = brute_force_tap(&net, &tree).unwrap();
        assert_eq!(sol.size, 1);
        assert_eq!(sol.augmentation, vec![EdgeId(4)]);
    }

    #[test]
    fn no_switches_is_infeasible() {
        let mut b = NetworkBuilder::new();
        let r = b.add_vertex("r", 0.0);
        let a = b.add_vertex("a", 1.0);
        b.add_edge(r, a, 1.0, 1.0);
        let net = b.build(r).unwrap();
        let tree = build_tree_config(&net, &[EdgeId(0)]).unwrap();
        assert!(matches!(
            brute_force_tap(&net, &tree),
            Err(GenError::Infeasible(_))
        ));
    }

    #[test]
    fn triangle_reduction_size() {
        let (net, tree) = cycle(3);
        let red = gen_tap_reduction(&net, &tree, 1000).unwrap();
        assert_eq!(red.net.vertex_count(), 21);
        assert_eq!(red.net.edge_count(), 3 + 27);
        let cov = compute_coverage(&red.net, &red.tree);
        for &s in &red.path_switches {
            let covered = cov.covered_by(s);
            assert_eq!(covered.len(), 2);
            let w: f64 = covered.iter().map(|e| red.weights[e.0]).sum();
            assert_eq!(w, 1.0);
        }
        assert!(matches!(
            gen_tap_reduction(&net, &tree, 20),
            Err(GenError::TooLarge(_))
        ));
    }

    #[test]
    fn leaf_bound() {
        let (net, tree) = cycle(4);
        assert_eq!(tap_leaf_lower_bound(&net, &tree), 1);
    }
}
