use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::GenError;
use crate::mssc::MsscInstance;
use crate::netgraph::{build_tree_config, EdgeId, Network, NetworkBuilder, TreeConfig, Vertex};

/// A wheel network with its two reference trees.
#[derive(Debug, Clone)]
pub struct Wheel {
    pub net: Network,
    /// Every spoke.
    pub spoke: Vec<EdgeId>,
    /// Spoke 0 plus the rim path r1 … r_{n-1}.
    pub wheel: Vec<EdgeId>,
}

/// Wheel on `n` vertices: hub 0 (the root) and rim r1 … r_{n-1}. Spokes are
/// edges 0..n-1, rim edge r_i–r_{i+1} follows as n-2+i. All data is unit.
pub fn gen_wheel(n: usize) -> Result<Wheel, GenError> {
    if n < 4 {
        return Err(GenError::InvalidParams(format!(
            "a wheel needs at least 4 vertices, got {n}"
        )));
    }
    let mut b = NetworkBuilder::new();
    let hub = b.add_vertex("hub", 1.0);
    let rim: Vec<_> = (1..n).map(|i| b.add_vertex(format!("r{i}"), 1.0)).collect();
    let spoke: Vec<EdgeId> = rim.iter().map(|&v| b.add_edge(hub, v, 1.0, 1.0)).collect();
    let k = rim.len();
    let rim_edges: Vec<EdgeId> = (0..k)
        .map(|i| b.add_edge(rim[i], rim[(i + 1) % k], 1.0, 1.0))
        .collect();
    let net = b.build(hub)?;
    let mut wheel = vec![spoke[0]];
    wheel.extend_from_slice(&rim_edges[..k - 1]);
    Ok(Wheel { net, spoke, wheel })
}

/// The 5-vertex example on which lexicographic greedy is 7/6 off optimal.
///
/// Vertices s, v1 … v4 with s the root (demand 0, others 1); tree edges
/// s–v1, v1–v2, s–v3, v3–v4 (ids 0–3); switches s1 = v1–v3, s2 = s–v2,
/// s3 = s–v4 (ids 4–6). Unit failure weights and resistances.
pub fn gen_greedy_gap_example() -> (Network, TreeConfig) {
    let mut b = NetworkBuilder::new();
    let v: Vec<_> = ["s", "v1", "v2", "v3", "v4"]
        .iter()
        .enumerate()
        .map(|(i, n)| b.add_vertex(*n, if i == 0 { 0.0 } else { 1.0 }))
        .collect();
    let named = [
        ("s-v1", 0, 1),
        ("v1-v2", 1, 2),
        ("s-v3", 0, 3),
        ("v3-v4", 3, 4),
        ("s1", 1, 3),
        ("s2", 0, 2),
        ("s3", 0, 4),
    ];
    for (name, x, y) in named {
        b.add_named_edge(name, v[x], v[y], 1.0, 1.0);
    }
    let net = b.build(v[0]).expect("fixture is valid");
    let tree = build_tree_config(&net, &[EdgeId(0), EdgeId(1), EdgeId(2), EdgeId(3)])
        .expect("fixture tree");
    (net, tree)
}

/// Hyperedges {1,2,3}, {1,4}, {2,4}, {3,4} with unit weights: no tree and
/// switch set induces this coverage structure.
pub fn gen_mssc_non_mrt_fixture() -> MsscInstance {
    MsscInstance::new(
        4,
        vec![
            (vec![0, 1, 2], 1.0),
            (vec![0, 3], 1.0),
            (vec![1, 3], 1.0),
            (vec![2, 3], 1.0),
        ],
    )
    .expect("fixture is valid")
}

/// `rows` × `cols` unit grid with coordinates, rooted at the corner (0, 0).
/// The tree is a comb (first column plus every row); the remaining vertical
/// edges are switches. Unit demands, failure weights and resistances.
pub fn gen_grid(rows: usize, cols: usize) -> Result<(Network, TreeConfig), GenError> {
    if rows == 0 || cols == 0 || rows * cols < 2 {
        return Err(GenError::InvalidParams(format!(
            "grid {rows}x{cols} has fewer than 2 vertices"
        )));
    }
    let mut b = NetworkBuilder::new();
    let id = |r: usize, c: usize| r * cols + c;
    for r in 0..rows {
        for c in 0..cols {
            b.vertex(Vertex::new(format!("g{r}_{c}"), 1.0).with_coords(c as f64, r as f64));
        }
    }
    let vid: Vec<_> = (0..rows * cols).map(crate::netgraph::VertexId).collect();
    let mut tree = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                tree.push(b.add_edge(vid[id(r, c)], vid[id(r, c + 1)], 1.0, 1.0));
            }
            if r + 1 < rows {
                let e = b.add_edge(vid[id(r, c)], vid[id(r + 1, c)], 1.0, 1.0);
                if c == 0 {
                    tree.push(e);
                }
            }
        }
    }
    let net = b.build(vid[0])?;
    let tree = build_tree_config(&net, &tree)?;
    Ok((net, tree))
}

/// Random connected network on `n` vertices: a random recursive tree (vertex
/// i attaches to a uniform earlier vertex) plus up to `extra` distinct random
/// non-tree edges as switches. Vertex 0 is the root with demand 0; other
/// demands, failure weights and resistances are uniform in [0.5, 2).
pub fn gen_random_network(
    n: usize,
    extra: usize,
    seed: u64,
) -> Result<(Network, TreeConfig), GenError> {
    if n < 2 {
        return Err(GenError::InvalidParams(format!(
            "need at least 2 vertices, got {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = NetworkBuilder::new();
    let v: Vec<_> = (0..n)
        .map(|i| {
            let w = if i == 0 { 0.0 } else { rng.gen_range(0.5..2.0) };
            b.add_vertex(format!("n{i}"), w)
        })
        .collect();
    let mut adj = vec![vec![false; n]; n];
    let mut tree = Vec::with_capacity(n - 1);
    for i in 1..n {
        let j = rng.gen_range(0..i);
        adj[i][j] = true;
        adj[j][i] = true;
        tree.push(b.add_edge(v[j], v[i], rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0)));
    }
    let mut free: Vec<(usize, usize)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if !adj[i][j] {
                free.push((i, j));
            }
        }
    }
    let k = extra.min(free.len());
    let mut picks: Vec<usize> = sample(&mut rng, free.len(), k).into_vec();
    picks.sort_unstable();
    for p in picks {
        let (i, j) = free[p];
        b.add_edge(v[i], v[j], rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0));
    }
    let net = b.build(v[0])?;
    let tree = build_tree_config(&net, &tree)?;
    Ok((net, tree))
}

/// `m` hyperedges, each a uniform random `c`-subset of `n` vertices, unit
/// weights. Duplicate hyperedges are kept.
pub fn gen_random_mssc(n: usize, m: usize, c: usize, seed: u64) -> Result<MsscInstance, GenError> {
    if c == 0 || c > n || m == 0 {
        return Err(GenError::InvalidParams(format!(
            "n = {n}, m = {m}, c = {c}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = (0..m)
        .map(|_| (sample(&mut rng, n, c).into_vec(), 1.0))
        .collect();
    Ok(MsscInstance::new(n, edges)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netgraph::compute_coverage;

    #[test]
    fn non_mrt_fixture_optimum() {
        use crate::mssc::{exact_order_dp, greedy_order, TieRule};
        let inst = gen_mssc_non_mrt_fixture();
        assert_eq!(inst.edges().len(), 4);
        // vertex 3 first covers three pairs at t = 1, the triple follows at t = 2
        let exact = exact_order_dp(&inst).unwrap();
        assert_eq!(exact.objective, 5.0);
        assert_eq!(exact.order[0], 3);
        assert_eq!(inst.evaluate(&[3, 0, 1, 2]).unwrap().objective, 5.0);
        let greedy = greedy_order(&inst, TieRule::Lexicographic).unwrap();
        assert!(greedy.objective <= 4.0 * exact.objective);
    }

    #[test]
    fn wheel_energies() {
        let w = gen_wheel(7).unwrap();
        let spoke = build_tree_config(&w.net, &w.spoke).unwrap();
        let wheel = build_tree_config(&w.net, &w.wheel).unwrap();
        assert_eq!(spoke.energy(&w.net), 6.0);
        assert_eq!(wheel.energy(&w.net), 91.0);
        let w4 = gen_wheel(4).unwrap();
        assert_eq!(
            build_tree_config(&w4.net, &w4.spoke)
                .unwrap()
                .energy(&w4.net),
            3.0
        );
        assert!(gen_wheel(3).is_err());
    }

    #[test]
    fn gap_example_shape() {
        let (net, tree) = gen_greedy_gap_example();
        assert_eq!((net.vertex_count(), net.edge_count()), (5, 7));
        let cov = compute_coverage(&net, &tree);
        assert_eq!(cov.max_coverage(), 2);
        assert_eq!(cov.covered_by(EdgeId(4)), [EdgeId(0), EdgeId(2)]);
    }

    #[test]
    fn grid_is_comb() {
        let (net, tree) = gen_grid(3, 4).unwrap();
        assert_eq!(net.edge_count(), 3 * 3 + 2 * 4);
        assert_eq!(tree.tree_edges().len(), 11);
        assert_eq!(tree.switches().len(), 6);
    }

    #[test]
    fn random_generators_are_seeded() {
        let (a, ta) = gen_random_network(10, 6, 3).unwrap();
        let (b, tb) = gen_random_network(10, 6, 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(ta, tb);
        assert_eq!(a.edge_count(), 15);
        let x = gen_random_mssc(9, 12, 3, 5).unwrap();
        assert_eq!(x, gen_random_mssc(9, 12, 3, 5).unwrap());
        assert!(x.edges().iter().all(|e| e.vertices.len() == 3));
    }
}
