use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::PrepError;
use crate::netgraph::{build_tree_config, Edge, EdgeId, Network, TreeConfig, Vertex, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContractOptions {
    /// Leaves with demand below this are merged into their parent.
    pub threshold: f64,
    /// Scale the leaf rule's failure-weight transfer by the parent's demand
    /// before absorbing the leaf instead of after.
    pub pre_update: bool,
}

impl ContractOptions {
    pub fn new(threshold: f64) -> Self {
        ContractOptions {
            threshold,
            pre_update: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContractionMap {
    /// Contracted vertex of every original vertex.
    pub vertex_map: Vec<VertexId>,
    /// Original edges behind every contracted edge (a path, in order, for
    /// fused tree edges).
    pub edge_chains: Vec<Vec<EdgeId>>,
    /// Switches whose ends collapsed together or onto an existing edge.
    pub dropped_switches: Vec<EdgeId>,
}

#[derive(Debug, Clone)]
pub struct Contracted {
    pub net: Network,
    pub tree: TreeConfig,
    pub map: ContractionMap,
}

struct WorkEdge {
    ends: (usize, usize),
    failure: f64,
    resistance: f64,
    chain: Vec<EdgeId>,
    alive: bool,
}

/// Shrinks the tree to a fixpoint of two rules, never touching the root:
///
/// * a leaf v with demand below the threshold merges into its parent u:
///   w(u) += w(v), and u's own parent edge gains p(uv)·w(v)/w(u) (skipped
///   when u is the root);
/// * a vertex v of tree degree 2 is removed, half its demand going to each
///   neighbour, and its two edges fuse into one with summed failure weight
///   and resistance.
///
/// Switch endpoints follow their vertices; switches that become loops or
/// duplicate another edge are dropped.
pub fn contract_tree(
    net: &Network,
    tree: &TreeConfig,
    opts: &ContractOptions,
) -> Result<Contracted, PrepError> {
    if !(opts.threshold.is_finite() && opts.threshold >= 0.0) {
        return Err(PrepError::InvalidArgument(format!(
            "threshold {}",
            opts.threshold
        )));
    }
    let n = net.vertex_count();
    let root = net.root().0;
    let mut w: Vec<f64> = net.vertices().iter().map(|v| v.demand).collect();
    let mut rep: Vec<usize> = (0..n).collect();
    let mut alive = vec![true; n];
    let mut edges: Vec<WorkEdge> = Vec::new();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut parent_edge: Vec<Option<usize>> = vec![None; n];
    let mut work_id = vec![usize::MAX; net.edge_count()];
    for &e in tree.tree_edges() {
        let edge = net.edge(e);
        let (a, b) = (edge.endpoints.0 .0, edge.endpoints.1 .0);
        work_id[e.0] = edges.len();
        incident[a].push(edges.len());
        incident[b].push(edges.len());
        edges.push(WorkEdge {
            ends: (a, b),
            failure: edge.failure,
            resistance: edge.resistance,
            chain: vec![e],
            alive: true,
        });
    }
    for v in net.vertex_ids() {
        if let Some((_, e)) = tree.parent(v) {
            parent_edge[v.0] = Some(work_id[e.0]);
        }
    }
    let other = |edges: &[WorkEdge], id: usize, v: usize| {
        let (a, b) = edges[id].ends;
        if a == v {
            b
        } else {
            a
        }
    };

    let mut queue: VecDeque<usize> = (0..n).filter(|&v| v != root).collect();
    let mut queued = vec![true; n];
    queued[root] = false;
    let push = |queue: &mut VecDeque<usize>, queued: &mut Vec<bool>, v: usize| {
        if v != root && !queued[v] {
            queued[v] = true;
            queue.push_back(v);
        }
    };
    while let Some(v) = queue.pop_front() {
        queued[v] = false;
        if !alive[v] {
            continue;
        }
        match incident[v].len() {
            1 if w[v] < opts.threshold => {
                let uv = incident[v][0];
                let u = other(&edges, uv, v);
                let before = w[u];
                w[u] += w[v];
                if let Some(pu) = parent_edge[u] {
                    let denom = if opts.pre_update { before } else { w[u] };
                    if denom > 0.0 {
                        edges[pu].failure += edges[uv].failure * w[v] / denom;
                    }
                }
                w[v] = 0.0;
                edges[uv].alive = false;
                incident[u].retain(|&x| x != uv);
                incident[v].clear();
                alive[v] = false;
                rep[v] = u;
                push(&mut queue, &mut queued, u);
            }
            2 => {
                let up = parent_edge[v].expect("non-root vertex has a parent");
                let down = if incident[v][0] == up {
                    incident[v][1]
                } else {
                    incident[v][0]
                };
                let u = other(&edges, up, v);
                let x = other(&edges, down, v);
                let half = w[v] / 2.0;
                w[u] += half;
                w[x] += half;
                w[v] = 0.0;
                let mut chain = edges[up].chain.clone();
                chain.extend_from_slice(&edges[down].chain);
                let fused = edges.len();
                edges.push(WorkEdge {
                    ends: (u, x),
                    failure: edges[up].failure + edges[down].failure,
                    resistance: edges[up].resistance + edges[down].resistance,
                    chain,
                    alive: true,
                });
                edges[up].alive = false;
                edges[down].alive = false;
                incident[u].retain(|&e| e != up);
                incident[u].push(fused);
                incident[x].retain(|&e| e != down);
                incident[x].push(fused);
                incident[v].clear();
                parent_edge[x] = Some(fused);
                alive[v] = false;
                rep[v] = u;
                push(&mut queue, &mut queued, u);
                push(&mut queue, &mut queued, x);
            }
            _ => {}
        }
    }

    let resolve = |mut v: usize| {
        while rep[v] != v {
            v = rep[v];
        }
        v
    };
    let mut new_id = vec![usize::MAX; n];
    let mut vertices = Vec::new();
    for v in 0..n {
        if alive[v] {
            new_id[v] = vertices.len();
            let old = net.vertex(VertexId(v));
            let mut nv = Vertex::new(old.name.clone(), w[v]).with_class(old.class);
            nv.coords = old.coords;
            vertices.push(nv);
        }
    }
    let vertex_map: Vec<VertexId> = (0..n).map(|v| VertexId(new_id[resolve(v)])).collect();

    let mut kept: Vec<&WorkEdge> = edges.iter().filter(|e| e.alive).collect();
    kept.sort_by_key(|e| e.chain.iter().min().copied());
    let mut out_edges = Vec::new();
    let mut edge_chains = Vec::new();
    let mut pairs = HashSet::new();
    let mut tree_ids = Vec::new();
    for e in kept {
        let (a, b) = (VertexId(new_id[e.ends.0]), VertexId(new_id[e.ends.1]));
        pairs.insert((a.min(b), a.max(b)));
        let name = e
            .chain
            .iter()
            .map(|&c| net.edge(c).name.as_str())
            .collect::<Vec<_>>()
            .join("+");
        tree_ids.push(EdgeId(out_edges.len()));
        out_edges.push(Edge::new(name, a, b, e.failure, e.resistance));
        edge_chains.push(e.chain.clone());
    }
    let mut dropped_switches = Vec::new();
    for &s in tree.switches() {
        let edge = net.edge(s);
        let a = vertex_map[edge.endpoints.0 .0];
        let b = vertex_map[edge.endpoints.1 .0];
        if a == b || !pairs.insert((a.min(b), a.max(b))) {
            dropped_switches.push(s);
            continue;
        }
        out_edges.push(Edge::new(
            edge.name.clone(),
            a,
            b,
            edge.failure,
            edge.resistance,
        ));
        edge_chains.push(vec![s]);
    }
    let out = Network::new(vertices, out_edges, VertexId(new_id[root]))?;
    let out_tree = build_tree_config(&out, &tree_ids)?;
    Ok(Contracted {
        net: out,
        tree: out_tree,
        map: ContractionMap {
            vertex_map,
            edge_chains,
            dropped_switches,
        },
    })
}
