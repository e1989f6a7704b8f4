use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::MsscError;
use crate::netgraph::{CoverageMap, EdgeId, Network, TreeConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hyperedge {
    /// Sorted, duplicate-free vertex ids.
    pub vertices: Vec<usize>,
    pub weight: f64,
}

/// A weighted hypergraph whose vertices are to be linearly ordered.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MsscInstance {
    labels: Vec<String>,
    edges: Vec<Hyperedge>,
    /// Padding vertices added by [`super::pad_to_uniform`].
    dummy: Vec<bool>,
}

/// A vertex ordering with its induced cover times and objective.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ordering {
    /// Vertex ids, first to last.
    pub order: Vec<usize>,
    /// t(e) per hyperedge, 1-based.
    pub cover_times: Vec<usize>,
    /// Σ b(e) t(e)
    pub objective: f64,
}

impl Ordering {
    /// Objective divided by the total hyperedge weight.
    pub fn normalized(&self, inst: &MsscInstance) -> f64 {
        let w = inst.total_weight();
        if w > 0.0 {
            self.objective / w
        } else {
            0.0
        }
    }

    /// 1-based rank of every vertex.
    pub fn ranks(&self) -> Vec<usize> {
        let mut r = vec![0; self.order.len()];
        for (i, &v) in self.order.iter().enumerate() {
            r[v] = i + 1;
        }
        r
    }
}

impl MsscInstance {
    /// Builds an instance on vertices `0..n`, labelled `1..=n`.
    pub fn new(n: usize, edges: Vec<(Vec<usize>, f64)>) -> Result<Self, MsscError> {
        Self::with_labels((1..=n).map(|i| i.to_string()).collect(), edges)
    }

    pub fn with_labels(
        labels: Vec<String>,
        edges: Vec<(Vec<usize>, f64)>,
    ) -> Result<Self, MsscError> {
        let n = labels.len();
        let mut out = Vec::with_capacity(edges.len());
        for (i, (mut vertices, weight)) in edges.into_iter().enumerate() {
            if vertices.is_empty() {
                return Err(MsscError::EmptyHyperedge(i));
            }
            if let Some(&v) = vertices.iter().find(|&&v| v >= n) {
                return Err(MsscError::UnknownVertex {
                    edge: i,
                    vertex: v,
                    n,
                });
            }
            if !(weight.is_finite() && weight >= 0.0) {
                return Err(MsscError::InvalidWeight { edge: i, weight });
            }
            vertices.sort_unstable();
            vertices.dedup();
            out.push(Hyperedge { vertices, weight });
        }
        Ok(MsscInstance {
            dummy: vec![false; n],
            labels,
            edges: out,
        })
    }

    pub(crate) fn from_parts(labels: Vec<String>, edges: Vec<Hyperedge>, dummy: Vec<bool>) -> Self {
        MsscInstance {
            labels,
            edges,
            dummy,
        }
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn real_vertex_count(&self) -> usize {
        self.dummy.iter().filter(|&&d| !d).count()
    }

    #[inline]
    pub fn edges(&self) -> &[Hyperedge] {
        &self.edges
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    #[inline]
    pub fn is_dummy(&self, v: usize) -> bool {
        self.dummy[v]
    }

    pub fn has_dummies(&self) -> bool {
        self.dummy.iter().any(|&d| d)
    }

    /// c: the largest hyperedge size.
    pub fn uniformity(&self) -> usize {
        self.edges
            .iter()
            .map(|e| e.vertices.len())
            .max()
            .unwrap_or(0)
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    /// Hyperedge ids incident to each vertex.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.vertex_count()];
        for (i, e) in self.edges.iter().enumerate() {
            for &v in &e.vertices {
                inc[v].push(i);
            }
        }
        inc
    }

    /// Merges hyperedges with identical vertex sets, summing their weights.
    /// Survivors keep the position of their first occurrence.
    pub fn normalized(&self) -> MsscInstance {
        let mut index: HashMap<&[usize], usize> = HashMap::with_capacity(self.edges.len());
        let mut edges: Vec<Hyperedge> = Vec::with_capacity(self.edges.len());
        for e in &self.edges {
            match index.get(e.vertices.as_slice()) {
                Some(&i) => edges[i].weight += e.weight,
                None => {
                    index.insert(&e.vertices, edges.len());
                    edges.push(e.clone());
                }
            }
        }
        MsscInstance {
            labels: self.labels.clone(),
            edges,
            dummy: self.dummy.clone(),
        }
    }

    /// Cover times and objective of `order`, which must be a permutation of
    /// all vertices.
    pub fn evaluate(&self, order: &[usize]) -> Result<Ordering, MsscError> {
        let n = self.vertex_count();
        if order.len() != n {
            return Err(MsscError::NotAPermutation(format!(
                "{} of {} vertices ordered",
                order.len(),
                n
            )));
        }
        let mut rank = vec![0usize; n];
        for (i, &v) in order.iter().enumerate() {
            if v >= n {
                return Err(MsscError::NotAPermutation(format!("unknown vertex {v}")));
            }
            if rank[v] != 0 {
                return Err(MsscError::NotAPermutation(format!(
                    "vertex {v} appears twice"
                )));
            }
            rank[v] = i + 1;
        }
        let cover_times: Vec<usize> = self
            .edges
            .iter()
            .map(|e| e.vertices.iter().map(|&v| rank[v]).min().unwrap_or(0))
            .collect();
        let objective = self
            .edges
            .iter()
            .zip(&cover_times)
            .map(|(e, &t)| e.weight * t as f64)
            .sum();
        Ok(Ordering {
            order: order.to_vec(),
            cover_times,
            objective,
        })
    }

    /// The instance restricted to non-dummy vertices, which keep their ids.
    pub fn without_dummies(&self) -> MsscInstance {
        let keep: Vec<usize> = (0..self.vertex_count())
            .filter(|&v| !self.dummy[v])
            .collect();
        let mut remap = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in keep.iter().enumerate() {
            remap[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .map(|e| Hyperedge {
                vertices: e
                    .vertices
                    .iter()
                    .filter(|&&v| !self.dummy[v])
                    .map(|&v| remap[v])
                    .collect(),
                weight: e.weight,
            })
            .collect();
        MsscInstance {
            labels: keep.iter().map(|&v| self.labels[v].clone()).collect(),
            edges,
            dummy: vec![false; keep.len()],
        }
    }
}

/// An instance derived from a tree's coverage, with the bookkeeping needed to
/// map orderings back to switches.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageInstance {
    pub instance: MsscInstance,
    /// Vertex i of the instance is switch `switches[i]`.
    pub switches: Vec<EdgeId>,
    /// Tree edges merged into each hyperedge.
    pub groups: Vec<Vec<EdgeId>>,
    /// Tree edges no switch covers.
    pub dropped: Vec<EdgeId>,
}

impl CoverageInstance {
    pub fn switch_order(&self, ordering: &Ordering) -> Vec<EdgeId> {
        ordering.order.iter().map(|&v| self.switches[v]).collect()
    }
}

/// One hyperedge per covered tree edge, holding the switches that cover it,
/// weighted by `weights[e]` (indexed by edge id). Identical coverage sets are
/// merged.
pub fn instance_from_coverage(
    net: &Network,
    tree: &TreeConfig,
    cov: &CoverageMap,
    weights: &[f64],
) -> Result<CoverageInstance, MsscError> {
    let switches: Vec<EdgeId> = tree.switches().to_vec();
    let mut vid = vec![usize::MAX; net.edge_count()];
    for (i, s) in switches.iter().enumerate() {
        vid[s.0] = i;
    }
    let labels = switches.iter().map(|&s| net.edge(s).name.clone()).collect();

    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut edges: Vec<Hyperedge> = Vec::new();
    let mut groups: Vec<Vec<EdgeId>> = Vec::new();
    let mut dropped = Vec::new();
    for &e in tree.tree_edges() {
        let w = weights[e.0];
        if !(w.is_finite() && w >= 0.0) {
            return Err(MsscError::InvalidWeight {
                edge: e.0,
                weight: w,
            });
        }
        let covering = cov.covering(e);
        if covering.is_empty() {
            dropped.push(e);
            continue;
        }
        // switch ids ascend with edge ids, so this is already sorted
        let set: Vec<usize> = covering.iter().map(|s| vid[s.0]).collect();
        match index.get(&set) {
            Some(&i) => {
                edges[i].weight += w;
                groups[i].push(e);
            }
            None => {
                index.insert(set.clone(), edges.len());
                edges.push(Hyperedge {
                    vertices: set,
                    weight: w,
                });
                groups.push(vec![e]);
            }
        }
    }
    let n = switches.len();
    Ok(CoverageInstance {
        instance: MsscInstance::from_parts(labels, edges, vec![false; n]),
        switches,
        groups,
        dropped,
    })
}
