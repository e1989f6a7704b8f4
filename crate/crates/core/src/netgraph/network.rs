use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::NetError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub usize);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl EdgeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// Voltage level of a bus. Only used for grouping outage statistics.
#[derive(
    Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub enum VoltageClass {
    #[default]
    LV,
    MV,
}

impl VoltageClass {
    pub fn as_str(self) -> &'static str {
        match self {
            VoltageClass::LV => "LV",
            VoltageClass::MV => "MV",
        }
    }
}

impl FromStr for VoltageClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "LV" | "lv" => Ok(VoltageClass::LV),
            "MV" | "mv" => Ok(VoltageClass::MV),
            other => Err(format!(
                "unknown voltage class `{other}` (expected LV or MV)"
            )),
        }
    }
}

impl fmt::Display for VoltageClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Vertex {
    pub name: String,
    /// Demand in kW.
    pub demand: f64,
    /// Planar position in meters.
    pub coords: Option<(f64, f64)>,
    pub class: VoltageClass,
}

impl Vertex {
    pub fn new(name: impl Into<String>, demand: f64) -> Self {
        Vertex {
            name: name.into(),
            demand,
            coords: None,
            class: VoltageClass::LV,
        }
    }

    pub fn with_coords(mut self, x: f64, y: f64) -> Self {
        self.coords = Some((x, y));
        self
    }

    pub fn with_class(mut self, class: VoltageClass) -> Self {
        self.class = class;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub name: String,
    pub endpoints: (VertexId, VertexId),
    /// Relative failure weight p(e); only ratios matter.
    pub failure: f64,
    /// Per-unit resistance r(e).
    pub resistance: f64,
}

impl Edge {
    pub fn new(
        name: impl Into<String>,
        u: VertexId,
        v: VertexId,
        failure: f64,
        resistance: f64,
    ) -> Self {
        Edge {
            name: name.into(),
            endpoints: (u, v),
            failure,
            resistance,
        }
    }

    /// The endpoint opposite to `v`.
    #[inline]
    pub fn other(&self, v: VertexId) -> VertexId {
        if self.endpoints.0 == v {
            self.endpoints.1
        } else {
            self.endpoints.0
        }
    }
}

/// A connected simple graph with a designated root (the supply vertex).
///
/// Vertex and edge ids are dense indices into the construction vectors, so
/// `EdgeId(i)` is the `i`-th edge passed to [`Network::new`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawNetwork", into = "RawNetwork")]
pub struct Network {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    root: VertexId,
    adjacency: Vec<Vec<(VertexId, EdgeId)>>,
}

#[derive(Serialize, Deserialize)]
struct RawNetwork {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    root: VertexId,
}

impl TryFrom<RawNetwork> for Network {
    type Error = NetError;

    fn try_from(raw: RawNetwork) -> Result<Self, Self::Error> {
        Network::new(raw.vertices, raw.edges, raw.root)
    }
}

impl From<Network> for RawNetwork {
    fn from(net: Network) -> Self {
        RawNetwork {
            vertices: net.vertices,
            edges: net.edges,
            root: net.root,
        }
    }
}

fn check_weight(value: f64, what: impl FnOnce() -> String) -> Result<(), NetError> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(NetError::InvalidWeight {
            what: what(),
            value,
        })
    }
}

impl Network {
    pub fn new(vertices: Vec<Vertex>, edges: Vec<Edge>, root: VertexId) -> Result<Self, NetError> {
        let n = vertices.len();
        if n == 0 {
            return Err(NetError::Empty);
        }
        if root.0 >= n {
            return Err(NetError::RootMissing(root.0));
        }
        for v in &vertices {
            check_weight(v.demand, || format!("demand of vertex `{}`", v.name))?;
        }

        let mut seen = HashSet::with_capacity(edges.len());
        let mut adjacency = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            let (a, b) = e.endpoints;
            for end in [a, b] {
                if end.0 >= n {
                    return Err(NetError::UnknownVertex {
                        edge: e.name.clone(),
                        vertex: end.0,
                    });
                }
            }
            if a == b {
                return Err(NetError::SelfLoop(e.name.clone()));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(NetError::ParallelEdge(e.name.clone()));
            }
            check_weight(e.failure, || format!("failure weight of edge `{}`", e.name))?;
            check_weight(e.resistance, || format!("resistance of edge `{}`", e.name))?;
            adjacency[a.0].push((b, EdgeId(i)));
            adjacency[b.0].push((a, EdgeId(i)));
        }

        let net = Network {
            vertices,
            edges,
            root,
            adjacency,
        };
        if !net.is_connected() {
            return Err(NetError::Disconnected);
        }
        Ok(net)
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.vertex_count()];
        let mut stack = vec![self.root];
        seen[self.root.0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &(u, _) in &self.adjacency[v.0] {
                if !seen[u.0] {
                    seen[u.0] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count == self.vertex_count()
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn root(&self) -> VertexId {
        self.root
    }

    #[inline]
    pub fn vertex(&self, v: VertexId) -> &Vertex {
        &self.vertices[v.0]
    }

    #[inline]
    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0]
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertices.len()).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len()).map(EdgeId)
    }

    /// Neighbours of `v` with the connecting edge, in edge-id order.
    #[inline]
    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        &self.adjacency[v.0]
    }

    pub fn find_edge(&self, a: VertexId, b: VertexId) -> Option<EdgeId> {
        self.adjacency[a.0]
            .iter()
            .find(|&&(u, _)| u == b)
            .map(|&(_, e)| e)
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.vertices
            .iter()
            .position(|v| v.name == name)
            .map(VertexId)
    }

    pub fn edge_by_name(&self, name: &str) -> Option<EdgeId> {
        self.edges.iter().position(|e| e.name == name).map(EdgeId)
    }

    /// Total demand of all vertices except the root.
    pub fn served_demand(&self) -> f64 {
        self.vertex_ids()
            .filter(|&v| v != self.root)
            .map(|v| self.vertices[v.0].demand)
            .sum()
    }

    pub fn total_demand(&self) -> f64 {
        self.vertices.iter().map(|v| v.demand).sum()
    }

    /// Euclidean distance between two vertices, when both carry coordinates.
    pub fn distance(&self, a: VertexId, b: VertexId) -> Option<f64> {
        let (ax, ay) = self.vertices[a.0].coords?;
        let (bx, by) = self.vertices[b.0].coords?;
        Some((ax - bx).hypot(ay - by))
    }
}

/// Incremental construction helper used by generators and tests.
#[derive(Debug, Default, Clone)]
pub struct NetworkBuilder {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
}

impl NetworkBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(&mut self, vertex: Vertex) -> VertexId {
        self.vertices.push(vertex);
        VertexId(self.vertices.len() - 1)
    }

    pub fn add_vertex(&mut self, name: impl Into<String>, demand: f64) -> VertexId {
        self.vertex(Vertex::new(name, demand))
    }

    pub fn edge(&mut self, edge: Edge) -> EdgeId {
        self.edges.push(edge);
        EdgeId(self.edges.len() - 1)
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId, failure: f64, resistance: f64) -> EdgeId {
        let name = format!("l{}", self.edges.len());
        self.edge(Edge::new(name, u, v, failure, resistance))
    }

    pub fn add_named_edge(
        &mut self,
        name: impl Into<String>,
        u: VertexId,
        v: VertexId,
        failure: f64,
        resistance: f64,
    ) -> EdgeId {
        self.edge(Edge::new(name, u, v, failure, resistance))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn build(self, root: VertexId) -> Result<Network, NetError> {
        Network::new(self.vertices, self.edges, root)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> NetworkBuilder {
        let mut b = NetworkBuilder::new();
        let r = b.add_vertex("r", 0.0);
        let x = b.add_vertex("x", 1.0);
        let y = b.add_vertex("y", 2.0);
        b.add_edge(r, x, 1.0, 1.0);
        b.add_edge(x, y, 1.0, 1.0);
        b.add_edge(y, r, 1.0, 1.0);
        b
    }

    #[test]
    fn builds_triangle() {
        let net = triangle().build(VertexId(0)).unwrap();
        assert_eq!(net.vertex_count(), 3);
        assert_eq!(net.edge_count(), 3);
        assert_eq!(net.served_demand(), 3.0);
        assert_eq!(net.find_edge(VertexId(2), VertexId(0)), Some(EdgeId(2)));
    }

    #[test]
    fn rejects_parallel_edges_and_loops() {
        let mut b = triangle();
        b.add_edge(VertexId(1), VertexId(0), 1.0, 1.0);
        assert!(matches!(
            b.build(VertexId(0)),
            Err(NetError::ParallelEdge(_))
        ));

        let mut b = triangle();
        b.add_edge(VertexId(1), VertexId(1), 1.0, 1.0);
        assert!(matches!(b.build(VertexId(0)), Err(NetError::SelfLoop(_))));
    }

    #[test]
    fn rejects_bad_weights_and_disconnection() {
        let mut b = triangle();
        b.add_vertex("island", 1.0);
        assert!(matches!(b.build(VertexId(0)), Err(NetError::Disconnected)));

        let mut b = triangle();
        b.add_edge(VertexId(0), VertexId(0), f64::NAN, 1.0);
        assert!(b.build(VertexId(0)).is_err());

        let mut b = NetworkBuilder::new();
        b.add_vertex("neg", -1.0);
        assert!(matches!(
            b.build(VertexId(0)),
            Err(NetError::InvalidWeight { .. })
        ));

        assert!(matches!(
            triangle().build(VertexId(7)),
            Err(NetError::RootMissing(7))
        ));
    }
}
