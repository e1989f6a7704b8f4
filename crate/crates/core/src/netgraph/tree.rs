use std::collections::VecDeque;

use super::{EdgeId, NetError, Network, VertexId};

/// A spanning tree of a [`Network`], oriented toward the root.
///
/// Every non-tree edge is a switch. Flows are the total downstream demand
/// carried by each tree edge.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeConfig {
    in_tree: Vec<bool>,
    tree_edges: Vec<EdgeId>,
    switches: Vec<EdgeId>,
    parent: Vec<Option<(VertexId, EdgeId)>>,
    depth: Vec<usize>,
    /// Downstream endpoint of each tree edge.
    lower: Vec<Option<VertexId>>,
    flow: Vec<f64>,
    /// Breadth-first order from the root.
    order: Vec<VertexId>,
}

/// Builds the rooted tree for `tree_edges`, rejecting anything that is not a
/// spanning tree of `net`.
pub fn build_tree_config(net: &Network, tree_edges: &[EdgeId]) -> Result<TreeConfig, NetError> {
    let n = net.vertex_count();
    let m = net.edge_count();
    let mut in_tree = vec![false; m];
    for &e in tree_edges {
        if e.0 >= m {
            return Err(NetError::UnknownEdgeId(e.0));
        }
        if in_tree[e.0] {
            return Err(NetError::NotATree(format!(
                "edge {} listed twice",
                net.edge(e).name
            )));
        }
        in_tree[e.0] = true;
    }
    if tree_edges.len() + 1 != n {
        return Err(NetError::NotATree(format!(
            "{} edges given for {} vertices",
            tree_edges.len(),
            n
        )));
    }
    TreeConfig::from_mask(net, in_tree)
}

impl TreeConfig {
    fn from_mask(net: &Network, in_tree: Vec<bool>) -> Result<Self, NetError> {
        let n = net.vertex_count();
        let m = net.edge_count();
        let root = net.root();

        let mut parent = vec![None; n];
        let mut depth = vec![usize::MAX; n];
        let mut lower = vec![None; m];
        let mut order = Vec::with_capacity(n);
        let mut queue = VecDeque::with_capacity(n);
        depth[root.0] = 0;
        queue.push_back(root);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &(u, e) in net.neighbors(v) {
                if !in_tree[e.0] || parent[v.0].is_some_and(|(_, pe)| pe == e) {
                    continue;
                }
                if depth[u.0] != usize::MAX {
                    return Err(NetError::NotATree(format!(
                        "cycle through edge {}",
                        net.edge(e).name
                    )));
                }
                depth[u.0] = depth[v.0] + 1;
                parent[u.0] = Some((v, e));
                lower[e.0] = Some(u);
                queue.push_back(u);
            }
        }
        if order.len() != n {
            return Err(NetError::NotATree(format!(
                "only {} of {} vertices reachable from the root",
                order.len(),
                n
            )));
        }

        let mut subtree: Vec<f64> = net.vertices().iter().map(|v| v.demand).collect();
        let mut flow = vec![0.0; m];
        for &v in order.iter().rev() {
            if let Some((p, e)) = parent[v.0] {
                flow[e.0] = subtree[v.0];
                subtree[p.0] += subtree[v.0];
            }
        }

        let tree_edges = (0..m).filter(|&i| in_tree[i]).map(EdgeId).collect();
        let switches = (0..m).filter(|&i| !in_tree[i]).map(EdgeId).collect();
        Ok(TreeConfig {
            in_tree,
            tree_edges,
            switches,
            parent,
            depth,
            lower,
            flow,
            order,
        })
    }

    #[inline]
    pub fn is_tree_edge(&self, e: EdgeId) -> bool {
        self.in_tree[e.0]
    }

    /// Tree edges in ascending id order.
    pub fn tree_edges(&self) -> &[EdgeId] {
        &self.tree_edges
    }

    /// Non-tree edges in ascending id order.
    pub fn switches(&self) -> &[EdgeId] {
        &self.switches
    }

    #[inline]
    pub fn parent(&self, v: VertexId) -> Option<(VertexId, EdgeId)> {
        self.parent[v.0]
    }

    #[inline]
    pub fn depth(&self, v: VertexId) -> usize {
        self.depth[v.0]
    }

    /// Downstream demand f(e); zero for switches.
    #[inline]
    pub fn flow(&self, e: EdgeId) -> f64 {
        self.flow[e.0]
    }

    /// The endpoint of tree edge `e` farther from the root.
    #[inline]
    pub fn downstream_vertex(&self, e: EdgeId) -> Option<VertexId> {
        self.lower[e.0]
    }

    /// Vertices in breadth-first order from the root.
    pub fn bfs_order(&self) -> &[VertexId] {
        &self.order
    }

    /// D(e): every vertex whose root path uses `e`.
    pub fn downstream_set(&self, net: &Network, e: EdgeId) -> Vec<VertexId> {
        let Some(top) = self.lower[e.0] else {
            return Vec::new();
        };
        let mut out = vec![top];
        let mut i = 0;
        while i < out.len() {
            let v = out[i];
            for &(u, ue) in net.neighbors(v) {
                if self.in_tree[ue.0] && self.parent[u.0] == Some((v, ue)) {
                    out.push(u);
                }
            }
            i += 1;
        }
        out
    }

    /// Tree edges on the path between `a` and `b`, in ascending id order.
    pub fn path_edges(&self, a: VertexId, b: VertexId) -> Vec<EdgeId> {
        let mut out = Vec::new();
        let (mut x, mut y) = (a, b);
        while self.depth[x.0] > self.depth[y.0] {
            let (p, e) = self.parent[x.0].expect("non-root vertex has a parent");
            out.push(e);
            x = p;
        }
        while self.depth[y.0] > self.depth[x.0] {
            let (p, e) = self.parent[y.0].expect("non-root vertex has a parent");
            out.push(e);
            y = p;
        }
        while x != y {
            let (px, ex) = self.parent[x.0].expect("non-root vertex has a parent");
            let (py, ey) = self.parent[y.0].expect("non-root vertex has a parent");
            out.push(ex);
            out.push(ey);
            x = px;
            y = py;
        }
        out.sort_unstable();
        out
    }

    /// Fundamental cycle of switch `s`, as the sorted list of tree edges it covers.
    pub fn fundamental_cycle(&self, net: &Network, s: EdgeId) -> Vec<EdgeId> {
        let (a, b) = net.edge(s).endpoints;
        self.path_edges(a, b)
    }

    /// The tree T - e + s. Fails when `e` is not a tree edge, `s` is not a
    /// switch, or the result is disconnected.
    pub fn exchange(&self, net: &Network, e: EdgeId, s: EdgeId) -> Result<TreeConfig, NetError> {
        if e.0 >= self.in_tree.len() {
            return Err(NetError::UnknownEdgeId(e.0));
        }
        if s.0 >= self.in_tree.len() {
            return Err(NetError::UnknownEdgeId(s.0));
        }
        if !self.in_tree[e.0] || self.in_tree[s.0] {
            return Err(NetError::InfeasibleExchange { edge: e, switch: s });
        }
        let mut mask = self.in_tree.clone();
        mask[e.0] = false;
        mask[s.0] = true;
        TreeConfig::from_mask(net, mask)
            .map_err(|_| NetError::InfeasibleExchange { edge: e, switch: s })
    }

    /// Σ r(e) f(e)² over tree edges.
    pub fn energy(&self, net: &Network) -> f64 {
        self.tree_edges
            .iter()
            .map(|&e| net.edge(e).resistance * self.flow[e.0] * self.flow[e.0])
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netgraph::NetworkBuilder;

    /// Hub 0 with rim 1..=6; spokes are edges 0..6, rim edges 6..12.
    fn wheel7() -> Network {
        let mut b = NetworkBuilder::new();
        let hub = b.add_vertex("hub", 1.0);
        let rim: Vec<_> = (1..=6)
            .map(|i| b.add_vertex(format!("r{i}"), 1.0))
            .collect();
        for &v in &rim {
            b.add_edge(hub, v, 1.0, 1.0);
        }
        for i in 0..6 {
            b.add_edge(rim[i], rim[(i + 1) % 6], 1.0, 1.0);
        }
        b.build(hub).unwrap()
    }

    #[test]
    fn spoke_tree_has_unit_flows() {
        let net = wheel7();
        let spokes: Vec<_> = (0..6).map(EdgeId).collect();
        let tree = build_tree_config(&net, &spokes).unwrap();
        for &e in tree.tree_edges() {
            assert_eq!(tree.flow(e), 1.0);
        }
        assert_eq!(tree.energy(&net), 6.0);
        assert_eq!(tree.switches().len(), 6);
    }

    #[test]
    fn rim_path_tree_flows_descend() {
        let net = wheel7();
        // spoke to r1 then rim r1-r2-...-r6
        let edges: Vec<_> = [0, 6, 7, 8, 9, 10].into_iter().map(EdgeId).collect();
        let tree = build_tree_config(&net, &edges).unwrap();
        let flows: Vec<f64> = edges.iter().map(|&e| tree.flow(e)).collect();
        assert_eq!(flows, vec![6.0, 5.0, 4.0, 3.0, 2.0, 1.0]);
        assert_eq!(tree.energy(&net), 91.0);
        assert_eq!(tree.depth(VertexId(6)), 6);
        assert_eq!(tree.downstream_set(&net, EdgeId(8)).len(), 3);
    }

    #[test]
    fn rejects_non_trees() {
        let net = wheel7();
        // five spokes leave r6 unreachable, plus one rim edge that closes a cycle
        let missing: Vec<_> = [0, 1, 2, 3, 4, 6].into_iter().map(EdgeId).collect();
        assert!(matches!(
            build_tree_config(&net, &missing),
            Err(NetError::NotATree(_))
        ));
        let short: Vec<_> = (0..5).map(EdgeId).collect();
        assert!(matches!(
            build_tree_config(&net, &short),
            Err(NetError::NotATree(_))
        ));
        let unknown: Vec<_> = [0, 1, 2, 3, 4, 99].into_iter().map(EdgeId).collect();
        assert!(matches!(
            build_tree_config(&net, &unknown),
            Err(NetError::UnknownEdgeId(99))
        ));
        let dup: Vec<_> = [0, 1, 2, 3, 4, 4].into_iter().map(EdgeId).collect();
        assert!(matches!(
            build_tree_config(&net, &dup),
            Err(NetError::NotATree(_))
        ));
    }

    #[test]
    fn path_edges_and_exchange() {
        let net = wheel7();
        let spokes: Vec<_> = (0..6).map(EdgeId).collect();
        let tree = build_tree_config(&net, &spokes).unwrap();
        // rim edge r1-r2 closes the cycle hub-r1-r2
        assert_eq!(
            tree.fundamental_cycle(&net, EdgeId(6)),
            vec![EdgeId(0), EdgeId(1)]
        );
        let next = tree.exchange(&net, EdgeId(1), EdgeId(6)).unwrap();
        assert!(next.is_tree_edge(EdgeId(6)));
        assert!(!next.is_tree_edge(EdgeId(1)));
        assert_eq!(next.flow(EdgeId(0)), 2.0);
        // removing a spoke and adding a rim edge not on its cycle disconnects r2
        assert!(matches!(
            tree.exchange(&net, EdgeId(1), EdgeId(9)),
            Err(NetError::InfeasibleExchange { .. })
        ));
    }
}
