use super::{EdgeId, NetError, Network, TreeConfig};

/// The covering relation between switches and tree edges, stored in both
/// directions. Lists are sorted by edge id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageMap {
    /// Indexed by edge id; empty for switches.
    by_edge: Vec<Vec<EdgeId>>,
    /// Indexed by edge id; empty for tree edges.
    by_switch: Vec<Vec<EdgeId>>,
}

/// Full covering relation: each switch covers the tree path between its
/// endpoints.
pub fn compute_coverage(net: &Network, tree: &TreeConfig) -> CoverageMap {
    let m = net.edge_count();
    let mut by_edge = vec![Vec::new(); m];
    let mut by_switch = vec![Vec::new(); m];
    for &s in tree.switches() {
        let path = tree.fundamental_cycle(net, s);
        for &e in &path {
            by_edge[e.0].push(s);
        }
        by_switch[s.0] = path;
    }
    // switches were visited in ascending order, so by_edge lists are sorted
    CoverageMap { by_edge, by_switch }
}

fn insert_sorted(list: &mut Vec<EdgeId>, x: EdgeId) {
    if let Err(pos) = list.binary_search(&x) {
        list.insert(pos, x);
    }
}

fn remove_sorted(list: &mut Vec<EdgeId>, x: EdgeId) {
    if let Ok(pos) = list.binary_search(&x) {
        list.remove(pos);
    }
}

/// Applies the exchange T' = T - e + s and repairs `cov` in place.
///
/// A switch s' covers a tree edge g in T' exactly as in T unless s' covered e
/// in T, so only those switches (and e itself, now a switch) get their paths
/// recomputed. The new tree edge s is covered by precisely the old coverers
/// of e together with e.
pub fn update_coverage_after_exchange(
    net: &Network,
    tree: &TreeConfig,
    mut cov: CoverageMap,
    e: EdgeId,
    s: EdgeId,
) -> Result<(TreeConfig, CoverageMap), NetError> {
    if e.0 >= net.edge_count() {
        return Err(NetError::UnknownEdgeId(e.0));
    }
    if s.0 >= net.edge_count() {
        return Err(NetError::UnknownEdgeId(s.0));
    }
    if !tree.is_tree_edge(e) || !cov.covers(s, e) {
        return Err(NetError::InfeasibleExchange { edge: e, switch: s });
    }
    let next = tree.exchange(net, e, s)?;

    let affected: Vec<EdgeId> = cov.by_edge[e.0]
        .iter()
        .copied()
        .filter(|&x| x != s)
        .collect();

    for g in std::mem::take(&mut cov.by_switch[s.0]) {
        remove_sorted(&mut cov.by_edge[g.0], s);
    }
    for &x in &affected {
        for g in std::mem::take(&mut cov.by_switch[x.0]) {
            remove_sorted(&mut cov.by_edge[g.0], x);
        }
    }
    debug_assert!(cov.by_edge[e.0].is_empty());

    let mut refreshed = affected;
    refreshed.push(e);
    for &x in &refreshed {
        let path = next.fundamental_cycle(net, x);
        for &g in &path {
            insert_sorted(&mut cov.by_edge[g.0], x);
        }
        cov.by_switch[x.0] = path;
    }
    Ok((next, cov))
}

impl CoverageMap {
    /// Switches covering tree edge `e`.
    #[inline]
    pub fn covering(&self, e: EdgeId) -> &[EdgeId] {
        &self.by_edge[e.0]
    }

    /// Tree edges on the fundamental cycle of switch `s`.
    #[inline]
    pub fn covered_by(&self, s: EdgeId) -> &[EdgeId] {
        &self.by_switch[s.0]
    }

    #[inline]
    pub fn covers(&self, s: EdgeId, e: EdgeId) -> bool {
        self.by_switch[s.0].binary_search(&e).is_ok()
    }

    /// Largest number of switches covering a single tree edge.
    pub fn max_coverage(&self) -> usize {
        self.by_edge.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Tree edges that no switch covers.
    pub fn uncovered_edges(&self, tree: &TreeConfig) -> Vec<EdgeId> {
        tree.tree_edges()
            .iter()
            .copied()
            .filter(|e| self.by_edge[e.0].is_empty())
            .collect()
    }
}
