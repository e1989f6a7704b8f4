use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{CoverageMap, EdgeId, NetError, Network, TreeConfig, VoltageClass};

/// How tree edges that no switch covers enter the metrics.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UncoveredMode {
    /// Drop them from the time-weighted sums and report their exposure share.
    #[default]
    Exclude,
    /// Treat them as restored after every switch, at time |S| + 1.
    Penalty,
}

impl FromStr for UncoveredMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exclude" => Ok(UncoveredMode::Exclude),
            "penalty" => Ok(UncoveredMode::Penalty),
            other => Err(format!(
                "unknown uncovered mode `{other}` (expected exclude or penalty)"
            )),
        }
    }
}

impl fmt::Display for UncoveredMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UncoveredMode::Exclude => "exclude",
            UncoveredMode::Penalty => "penalty",
        })
    }
}

/// A reconnection order: the switches of a tree, first to last.
pub type SwitchOrder = [EdgeId];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub r_time: f64,
    pub saidi: f64,
    pub energy: f64,
    /// r_time * saidi * energy
    pub product: f64,
    /// Share of total exposure f(e)p(e) sitting on uncovered tree edges.
    pub uncovered_exposure: f64,
    pub uncovered_edges: usize,
    /// Unweighted mean expected outage of the non-root vertices in each class.
    pub class_mean_outage: BTreeMap<VoltageClass, f64>,
}

fn check_permutation(
    net: &Network,
    tree: &TreeConfig,
    order: &SwitchOrder,
) -> Result<(), NetError> {
    let mut seen = vec![false; net.edge_count()];
    for &s in order {
        if s.0 >= net.edge_count() {
            return Err(NetError::UnknownEdgeId(s.0));
        }
        if tree.is_tree_edge(s) {
            return Err(NetError::NotAPermutation(format!(
                "{} is a tree edge",
                net.edge(s).name
            )));
        }
        if std::mem::replace(&mut seen[s.0], true) {
            return Err(NetError::NotAPermutation(format!(
                "{} appears twice",
                net.edge(s).name
            )));
        }
    }
    if order.len() != tree.switches().len() {
        return Err(NetError::NotAPermutation(format!(
            "{} of {} switches ordered",
            order.len(),
            tree.switches().len()
        )));
    }
    Ok(())
}

/// Cover time t(e) of every tree edge (indexed by edge id): the 1-based rank
/// of the first switch in `order` whose fundamental cycle contains e.
/// `None` for switches and uncovered edges.
pub fn cover_times(
    net: &Network,
    tree: &TreeConfig,
    order: &SwitchOrder,
) -> Result<Vec<Option<usize>>, NetError> {
    check_permutation(net, tree, order)?;
    let mut t = vec![None; net.edge_count()];
    for (rank, &s) in order.iter().enumerate() {
        for e in tree.fundamental_cycle(net, s) {
            t[e.0].get_or_insert(rank + 1);
        }
    }
    Ok(t)
}

fn cover_times_from(cov: &CoverageMap, net: &Network, order: &SwitchOrder) -> Vec<Option<usize>> {
    let mut t = vec![None; net.edge_count()];
    for (rank, &s) in order.iter().enumerate() {
        for &e in cov.covered_by(s) {
            t[e.0].get_or_insert(rank + 1);
        }
    }
    t
}

fn effective_time(t: Option<usize>, mode: UncoveredMode, switches: usize) -> Option<f64> {
    match (t, mode) {
        (Some(t), _) => Some(t as f64),
        (None, UncoveredMode::Penalty) => Some((switches + 1) as f64),
        (None, UncoveredMode::Exclude) => None,
    }
}

fn outage_from_times(
    net: &Network,
    tree: &TreeConfig,
    times: &[Option<usize>],
    mode: UncoveredMode,
) -> Vec<f64> {
    let k = tree.switches().len();
    let mut out = vec![0.0; net.vertex_count()];
    for &v in tree.bfs_order() {
        if let Some((p, e)) = tree.parent(v) {
            let step = effective_time(times[e.0], mode, k).map_or(0.0, |t| net.edge(e).failure * t);
            out[v.0] = out[p.0] + step;
        }
    }
    out
}

fn report_from_times(
    net: &Network,
    tree: &TreeConfig,
    times: &[Option<usize>],
    mode: UncoveredMode,
) -> MetricsReport {
    let k = tree.switches().len();
    let (mut pt, mut p_sum, mut fpt, mut exposure, mut uncovered_exposure) =
        (0.0, 0.0, 0.0, 0.0, 0.0);
    let mut uncovered_edges = 0;
    for &e in tree.tree_edges() {
        let p = net.edge(e).failure;
        let f = tree.flow(e);
        exposure += f * p;
        if times[e.0].is_none() {
            uncovered_edges += 1;
            uncovered_exposure += f * p;
        }
        if let Some(t) = effective_time(times[e.0], mode, k) {
            pt += p * t;
            p_sum += p;
            fpt += f * p * t;
        }
    }
    let served = net.served_demand();
    let r_time = if p_sum > 0.0 { pt / p_sum } else { 0.0 };
    let saidi = if served > 0.0 { fpt / served } else { 0.0 };
    let energy = tree.energy(net);

    let outage = outage_from_times(net, tree, times, mode);
    let mut groups: BTreeMap<VoltageClass, (f64, usize)> = BTreeMap::new();
    for v in net.vertex_ids().filter(|&v| v != net.root()) {
        let g = groups.entry(net.vertex(v).class).or_default();
        g.0 += outage[v.0];
        g.1 += 1;
    }
    MetricsReport {
        r_time,
        saidi,
        energy,
        product: r_time * saidi * energy,
        uncovered_exposure: if exposure > 0.0 {
            uncovered_exposure / exposure
        } else {
            0.0
        },
        uncovered_edges,
        class_mean_outage: groups
            .into_iter()
            .map(|(c, (s, n))| (c, s / n as f64))
            .collect(),
    }
}

/// R-Time, SAIDI and Energy of `tree` restored in `order`.
pub fn evaluate_metrics(
    net: &Network,
    tree: &TreeConfig,
    order: &SwitchOrder,
    mode: UncoveredMode,
) -> Result<MetricsReport, NetError> {
    let times = cover_times(net, tree, order)?;
    Ok(report_from_times(net, tree, &times, mode))
}

/// Same as [`evaluate_metrics`], reading fundamental cycles from `cov`.
pub fn evaluate_metrics_with(
    net: &Network,
    tree: &TreeConfig,
    cov: &CoverageMap,
    order: &SwitchOrder,
    mode: UncoveredMode,
) -> Result<MetricsReport, NetError> {
    check_permutation(net, tree, order)?;
    let times = cover_times_from(cov, net, order);
    Ok(report_from_times(net, tree, &times, mode))
}

/// Expected outage of every vertex: the sum of p(e)t(e) over its root path.
pub fn per_vertex_outage(
    net: &Network,
    tree: &TreeConfig,
    order: &SwitchOrder,
    mode: UncoveredMode,
) -> Result<Vec<f64>, NetError> {
    let times = cover_times(net, tree, order)?;
    Ok(outage_from_times(net, tree, &times, mode))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netgraph::{build_tree_config, compute_coverage, NetworkBuilder, VertexId};

    fn ids(xs: &[usize]) -> Vec<EdgeId> {
        xs.iter().map(|&i| EdgeId(i)).collect()
    }

    /// Hub 0, rim 1..=6; spokes 0..6 (spoke i reaches rim i+1), rim edges 6..12.
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
    fn wheel_tree_with_far_spoke_first() {
        let net = wheel7();
        let tree = build_tree_config(&net, &ids(&[0, 6, 7, 8, 9, 10])).unwrap();
        // switches: spokes 1..=5 and rim edge r6-r1 (id 11); spoke 5 reaches r6
        let order = ids(&[5, 1, 2, 3, 4, 11]);
        let m = evaluate_metrics(&net, &tree, &order, UncoveredMode::Exclude).unwrap();
        assert_eq!(m.r_time, 1.0);
        assert_eq!(m.saidi, 3.5);
        assert_eq!(m.energy, 91.0);
        assert_eq!(m.product, 318.5);
        let out = per_vertex_outage(&net, &tree, &order, UncoveredMode::Exclude).unwrap();
        assert_eq!(out[6], 6.0);
        assert_eq!(out[0], 0.0);
    }

    #[test]
    fn spoke_tree_metrics() {
        let net = wheel7();
        let tree = build_tree_config(&net, &ids(&[0, 1, 2, 3, 4, 5])).unwrap();
        // alternate rim edges cover disjoint spoke pairs
        let order = ids(&[6, 8, 10, 7, 9, 11]);
        let m = evaluate_metrics(&net, &tree, &order, UncoveredMode::Exclude).unwrap();
        assert_eq!(m.r_time, 2.0);
        assert_eq!(m.saidi, 2.0);
        assert_eq!(m.energy, 6.0);
        let out = per_vertex_outage(&net, &tree, &order, UncoveredMode::Exclude).unwrap();
        assert_eq!(out[1], 1.0);
    }

    #[test]
    fn rejects_bad_orders() {
        let net = wheel7();
        let tree = build_tree_config(&net, &ids(&[0, 1, 2, 3, 4, 5])).unwrap();
        let short = ids(&[6, 7, 8]);
        assert!(matches!(
            evaluate_metrics(&net, &tree, &short, UncoveredMode::Exclude),
            Err(NetError::NotAPermutation(_))
        ));
        let with_tree_edge = ids(&[0, 7, 8, 9, 10, 11]);
        assert!(matches!(
            evaluate_metrics(&net, &tree, &with_tree_edge, UncoveredMode::Exclude),
            Err(NetError::NotAPermutation(_))
        ));
        let dup = ids(&[6, 6, 8, 9, 10, 11]);
        assert!(matches!(
            evaluate_metrics(&net, &tree, &dup, UncoveredMode::Exclude),
            Err(NetError::NotAPermutation(_))
        ));
    }

    #[test]
    fn uncovered_modes() {
        // path r - a - b plus chord r - a2 where a2 hangs off a: only r-a and a-a2 are covered
        let mut b = NetworkBuilder::new();
        let r = b.add_vertex("r", 0.0);
        let a = b.add_vertex("a", 1.0);
        let c = b.add_vertex("c", 1.0);
        let d = b.add_vertex("d", 2.0);
        b.add_edge(r, a, 1.0, 1.0);
        b.add_edge(a, c, 1.0, 1.0);
        b.add_edge(a, d, 1.0, 1.0);
        b.add_edge(r, c, 1.0, 1.0);
        let net = b.build(r).unwrap();
        let tree = build_tree_config(&net, &ids(&[0, 1, 2])).unwrap();
        let order = ids(&[3]);
        let ex = evaluate_metrics(&net, &tree, &order, UncoveredMode::Exclude).unwrap();
        // covered: r-a (f=4) and a-c (f=1), both at t=1; uncovered a-d (f=2)
        assert_eq!(ex.uncovered_edges, 1);
        assert_eq!(ex.r_time, 1.0);
        assert!((ex.saidi - 5.0 / 4.0).abs() < 1e-15);
        assert!((ex.uncovered_exposure - 2.0 / 7.0).abs() < 1e-15);
        let pen = evaluate_metrics(&net, &tree, &order, UncoveredMode::Penalty).unwrap();
        assert!((pen.r_time - 4.0 / 3.0).abs() < 1e-15);
        assert!((pen.saidi - 9.0 / 4.0).abs() < 1e-15);
        for mode in [UncoveredMode::Exclude, UncoveredMode::Penalty] {
            let rep = evaluate_metrics(&net, &tree, &order, mode).unwrap();
            let out = per_vertex_outage(&net, &tree, &order, mode).unwrap();
            let weighted: f64 = net
                .vertex_ids()
                .map(|v| net.vertex(v).demand * out[v.0])
                .sum();
            assert!((weighted / net.served_demand() - rep.saidi).abs() < 1e-12);
        }
        let cov = compute_coverage(&net, &tree);
        let with =
            evaluate_metrics_with(&net, &tree, &cov, &order, UncoveredMode::Exclude).unwrap();
        assert_eq!(with, ex);
        assert_eq!(net.vertex(VertexId(0)).name, "r");
    }
}
