//! Branch-exchange local search over spanning trees.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mssc::{greedy_order, instance_from_coverage, MsscError, TieRule};
use crate::netgraph::{
    compute_coverage, evaluate_metrics, evaluate_metrics_with, update_coverage_after_exchange,
    CoverageMap, EdgeId, MetricsReport, NetError, Network, TreeConfig, UncoveredMode,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SearchError {
    #[error(transparent)]
    Net(#[from] NetError),
    #[error(transparent)]
    Mssc(#[from] MsscError),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(
        "incremental coverage diverged from recomputation after exchanging {edge} for {switch}"
    )]
    CoverageMismatch { edge: EdgeId, switch: EdgeId },
}

/// What the search minimizes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Objective {
    /// SAIDI · R-Time · Energy
    #[default]
    Composite,
    RTime,
    Saidi,
    Energy,
}

impl FromStr for Objective {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "composite" => Ok(Objective::Composite),
            "rtime" | "r-time" => Ok(Objective::RTime),
            "saidi" => Ok(Objective::Saidi),
            "energy" => Ok(Objective::Energy),
            other => Err(format!(
                "unknown objective `{other}` (expected composite, rtime, saidi or energy)"
            )),
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Objective::Composite => "composite",
            Objective::RTime => "rtime",
            Objective::Saidi => "saidi",
            Objective::Energy => "energy",
        })
    }
}

impl Objective {
    pub fn value(self, m: &MetricsReport) -> f64 {
        match self {
            Objective::Composite => m.product,
            Objective::RTime => m.r_time,
            Objective::Saidi => m.saidi,
            Objective::Energy => m.energy,
        }
    }
}

/// SAIDI · R-Time · Energy of `tree` restored in `order`, uncovered edges
/// excluded.
pub fn composite_objective(
    net: &Network,
    tree: &TreeConfig,
    order: &[EdgeId],
) -> Result<f64, NetError> {
    Ok(evaluate_metrics(net, tree, order, UncoveredMode::Exclude)?.product)
}

/// Orders switches to grow the product of covered SAIDI weight A and covered
/// failure weight B as fast as possible. Each step takes the switch with the
/// largest ΔA·B + ΔB·A + ΔA·ΔB (the cross term is left out when
/// `cross_term` is false); ties go to the lowest switch id.
///
/// `p_weights` and `saidi_weights` are indexed by edge id.
pub fn greedy_product_order(
    tree: &TreeConfig,
    cov: &CoverageMap,
    p_weights: &[f64],
    saidi_weights: &[f64],
    cross_term: bool,
) -> Vec<EdgeId> {
    let switches = tree.switches();
    let mut covered = vec![false; p_weights.len()];
    let mut placed = vec![false; switches.len()];
    let (mut a, mut b) = (0.0, 0.0);
    let mut order = Vec::with_capacity(switches.len());
    for _ in 0..switches.len() {
        let mut best: Option<(usize, f64, f64, f64)> = None;
        for (i, &s) in switches.iter().enumerate() {
            if placed[i] {
                continue;
            }
            let (mut da, mut db) = (0.0, 0.0);
            for &e in cov.covered_by(s) {
                if !covered[e.0] {
                    da += saidi_weights[e.0];
                    db += p_weights[e.0];
                }
            }
            let mut score = da * b + db * a;
            if cross_term {
                score += da * db;
            }
            let better = match best {
                None => true,
                Some((_, bs, _, _)) => score > bs + 1e-12 * bs.abs(),
            };
            if better {
                best = Some((i, score, da, db));
            }
        }
        let (i, _, da, db) = best.expect("an unplaced switch remains");
        placed[i] = true;
        a += da;
        b += db;
        for &e in cov.covered_by(switches[i]) {
            covered[e.0] = true;
        }
        order.push(switches[i]);
    }
    order
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchOptions {
    pub objective: Objective,
    pub seed: u64,
    /// Stop after this many accepted exchanges.
    pub max_steps: usize,
    /// Include ΔA·ΔB in the product greedy.
    pub cross_term: bool,
    /// Compare incremental coverage with full recomputation every 50
    /// evaluations.
    pub debug_check: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            objective: Objective::Composite,
            seed: 0,
            max_steps: 100,
            cross_term: true,
            debug_check: cfg!(debug_assertions),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    /// 0 for the starting tree.
    pub step: usize,
    /// (removed tree edge, closed switch); `None` for the starting tree.
    pub exchange: Option<(EdgeId, EdgeId)>,
    pub r_time: f64,
    pub saidi: f64,
    pub energy: f64,
    pub product: f64,
    pub objective: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub tree: TreeConfig,
    pub coverage: CoverageMap,
    pub order: Vec<EdgeId>,
    pub metrics: MetricsReport,
    /// Metrics of the starting tree.
    pub initial: StepRecord,
    /// One record per accepted exchange.
    pub trace: Vec<StepRecord>,
    pub evaluations: usize,
}

impl SearchResult {
    pub fn objective(&self) -> f64 {
        self.trace.last().unwrap_or(&self.initial).objective
    }
}

/// The inner reconnection order used to score a tree.
pub fn inner_order(
    net: &Network,
    tree: &TreeConfig,
    cov: &CoverageMap,
    objective: Objective,
    cross_term: bool,
) -> Result<Vec<EdgeId>, SearchError> {
    if tree.switches().is_empty() {
        return Ok(Vec::new());
    }
    let p: Vec<f64> = net.edges().iter().map(|e| e.failure).collect();
    let fp: Vec<f64> = net
        .edge_ids()
        .map(|e| {
            if tree.is_tree_edge(e) {
                tree.flow(e) * p[e.0]
            } else {
                0.0
            }
        })
        .collect();
    let weights = match objective {
        Objective::Composite => return Ok(greedy_product_order(tree, cov, &p, &fp, cross_term)),
        Objective::RTime | Objective::Energy => p,
        Objective::Saidi => fp,
    };
    let ci = instance_from_coverage(net, tree, cov, &weights)?;
    let ordering = greedy_order(&ci.instance, TieRule::Lexicographic)?;
    Ok(ci.switch_order(&ordering))
}

fn record(
    step: usize,
    exchange: Option<(EdgeId, EdgeId)>,
    m: &MetricsReport,
    objective: Objective,
) -> StepRecord {
    StepRecord {
        step,
        exchange,
        r_time: m.r_time,
        saidi: m.saidi,
        energy: m.energy,
        product: m.product,
        objective: objective.value(m),
    }
}

fn all_pairs(tree: &TreeConfig) -> Vec<(EdgeId, EdgeId)> {
    let mut pool = Vec::with_capacity(tree.tree_edges().len() * tree.switches().len());
    for &e in tree.tree_edges() {
        for &s in tree.switches() {
            pool.push((e, s));
        }
    }
    pool
}

/// Branch-exchange local search.
///
/// Candidate pairs (e, s) are drawn uniformly without replacement from the
/// current T × S; pairs where s does not cover e are skipped. An exchange is
/// kept only if it lowers the objective by more than a relative 1e-12, after
/// which the pool is refilled from the new tree. The search ends when the pool
/// empties (a local optimum) or after `max_steps` accepted exchanges.
pub fn branch_exchange(
    net: &Network,
    tree0: &TreeConfig,
    opts: &SearchOptions,
) -> Result<SearchResult, SearchError> {
    if opts.max_steps == 0 {
        return Err(SearchError::InvalidArgument(
            "max_steps must be at least 1".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut tree = tree0.clone();
    let mut cov = compute_coverage(net, &tree);
    let mut order = inner_order(net, &tree, &cov, opts.objective, opts.cross_term)?;
    let mut metrics = evaluate_metrics_with(net, &tree, &cov, &order, UncoveredMode::Exclude)?;
    let mut value = opts.objective.value(&metrics);
    let initial = record(0, None, &metrics, opts.objective);
    let mut trace = Vec::new();
    let mut pool = all_pairs(&tree);
    let mut evaluations = 0usize;

    while !pool.is_empty() && trace.len() < opts.max_steps {
        let (e, s) = pool.swap_remove(rng.gen_range(0..pool.len()));
        if !cov.covers(s, e) {
            continue;
        }
        let (next_tree, next_cov) = update_coverage_after_exchange(net, &tree, cov.clone(), e, s)?;
        evaluations += 1;
        if opts.debug_check
            && evaluations % 50 == 0
            && next_cov != compute_coverage(net, &next_tree)
        {
            return Err(SearchError::CoverageMismatch { edge: e, switch: s });
        }
        let next_order = inner_order(net, &next_tree, &next_cov, opts.objective, opts.cross_term)?;
        let next_metrics = evaluate_metrics_with(
            net,
            &next_tree,
            &next_cov,
            &next_order,
            UncoveredMode::Exclude,
        )?;
        let next_value = opts.objective.value(&next_metrics);
        if next_value < value - 1e-12 * value.abs() {
            tree = next_tree;
            cov = next_cov;
            order = next_order;
            metrics = next_metrics;
            value = next_value;
            trace.push(record(
                trace.len() + 1,
                Some((e, s)),
                &metrics,
                opts.objective,
            ));
            pool = all_pairs(&tree);
        }
    }
    Ok(SearchResult {
        tree,
        coverage: cov,
        order,
        metrics,
        initial,
        trace,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netgraph::{build_tree_config, NetworkBuilder};

    fn ids(xs: &[usize]) -> Vec<EdgeId> {
        xs.iter().map(|&i| EdgeId(i)).collect()
    }

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
    fn composite_values_on_wheel() {
        let net = wheel7();
        let wheel = build_tree_config(&net, &ids(&[0, 6, 7, 8, 9, 10])).unwrap();
        assert_eq!(
            composite_objective(&net, &wheel, &ids(&[5, 1, 2, 3, 4, 11])).unwrap(),
            318.5
        );
        let spoke = build_tree_config(&net, &ids(&[0, 1, 2, 3, 4, 5])).unwrap();
        assert_eq!(
            composite_objective(&net, &spoke, &ids(&[6, 8, 10, 7, 9, 11])).unwrap(),
            24.0
        );
    }

    #[test]
    fn single_switch_goes_first() {
        let mut b = NetworkBuilder::new();
        let r = b.add_vertex("r", 0.0);
        let a = b.add_vertex("a", 1.0);
        let c = b.add_vertex("c", 1.0);
        b.add_edge(r, a, 1.0, 1.0);
        b.add_edge(a, c, 1.0, 1.0);
        b.add_edge(r, c, 1.0, 1.0);
        let net = b.build(r).unwrap();
        let tree = build_tree_config(&net, &ids(&[0, 1])).unwrap();
        let cov = compute_coverage(&net, &tree);
        let p = vec![1.0; 3];
        assert_eq!(greedy_product_order(&tree, &cov, &p, &p, true), ids(&[2]));
    }

    #[test]
    fn product_greedy_on_gap_example() {
        let (net, tree) = crate::gen::gen_greedy_gap_example();
        let cov = compute_coverage(&net, &tree);
        let p: Vec<f64> = net.edges().iter().map(|e| e.failure).collect();
        let fp: Vec<f64> = net
            .edge_ids()
            .map(|e| if tree.is_tree_edge(e) { tree.flow(e) * p[e.0] } else { 0.0 })
            .collect();
        let numerators = |order: &[EdgeId]| {
            let m = evaluate_metrics(&net, &tree, order, UncoveredMode::Exclude).unwrap();
            (m.r_time * 4.0, m.saidi * 4.0)
        };
        // s1 first looks best to the product score, but s2, s3, s1 is cheaper
        let greedy = greedy_product_order(&tree, &cov, &p, &fp, true);
        assert_eq!(greedy, ids(&[4, 5, 6]));
        assert_eq!(numerators(&greedy), (7.0, 9.0));
        assert_eq!(numerators(&ids(&[5, 6, 4])), (6.0, 9.0));
        assert_eq!(greedy_product_order(&tree, &cov, &p, &fp, false), ids(&[4, 5, 6]));
    }

    #[test]
    fn energy_search_reaches_star() {
        let net = wheel7();
        let wheel = build_tree_config(&net, &ids(&[0, 6, 7, 8, 9, 10])).unwrap();
        let opts = SearchOptions {
            objective: Objective::Energy,
            seed: 11,
            max_steps: 1000,
            ..SearchOptions::default()
        };
        let res = branch_exchange(&net, &wheel, &opts).unwrap();
        assert_eq!(res.metrics.energy, 6.0);
        assert!(res.trace[0].objective < res.initial.objective);
        for w in res.trace.windows(2) {
            assert!(w[1].objective < w[0].objective);
        }
        // already optimal: no exchange accepted
        let again = branch_exchange(&net, &res.tree, &opts).unwrap();
        assert!(again.trace.is_empty());
        assert_eq!(again.tree, res.tree);
    }

    #[test]
    fn rejects_zero_steps() {
        let net = wheel7();
        let spoke = build_tree_config(&net, &ids(&[0, 1, 2, 3, 4, 5])).unwrap();
        let opts = SearchOptions {
            max_steps: 0,
            ..SearchOptions::default()
        };
        assert!(branch_exchange(&net, &spoke, &opts).is_err());
    }
}
