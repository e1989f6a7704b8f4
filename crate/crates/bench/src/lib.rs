//! Shared inputs for the benchmarks.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use mrt_core::netgraph::{
    compute_coverage, update_coverage_after_exchange, EdgeId, Network, TreeConfig,
};

/// A chain of `len` feasible exchanges starting from `tree`.
pub fn exchange_chain(
    net: &Network,
    tree: &TreeConfig,
    len: usize,
    seed: u64,
) -> Vec<(EdgeId, EdgeId)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut tree, mut cov) = (tree.clone(), compute_coverage(net, tree));
    let mut chain = Vec::with_capacity(len);
    while chain.len() < len {
        let covered: Vec<EdgeId> = tree
            .tree_edges()
            .iter()
            .copied()
            .filter(|&e| !cov.covering(e).is_empty())
            .collect();
        let Some(&e) = covered.choose(&mut rng) else {
            break;
        };
        let s = *cov.covering(e).choose(&mut rng).unwrap();
        (tree, cov) = update_coverage_after_exchange(net, &tree, cov, e, s).unwrap();
        chain.push((e, s));
    }
    chain
}
