use serde::{Deserialize, Serialize};

use super::GenError;
use crate::mssc::MsscInstance;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapFamilyParams {
    /// Uniformity c ≥ 2.
    pub c: usize,
    /// Scale N: the first block has N vertices.
    pub n_scale: usize,
    /// Number of blocks before dropping.
    pub k: usize,
    pub epsilon: f64,
}

impl GapFamilyParams {
    /// α = 2/(c+1) + ε
    pub fn alpha(&self) -> f64 {
        2.0 / (self.c as f64 + 1.0) + self.epsilon
    }

    /// round(N · i^{-α}) for i = 1..=k.
    pub fn raw_block_sizes(&self) -> Vec<usize> {
        let a = self.alpha();
        (1..=self.k)
            .map(|i| (self.n_scale as f64 * (i as f64).powf(-a)).round() as usize)
            .collect()
    }

    fn validate(&self) -> Result<(), GenError> {
        if self.c < 2 {
            return Err(GenError::InvalidParams(format!(
                "uniformity must be at least 2, got {}",
                self.c
            )));
        }
        if self.k == 0 {
            return Err(GenError::InvalidParams(
                "block count must be at least 1".into(),
            ));
        }
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(GenError::InvalidParams(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegralityGap {
    pub instance: MsscInstance,
    /// Sizes of the retained blocks, in order.
    pub blocks: Vec<usize>,
    /// 1-based indices of blocks dropped for having fewer than c vertices.
    pub dropped: Vec<usize>,
    /// Time slots of the fractional point (the vertex count).
    pub horizon: usize,
    /// Column vector laid out like `build_mssc_lp(instance, Some(horizon))`.
    pub fractional: Vec<f64>,
    /// Objective of `fractional`.
    pub fractional_cost: f64,
}

/// Disjoint complete c-uniform hypergraphs on blocks of sizes
/// round(N·i^{-α}), unit weights, plus a feasible fractional LP point.
///
/// Block i spreads its vertices evenly over the continuous window
/// (S_{i-1}, S_i] with S_i = Σ_{j≤i} n_j / c: x_{v,t} is the overlap of slot
/// (t-1, t] with the window divided by n_i, and each hyperedge gets
/// u_{e,t} = c · overlap / n_i. Slot capacity left over is spread uniformly
/// over all vertices.
pub fn gen_integrality_gap(params: &GapFamilyParams) -> Result<IntegralityGap, GenError> {
    params.validate()?;
    let c = params.c;
    let mut blocks = Vec::new();
    let mut dropped = Vec::new();
    for (i, size) in params.raw_block_sizes().into_iter().enumerate() {
        if size < c {
            dropped.push(i + 1);
        } else {
            blocks.push(size);
        }
    }
    if blocks.is_empty() {
        return Err(GenError::DegenerateParams(format!(
            "every block has fewer than {c} vertices"
        )));
    }
    let total: usize = blocks.iter().sum();
    let edge_count: usize = blocks.iter().map(|&b| binomial(b, c)).sum();
    if edge_count > 2_000_000 {
        return Err(GenError::TooLarge(format!("{edge_count} hyperedges")));
    }

    let mut labels = Vec::with_capacity(total);
    let mut edges = Vec::with_capacity(edge_count);
    let mut offset = 0;
    for (bi, &size) in blocks.iter().enumerate() {
        labels.extend((1..=size).map(|j| format!("b{}v{}", bi + 1, j)));
        for subset in combinations(size, c) {
            edges.push((subset.into_iter().map(|v| v + offset).collect(), 1.0));
        }
        offset += size;
    }
    let instance = MsscInstance::with_labels(labels, edges)?;

    let h = total;
    let n = total;
    let m = instance.edges().len();
    let mut frac = vec![0.0; n * h + m * h];
    let mut slot_used = vec![0.0; h];
    let mut cost = 0.0;
    let (mut start, mut v0, mut e0) = (0.0, 0, 0);
    for &size in &blocks {
        let end = start + size as f64 / c as f64;
        let block_edges = binomial(size, c);
        for t in 1..=h {
            let overlap = ((t as f64).min(end) - ((t - 1) as f64).max(start)).max(0.0);
            if overlap == 0.0 {
                continue;
            }
            let x = overlap / size as f64;
            for v in v0..v0 + size {
                frac[v * h + t - 1] = x;
            }
            slot_used[t - 1] += overlap;
            let u = c as f64 * x;
            for e in e0..e0 + block_edges {
                frac[n * h + e * h + t - 1] = u;
            }
            cost += t as f64 * u * block_edges as f64;
        }
        start = end;
        v0 += size;
        e0 += block_edges;
    }
    for t in 1..=h {
        let spare = (1.0 - slot_used[t - 1]).max(0.0) / n as f64;
        if spare > 0.0 {
            for v in 0..n {
                frac[v * h + t - 1] += spare;
            }
        }
    }
    Ok(IntegralityGap {
        instance,
        blocks,
        dropped,
        horizon: h,
        fractional: frac,
        fractional_cost: cost,
    })
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// All k-subsets of 0..n in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let mut i = k;
        while i > 0 && cur[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        cur[i - 1] += 1;
        for j in i..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::build_mssc_lp;

    fn params(n: usize, k: usize) -> GapFamilyParams {
        GapFamilyParams {
            c: 3,
            n_scale: n,
            k,
            epsilon: 0.05,
        }
    }

    #[test]
    fn block_sizes() {
        assert_eq!(params(9, 2).raw_block_sizes(), vec![9, 6]);
        assert_eq!(params(5, 3).raw_block_sizes(), vec![5, 3, 3]);
        let g = gen_integrality_gap(&params(4, 3)).unwrap();
        assert_eq!(g.blocks, vec![4, 3]);
        assert_eq!(g.dropped, vec![3]);
        assert!(matches!(
            gen_integrality_gap(&params(2, 2)),
            Err(GenError::DegenerateParams(_))
        ));
    }

    #[test]
    fn counts_and_combinations() {
        assert_eq!(binomial(7, 3), 35);
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(4, 2)[5], vec![2, 3]);
        let g = gen_integrality_gap(&params(6, 1)).unwrap();
        assert_eq!(g.instance.edges().len(), 20);
        assert_eq!(g.instance.uniformity(), 3);
    }

    #[test]
    fn fractional_point_is_feasible() {
        for (n, k) in [(5, 3), (6, 3), (7, 3), (9, 2), (8, 1)] {
            let g = gen_integrality_gap(&params(n, k)).unwrap();
            let lp = build_mssc_lp(&g.instance, Some(g.horizon)).unwrap();
            assert!(lp.model.max_violation(&g.fractional) < 1e-12, "N = {n}");
            assert!((lp.model.objective(&g.fractional) - g.fractional_cost).abs() < 1e-9);
        }
    }
}
