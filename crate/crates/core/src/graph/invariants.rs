use serde::Serialize;

use super::canon::refined_colours;
use super::Graph;
use crate::error::{Error, Result};

/// Permutation scans for automorphisms are bounded at this order.
pub const MAX_AUTOMORPHISM_VERTICES: usize = 10;

/// Independent-set counts by size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndependenceCensus {
    pub alpha: usize,
    /// Number of independent sets of size `alpha`.
    pub max_independent_set_count: u64,
    /// `counts[k]` is the number of independent sets of size `k`, `k = 0..=v`.
    pub counts: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphInvariants {
    pub alpha: usize,
    pub max_independent_set_count: u64,
    pub independent_counts: Vec<u64>,
    pub automorphism_count: u64,
}

/// Flags, indexed by vertex subset, marking the independent ones.
pub(crate) fn independent_subsets(g: &Graph) -> Vec<bool> {
    let n = g.order();
    let mut indep = vec![false; 1 << n];
    indep[0] = true;
    for mask in 1usize..1 << n {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        indep[mask] = indep[rest] && g.neighbours(low) as usize & rest == 0;
    }
    indep
}

pub fn independent_set_census(g: &Graph) -> IndependenceCensus {
    let n = g.order();
    let mut counts = vec![0u64; n + 1];
    for (mask, &ok) in independent_subsets(g).iter().enumerate() {
        if ok {
            counts[mask.count_ones() as usize] += 1;
        }
    }
    let alpha = counts.iter().rposition(|&c| c > 0).unwrap_or(0);
    IndependenceCensus {
        alpha,
        max_independent_set_count: counts[alpha],
        counts,
    }
}

pub fn independence_number(g: &Graph) -> usize {
    independent_subsets(g)
        .iter()
        .enumerate()
        .filter(|(_, &ok)| ok)
        .map(|(mask, _)| mask.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// Number of adjacency-preserving permutations. Images are restricted to
/// vertices of the same refined colour class, which every automorphism
/// respects.
pub fn automorphism_count(g: &Graph) -> Result<u64> {
    let n = g.order();
    if n > MAX_AUTOMORPHISM_VERTICES {
        return Err(Error::TooManyVertices { got: n, limit: MAX_AUTOMORPHISM_VERTICES });
    }
    let colours = refined_colours(g);
    let mut image = vec![usize::MAX; n];
    Ok(extend_automorphism(g, &colours, &mut image, 0, 0))
}

fn extend_automorphism(g: &Graph, colours: &[usize], image: &mut [usize], depth: usize, used: u32) -> u64 {
    let n = g.order();
    if depth == n {
        return 1;
    }
    let mut total = 0;
    for cand in 0..n {
        if used >> cand & 1 == 1 || colours[cand] != colours[depth] {
            continue;
        }
        let consistent = (0..depth).all(|u| g.adjacent(u, depth) == g.adjacent(image[u], cand));
        if consistent {
            image[depth] = cand;
            total += extend_automorphism(g, colours, image, depth + 1, used | 1 << cand);
        }
    }
    total
}

pub fn invariants(g: &Graph) -> Result<GraphInvariants> {
    let census = independent_set_census(g);
    Ok(GraphInvariants {
        alpha: census.alpha,
        max_independent_set_count: census.max_independent_set_count,
        independent_counts: census.counts,
        automorphism_count: automorphism_count(g)?,
    })
}
