//! Canonical forms and isomorphism-free enumeration.
//!
//! The canonical form of a graph is the minimum, over vertex orderings, of
//! its upper-triangle adjacency bits read column by column (the graph6 bit
//! order). Orderings are restricted to those that list colour classes of a
//! colour refinement in increasing colour; the refinement is an isomorphism
//! invariant, so the restricted minimum is still canonical.

use std::collections::{BTreeSet, HashSet};

use super::{Graph, MAX_VERTICES};
use crate::error::{Error, Result};

pub const MAX_CANONICAL_VERTICES: usize = MAX_VERTICES;

/// Connected-graph enumeration limit.
pub const MAX_ENUMERATION_VERTICES: usize = 7;

/// Host enumeration for exhaustive extremal numbers.
pub(crate) const MAX_HOST_ENUMERATION_VERTICES: usize = 9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    pub order: usize,
    pub code: u128,
}

/// Stable colour refinement starting from degrees. Colours are ranks of
/// sorted signatures, so they depend only on the isomorphism class.
pub(crate) fn refined_colours(g: &Graph) -> Vec<usize> {
    let n = g.order();
    let mut colours: Vec<usize> = (0..n).map(|u| g.degree(u)).collect();
    let mut classes = colours.iter().collect::<BTreeSet<_>>().len();
    loop {
        let sigs: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|u| {
                let mut nb: Vec<usize> = (0..n).filter(|&w| g.adjacent(u, w)).map(|w| colours[w]).collect();
                nb.sort_unstable();
                (colours[u], nb)
            })
            .collect();
        let ranked: Vec<&(usize, Vec<usize>)> = sigs.iter().collect::<BTreeSet<_>>().into_iter().collect();
        let next: Vec<usize> = sigs
            .iter()
            .map(|s| ranked.binary_search(&s).expect("signature present"))
            .collect();
        let next_classes = ranked.len();
        colours = next;
        if next_classes == classes {
            return colours;
        }
        classes = next_classes;
    }
}

struct Search<'a> {
    g: &'a Graph,
    colours: Vec<usize>,
    target: Vec<usize>,
    order: Vec<usize>,
    total_bits: usize,
    best: Option<u128>,
    best_order: Vec<usize>,
}

impl Search<'_> {
    fn run(&mut self, k: usize, used: u32, code: u128, bits: usize) {
        let n = self.g.order();
        if k == n {
            if self.best.is_none_or(|b| code < b) {
                self.best = Some(code);
                self.best_order.clone_from(&self.order);
            }
            return;
        }
        for cand in 0..n {
            if used >> cand & 1 == 1 || self.colours[cand] != self.target[k] {
                continue;
            }
            let mut c = code;
            for i in 0..k {
                c = c << 1 | self.g.adjacent(self.order[i], cand) as u128;
            }
            let nb = bits + k;
            if let Some(best) = self.best {
                let prefix = if self.total_bits - nb >= 128 { 0 } else { best >> (self.total_bits - nb) };
                if c > prefix {
                    continue;
                }
            }
            self.order.push(cand);
            self.run(k + 1, used | 1 << cand, c, nb);
            self.order.pop();
        }
    }
}

fn search(g: &Graph) -> (u128, Vec<usize>) {
    let n = g.order();
    let colours = refined_colours(g);
    let mut target = colours.clone();
    target.sort_unstable();
    let mut s = Search {
        g,
        colours,
        target,
        order: Vec::with_capacity(n),
        total_bits: n * (n - 1) / 2,
        best: None,
        best_order: Vec::new(),
    };
    s.run(0, 0, 0, 0);
    (s.best.expect("at least one ordering"), s.best_order)
}

pub fn canonical_form(g: &Graph) -> CanonicalForm {
    CanonicalForm { order: g.order(), code: search(g).0 }
}

/// Relabelled copy of `g` whose own identity ordering realises the
/// canonical form. Isomorphic inputs give equal outputs.
pub fn canonical_graph(g: &Graph) -> Graph {
    let (_, order) = search(g);
    let mut perm = vec![0; g.order()];
    for (pos, &u) in order.iter().enumerate() {
        perm[u] = pos;
    }
    g.relabel(&perm)
}

fn sorted_classes(found: HashSet<Graph>) -> Vec<Graph> {
    let mut out: Vec<(CanonicalForm, usize, Graph)> = found
        .into_iter()
        .map(|g| (canonical_form(&g), g.size(), g))
        .collect();
    out.sort_by(|a, b| (a.0.order, a.1, a.0.code).cmp(&(b.0.order, b.1, b.0.code)));
    out.into_iter().map(|(_, _, g)| g).collect()
}

/// One canonical representative per isomorphism class of connected graphs
/// on `2..=max_v` vertices, ordered by (order, size, canonical code).
///
/// Classes on `v` vertices are grown from classes on `v - 1` by attaching a
/// new vertex to every non-empty subset; every connected graph has a vertex
/// whose removal leaves it connected, so nothing is missed.
pub fn enumerate_connected_graphs(max_v: usize) -> Result<Vec<Graph>> {
    if max_v > MAX_ENUMERATION_VERTICES {
        return Err(Error::TooManyVertices { got: max_v, limit: MAX_ENUMERATION_VERTICES });
    }
    let mut out = Vec::new();
    if max_v < 2 {
        return Ok(out);
    }
    let mut level: HashSet<Graph> = HashSet::from([Graph::complete(2)?]);
    out.extend(sorted_classes(level.clone()));
    for v in 3..=max_v {
        let mut next = HashSet::new();
        for g in &level {
            for subset in 1u32..1 << (v - 1) {
                let mut adj: Vec<u32> = (0..v - 1).map(|u| g.neighbours(u) | (subset >> u & 1) << (v - 1)).collect();
                adj.push(subset);
                next.insert(canonical_graph(&Graph::from_masks(adj)));
            }
        }
        out.extend(sorted_classes(next.clone()));
        level = next;
    }
    Ok(out)
}

/// One canonical representative per isomorphism class of graphs with
/// exactly `n` vertices and `m` edges, ordered by canonical code.
pub fn enumerate_graphs_with_edges(n: usize, m: usize) -> Result<Vec<Graph>> {
    if n > MAX_HOST_ENUMERATION_VERTICES {
        return Err(Error::TooManyVertices { got: n, limit: MAX_HOST_ENUMERATION_VERTICES });
    }
    let pairs = n * n.saturating_sub(1) / 2;
    if m > pairs {
        return Ok(Vec::new());
    }
    if m > pairs / 2 {
        let comp: HashSet<Graph> = enumerate_graphs_with_edges(n, pairs - m)?
            .into_iter()
            .map(|g| canonical_graph(&g.complement()))
            .collect();
        return Ok(sorted_classes(comp));
    }
    let mut level: HashSet<Graph> = HashSet::from([Graph::empty(n)?]);
    for _ in 0..m {
        let mut next = HashSet::new();
        for g in &level {
            for w in 1..n {
                for u in 0..w {
                    if !g.adjacent(u, w) {
                        let mut h = g.clone();
                        h.add_edge(u, w)?;
                        next.insert(canonical_graph(&h));
                    }
                }
            }
        }
        level = next;
    }
    Ok(sorted_classes(level))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isomorphic_graphs_share_canonical_form() {
        let g = Graph::counterexample_family(3, 2).unwrap();
        let h = g.relabel(&[5, 3, 1, 0, 2, 4]);
        assert_ne!(g, h);
        assert_eq!(canonical_form(&g), canonical_form(&h));
        assert_eq!(canonical_graph(&g), canonical_graph(&h));
        assert_ne!(canonical_form(&g), canonical_form(&Graph::path(5).unwrap()));
    }

    #[test]
    fn canonical_graph_realises_form() {
        let g = Graph::cycle(6).unwrap();
        let c = canonical_graph(&g);
        assert_eq!(canonical_form(&c), canonical_form(&g));
        assert_eq!(c.size(), 6);
    }

    #[test]
    fn connected_counts() {
        let counts: Vec<usize> = (2..=6)
            .map(|v| enumerate_connected_graphs(v).unwrap().len())
            .collect();
        assert_eq!(counts, vec![1, 3, 9, 30, 142]);
        assert!(enumerate_connected_graphs(8).is_err());
        assert!(enumerate_connected_graphs(1).unwrap().is_empty());
    }

    #[test]
    fn graphs_by_edge_count() {
        // 11 graphs on 4 vertices: edge counts 0..=6 give 1,1,2,3,2,1,1.
        let counts: Vec<usize> = (0..=6).map(|m| enumerate_graphs_with_edges(4, m).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 2, 1, 1]);
        let total: usize = (0..=10).map(|m| enumerate_graphs_with_edges(5, m).unwrap().len()).sum();
        assert_eq!(total, 34);
    }
}
