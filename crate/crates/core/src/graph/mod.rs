//! Small labelled undirected graphs.
//!
//! Vertices are stored 0-based; every textual surface (parsers, edge dumps,
//! reports) uses 1-based labels, so vertex `i` is printed as `i + 1`.

mod canon;
mod graph6;
mod invariants;

pub use canon::{
    canonical_form, canonical_graph, enumerate_connected_graphs, enumerate_graphs_with_edges,
    CanonicalForm, MAX_CANONICAL_VERTICES, MAX_ENUMERATION_VERTICES,
};
pub use graph6::{parse_graph6, write_graph6};
pub use invariants::{
    automorphism_count, independence_number, independent_set_census, invariants, GraphInvariants,
    IndependenceCensus, MAX_AUTOMORPHISM_VERTICES,
};

use std::fmt;

use crate::error::{Error, Result};

/// Largest pattern graph supported; every subset scan is at most `2^16`.
pub const MAX_VERTICES: usize = 16;

/// Undirected simple graph on at most [`MAX_VERTICES`] vertices, stored as
/// one neighbour bitmask per vertex.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<u32>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("graph needs at least one vertex".into()));
        }
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices { got: n, limit: MAX_VERTICES });
        }
        Ok(Graph { adj: vec![0; n] })
    }

    /// Build from 0-based edge pairs. Duplicate edges collapse.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        for &(u, w) in edges {
            g.add_edge(u, w)?;
        }
        Ok(g)
    }

    pub(crate) fn from_masks(adj: Vec<u32>) -> Self {
        debug_assert!(!adj.is_empty() && adj.len() <= MAX_VERTICES);
        Graph { adj }
    }

    pub fn add_edge(&mut self, u: usize, w: usize) -> Result<()> {
        let n = self.order();
        if u == w {
            return Err(Error::SelfLoop(u + 1));
        }
        for x in [u, w] {
            if x >= n {
                return Err(Error::LabelOutOfRange { label: x + 1, max: n });
            }
        }
        self.adj[u] |= 1 << w;
        self.adj[w] |= 1 << u;
        Ok(())
    }

    pub fn complete(n: usize) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        let full = (1u32 << n) - 1;
        for u in 0..n {
            g.adj[u] = full & !(1 << u);
        }
        Ok(g)
    }

    /// Path with `len` edges (so `len + 1` vertices).
    pub fn path(len: usize) -> Result<Self> {
        let edges: Vec<_> = (0..len).map(|i| (i, i + 1)).collect();
        Graph::from_edges(len + 1, &edges)
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParameter(format!("cycle needs n >= 3, got {n}")));
        }
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges)
    }

    /// Star `K_{1,k}`; the centre is vertex 0.
    pub fn star(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("star needs at least one leaf".into()));
        }
        let edges: Vec<_> = (1..=k).map(|i| (0, i)).collect();
        Graph::from_edges(k + 1, &edges)
    }

    /// Clique `K_a` on vertices `1..=a`, a vertex `u = a+1` joined to clique
    /// vertex `a`, and `b` leaves hanging off `u`. `(3, 2)` is the 6-vertex
    /// graph with edges `1-2,1-3,2-3,3-4,4-5,4-6`.
    pub fn counterexample_family(a: usize, b: usize) -> Result<Self> {
        if a < 3 || b < 2 {
            return Err(Error::InvalidParameter(format!(
                "family needs a >= 3 and b >= 2, got a = {a}, b = {b}"
            )));
        }
        let n = a + b + 1;
        let mut g = Graph::empty(n)?;
        for i in 0..a {
            for j in i + 1..a {
                g.add_edge(i, j)?;
            }
        }
        g.add_edge(a - 1, a)?;
        for leaf in a + 1..n {
            g.add_edge(a, leaf)?;
        }
        Ok(g)
    }

    /// Named graphs: `P<l>` (path with l edges), `K<k>`, `C<k>`, `star<k>`
    /// (an optional `_` may separate the number), and `G6`.
    pub fn builtin(name: &str) -> Result<Self> {
        let name = name.trim();
        if name.eq_ignore_ascii_case("G6") {
            return Graph::counterexample_family(3, 2);
        }
        let (kind, num) = name
            .find(|c: char| c.is_ascii_digit())
            .map(|i| name.split_at(i))
            .ok_or_else(|| Error::Parse(format!("unknown builtin graph '{name}'")))?;
        let k: usize = num
            .parse()
            .map_err(|_| Error::Parse(format!("unknown builtin graph '{name}'")))?;
        match kind.trim_end_matches('_').to_ascii_lowercase().as_str() {
            "p" => Graph::path(k),
            "k" => Graph::complete(k),
            "c" => Graph::cycle(k),
            "star" => Graph::star(k),
            _ => Err(Error::Parse(format!("unknown builtin graph '{name}'"))),
        }
    }

    /// Parse `"1-2,1-3,..."`, optionally prefixed by `"n=<k>;"`. Without the
    /// prefix the vertex count is the largest label.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let text = text.trim();
        let (declared, body) = match text.split_once(';') {
            Some((head, rest)) => {
                let head = head.trim();
                let k = head
                    .strip_prefix("n=")
                    .or_else(|| head.strip_prefix("n ="))
                    .ok_or_else(|| Error::Parse(format!("expected 'n=<k>;' prefix, got '{head}'")))?;
                let k: usize = k
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad vertex count '{k}'")))?;
                (Some(k), rest.trim())
            }
            None => (None, text),
        };

        let mut pairs = Vec::new();
        if !body.is_empty() {
            for token in body.split(',') {
                let token = token.trim();
                let (a, b) = token
                    .split_once('-')
                    .ok_or_else(|| Error::Parse(format!("bad edge token '{token}'")))?;
                let parse_label = |s: &str| -> Result<usize> {
                    s.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad edge token '{token}'")))
                };
                let (a, b) = (parse_label(a)?, parse_label(b)?);
                if a == b {
                    return Err(Error::SelfLoop(a));
                }
                pairs.push((a, b));
            }
        }

        let max_label = pairs.iter().map(|&(a, b)| a.max(b)).max().unwrap_or(0);
        let n = match declared {
            Some(k) => k,
            None if pairs.is_empty() => {
                return Err(Error::Parse("empty edge list needs an 'n=<k>;' prefix".into()))
            }
            None => max_label,
        };
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices { got: n, limit: MAX_VERTICES });
        }
        let mut g = Graph::empty(n)?;
        for (a, b) in pairs {
            for label in [a, b] {
                if label < 1 || label > n {
                    return Err(Error::LabelOutOfRange { label, max: n });
                }
            }
            g.add_edge(a - 1, b - 1)?;
        }
        Ok(g)
    }

    /// Edge dump in the same format [`Graph::parse_edge_list`] reads. The
    /// `n=` prefix is emitted only when the largest label would not recover
    /// the vertex count.
    pub fn to_edge_list(&self) -> String {
        let body = self
            .edges()
            .map(|(u, w)| format!("{}-{}", u + 1, w + 1))
            .collect::<Vec<_>>()
            .join(",");
        let max_label = self.edges().map(|(_, w)| w + 1).max().unwrap_or(0);
        if max_label == self.order() {
            body
        } else {
            format!("n={};{}", self.order(), body)
        }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.adj.len()
    }

    pub fn size(&self) -> usize {
        self.adj.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }

    #[inline]
    pub fn adjacent(&self, u: usize, w: usize) -> bool {
        self.adj[u] >> w & 1 == 1
    }

    /// Neighbour bitmask of `u`.
    #[inline]
    pub fn neighbours(&self, u: usize) -> u32 {
        self.adj[u]
    }

    #[inline]
    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].count_ones() as usize
    }

    /// Edges as 0-based pairs `(u, w)` with `u < w`, ordered by `(u, w)`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.order()).flat_map(move |u| {
            (u + 1..self.order())
                .filter(move |&w| self.adjacent(u, w))
                .map(move |w| (u, w))
        })
    }

    /// 1-based labels of vertices with no neighbours.
    pub fn isolated_vertices(&self) -> Vec<usize> {
        (0..self.order()).filter(|&u| self.adj[u] == 0).map(|u| u + 1).collect()
    }

    pub fn has_isolated_vertices(&self) -> bool {
        self.adj.iter().any(|&m| m == 0)
    }

    pub(crate) fn require_no_isolated(&self) -> Result<()> {
        let iso = self.isolated_vertices();
        if iso.is_empty() {
            Ok(())
        } else {
            Err(Error::IsolatedVertices(iso))
        }
    }

    pub fn is_connected(&self) -> bool {
        let n = self.order();
        let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        let mut seen = 1u32;
        let mut frontier = 1u32;
        while frontier != 0 {
            let u = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = self.adj[u] & !seen;
            seen |= fresh;
            frontier |= fresh;
        }
        seen == full
    }

    pub fn complement(&self) -> Graph {
        let n = self.order();
        let full = (1u32 << n) - 1;
        Graph {
            adj: (0..n).map(|u| !self.adj[u] & full & !(1 << u)).collect(),
        }
    }

    /// Graph whose vertex `perm[u]` plays the role of `u`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        let n = self.order();
        assert_eq!(perm.len(), n);
        let mut adj = vec![0u32; n];
        for (u, w) in self.edges() {
            adj[perm[u]] |= 1 << perm[w];
            adj[perm[w]] |= 1 << perm[u];
        }
        Graph { adj }
    }

    /// Disjoint union; `other`'s vertices follow `self`'s.
    pub fn disjoint_union(&self, other: &Graph) -> Result<Graph> {
        let n = self.order() + other.order();
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices { got: n, limit: MAX_VERTICES });
        }
        let shift = self.order();
        let mut adj = self.adj.clone();
        adj.extend(other.adj.iter().map(|m| m << shift));
        Ok(Graph { adj })
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}; {})", self.order(), self.to_edge_list())
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_edge_list())
    }
}

/// Serialises as the edge-list text.
impl serde::Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_edge_list())
    }
}

impl std::str::FromStr for Graph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Graph::parse_edge_list(s)
    }
}
