//! Half-integral fractional independence weightings.
//!
//! A weighting gives every vertex a weight in `{0, 1/2, 1}` such that the two
//! ends of an edge sum to at most 1. Weights are stored in halves
//! (`0, 1, 2`) so all arithmetic stays exact. Some maximum-weight weighting
//! is always half-integral, so the maximum over this finite set is the
//! fractional independence number.

use std::collections::BTreeMap;

use num_rational::Rational64;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{independent_set_census, Graph};

/// Weight of a vertex, in halves.
pub type Halves = u8;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Weighting {
    halves: Vec<Halves>,
    r: usize,
    y: usize,
    b: usize,
}

impl Weighting {
    fn from_halves(halves: Vec<Halves>) -> Self {
        let (r, y, b) = colour_counts(&halves);
        Weighting { halves, r, y, b }
    }

    /// Weight of vertex `u` (0-based) in halves.
    pub fn halves(&self, u: usize) -> Halves {
        self.halves[u]
    }

    pub fn value(&self, u: usize) -> Rational64 {
        Rational64::new(self.halves[u] as i64, 2)
    }

    pub fn values(&self) -> impl Iterator<Item = Rational64> + '_ {
        (0..self.halves.len()).map(|u| self.value(u))
    }

    /// Vertices of weight 0.
    pub fn r(&self) -> usize {
        self.r
    }

    /// Vertices of weight 1/2.
    pub fn y(&self) -> usize {
        self.y
    }

    /// Vertices of weight 1.
    pub fn b(&self) -> usize {
        self.b
    }

    pub fn total_halves(&self) -> usize {
        self.y + 2 * self.b
    }

    pub fn total(&self) -> Rational64 {
        Rational64::new(self.total_halves() as i64, 2)
    }

    pub fn is_valid_for(&self, g: &Graph) -> bool {
        self.halves.len() == g.order() && g.edges().all(|(u, w)| self.halves[u] + self.halves[w] <= 2)
    }
}

fn colour_counts(halves: &[Halves]) -> (usize, usize, usize) {
    let mut c = [0usize; 3];
    for &h in halves {
        c[h as usize] += 1;
    }
    (c[0], c[1], c[2])
}

/// Depth-first walk over all half-integral weightings. Vertex `i` may take
/// any weight up to `2 - max(weight of earlier neighbours)`.
pub(crate) fn for_each_weighting(g: &Graph, mut visit: impl FnMut(&[Halves])) {
    let n = g.order();
    let mut halves = vec![0 as Halves; n];
    fn go(g: &Graph, i: usize, halves: &mut [Halves], visit: &mut dyn FnMut(&[Halves])) {
        if i == halves.len() {
            visit(halves);
            return;
        }
        let earlier = g.neighbours(i) & ((1u32 << i) - 1);
        let mut cap = 2;
        let mut m = earlier;
        while m != 0 {
            let w = m.trailing_zeros() as usize;
            m &= m - 1;
            cap = cap.min(2 - halves[w]);
        }
        for h in 0..=cap {
            halves[i] = h;
            go(g, i + 1, halves, visit);
        }
        halves[i] = 0;
    }
    go(g, 0, &mut halves, &mut visit);
}

pub fn enumerate_weightings(g: &Graph) -> Vec<Weighting> {
    let mut out = Vec::new();
    for_each_weighting(g, |h| out.push(Weighting::from_halves(h.to_vec())));
    out
}

/// Maximum total weight, attained by some half-integral weighting.
pub fn fractional_independence_number(g: &Graph) -> Rational64 {
    let mut best = 0;
    for_each_weighting(g, |h| {
        let t: usize = h.iter().map(|&x| x as usize).sum();
        best = best.max(t);
    });
    Rational64::new(best as i64, 2)
}

/// One maximum-weight half-integral weighting (the first in enumeration
/// order).
pub fn maximal_weighting(g: &Graph) -> Weighting {
    let mut best: Option<(usize, Vec<Halves>)> = None;
    for_each_weighting(g, |h| {
        let t: usize = h.iter().map(|&x| x as usize).sum();
        if best.as_ref().is_none_or(|(bt, _)| t > *bt) {
            best = Some((t, h.to_vec()));
        }
    });
    Weighting::from_halves(best.expect("the zero weighting always exists").1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SpectrumEntry {
    pub r: usize,
    pub y: usize,
    pub b: usize,
    pub mult: u64,
}

/// Census of half-integral weightings by `(r, y, b)`; this is all the
/// density formulas need.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightingSpectrum {
    pub v: usize,
    pub alpha: usize,
    #[serde(serialize_with = "rational_as_string")]
    pub alpha_star: Rational64,
    /// Sorted by `(r, y, b)`.
    pub entries: Vec<SpectrumEntry>,
    /// `ctilde[i]` counts maximum-weight weightings with `r = i`, for
    /// `i = 0..=floor(v - alpha_star)`.
    pub ctilde: Vec<u64>,
}

pub(crate) fn rational_as_string<S: Serializer>(x: &Rational64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// Spectrum of a graph without isolated vertices.
pub fn spectrum(g: &Graph) -> Result<WeightingSpectrum> {
    g.require_no_isolated()?;
    let v = g.order();
    let mut counts: BTreeMap<(usize, usize, usize), u64> = BTreeMap::new();
    for_each_weighting(g, |h| *counts.entry(colour_counts(h)).or_default() += 1);

    let star_halves = counts.keys().map(|&(_, y, b)| y + 2 * b).max().unwrap_or(0);
    let alpha = counts.keys().filter(|k| k.1 == 0).map(|k| k.2).max().unwrap_or(0);
    let mut ctilde = vec![0u64; (2 * v - star_halves) / 2 + 1];
    for (&(r, y, b), &m) in &counts {
        if y + 2 * b == star_halves {
            ctilde[r] += m;
        }
    }
    Ok(WeightingSpectrum {
        v,
        alpha,
        alpha_star: Rational64::new(star_halves as i64, 2),
        entries: counts
            .into_iter()
            .map(|((r, y, b), mult)| SpectrumEntry { r, y, b, mult })
            .collect(),
        ctilde,
    })
}

impl WeightingSpectrum {
    pub fn total_weightings(&self) -> u64 {
        self.entries.iter().map(|e| e.mult).sum()
    }

    pub fn multiplicity(&self, r: usize, y: usize, b: usize) -> u64 {
        self.entries
            .iter()
            .find(|e| (e.r, e.y, e.b) == (r, y, b))
            .map_or(0, |e| e.mult)
    }

    /// Entries with no weight-1/2 vertex, i.e. the 0/1 weightings.
    pub fn integral_slice(&self) -> impl Iterator<Item = &SpectrumEntry> {
        self.entries.iter().filter(|e| e.y == 0)
    }

    /// `2 * alpha_star`, an integer.
    pub fn alpha_star_halves(&self) -> usize {
        (*self.alpha_star.numer() * 2 / *self.alpha_star.denom()) as usize
    }

    /// Number of maximum independent sets, read off the `(v - alpha, 0,
    /// alpha)` entry.
    pub fn max_independent_sets(&self) -> u64 {
        self.multiplicity(self.v - self.alpha, 0, self.alpha)
    }

    /// Leading constant of the quasi-star density as beta -> 0,
    /// `2^(alpha - v) * A`.
    pub fn c2(&self) -> Rational64 {
        Rational64::new(self.max_independent_sets() as i64, 1i64 << (self.v - self.alpha))
    }

    /// Leading constant of the density in the three-class host with
    /// parameter `q` as beta -> 0.
    pub fn c1(&self, q: f64) -> Result<f64> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::InvalidParameter(format!("q must lie in (0, 1), got {q}")));
        }
        let twice_gap = 2 * self.v - self.alpha_star_halves();
        let red = (1.0 - q * q) / 2.0;
        Ok(self
            .ctilde
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| c as f64 * red.powi(i as i32) * q.powi((twice_gap - 2 * i) as i32))
            .sum())
    }
}

/// `2^(alpha - v) * A(G)` straight from the independent-set census.
pub fn c2_constant(g: &Graph) -> Rational64 {
    let census = independent_set_census(g);
    Rational64::new(census.max_independent_set_count as i64, 1i64 << (g.order() - census.alpha))
}

pub fn c1_constant(g: &Graph, q: f64) -> Result<f64> {
    spectrum(g)?.c1(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g6() -> Graph {
        Graph::counterexample_family(3, 2).unwrap()
    }

    #[test]
    fn k2_weightings() {
        let k2 = Graph::complete(2).unwrap();
        let ws = enumerate_weightings(&k2);
        let mut pairs: Vec<(u8, u8)> = ws.iter().map(|w| (w.halves(0), w.halves(1))).collect();
        pairs.sort();
        assert_eq!(pairs, vec![(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (2, 0)]);
        assert!(ws.iter().all(|w| w.is_valid_for(&k2)));
    }

    #[test]
    fn single_vertex_has_three_weightings() {
        assert_eq!(enumerate_weightings(&Graph::empty(1).unwrap()).len(), 3);
    }

    #[test]
    fn fractional_numbers() {
        assert_eq!(fractional_independence_number(&g6()), Rational64::new(7, 2));
        assert_eq!(fractional_independence_number(&Graph::cycle(5).unwrap()), Rational64::new(5, 2));
        assert_eq!(fractional_independence_number(&Graph::complete(2).unwrap()), Rational64::from(1));
        assert_eq!(maximal_weighting(&g6()).total(), Rational64::new(7, 2));
    }

    #[test]
    fn k2_spectrum_and_constants() {
        let s = spectrum(&Graph::complete(2).unwrap()).unwrap();
        let got: Vec<_> = s.entries.iter().map(|e| (e.r, e.y, e.b, e.mult)).collect();
        assert_eq!(got, vec![(0, 2, 0, 1), (1, 0, 1, 2), (1, 1, 0, 2), (2, 0, 0, 1)]);
        assert_eq!(s.ctilde, vec![1, 2]);
        assert_eq!(s.c2(), Rational64::from(1));
        assert!((s.c1(0.5).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn six_vertex_spectrum() {
        let s = spectrum(&g6()).unwrap();
        assert_eq!(s.total_weightings(), 145);
        assert_eq!(s.alpha, 3);
        // indices run to floor(6 - 7/2) = 2
        assert_eq!(s.ctilde, vec![0, 1, 0]);
        assert_eq!(s.multiplicity(1, 3, 2), 1);
        assert_eq!(s.c2(), Rational64::new(3, 8));
        let c1 = s.c1(std::f64::consts::FRAC_1_SQRT_2).unwrap();
        assert!((c1 - 1.0 / (8.0 * 2f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn c2_for_star() {
        assert_eq!(c2_constant(&Graph::star(3).unwrap()), Rational64::new(1, 2));
        assert_eq!(c2_constant(&Graph::complete(2).unwrap()), Rational64::from(1));
    }

    #[test]
    fn isolated_vertices_rejected() {
        let g = Graph::parse_edge_list("n=3;1-2").unwrap();
        assert_eq!(spectrum(&g), Err(Error::IsolatedVertices(vec![3])));
    }

    #[test]
    fn c1_domain() {
        let s = spectrum(&g6()).unwrap();
        assert!(s.c1(0.0).is_err());
        assert!(s.c1(1.0).is_err());
        assert!(s.c1(f64::NAN).is_err());
    }
}
