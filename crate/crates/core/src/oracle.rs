//! Explicit three-class hosts and brute-force embedding counts.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use crate::density::{class_fractions, t_density};
use crate::error::{Error, Result};
use crate::graph::{automorphism_count, Graph};
use crate::numeric::ls_slope;
use crate::weighting::{spectrum, WeightingSpectrum};

/// Default limit on search-tree nodes per count.
pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000_000;

/// Largest pattern the counters accept.
pub const MAX_PATTERN_VERTICES: usize = 8;

/// Largest host the bitset representation accepts.
pub const MAX_HOST_VERTICES: usize = 4096;

/// Simple graph on up to [`MAX_HOST_VERTICES`] vertices with one adjacency
/// bitset per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitGraph {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BitGraph {
    pub fn empty(n: usize) -> Result<Self> {
        if n > MAX_HOST_VERTICES {
            return Err(Error::TooManyVertices { got: n, limit: MAX_HOST_VERTICES });
        }
        let words = n.div_ceil(64).max(1);
        Ok(BitGraph { n, words, bits: vec![0; n * words] })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    fn row(&self, u: usize) -> &[u64] {
        &self.bits[u * self.words..(u + 1) * self.words]
    }

    pub fn adjacent(&self, u: usize, w: usize) -> bool {
        self.row(u)[w / 64] >> (w % 64) & 1 == 1
    }

    pub fn add_edge(&mut self, u: usize, w: usize) {
        assert!(u != w && u < self.n && w < self.n, "bad edge ({u}, {w})");
        self.bits[u * self.words + w / 64] |= 1 << (w % 64);
        self.bits[w * self.words + u / 64] |= 1 << (u % 64);
    }

    pub fn degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|x| x.count_ones() as usize).sum()
    }

    pub fn size(&self) -> usize {
        (0..self.n).map(|u| self.degree(u)).sum::<usize>() / 2
    }

    fn all_mask(&self) -> Vec<u64> {
        let mut m = vec![u64::MAX; self.words];
        let spare = self.words * 64 - self.n;
        if spare > 0 {
            m[self.words - 1] >>= spare;
        }
        if self.n == 0 {
            m[0] = 0;
        }
        m
    }
}

impl From<&Graph> for BitGraph {
    fn from(g: &Graph) -> Self {
        let mut h = BitGraph::empty(g.order()).expect("small graph");
        for (u, w) in g.edges() {
            h.add_edge(u, w);
        }
        h
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum HostClass {
    Y,
    R,
    B,
}

/// Parameters the host was built for.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HostTarget {
    pub n: usize,
    /// Nominal edge count `beta n^2 / 2`.
    pub e: f64,
    pub beta: f64,
    /// `None` for hosts given directly by class sizes.
    pub q: Option<f64>,
}

/// Three-class host: `Y` and `R` are cliques, `B` is independent, `R` is
/// complete to `Y` and `B`, and there are no `Y`-`B` edges. Vertices are
/// laid out as `Y`, then `R`, then `B`.
#[derive(Clone, Debug, PartialEq)]
pub struct HostGraph {
    pub graph: BitGraph,
    pub sizes: (usize, usize, usize),
    pub target: HostTarget,
}

fn choose2(m: usize) -> usize {
    m * m.saturating_sub(1) / 2
}

/// Edge count of the three-class host with the given class sizes.
pub fn three_class_edges(y: usize, r: usize, b: usize) -> usize {
    choose2(y) + choose2(r) + r * (y + b)
}

impl HostGraph {
    pub fn from_sizes(y: usize, r: usize, b: usize) -> Result<Self> {
        let n = y + r + b;
        let mut graph = BitGraph::empty(n)?;
        // Y and R together form one clique
        for u in 0..y + r {
            for w in u + 1..y + r {
                graph.add_edge(u, w);
            }
        }
        for u in y..y + r {
            for w in y + r..n {
                graph.add_edge(u, w);
            }
        }
        let e = three_class_edges(y, r, b) as f64;
        let beta = if n == 0 { 0.0 } else { 2.0 * e / (n * n) as f64 };
        Ok(HostGraph {
            graph,
            sizes: (y, r, b),
            target: HostTarget { n, e, beta, q: None },
        })
    }

    pub fn class_of(&self, u: usize) -> HostClass {
        let (y, r, _) = self.sizes;
        if u < y {
            HostClass::Y
        } else if u < y + r {
            HostClass::R
        } else {
            HostClass::B
        }
    }

    pub fn order(&self) -> usize {
        self.graph.order()
    }

    pub fn size(&self) -> usize {
        self.graph.size()
    }
}

/// Host on `n` vertices approximating edge density `beta` with parameter
/// `q`: `|Y|` and `|R|` are rounded to nearest and `B` takes the rest.
pub fn build_host(n: usize, beta: f64, q: f64) -> Result<HostGraph> {
    if n < 10 {
        return Err(Error::InvalidParameter(format!("hosts need n >= 10, got {n}")));
    }
    let f = class_fractions(beta, q)?;
    let y = (f.y * n as f64).round() as usize;
    let r = (f.r * n as f64).round() as usize;
    if y + r > n {
        return Err(Error::InvalidParameter(format!(
            "rounding leaves a negative blue class (n = {n}, beta = {beta}, q = {q})"
        )));
    }
    let mut host = HostGraph::from_sizes(y, r, n - y - r)?;
    host.target = HostTarget {
        n,
        e: beta * (n * n) as f64 / 2.0,
        beta,
        q: Some(q),
    };
    Ok(host)
}

/// Pattern vertex order plus, for each position, the earlier neighbours.
struct Plan {
    order: Vec<usize>,
    back: Vec<Vec<usize>>,
    /// Number of trailing vertices counted in closed form (1 or 2).
    tail: usize,
}

fn plan(pattern: &Graph) -> Plan {
    let v = pattern.order();
    let mut order = Vec::with_capacity(v);
    let mut placed = 0u32;
    while order.len() < v {
        let next = (0..v)
            .filter(|&u| placed >> u & 1 == 0)
            .max_by_key(|&u| {
                let back = (pattern.neighbours(u) & placed).count_ones();
                (back, pattern.degree(u), std::cmp::Reverse(u))
            })
            .expect("unplaced vertex");
        order.push(next);
        placed |= 1 << next;
    }
    let pos: Vec<usize> = {
        let mut p = vec![0; v];
        for (i, &u) in order.iter().enumerate() {
            p[u] = i;
        }
        p
    };
    let back = order
        .iter()
        .enumerate()
        .map(|(i, &u)| (0..v).filter(|&w| pattern.adjacent(u, w) && pos[w] < i).collect())
        .collect();
    let tail = if v >= 2 && !pattern.adjacent(order[v - 1], order[v - 2]) { 2 } else { 1 };
    Plan { order, back, tail }
}

struct Search<'a> {
    host: &'a BitGraph,
    plan: &'a Plan,
    injective: bool,
    image: Vec<usize>,
    used: Vec<u64>,
    scratch: Vec<Vec<u64>>,
    all: Vec<u64>,
    nodes: u64,
    shared: &'a AtomicU64,
    abort: &'a AtomicBool,
    budget: u64,
}

const FLUSH: u64 = 1 << 14;

impl Search<'_> {
    fn candidates(&mut self, depth: usize) {
        let words = self.host.words;
        let buf = &mut self.scratch[depth];
        buf.copy_from_slice(&self.all);
        for &w in &self.plan.back[depth] {
            let img = self.image[w];
            for (x, a) in buf.iter_mut().zip(self.host.row(img)) {
                *x &= a;
            }
        }
        if self.injective {
            for k in 0..words {
                buf[k] &= !self.used[k];
            }
        }
    }

    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes % FLUSH == 0 {
            let total = self.shared.fetch_add(FLUSH, Ordering::Relaxed) + FLUSH;
            if total > self.budget {
                self.abort.store(true, Ordering::Relaxed);
            }
            if self.abort.load(Ordering::Relaxed) {
                return Err(Error::BudgetExceeded { budget: self.budget, visited: total });
            }
        }
        Ok(())
    }

    fn go(&mut self, depth: usize) -> Result<u128> {
        let v = self.plan.order.len();
        if depth + self.plan.tail == v {
            return Ok(self.close(depth));
        }
        self.candidates(depth);
        let u = self.plan.order[depth];
        let mut total: u128 = 0;
        for k in 0..self.host.words {
            let mut word = self.scratch[depth][k];
            while word != 0 {
                let bit = word.trailing_zeros() as usize;
                word &= word - 1;
                let h = k * 64 + bit;
                self.tick()?;
                self.image[u] = h;
                self.used[k] |= 1 << bit;
                let sub = self.go(depth + 1);
                self.used[k] &= !(1 << bit);
                total = total.checked_add(sub?).ok_or(Error::Overflow)?;
            }
        }
        Ok(total)
    }

    fn close(&mut self, depth: usize) -> u128 {
        self.candidates(depth);
        let first: u128 = self.scratch[depth].iter().map(|x| x.count_ones() as u128).sum();
        if self.plan.tail == 1 {
            return first;
        }
        self.candidates(depth + 1);
        let second: u128 = self.scratch[depth + 1].iter().map(|x| x.count_ones() as u128).sum();
        let mut product = first * second;
        if self.injective {
            let shared: u128 = self.scratch[depth]
                .iter()
                .zip(&self.scratch[depth + 1])
                .map(|(a, b)| (a & b).count_ones() as u128)
                .sum();
            product -= shared;
        }
        product
    }
}

fn count(pattern: &Graph, host: &BitGraph, injective: bool, budget: u64) -> Result<u128> {
    let v = pattern.order();
    if v > MAX_PATTERN_VERTICES {
        return Err(Error::TooManyVertices { got: v, limit: MAX_PATTERN_VERTICES });
    }
    if v == 0 {
        return Ok(1);
    }
    let plan = plan(pattern);
    if v == plan.tail {
        // nothing to branch on
        let (shared, abort) = (AtomicU64::new(0), AtomicBool::new(false));
        let mut s = searcher(host, &plan, injective, budget, &shared, &abort);
        return Ok(s.close(0));
    }
    let shared = AtomicU64::new(0);
    let abort = AtomicBool::new(false);
    let first = plan.order[0];
    let parts: Vec<Result<u128>> = (0..host.order())
        .into_par_iter()
        .map(|h| {
            let mut s = searcher(host, &plan, injective, budget, &shared, &abort);
            s.image[first] = h;
            s.used[h / 64] |= 1 << (h % 64);
            let out = s.go(1);
            shared.fetch_add(s.nodes % FLUSH, Ordering::Relaxed);
            out
        })
        .collect();
    let mut total: u128 = 0;
    for p in parts {
        total = total.checked_add(p?).ok_or(Error::Overflow)?;
    }
    let visited = shared.load(Ordering::Relaxed);
    if visited > budget {
        return Err(Error::BudgetExceeded { budget, visited });
    }
    Ok(total)
}

fn searcher<'a>(
    host: &'a BitGraph,
    plan: &'a Plan,
    injective: bool,
    budget: u64,
    shared: &'a AtomicU64,
    abort: &'a AtomicBool,
) -> Search<'a> {
    let v = plan.order.len();
    Search {
        host,
        plan,
        injective,
        image: vec![0; v],
        used: vec![0; host.words],
        scratch: vec![vec![0; host.words]; v],
        all: host.all_mask(),
        nodes: 0,
        shared,
        abort,
        budget,
    }
}

/// Number of homomorphisms from `pattern` to `host`.
pub fn hom_count(pattern: &Graph, host: &BitGraph) -> Result<u128> {
    count(pattern, host, false, DEFAULT_NODE_BUDGET)
}

/// Number of injective homomorphisms (labelled copies).
pub fn injective_count(pattern: &Graph, host: &BitGraph) -> Result<u128> {
    count(pattern, host, true, DEFAULT_NODE_BUDGET)
}

pub fn hom_count_with_budget(pattern: &Graph, host: &BitGraph, budget: u64) -> Result<u128> {
    count(pattern, host, false, budget)
}

pub fn injective_count_with_budget(pattern: &Graph, host: &BitGraph, budget: u64) -> Result<u128> {
    count(pattern, host, true, budget)
}

/// Unlabelled copies: injective count divided by `|Aut(pattern)|`.
pub fn copies_count(pattern: &Graph, host: &BitGraph) -> Result<u128> {
    let inj = injective_count(pattern, host)?;
    let aut = automorphism_count(pattern)? as u128;
    if inj % aut != 0 {
        return Err(Error::Internal(format!("{inj} embeddings not divisible by {aut} automorphisms")));
    }
    Ok(inj / aut)
}

/// `m (m - 1) ... (m - k + 1)`.
pub fn falling_factorial(m: usize, k: usize) -> Result<u128> {
    if k > m {
        return Ok(0);
    }
    (0..k).try_fold(1u128, |acc, i| acc.checked_mul((m - i) as u128).ok_or(Error::Overflow))
}

/// Injective count into a three-class host, read off the spectrum: every
/// embedding sends weight-1/2 vertices into `Y`, weight-0 into `R` and
/// weight-1 into `B`, and every such class-respecting injection is an
/// embedding.
pub fn exact_injective_via_spectrum(spec: &WeightingSpectrum, host: &HostGraph) -> Result<u128> {
    let (ny, nr, nb) = host.sizes;
    spec.entries.iter().try_fold(0u128, |acc, e| {
        let term = [falling_factorial(ny, e.y)?, falling_factorial(nr, e.r)?, falling_factorial(nb, e.b)?]
            .into_iter()
            .try_fold(e.mult as u128, |p, f| p.checked_mul(f))
            .ok_or(Error::Overflow)?;
        acc.checked_add(term).ok_or(Error::Overflow)
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountReport {
    pub n: usize,
    pub beta: f64,
    pub q: f64,
    pub hom: u128,
    pub injective: u128,
    pub copies: u128,
    pub normalised: f64,
    pub t_reference: f64,
    pub gap: f64,
}

impl CountReport {
    pub const CSV_HEADER: [&'static str; 9] =
        ["n", "beta", "q", "hom", "injective", "copies", "normalised", "t_reference", "gap"];

    pub fn csv_record(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            format!("{:.11e}", self.beta),
            format!("{:.11e}", self.q),
            self.hom.to_string(),
            self.injective.to_string(),
            self.copies.to_string(),
            format!("{:.11e}", self.normalised),
            format!("{:.11e}", self.t_reference),
            format!("{:.11e}", self.gap),
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub rows: Vec<CountReport>,
    /// Least-squares slope of `log gap` against `log n`; about -1 for
    /// `O(1/n)` decay. `None` when fewer than two gaps are positive.
    pub decay_slope: Option<f64>,
    /// Smallest `C` with `gap <= C / n` on every row.
    pub gap_constant: f64,
}

pub fn convergence_report(pattern: &Graph, beta: f64, q: f64, n_list: &[usize]) -> Result<ConvergenceReport> {
    convergence_report_with_budget(pattern, beta, q, n_list, DEFAULT_NODE_BUDGET)
}

/// As [`convergence_report`], with `budget` applied to each count.
pub fn convergence_report_with_budget(
    pattern: &Graph,
    beta: f64,
    q: f64,
    n_list: &[usize],
    budget: u64,
) -> Result<ConvergenceReport> {
    if n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("host sizes must be strictly increasing".into()));
    }
    let spec = spectrum(pattern)?;
    let aut = automorphism_count(pattern)? as u128;
    let t_reference = t_density(&spec, beta, q)?;
    let v = pattern.order() as i32;
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let host = build_host(n, beta, q)?;
        let hom = hom_count_with_budget(pattern, &host.graph, budget)?;
        let injective = injective_count_with_budget(pattern, &host.graph, budget)?;
        if injective % aut != 0 {
            return Err(Error::Internal(format!("{injective} embeddings not divisible by {aut}")));
        }
        let normalised = injective as f64 / (n as f64).powi(v);
        rows.push(CountReport {
            n,
            beta,
            q,
            hom,
            injective,
            copies: injective / aut,
            normalised,
            t_reference,
            gap: (normalised - t_reference).abs(),
        });
    }
    let positive: Vec<&CountReport> = rows.iter().filter(|r| r.gap > 0.0).collect();
    let decay_slope = (positive.len() >= 2).then(|| {
        let xs: Vec<f64> = positive.iter().map(|r| (r.n as f64).ln()).collect();
        let ys: Vec<f64> = positive.iter().map(|r| r.gap.ln()).collect();
        ls_slope(&xs, &ys)
    });
    let gap_constant = rows.iter().map(|r| r.gap * r.n as f64).fold(0.0, f64::max);
    Ok(ConvergenceReport { rows, decay_slope, gap_constant })
}
