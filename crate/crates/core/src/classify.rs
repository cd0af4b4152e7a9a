//! Numeric type classification, conjecture probes, small-graph sweeps and
//! exact `ex(n, e, G)` at tiny scale.

use rayon::prelude::*;
use serde::Serialize;

use crate::density::{density_curve, f_t_profile, CurveSample, Winner, DEFAULT_TOL_Q};
use crate::error::{Error, Result};
use crate::graph::{
    automorphism_count, canonical_form, enumerate_connected_graphs, enumerate_graphs_with_edges, write_graph6, Graph,
};
use crate::numeric::{geometric_grid, linear_grid};
use crate::oracle::{exact_injective_via_spectrum, injective_count, three_class_edges, BitGraph, HostGraph};
use crate::weighting::{rational_as_string, spectrum, WeightingSpectrum};

/// Largest order for the full numeric sweep.
pub const MAX_SWEEP_VERTICES: usize = 5;

/// Largest host order for [`exhaustive_ex`].
pub const MAX_EX_HOST_VERTICES: usize = 9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum TypePattern {
    K,
    SK,
    TK,
    STK,
    #[serde(rename = "OTHER")]
    Other,
}

impl TypePattern {
    fn from_runs(runs: &[Winner]) -> Self {
        use Winner::*;
        match runs {
            [K] => TypePattern::K,
            [S, K] => TypePattern::SK,
            [T, K] => TypePattern::TK,
            [S, T, K] => TypePattern::STK,
            _ => TypePattern::Other,
        }
    }

    pub fn first(self) -> Option<Winner> {
        match self {
            TypePattern::K => Some(Winner::K),
            TypePattern::SK | TypePattern::STK => Some(Winner::S),
            TypePattern::TK => Some(Winner::T),
            TypePattern::Other => None,
        }
    }
}

impl std::fmt::Display for TypePattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            TypePattern::K => "K",
            TypePattern::SK => "SK",
            TypePattern::TK => "TK",
            TypePattern::STK => "STK",
            TypePattern::Other => "OTHER",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ClassifyConfig {
    pub q_grid: usize,
    pub refine_tol: f64,
    pub tol_q: f64,
    /// Absolute width at which boundary bisection stops.
    pub boundary_tol: f64,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig { q_grid: 64, refine_tol: 1e-10, tol_q: DEFAULT_TOL_Q, boundary_tol: 1e-10 }
    }
}

/// 40 geometric points on `[1e-5, 0.1]` followed by 90 linear points on
/// `[0.1, 1]`, with the shared point kept once.
pub fn default_beta_grid() -> Vec<f64> {
    let mut grid = geometric_grid(1e-5, 0.1, 40);
    grid.extend(linear_grid(0.1, 1.0, 90).into_iter().skip(1));
    grid
}

/// A winner change located between two samples.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Boundary {
    pub value: f64,
    pub bracket: (f64, f64),
    pub from: Winner,
    pub to: Winner,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TypeClassification {
    pub graph: String,
    pub graph6: String,
    pub pattern: TypePattern,
    pub gamma: Option<Boundary>,
    pub delta: Option<Boundary>,
    /// Every winner change, in increasing beta; more than two only for
    /// `OTHER`.
    pub boundaries: Vec<Boundary>,
    pub config: ClassifyConfig,
    pub samples: Vec<CurveSample>,
}

fn require_pattern_graph(g: &Graph) -> Result<()> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if g.order() < 2 {
        return Err(Error::InvalidParameter("pattern needs at least two vertices".into()));
    }
    Ok(())
}

fn check_grid(betas: &[f64]) -> Result<()> {
    if betas.is_empty() || betas.iter().any(|b| !(*b > 0.0 && *b <= 1.0)) {
        return Err(Error::InvalidParameter("beta grid must be non-empty inside (0, 1]".into()));
    }
    Ok(())
}

fn winner_at(spec: &WeightingSpectrum, beta: f64, cfg: &ClassifyConfig) -> Result<Winner> {
    Ok(f_t_profile(spec, beta, cfg.q_grid, cfg.refine_tol)?.winner(cfg.tol_q))
}

fn refine_boundary(spec: &WeightingSpectrum, lo: f64, hi: f64, from: Winner, to: Winner, cfg: &ClassifyConfig) -> Result<Boundary> {
    let (mut a, mut b) = (lo, hi);
    while b - a > cfg.boundary_tol {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if winner_at(spec, mid, cfg)? == from {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(Boundary { value: 0.5 * (a + b), bracket: (lo, hi), from, to })
}

pub fn classify_type(g: &Graph, betas: &[f64], cfg: &ClassifyConfig) -> Result<TypeClassification> {
    require_pattern_graph(g)?;
    check_grid(betas)?;
    let spec = spectrum(g)?;
    let curve = density_curve(&spec, &g.to_edge_list(), betas, cfg.q_grid, cfg.refine_tol, cfg.tol_q)?;
    let samples = curve.samples;

    let mut runs = vec![samples[0].winner];
    let mut boundaries = Vec::new();
    for w in samples.windows(2) {
        if w[0].winner != w[1].winner {
            runs.push(w[1].winner);
            boundaries.push(refine_boundary(&spec, w[0].point.beta, w[1].point.beta, w[0].winner, w[1].winner, cfg)?);
        }
    }
    let pattern = TypePattern::from_runs(&runs);
    let (gamma, delta) = match pattern {
        TypePattern::SK | TypePattern::TK => (Some(boundaries[0]), None),
        TypePattern::STK => (Some(boundaries[0]), Some(boundaries[1])),
        _ => (None, None),
    };
    Ok(TypeClassification {
        graph: g.to_edge_list(),
        graph6: write_graph6(g),
        pattern,
        gamma,
        delta,
        boundaries,
        config: *cfg,
        samples,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QStarCurve {
    /// `(beta, q_star, tie)`.
    pub points: Vec<(f64, f64, bool)>,
    pub non_decreasing: bool,
    /// Consecutive beta pairs where `q_star` drops.
    pub violations: Vec<(f64, f64)>,
}

/// Sampled optimal `q` against beta, with a monotonicity report. Drops are
/// reported, not treated as errors.
pub fn q_star_curve(g: &Graph, betas: &[f64], cfg: &ClassifyConfig) -> Result<QStarCurve> {
    require_pattern_graph(g)?;
    check_grid(betas)?;
    let spec = spectrum(g)?;
    let curve = density_curve(&spec, &g.to_edge_list(), betas, cfg.q_grid, cfg.refine_tol, cfg.tol_q)?;
    let points: Vec<(f64, f64, bool)> = curve
        .samples
        .iter()
        .map(|s| (s.point.beta, s.point.q_star, s.point.tie))
        .collect();
    let violations: Vec<(f64, f64)> = points
        .windows(2)
        .filter(|w| w[1].1 < w[0].1)
        .map(|w| (w[0].0, w[1].0))
        .collect();
    Ok(QStarCurve { non_decreasing: violations.is_empty(), points, violations })
}

/// Connected graphs on at most `max_v` vertices with
/// `alpha* > max(alpha, v/2)`.
pub fn search_counterexamples(max_v: usize) -> Result<Vec<Graph>> {
    let graphs = enumerate_connected_graphs(max_v)?;
    let found = graphs
        .into_par_iter()
        .map(|g| {
            let s = spectrum(&g)?;
            let twice = s.alpha_star_halves();
            Ok((twice > (2 * s.alpha).max(s.v)).then_some(g))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(found.into_iter().flatten().collect())
}

/// Start of the type predicted from `alpha`, `alpha*` and `v` alone.
pub fn predicted_start(v: usize, alpha: usize, alpha_star_halves: usize) -> Winner {
    if alpha_star_halves == v {
        Winner::K
    } else if alpha_star_halves > (2 * alpha).max(v) {
        Winner::T
    } else {
        Winner::S
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub graph6: String,
    pub v: usize,
    pub e: usize,
    pub alpha: usize,
    #[serde(serialize_with = "rational_as_string")]
    pub alpha_star: num_rational::Rational64,
    #[serde(rename = "A")]
    pub a: u64,
    pub predicted_start: Winner,
    pub classification: TypeClassification,
    /// Pattern agrees with the prediction: `K` exactly when `alpha* = v/2`,
    /// and otherwise starting with the predicted letter.
    pub consistent: bool,
}

impl SweepRow {
    pub const CSV_HEADER: [&'static str; 9] = ["graph6", "v", "e", "alpha", "alpha_star", "A", "pattern", "gamma", "delta"];

    pub fn csv_record(&self) -> Vec<String> {
        let bound = |b: &Option<Boundary>| b.map_or(String::new(), |b| format!("{:.11e}", b.value));
        vec![
            self.graph6.clone(),
            self.v.to_string(),
            self.e.to_string(),
            self.alpha.to_string(),
            self.alpha_star.to_string(),
            self.a.to_string(),
            self.classification.pattern.to_string(),
            bound(&self.classification.gamma),
            bound(&self.classification.delta),
        ]
    }
}

pub fn sweep_connected_graphs(max_v: usize, betas: &[f64], cfg: &ClassifyConfig) -> Result<Vec<SweepRow>> {
    if max_v > MAX_SWEEP_VERTICES {
        return Err(Error::TooManyVertices { got: max_v, limit: MAX_SWEEP_VERTICES });
    }
    enumerate_connected_graphs(max_v)?
        .into_par_iter()
        .map(|g| sweep_row(&g, betas, cfg))
        .collect()
}

/// Invariants, predicted start and numeric classification of one graph.
pub fn sweep_row(g: &Graph, betas: &[f64], cfg: &ClassifyConfig) -> Result<SweepRow> {
    let s = spectrum(g)?;
    let classification = classify_type(g, betas, cfg)?;
    let start = predicted_start(s.v, s.alpha, s.alpha_star_halves());
    let consistent = match start {
        Winner::K => classification.pattern == TypePattern::K,
        w => classification.pattern.first() == Some(w),
    };
    Ok(SweepRow {
        graph6: write_graph6(g),
        v: s.v,
        e: g.size(),
        alpha: s.alpha,
        alpha_star: s.alpha_star,
        a: s.max_independent_sets(),
        predicted_start: start,
        classification,
        consistent,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExResult {
    pub n: usize,
    pub e: usize,
    pub maximum: u128,
    pub maximiser: Graph,
    pub hosts_checked: usize,
}

/// Exact `ex(n, e, G)`: the most copies of `pattern` in any graph on `n`
/// vertices with at most `e` edges. Adding an edge never removes a copy,
/// so only hosts with exactly `min(e, n(n-1)/2)` edges are scanned. Ties
/// go to the smallest canonical code.
pub fn exhaustive_ex(n: usize, e: usize, pattern: &Graph) -> Result<ExResult> {
    if n > MAX_EX_HOST_VERTICES {
        return Err(Error::TooManyVertices { got: n, limit: MAX_EX_HOST_VERTICES });
    }
    let m = e.min(n * n.saturating_sub(1) / 2);
    let aut = automorphism_count(pattern)? as u128;
    let hosts = enumerate_graphs_with_edges(n, m)?;
    let counted = hosts
        .par_iter()
        .map(|h| injective_count(pattern, &BitGraph::from(h)).map(|c| c / aut))
        .collect::<Result<Vec<u128>>>()?;
    let (best, maximiser) = hosts
        .iter()
        .zip(&counted)
        .max_by(|a, b| a.1.cmp(b.1).then_with(|| canonical_form(b.0).cmp(&canonical_form(a.0))))
        .map(|(h, &c)| (c, h.clone()))
        .ok_or_else(|| Error::Internal("no host graphs".into()))?;
    Ok(ExResult { n, e, maximum: best, maximiser, hosts_checked: hosts.len() })
}

/// Copies of `pattern` in the best three-class host on `n` vertices with at
/// most `e` edges, over all integer class sizes. Returns `(copies, (|Y|,
/// |R|, |B|))`.
pub fn best_three_class_host(n: usize, e: usize, pattern: &Graph) -> Result<(u128, (usize, usize, usize))> {
    let spec = spectrum(pattern)?;
    let aut = automorphism_count(pattern)? as u128;
    let mut best: Option<(u128, (usize, usize, usize))> = None;
    for y in 0..=n {
        for r in 0..=n - y {
            let b = n - y - r;
            if three_class_edges(y, r, b) > e {
                continue;
            }
            let host = HostGraph::from_sizes(y, r, b)?;
            let copies = exact_injective_via_spectrum(&spec, &host)? / aut;
            if best.is_none_or(|(c, _)| copies > c) {
                best = Some((copies, (y, r, b)));
            }
        }
    }
    best.ok_or_else(|| Error::Internal("no three-class host".into()))
}

/// Compares `ex(n, e, G)` with the best three-class host of the same size.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HostComparison {
    pub ex: ExResult,
    pub best_host_copies: u128,
    pub best_host_sizes: (usize, usize, usize),
    /// `ex / best_host_copies`; infinite when the host has no copy.
    pub ratio: f64,
}

pub fn compare_with_three_class_hosts(n: usize, e: usize, pattern: &Graph) -> Result<HostComparison> {
    let ex = exhaustive_ex(n, e, pattern)?;
    let (best_host_copies, best_host_sizes) = best_three_class_host(n, e, pattern)?;
    if ex.maximum < best_host_copies {
        return Err(Error::Internal(format!(
            "exhaustive maximum {} below a three-class host with {}",
            ex.maximum, best_host_copies
        )));
    }
    let ratio = if best_host_copies == 0 {
        f64::INFINITY
    } else {
        ex.maximum as f64 / best_host_copies as f64
    };
    Ok(HostComparison { ex, best_host_copies, best_host_sizes, ratio })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_shape() {
        let g = default_beta_grid();
        assert_eq!(g.len(), 129);
        assert_eq!(g[0], 1e-5);
        assert_eq!(g[39], 0.1);
        assert_eq!(*g.last().unwrap(), 1.0);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn triangle_is_k() {
        let c = classify_type(&Graph::complete(3).unwrap(), &default_beta_grid(), &ClassifyConfig::default()).unwrap();
        assert_eq!(c.pattern, TypePattern::K);
        assert!(c.boundaries.is_empty());
    }

    #[test]
    fn cherry_flips_at_half() {
        let c = classify_type(&Graph::path(2).unwrap(), &default_beta_grid(), &ClassifyConfig::default()).unwrap();
        assert_eq!(c.pattern, TypePattern::SK);
        assert!((c.gamma.unwrap().value - 0.5).abs() < 1e-6);
    }

    #[test]
    fn predictions() {
        assert_eq!(predicted_start(6, 3, 7), Winner::T);
        assert_eq!(predicted_start(4, 2, 4), Winner::K);
        assert_eq!(predicted_start(3, 2, 4), Winner::S);
    }

    #[test]
    fn small_ex_values() {
        let r = exhaustive_ex(4, 3, &Graph::complete(2).unwrap()).unwrap();
        assert_eq!(r.maximum, 3);
        let r = exhaustive_ex(5, 6, &Graph::complete(3).unwrap()).unwrap();
        assert_eq!(r.maximum, 4);
        let k4_plus_k1 = Graph::complete(4).unwrap().disjoint_union(&Graph::empty(1).unwrap()).unwrap();
        assert_eq!(canonical_form(&r.maximiser), canonical_form(&k4_plus_k1));
    }

    #[test]
    fn three_class_host_never_beats_ex() {
        let cmp = compare_with_three_class_hosts(6, 7, &Graph::path(3).unwrap()).unwrap();
        assert!(cmp.ratio >= 1.0);
    }
}
