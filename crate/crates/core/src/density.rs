//! Homomorphism densities into the three-class host family.
//!
//! The host with parameter `q` has a yellow clique `Y`, a red clique `R` and
//! a blue independent set `B`, with `R` complete to both other classes. At
//! `q = 0` it is the quasi-star, at `q = 1` the quasi-clique. The density of
//! a pattern is a sum over its half-integral weightings of
//! `y^y_phi * r^r_phi * b^b_phi`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{bisect, geometric_grid, golden_section_max, ls_slope};
use crate::weighting::WeightingSpectrum;

/// Relative tolerance for deciding that two densities are equal.
pub const VALUE_REL_TOL: f64 = 1e-12;

/// Default attribution tolerance on `q` for endpoint winners.
pub const DEFAULT_TOL_Q: f64 = 1e-4;

/// Vertex-class fractions of the host at edge density `beta`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ClassFractions {
    pub beta: f64,
    pub q: f64,
    pub y: f64,
    pub r: f64,
    pub b: f64,
}

fn check_unit(name: &str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must lie in [0, 1], got {x}")))
    }
}

pub fn class_fractions(beta: f64, q: f64) -> Result<ClassFractions> {
    check_unit("beta", beta)?;
    check_unit("q", q)?;
    let root_beta = beta.sqrt();
    let x = beta * (1.0 - q * q);
    let s = (1.0 - x).sqrt();
    // 1 - sqrt(1 - x) without cancellation at small x
    let r = x / (1.0 + s);
    let y = root_beta * q;
    let b = (s - y).max(0.0);
    Ok(ClassFractions { beta, q, y, r, b })
}

impl ClassFractions {
    /// `y^ey * r^er * b^eb` evaluated in log space, with `0^0 = 1`.
    pub fn monomial(&self, er: usize, ey: usize, eb: usize) -> f64 {
        let mut log = 0.0;
        for (base, e) in [(self.r, er), (self.y, ey), (self.b, eb)] {
            if e == 0 {
                continue;
            }
            if base <= 0.0 {
                return 0.0;
            }
            log += e as f64 * base.ln();
        }
        log.exp()
    }
}

/// Density of the pattern in the host with parameter `q`.
pub fn t_density(spec: &WeightingSpectrum, beta: f64, q: f64) -> Result<f64> {
    let f = class_fractions(beta, q)?;
    Ok(density_at(spec, &f))
}

fn density_at(spec: &WeightingSpectrum, f: &ClassFractions) -> f64 {
    spec.entries
        .iter()
        .map(|e| e.mult as f64 * f.monomial(e.r, e.y, e.b))
        .sum()
}

/// Density in the quasi-clique; equals `beta^(v/2)` for patterns without
/// isolated vertices.
pub fn k_density(spec: &WeightingSpectrum, beta: f64) -> Result<f64> {
    t_density(spec, beta, 1.0)
}

/// Density in the quasi-star.
pub fn s_density(spec: &WeightingSpectrum, beta: f64) -> Result<f64> {
    t_density(spec, beta, 0.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Winner {
    S,
    T,
    K,
}

impl Winner {
    pub fn letter(self) -> char {
        match self {
            Winner::S => 'S',
            Winner::T => 'T',
            Winner::K => 'K',
        }
    }
}

impl std::fmt::Display for Winner {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Optimum of the density over `q` at one edge density.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProfilePoint {
    pub beta: f64,
    pub f_t: f64,
    /// Smallest maximiser among values within [`VALUE_REL_TOL`] of `f_t`.
    pub q_star: f64,
    pub t_s: f64,
    pub t_k: f64,
    /// Another near-maximiser exists well away from `q_star`.
    pub tie: bool,
}

fn close_to(value: f64, max: f64) -> bool {
    value >= max - VALUE_REL_TOL * max.abs()
}

impl ProfilePoint {
    /// Which host shape attains the optimum. A quasi-clique value equal to
    /// the optimum wins outright (so exact ties, such as every density at
    /// `beta = 1`, count as `K`). Otherwise the quasi-star wins if it attains
    /// the optimum with `q_star <= tol_q`, and anything else is an interior
    /// `T`.
    pub fn winner(&self, tol_q: f64) -> Winner {
        if close_to(self.t_k, self.f_t) {
            Winner::K
        } else if self.q_star <= tol_q && close_to(self.t_s, self.f_t) {
            Winner::S
        } else {
            Winner::T
        }
    }
}

/// Supremum of the density over `q in [0, 1]`: a scan of `q_grid + 1`
/// equally spaced values, then golden-section refinement around every
/// local maximum of the scan.
pub fn f_t_profile(spec: &WeightingSpectrum, beta: f64, q_grid: usize, refine_tol: f64) -> Result<ProfilePoint> {
    if q_grid < 64 {
        return Err(Error::InvalidParameter(format!("q grid must have at least 64 cells, got {q_grid}")));
    }
    if !(refine_tol > 0.0) {
        return Err(Error::InvalidParameter(format!("refine tolerance must be positive, got {refine_tol}")));
    }
    check_unit("beta", beta)?;
    let eval = |q: f64| density_at(spec, &class_fractions(beta, q.clamp(0.0, 1.0)).expect("q clamped"));

    let qs: Vec<f64> = (0..=q_grid).map(|i| i as f64 / q_grid as f64).collect();
    let vals: Vec<f64> = qs.iter().map(|&q| eval(q)).collect();
    let mut cands: Vec<(f64, f64)> = qs.iter().copied().zip(vals.iter().copied()).collect();

    for i in 0..=q_grid {
        let left = if i > 0 { vals[i - 1] } else { f64::NEG_INFINITY };
        let right = if i < q_grid { vals[i + 1] } else { f64::NEG_INFINITY };
        if vals[i] >= left && vals[i] >= right {
            let lo = qs[i.saturating_sub(1)];
            let hi = qs[(i + 1).min(q_grid)];
            cands.push(golden_section_max(eval, lo, hi, refine_tol));
        }
    }

    let f_t = cands.iter().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max);
    let q_star = cands
        .iter()
        .filter(|c| close_to(c.1, f_t))
        .map(|c| c.0)
        .fold(f64::INFINITY, f64::min);
    let spacing = 1.5 / q_grid as f64;
    let tie = cands
        .iter()
        .any(|c| close_to(c.1, f_t) && (c.0 - q_star).abs() > spacing);
    Ok(ProfilePoint {
        beta,
        f_t,
        q_star,
        t_s: vals[0],
        t_k: vals[q_grid],
        tie,
    })
}

/// Edge density at which the densities for `q1` and `q2` cross, by
/// bisection on `[lo, hi]`.
pub fn crossover_beta(spec: &WeightingSpectrum, q1: f64, q2: f64, bracket: (f64, f64), tol: f64) -> Result<f64> {
    check_unit("q1", q1)?;
    check_unit("q2", q2)?;
    check_unit("bracket start", bracket.0)?;
    check_unit("bracket end", bracket.1)?;
    let diff = |beta: f64| {
        let a = t_density(spec, beta, q1).expect("checked range");
        let b = t_density(spec, beta, q2).expect("checked range");
        a - b
    };
    bisect(diff, bracket.0, bracket.1, tol)
}

/// Every crossing of the densities for `q1` and `q2` between consecutive
/// samples of `betas` where the difference changes sign. Samples with an
/// exactly zero difference (such as `beta = 1`) are skipped.
pub fn crossovers(spec: &WeightingSpectrum, q1: f64, q2: f64, betas: &[f64], tol: f64) -> Result<Vec<f64>> {
    let mut signed = Vec::with_capacity(betas.len());
    for &beta in betas {
        let d = t_density(spec, beta, q1)? - t_density(spec, beta, q2)?;
        if d != 0.0 {
            signed.push((beta, d.signum()));
        }
    }
    signed
        .windows(2)
        .filter(|w| w[0].1 != w[1].1)
        .map(|w| crossover_beta(spec, q1, q2, (w[0].0, w[1].0), tol))
        .collect()
}

/// Number of samples in the exponent fit.
pub const EXPONENT_SAMPLES: usize = 24;

/// Least-squares slope of `log t` against `log beta` on a geometric grid.
pub fn asymptotic_exponent(spec: &WeightingSpectrum, q: f64, beta_lo: f64, beta_hi: f64) -> Result<f64> {
    if !(beta_lo > 0.0 && beta_lo < beta_hi && beta_hi <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "need 0 < beta_lo < beta_hi <= 1, got {beta_lo}, {beta_hi}"
        )));
    }
    let betas = geometric_grid(beta_lo, beta_hi, EXPONENT_SAMPLES);
    let mut xs = Vec::with_capacity(betas.len());
    let mut ys = Vec::with_capacity(betas.len());
    for &beta in &betas {
        let t = t_density(spec, beta, q)?;
        if !(t > 0.0) {
            return Err(Error::Underflow { beta });
        }
        xs.push(beta.ln());
        ys.push(t.ln());
    }
    Ok(ls_slope(&xs, &ys))
}

/// Sampled optimum profile over a grid of edge densities.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityCurve {
    pub graph: String,
    pub q_grid: usize,
    pub refine_tol: f64,
    pub tol_q: f64,
    pub samples: Vec<CurveSample>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurveSample {
    #[serde(flatten)]
    pub point: ProfilePoint,
    pub winner: Winner,
}

/// Profile at every beta in `betas`, which must be strictly increasing.
pub fn density_curve(
    spec: &WeightingSpectrum,
    graph: &str,
    betas: &[f64],
    q_grid: usize,
    refine_tol: f64,
    tol_q: f64,
) -> Result<DensityCurve> {
    if betas.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidParameter("beta samples must be strictly increasing".into()));
    }
    use rayon::prelude::*;
    let samples = betas
        .par_iter()
        .map(|&beta| {
            let point = f_t_profile(spec, beta, q_grid, refine_tol)?;
            Ok(CurveSample { point, winner: point.winner(tol_q) })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DensityCurve {
        graph: graph.to_string(),
        q_grid,
        refine_tol,
        tol_q,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::weighting::spectrum;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn spec_of(g: &Graph) -> WeightingSpectrum {
        spectrum(g).unwrap()
    }

    #[test]
    fn endpoint_fractions() {
        let beta: f64 = 0.3;
        let s = class_fractions(beta, 0.0).unwrap();
        assert_eq!(s.y, 0.0);
        assert!((s.r - (1.0 - (1.0 - beta).sqrt())).abs() < 1e-15);
        assert!((s.b - (1.0 - beta).sqrt()).abs() < 1e-15);
        let k = class_fractions(beta, 1.0).unwrap();
        assert_eq!(k.r, 0.0);
        assert!((k.y - beta.sqrt()).abs() < 1e-15);
        assert!((k.b - (1.0 - beta.sqrt())).abs() < 1e-15);
        let e = class_fractions(0.0, 0.4).unwrap();
        assert_eq!((e.y, e.r, e.b), (0.0, 0.0, 1.0));
        assert!(class_fractions(1.1, 0.5).is_err());
        assert!(class_fractions(0.5, -0.1).is_err());
    }

    #[test]
    fn quasi_clique_density_is_power_of_beta() {
        let g6 = spec_of(&Graph::counterexample_family(3, 2).unwrap());
        assert!((k_density(&g6, 0.25).unwrap() - 0.015625).abs() < 1e-17);
        assert_eq!(s_density(&g6, 0.0).unwrap(), 0.0);
        assert_eq!(t_density(&g6, 0.0, 0.6).unwrap(), 0.0);
    }

    #[test]
    fn path_two_quasi_star() {
        let p2 = spec_of(&Graph::path(2).unwrap());
        let expect = 2f64.powf(-1.5);
        assert!((s_density(&p2, 0.5).unwrap() - expect).abs() < 1e-15);
        assert!((k_density(&p2, 0.5).unwrap() - expect).abs() < 1e-15);
    }

    #[test]
    fn full_density_gives_one() {
        let g6 = spec_of(&Graph::counterexample_family(3, 2).unwrap());
        let p = f_t_profile(&g6, 1.0, 64, 1e-10).unwrap();
        assert!((p.f_t - 1.0).abs() < 1e-12);
        assert_eq!(p.q_star, 0.0);
        assert!(p.tie);
        assert_eq!(p.winner(DEFAULT_TOL_Q), Winner::K);
    }

    #[test]
    fn triangle_prefers_clique() {
        let k3 = spec_of(&Graph::complete(3).unwrap());
        for beta in [1e-4, 0.01, 0.3, 0.9] {
            let p = f_t_profile(&k3, beta, 128, 1e-10).unwrap();
            assert_eq!(p.q_star, 1.0, "beta = {beta}");
            assert_eq!(p.winner(DEFAULT_TOL_Q), Winner::K);
        }
    }

    #[test]
    fn six_vertex_graph_has_interior_optimum() {
        let g6 = spec_of(&Graph::counterexample_family(3, 2).unwrap());
        let p = f_t_profile(&g6, 0.01, 256, 1e-10).unwrap();
        assert!(p.f_t > p.t_k.max(p.t_s));
        assert!(p.q_star > 0.0 && p.q_star < 1.0);
        assert_eq!(p.winner(DEFAULT_TOL_Q), Winner::T);
        assert!(!p.tie);
    }

    #[test]
    fn crossover_errors_without_sign_change() {
        let g6 = spec_of(&Graph::counterexample_family(3, 2).unwrap());
        let err = crossover_beta(&g6, 1.0, FRAC_1_SQRT_2, (0.001, 0.01), 1e-9);
        assert!(matches!(err, Err(Error::NoSignChange { .. })));
    }

    #[test]
    fn exponent_underflow_is_reported() {
        let g6 = spec_of(&Graph::counterexample_family(3, 2).unwrap());
        assert!(matches!(asymptotic_exponent(&g6, 0.5, 1e-300, 1e-200), Err(Error::Underflow { .. })));
        assert!(asymptotic_exponent(&g6, 0.5, 1e-3, 1e-4).is_err());
    }

    #[test]
    fn profile_rejects_coarse_grid() {
        let g6 = spec_of(&Graph::counterexample_family(3, 2).unwrap());
        assert!(f_t_profile(&g6, 0.1, 10, 1e-9).is_err());
        assert!(f_t_profile(&g6, 0.1, 64, 0.0).is_err());
    }

    #[test]
    fn curve_requires_increasing_betas() {
        let g6 = spec_of(&Graph::counterexample_family(3, 2).unwrap());
        assert!(density_curve(&g6, "G6", &[0.2, 0.1], 64, 1e-9, DEFAULT_TOL_Q).is_err());
        let c = density_curve(&g6, "G6", &[0.001, 0.5, 1.0], 64, 1e-9, DEFAULT_TOL_Q).unwrap();
        assert_eq!(c.samples.len(), 3);
        assert_eq!(c.samples[0].winner, Winner::T);
        assert_eq!(c.samples[2].winner, Winner::K);
    }
}
