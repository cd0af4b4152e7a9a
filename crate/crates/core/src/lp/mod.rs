//! The vertex-exponent linear program of a pattern graph and its dual.
//!
//! Primal: maximise `sum x_u` subject to `0 <= x_u <= 1` and
//! `x_u + x_w <= 2 - eps` on every edge. Dual: minimise
//! `sum z_u + (2 - eps) sum y_uw` subject to `z_u + sum_{w ~ u} y_uw >= 1`
//! with all weights non-negative. For `0 < eps <= 1` both optima equal
//! `v - eps (v - alpha*)`.

pub mod simplex;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::weighting::{fractional_independence_number, maximal_weighting};
pub use simplex::{is_feasible, solve, Constraint, LinearProgram, LpSolution, Sense};

pub fn to_big(x: Rational64) -> BigRational {
    BigRational::new(BigInt::from(*x.numer()), BigInt::from(*x.denom()))
}

fn check_epsilon(eps: &BigRational) -> Result<()> {
    if eps.is_positive() && *eps < BigRational::from_integer(2.into()) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("epsilon must lie in (0, 2), got {eps}")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PrimalLp {
    pub graph: Graph,
    pub epsilon: BigRational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DualLp {
    pub graph: Graph,
    pub epsilon: BigRational,
}

impl PrimalLp {
    pub fn new(graph: &Graph, epsilon: BigRational) -> Result<Self> {
        check_epsilon(&epsilon)?;
        Ok(PrimalLp { graph: graph.clone(), epsilon })
    }

    /// Variables `x_u` in vertex order; box rows first, then one row per edge.
    pub fn program(&self) -> LinearProgram {
        let v = self.graph.order();
        let one = BigRational::one();
        let zero = BigRational::zero();
        let bound = BigRational::from_integer(2.into()) - &self.epsilon;
        let mut constraints = Vec::new();
        for u in 0..v {
            let mut coeffs = vec![zero.clone(); v];
            coeffs[u] = one.clone();
            constraints.push(Constraint { coeffs, sense: Sense::Le, rhs: one.clone() });
        }
        for (u, w) in self.graph.edges() {
            let mut coeffs = vec![zero.clone(); v];
            coeffs[u] = one.clone();
            coeffs[w] = one.clone();
            constraints.push(Constraint { coeffs, sense: Sense::Le, rhs: bound.clone() });
        }
        LinearProgram { objective: vec![one; v], maximize: true, constraints }
    }

    pub fn solve(&self) -> Result<LpSolution> {
        solve(&self.program())
    }
}

impl DualLp {
    pub fn new(graph: &Graph, epsilon: BigRational) -> Result<Self> {
        check_epsilon(&epsilon)?;
        Ok(DualLp { graph: graph.clone(), epsilon })
    }

    /// Variables `z_u` in vertex order, then `y_uw` in edge order.
    pub fn program(&self) -> LinearProgram {
        let v = self.graph.order();
        let edges: Vec<_> = self.graph.edges().collect();
        let width = v + edges.len();
        let one = BigRational::one();
        let bound = BigRational::from_integer(2.into()) - &self.epsilon;
        let mut objective = vec![one.clone(); v];
        objective.extend(std::iter::repeat_n(bound, edges.len()));
        let constraints = (0..v)
            .map(|u| {
                let mut coeffs = vec![BigRational::zero(); width];
                coeffs[u] = one.clone();
                for (k, &(a, b)) in edges.iter().enumerate() {
                    if a == u || b == u {
                        coeffs[v + k] = one.clone();
                    }
                }
                Constraint { coeffs, sense: Sense::Ge, rhs: one.clone() }
            })
            .collect();
        LinearProgram { objective, maximize: false, constraints }
    }

    pub fn solve(&self) -> Result<LpSolution> {
        solve(&self.program())
    }
}

/// `v - eps (v - alpha*)` together with the witness `x_u = 1 - eps (1 -
/// phi(u))` built from a maximum half-integral weighting `phi`. The witness
/// is non-negative only for `eps <= 1`, so larger values are rejected.
pub fn primal_optimum_formula(g: &Graph, epsilon: &BigRational) -> Result<(BigRational, Vec<BigRational>)> {
    if !(epsilon.is_positive() && *epsilon <= BigRational::one()) {
        return Err(Error::InvalidParameter(format!(
            "the closed-form optimum needs 0 < epsilon <= 1, got {epsilon}"
        )));
    }
    let v = BigRational::from_integer(g.order().into());
    let alpha_star = to_big(fractional_independence_number(g));
    let value = &v - epsilon * (&v - alpha_star);
    let phi = maximal_weighting(g);
    let witness = phi
        .values()
        .map(|p| BigRational::one() - epsilon * (BigRational::one() - to_big(p)))
        .collect();
    Ok((value, witness))
}

/// Outcome of solving both programs and comparing them with the closed form.
#[derive(Clone, Debug, PartialEq)]
pub struct DualityReport {
    pub graph: Graph,
    pub epsilon: BigRational,
    pub primal: LpSolution,
    pub dual: LpSolution,
    /// `None` when `eps > 1`, where the closed form does not apply.
    pub formula: Option<BigRational>,
    pub formula_witness: Option<Vec<BigRational>>,
}

/// Complementary slackness between a primal point `x` and a dual point
/// `(z, y)` of the same graph.
pub fn complementary_slackness(g: &Graph, epsilon: &BigRational, x: &[BigRational], zy: &[BigRational]) -> bool {
    let v = g.order();
    let edges: Vec<_> = g.edges().collect();
    let bound = BigRational::from_integer(2.into()) - epsilon;
    let vertex_ok = (0..v).all(|u| {
        let cover = edges
            .iter()
            .enumerate()
            .filter(|(_, &(a, b))| a == u || b == u)
            .fold(zy[u].clone(), |acc, (k, _)| acc + &zy[v + k]);
        (x[u].is_zero() || cover.is_one()) && (zy[u].is_zero() || x[u].is_one())
    });
    let edge_ok = edges
        .iter()
        .enumerate()
        .all(|(k, &(a, b))| zy[v + k].is_zero() || &x[a] + &x[b] == bound);
    vertex_ok && edge_ok
}

pub fn duality_check(g: &Graph, epsilon: &BigRational) -> Result<DualityReport> {
    let primal_lp = PrimalLp::new(g, epsilon.clone())?;
    let dual_lp = DualLp::new(g, epsilon.clone())?;
    let primal = primal_lp.solve()?;
    let dual = dual_lp.solve()?;

    if !is_feasible(&primal_lp.program(), &primal.x) || !is_feasible(&dual_lp.program(), &dual.x) {
        return Err(Error::Internal("simplex returned an infeasible point".into()));
    }
    if primal.value != dual.value {
        return Err(Error::Internal(format!(
            "duality mismatch: primal {} vs dual {}",
            primal.value, dual.value
        )));
    }
    if !complementary_slackness(g, epsilon, &primal.x, &dual.x) {
        return Err(Error::Internal("complementary slackness violated".into()));
    }

    let (formula, formula_witness) = if *epsilon <= BigRational::one() {
        let (value, witness) = primal_optimum_formula(g, epsilon)?;
        if value != primal.value {
            return Err(Error::Internal(format!(
                "closed form {} differs from simplex optimum {}",
                value, primal.value
            )));
        }
        if !is_feasible(&primal_lp.program(), &witness) {
            return Err(Error::Internal("closed-form witness is infeasible".into()));
        }
        (Some(value), Some(witness))
    } else {
        (None, None)
    };

    Ok(DualityReport {
        graph: g.clone(),
        epsilon: epsilon.clone(),
        primal,
        dual,
        formula,
        formula_witness,
    })
}

impl DualityReport {
    pub fn to_json(&self) -> Value {
        let v = self.graph.order();
        let labels = |xs: &[BigRational]| -> Map<String, Value> {
            xs.iter()
                .enumerate()
                .map(|(u, x)| ((u + 1).to_string(), Value::String(x.to_string())))
                .collect()
        };
        let y: Map<String, Value> = self
            .graph
            .edges()
            .enumerate()
            .map(|(k, (a, b))| (format!("{}-{}", a + 1, b + 1), Value::String(self.dual.x[v + k].to_string())))
            .collect();
        json!({
            "graph": self.graph.to_edge_list(),
            "epsilon": self.epsilon.to_string(),
            "primal": self.primal.value.to_string(),
            "dual": self.dual.value.to_string(),
            "formula": self.formula.as_ref().map(|f| f.to_string()),
            "witness_x": labels(&self.primal.x),
            "witness_yz": { "z": labels(&self.dual.x[..v]), "y": y },
            "formula_witness_x": self.formula_witness.as_deref().map(labels),
        })
    }
}

/// Exact rational from `a/b`, an integer, or a plain decimal such as `0.125`.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    if let Some((int, frac)) = t.split_once('.') {
        let digits = format!("{int}{frac}");
        if frac.is_empty() || !frac.bytes().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let numer: BigInt = digits.parse().map_err(|_| bad())?;
        let denom = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(BigRational::new(numer, denom));
    }
    t.parse::<BigRational>().map_err(|_| bad())
}

/// `-ln(beta / 2) / ln n`, so that `n^-eps = beta / 2`.
pub fn epsilon_of(beta: f64, n: u64) -> Result<f64> {
    if !(beta > 0.0 && beta <= 2.0) {
        return Err(Error::InvalidParameter(format!("beta must lie in (0, 2], got {beta}")));
    }
    if n < 2 {
        return Err(Error::InvalidParameter(format!("n must be at least 2, got {n}")));
    }
    Ok(-(beta / 2.0).ln() / (n as f64).ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use simplex::rat;

    fn g6() -> Graph {
        Graph::counterexample_family(3, 2).unwrap()
    }

    #[test]
    fn closed_form_values() {
        assert_eq!(primal_optimum_formula(&g6(), &rat(1, 10)).unwrap().0, rat(23, 4));
        let k2 = Graph::complete(2).unwrap();
        assert_eq!(primal_optimum_formula(&k2, &rat(1, 3)).unwrap().0, rat(5, 3));
        assert!(primal_optimum_formula(&k2, &rat(3, 2)).is_err());
        assert!(primal_optimum_formula(&k2, &rat(0, 1)).is_err());
    }

    #[test]
    fn closed_form_tends_to_v() {
        let (value, _) = primal_optimum_formula(&g6(), &rat(1, 1_000_000)).unwrap();
        assert!(rat(6, 1) - value < rat(1, 100_000));
    }

    #[test]
    fn simplex_matches_examples() {
        assert_eq!(PrimalLp::new(&g6(), rat(1, 10)).unwrap().solve().unwrap().value, rat(23, 4));
        let k2 = Graph::complete(2).unwrap();
        let dual = DualLp::new(&k2, rat(1, 10)).unwrap().solve().unwrap();
        assert_eq!(dual.value, rat(19, 10));
        assert_eq!(dual.x, vec![rat(0, 1), rat(0, 1), rat(1, 1)]);
        let k3 = Graph::complete(3).unwrap();
        assert_eq!(PrimalLp::new(&k3, rat(1, 2)).unwrap().solve().unwrap().value, rat(9, 4));
    }

    #[test]
    fn duality_examples() {
        let r = duality_check(&g6(), &rat(1, 10)).unwrap();
        assert_eq!(r.formula, Some(rat(23, 4)));
        let r = duality_check(&Graph::cycle(5).unwrap(), &rat(1, 3)).unwrap();
        assert_eq!(r.primal.value, rat(25, 6));
        let r = duality_check(&Graph::complete(2).unwrap(), &rat(1, 1)).unwrap();
        assert_eq!(r.dual.value, rat(1, 1));
        let j = r.to_json();
        assert_eq!(j["primal"], "1");
        assert_eq!(j["formula"], "1");
    }

    #[test]
    fn large_epsilon_skips_closed_form() {
        // star K_{1,3} at eps = 3/2: the centre is pinned at 0 and each leaf
        // at 1/2, so the optimum is 3/2 rather than 4 - (3/2)(4 - 3).
        let r = duality_check(&Graph::star(3).unwrap(), &rat(3, 2)).unwrap();
        assert_eq!(r.primal.value, rat(3, 2));
        assert_eq!(r.formula, None);
        assert!(PrimalLp::new(&Graph::star(3).unwrap(), rat(2, 1)).is_err());
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("1/10").unwrap(), rat(1, 10));
        assert_eq!(parse_rational("0.125").unwrap(), rat(1, 8));
        assert_eq!(parse_rational("2").unwrap(), rat(2, 1));
        assert_eq!(parse_rational("-0.5").unwrap(), rat(-1, 2));
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1.").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn epsilon_examples() {
        let n = 1000;
        assert!((epsilon_of(2.0 / n as f64, n).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(epsilon_of(2.0, n).unwrap(), 0.0);
        assert!((epsilon_of(0.02, 1000).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        let eps = epsilon_of(0.3, 77).unwrap();
        assert!(((77f64).powf(-eps) - 0.15).abs() < 1e-12);
        assert!(epsilon_of(0.0, 10).is_err());
        assert!(epsilon_of(0.5, 1).is_err());
    }
}
