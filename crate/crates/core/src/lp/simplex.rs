//! Dense two-phase simplex over arbitrary-precision rationals, with Bland's
//! rule for both entering and leaving variables.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<BigRational>,
    pub sense: Sense,
    pub rhs: BigRational,
}

/// Optimise `objective . x` over `x >= 0` subject to `constraints`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearProgram {
    pub objective: Vec<BigRational>,
    pub maximize: bool,
    pub constraints: Vec<Constraint>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub value: BigRational,
    pub x: Vec<BigRational>,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Original,
    Slack,
    Artificial,
}

struct Tableau {
    rows: Vec<Vec<BigRational>>,
    basis: Vec<usize>,
    kinds: Vec<Kind>,
}

impl Tableau {
    fn width(&self) -> usize {
        self.kinds.len()
    }

    fn rhs(&self, i: usize) -> &BigRational {
        self.rows[i].last().expect("rhs column")
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.rows[row][col].clone();
        for x in self.rows[row].iter_mut() {
            *x /= &p;
        }
        let pivot_row = self.rows[row].clone();
        for (i, r) in self.rows.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let factor = r[col].clone();
            for (x, pv) in r.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *x -= &factor * pv;
                }
            }
        }
        self.basis[row] = col;
    }

    /// Maximise `cost . x` using only columns accepted by `allowed`.
    /// Returns false if the objective is unbounded.
    fn maximise(&mut self, cost: &[BigRational], allowed: impl Fn(usize) -> bool) -> bool {
        loop {
            let entering = (0..self.width()).find(|&j| {
                if !allowed(j) || self.basis.contains(&j) {
                    return false;
                }
                let mut d = cost[j].clone();
                for (i, &bi) in self.basis.iter().enumerate() {
                    if !cost[bi].is_zero() && !self.rows[i][j].is_zero() {
                        d -= &cost[bi] * &self.rows[i][j];
                    }
                }
                d.is_positive()
            });
            let Some(col) = entering else {
                return true;
            };
            let mut leave: Option<(usize, BigRational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((row, _)) = leave else {
                return false;
            };
            self.pivot(row, col);
        }
    }

    fn value(&self, cost: &[BigRational]) -> BigRational {
        self.basis
            .iter()
            .enumerate()
            .fold(BigRational::zero(), |acc, (i, &b)| acc + &cost[b] * self.rhs(i))
    }
}

pub fn solve(lp: &LinearProgram) -> Result<LpSolution> {
    let n = lp.objective.len();
    if lp.constraints.iter().any(|c| c.coeffs.len() != n) {
        return Err(Error::Internal("constraint width differs from objective".into()));
    }

    // Flip rows so every right-hand side is non-negative.
    let rows: Vec<(Vec<BigRational>, Sense, BigRational)> = lp
        .constraints
        .iter()
        .map(|c| {
            if c.rhs.is_negative() {
                let sense = match c.sense {
                    Sense::Le => Sense::Ge,
                    Sense::Ge => Sense::Le,
                    Sense::Eq => Sense::Eq,
                };
                (c.coeffs.iter().map(|a| -a).collect(), sense, -&c.rhs)
            } else {
                (c.coeffs.clone(), c.sense, c.rhs.clone())
            }
        })
        .collect();

    let m = rows.len();
    let mut kinds = vec![Kind::Original; n];
    let mut slack_col = vec![None; m];
    let mut art_col = vec![None; m];
    for (i, (_, sense, _)) in rows.iter().enumerate() {
        if *sense != Sense::Eq {
            slack_col[i] = Some(kinds.len());
            kinds.push(Kind::Slack);
        }
    }
    for (i, (_, sense, _)) in rows.iter().enumerate() {
        if *sense != Sense::Le {
            art_col[i] = Some(kinds.len());
            kinds.push(Kind::Artificial);
        }
    }
    let width = kinds.len();

    let mut table = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    for (i, (coeffs, sense, rhs)) in rows.into_iter().enumerate() {
        let mut row = vec![BigRational::zero(); width + 1];
        row[..n].clone_from_slice(&coeffs);
        if let Some(s) = slack_col[i] {
            row[s] = if sense == Sense::Le { BigRational::one() } else { -BigRational::one() };
        }
        if let Some(a) = art_col[i] {
            row[a] = BigRational::one();
            basis.push(a);
        } else {
            basis.push(slack_col[i].expect("<= row has a slack"));
        }
        row[width] = rhs;
        table.push(row);
    }
    let mut t = Tableau { rows: table, basis, kinds };

    if t.kinds.contains(&Kind::Artificial) {
        let cost: Vec<BigRational> = t
            .kinds
            .iter()
            .map(|k| if *k == Kind::Artificial { -BigRational::one() } else { BigRational::zero() })
            .collect();
        t.maximise(&cost, |_| true);
        if !t.value(&cost).is_zero() {
            return Err(Error::Internal("linear program is infeasible".into()));
        }
        // Drive zero-level artificials out of the basis; drop redundant rows.
        let mut i = 0;
        while i < t.rows.len() {
            if t.kinds[t.basis[i]] == Kind::Artificial {
                match (0..width).find(|&j| t.kinds[j] != Kind::Artificial && !t.rows[i][j].is_zero()) {
                    Some(j) => t.pivot(i, j),
                    None => {
                        t.rows.remove(i);
                        t.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }

    let sign = if lp.maximize { BigRational::one() } else { -BigRational::one() };
    let mut cost = vec![BigRational::zero(); width];
    for (c, o) in cost.iter_mut().zip(&lp.objective) {
        *c = &sign * o;
    }
    let kinds = t.kinds.clone();
    if !t.maximise(&cost, |j| kinds[j] != Kind::Artificial) {
        return Err(Error::Internal("linear program is unbounded".into()));
    }

    let mut x = vec![BigRational::zero(); n];
    for (i, &b) in t.basis.iter().enumerate() {
        if b < n {
            x[b] = t.rhs(i).clone();
        }
    }
    let value = lp
        .objective
        .iter()
        .zip(&x)
        .fold(BigRational::zero(), |acc, (c, xi)| acc + c * xi);
    Ok(LpSolution { value, x })
}

/// True when `x` is non-negative and satisfies every constraint.
pub fn is_feasible(lp: &LinearProgram, x: &[BigRational]) -> bool {
    x.len() == lp.objective.len()
        && x.iter().all(|xi| !xi.is_negative())
        && lp.constraints.iter().all(|c| {
            let lhs = c.coeffs.iter().zip(x).fold(BigRational::zero(), |acc, (a, xi)| acc + a * xi);
            match c.sense {
                Sense::Le => lhs <= c.rhs,
                Sense::Ge => lhs >= c.rhs,
                Sense::Eq => lhs == c.rhs,
            }
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> BigRational {
        rat(n, 1)
    }

    #[test]
    fn textbook_maximisation() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18  ->  36 at (2, 6)
        let lp = LinearProgram {
            objective: vec![r(3), r(5)],
            maximize: true,
            constraints: vec![
                Constraint { coeffs: vec![r(1), r(0)], sense: Sense::Le, rhs: r(4) },
                Constraint { coeffs: vec![r(0), r(2)], sense: Sense::Le, rhs: r(12) },
                Constraint { coeffs: vec![r(3), r(2)], sense: Sense::Le, rhs: r(18) },
            ],
        };
        let s = solve(&lp).unwrap();
        assert_eq!(s.value, r(36));
        assert_eq!(s.x, vec![r(2), r(6)]);
        assert!(is_feasible(&lp, &s.x));
    }

    #[test]
    fn minimisation_with_ge_rows() {
        // min x + y, x + 2y >= 3, 2x + y >= 3  ->  2 at (1, 1)
        let lp = LinearProgram {
            objective: vec![r(1), r(1)],
            maximize: false,
            constraints: vec![
                Constraint { coeffs: vec![r(1), r(2)], sense: Sense::Ge, rhs: r(3) },
                Constraint { coeffs: vec![r(2), r(1)], sense: Sense::Ge, rhs: r(3) },
            ],
        };
        let s = solve(&lp).unwrap();
        assert_eq!(s.value, r(2));
        assert_eq!(s.x, vec![r(1), r(1)]);
    }

    #[test]
    fn equality_and_redundant_rows() {
        // x + y = 1 twice, max x  ->  1
        let row = Constraint { coeffs: vec![r(1), r(1)], sense: Sense::Eq, rhs: r(1) };
        let lp = LinearProgram {
            objective: vec![r(1), r(0)],
            maximize: true,
            constraints: vec![row.clone(), row],
        };
        assert_eq!(solve(&lp).unwrap().value, r(1));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let infeasible = LinearProgram {
            objective: vec![r(1)],
            maximize: true,
            constraints: vec![
                Constraint { coeffs: vec![r(1)], sense: Sense::Le, rhs: r(1) },
                Constraint { coeffs: vec![r(1)], sense: Sense::Ge, rhs: r(2) },
            ],
        };
        assert!(matches!(solve(&infeasible), Err(Error::Internal(_))));
        let unbounded = LinearProgram {
            objective: vec![r(1)],
            maximize: true,
            constraints: vec![Constraint { coeffs: vec![r(1)], sense: Sense::Ge, rhs: r(0) }],
        };
        assert!(matches!(solve(&unbounded), Err(Error::Internal(_))));
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's example, which cycles under the largest-coefficient rule.
        let lp = LinearProgram {
            objective: vec![rat(3, 4), r(-150), rat(1, 50), r(-6)],
            maximize: true,
            constraints: vec![
                Constraint { coeffs: vec![rat(1, 4), r(-60), rat(-1, 25), r(9)], sense: Sense::Le, rhs: r(0) },
                Constraint { coeffs: vec![rat(1, 2), r(-90), rat(-1, 50), r(3)], sense: Sense::Le, rhs: r(0) },
                Constraint { coeffs: vec![r(0), r(0), r(1), r(0)], sense: Sense::Le, rhs: r(1) },
            ],
        };
        assert_eq!(solve(&lp).unwrap().value, rat(1, 20));
    }
}
