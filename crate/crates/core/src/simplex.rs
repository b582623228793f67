//! Exact rational linear programming.
//!
//! Minimizes a linear form over nonnegative variables subject to `=` and
//! `<=` constraints with a dense two-phase tableau simplex. Pivots follow
//! Bland's rule, so every solve terminates.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Eq,
    Le,
}

/// `sum(coef * var) + constant`, variables by index.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LinearForm {
    pub terms: Vec<(usize, Rational)>,
    pub constant: Rational,
}

impl LinearForm {
    /// Sum of the given variables with unit coefficients.
    pub fn sum_of(vars: impl IntoIterator<Item = usize>) -> Self {
        LinearForm {
            terms: vars.into_iter().map(|v| (v, Rational::one())).collect(),
            constant: Rational::zero(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        LinearForm {
            terms: Vec::new(),
            constant: c,
        }
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        self.terms
            .iter()
            .fold(self.constant.clone(), |acc, (v, c)| acc + c * &point[*v])
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub terms: Vec<(usize, Rational)>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn lhs(&self, point: &[Rational]) -> Rational {
        self.terms
            .iter()
            .fold(Rational::zero(), |acc, (v, c)| acc + c * &point[*v])
    }

    pub fn satisfied_by(&self, point: &[Rational]) -> bool {
        let lhs = self.lhs(point);
        match self.relation {
            Relation::Eq => lhs == self.rhs,
            Relation::Le => lhs <= self.rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("constraint refers to undeclared variable index {0}")]
    UnknownVariable(usize),
}

/// `min objective` subject to the constraints, all variables `>= 0`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LpProblem {
    variables: Vec<String>,
    objective: LinearForm,
    constraints: Vec<Constraint>,
}

impl LpProblem {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares a variable and returns its index.
    pub fn add_variable(&mut self, name: impl Into<String>) -> usize {
        self.variables.push(name.into());
        self.variables.len() - 1
    }

    pub fn variable_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn objective(&self) -> &LinearForm {
        &self.objective
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    fn check_vars(&self, terms: &[(usize, Rational)]) -> Result<(), LpError> {
        match terms.iter().find(|(v, _)| *v >= self.variables.len()) {
            Some((v, _)) => Err(LpError::UnknownVariable(*v)),
            None => Ok(()),
        }
    }

    pub fn set_objective(&mut self, objective: LinearForm) -> Result<(), LpError> {
        self.check_vars(&objective.terms)?;
        self.objective = objective;
        Ok(())
    }

    /// Appends a constraint and returns its index.
    pub fn add_constraint(
        &mut self,
        terms: Vec<(usize, Rational)>,
        relation: Relation,
        rhs: Rational,
    ) -> Result<usize, LpError> {
        self.check_vars(&terms)?;
        self.constraints.push(Constraint {
            terms,
            relation,
            rhs,
        });
        Ok(self.constraints.len() - 1)
    }

    pub fn set_relation(&mut self, constraint: usize, relation: Relation) {
        self.constraints[constraint].relation = relation;
    }

    /// Every constraint holds exactly at `point` (nonnegativity included).
    pub fn is_feasible(&self, point: &[Rational]) -> bool {
        point.len() == self.variables.len()
            && point.iter().all(|x| !x.is_negative())
            && self.constraints.iter().all(|c| c.satisfied_by(point))
    }
}

fn write_form(
    f: &mut fmt::Formatter<'_>,
    names: &[String],
    terms: &[(usize, Rational)],
    constant: &Rational,
) -> fmt::Result {
    let mut first = true;
    for (v, c) in terms {
        let name = &names[*v];
        let neg = c.is_negative();
        let mag = c.abs();
        match (first, neg) {
            (true, false) => {}
            (true, true) => f.write_str("-")?,
            (false, false) => f.write_str(" + ")?,
            (false, true) => f.write_str(" - ")?,
        }
        if mag.is_one() {
            f.write_str(name)?;
        } else {
            write!(f, "{mag} {name}")?;
        }
        first = false;
    }
    if first {
        write!(f, "{constant}")?;
    } else if !constant.is_zero() {
        let sign = if constant.is_negative() { " - " } else { " + " };
        write!(f, "{sign}{}", constant.abs())?;
    }
    Ok(())
}

/// The `lp_solve` text format: `min: <form>;` then one constraint per line.
impl fmt::Display for LpProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("min: ")?;
        write_form(
            f,
            &self.variables,
            &self.objective.terms,
            &self.objective.constant,
        )?;
        f.write_str(";\n")?;
        for c in &self.constraints {
            write_form(f, &self.variables, &c.terms, &Rational::zero())?;
            let op = match c.relation {
                Relation::Eq => "=",
                Relation::Le => "<=",
            };
            writeln!(f, " {op} {};", c.rhs)?;
        }
        Ok(())
    }
}

/// Renders the problem in `lp_solve` notation.
pub fn print_problem(p: &LpProblem) -> String {
    p.to_string()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal {
        value: Rational,
        point: Vec<Rational>,
    },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub outcome: LpOutcome,
    /// Pivots over both phases.
    pub pivots: usize,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    /// Reduced costs of the current phase objective.
    cost: Vec<Rational>,
    /// Columns allowed to enter the basis.
    eligible: Vec<bool>,
    pivots: usize,
}

enum Phase {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.rows[row][col].clone();
        for x in self.rows[row].iter_mut() {
            *x /= &p;
        }
        self.rhs[row] /= &p;
        let pivot_row = self.rows[row].clone();
        let pivot_rhs = self.rhs[row].clone();
        for i in 0..self.rows.len() {
            if i == row || self.rows[i][col].is_zero() {
                continue;
            }
            let factor = self.rows[i][col].clone();
            for (x, y) in self.rows[i].iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &factor * y;
                }
            }
            self.rhs[i] -= &factor * &pivot_rhs;
        }
        if !self.cost[col].is_zero() {
            let factor = self.cost[col].clone();
            for (x, y) in self.cost.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &factor * y;
                }
            }
        }
        self.basis[row] = col;
        self.pivots += 1;
    }

    /// Sets the phase objective and prices out the basic columns.
    fn set_cost(&mut self, c: &[Rational]) {
        self.cost = c.to_vec();
        for (i, &b) in self.basis.iter().enumerate() {
            if self.cost[b].is_zero() {
                continue;
            }
            let factor = self.cost[b].clone();
            for (x, y) in self.cost.iter_mut().zip(&self.rows[i]) {
                if !y.is_zero() {
                    *x -= &factor * y;
                }
            }
        }
    }

    fn optimize(&mut self) -> Phase {
        loop {
            // Bland: lowest-index improving column, then lowest-index leaving variable.
            let entering =
                (0..self.cost.len()).find(|&j| self.eligible[j] && self.cost[j].is_negative());
            let Some(col) = entering else {
                return Phase::Optimal;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((row, _)) => self.pivot(row, col),
                None => return Phase::Unbounded,
            }
        }
    }
}

/// Solves the problem exactly with the two-phase simplex method.
pub fn solve(p: &LpProblem) -> LpSolution {
    let n = p.variables.len();
    let m = p.constraints.len();
    let slacks = p
        .constraints
        .iter()
        .filter(|c| c.relation == Relation::Le)
        .count();

    // Columns: originals, slacks, then artificials as needed.
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let mut basis = vec![usize::MAX; m];
    let mut slack_col = n;
    let mut needs_artificial = Vec::new();
    for (i, c) in p.constraints.iter().enumerate() {
        let mut row = vec![Rational::zero(); n + slacks];
        for (v, coef) in &c.terms {
            row[*v] += coef;
        }
        let mut b = c.rhs.clone();
        let mut slack = None;
        if c.relation == Relation::Le {
            row[slack_col] = Rational::one();
            slack = Some(slack_col);
            slack_col += 1;
        }
        if b.is_negative() {
            for x in row.iter_mut() {
                *x = -x.clone();
            }
            b = -b;
            slack = None;
        }
        match slack {
            Some(s) => basis[i] = s,
            None => needs_artificial.push(i),
        }
        rows.push(row);
        rhs.push(b);
    }
    let first_artificial = n + slacks;
    let total = first_artificial + needs_artificial.len();
    for row in rows.iter_mut() {
        row.resize(total, Rational::zero());
    }
    for (k, &i) in needs_artificial.iter().enumerate() {
        rows[i][first_artificial + k] = Rational::one();
        basis[i] = first_artificial + k;
    }

    let mut t = Tableau {
        rows,
        rhs,
        basis,
        cost: Vec::new(),
        eligible: vec![true; total],
        pivots: 0,
    };

    if !needs_artificial.is_empty() {
        let mut phase1 = vec![Rational::zero(); total];
        for c in phase1.iter_mut().skip(first_artificial) {
            *c = Rational::one();
        }
        t.set_cost(&phase1);
        t.optimize();
        let infeasibility: Rational = t
            .basis
            .iter()
            .zip(&t.rhs)
            .filter(|(b, _)| **b >= first_artificial)
            .map(|(_, r)| r.clone())
            .sum();
        if infeasibility.is_positive() {
            return LpSolution {
                outcome: LpOutcome::Infeasible,
                pivots: t.pivots,
            };
        }
        // Drive zero-level artificials out of the basis; drop redundant rows.
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] >= first_artificial {
                match (0..first_artificial).find(|&j| !t.rows[i][j].is_zero()) {
                    Some(j) => t.pivot(i, j),
                    None => {
                        t.rows.remove(i);
                        t.rhs.remove(i);
                        t.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
        for e in t.eligible.iter_mut().skip(first_artificial) {
            *e = false;
        }
    }

    let mut phase2 = vec![Rational::zero(); total];
    for (v, c) in &p.objective.terms {
        phase2[*v] += c;
    }
    t.set_cost(&phase2);
    if let Phase::Unbounded = t.optimize() {
        return LpSolution {
            outcome: LpOutcome::Unbounded,
            pivots: t.pivots,
        };
    }
    let mut point = vec![Rational::zero(); n];
    for (i, &b) in t.basis.iter().enumerate() {
        if b < n {
            point[b] = t.rhs[i].clone();
        }
    }
    let value = p.objective.eval(&point);
    LpSolution {
        outcome: LpOutcome::Optimal { value, point },
        pivots: t.pivots,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> Rational {
        rat(1)
    }

    #[test]
    fn fixed_variable() {
        let mut p = LpProblem::new();
        let m = p.add_variable("m");
        p.set_objective(LinearForm::sum_of([m])).unwrap();
        p.add_constraint(vec![(m, one())], Relation::Eq, one())
            .unwrap();
        let s = solve(&p);
        assert_eq!(s.outcome.value(), Some(&one()));
    }

    #[test]
    fn pinned_sum() {
        let mut p = LpProblem::new();
        let x = p.add_variable("x");
        let y = p.add_variable("y");
        p.set_objective(LinearForm::sum_of([y])).unwrap();
        p.add_constraint(vec![(x, one()), (y, one())], Relation::Eq, one())
            .unwrap();
        p.add_constraint(vec![(x, one())], Relation::Eq, one())
            .unwrap();
        let LpOutcome::Optimal { value, point } = solve(&p).outcome else {
            panic!("expected optimum");
        };
        assert_eq!(value, rat(0));
        assert_eq!(point, vec![one(), rat(0)]);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut p = LpProblem::new();
        let x = p.add_variable("x");
        p.add_constraint(vec![(x, one())], Relation::Le, rat(-1))
            .unwrap();
        assert_eq!(solve(&p).outcome, LpOutcome::Infeasible);

        let mut q = LpProblem::new();
        let x = q.add_variable("x");
        let y = q.add_variable("y");
        q.set_objective(LinearForm {
            terms: vec![(x, rat(-1))],
            constant: rat(0),
        })
        .unwrap();
        q.add_constraint(vec![(x, one()), (y, rat(-1))], Relation::Le, one())
            .unwrap();
        assert_eq!(solve(&q).outcome, LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_equalities() {
        let mut p = LpProblem::new();
        let x = p.add_variable("x");
        let y = p.add_variable("y");
        p.set_objective(LinearForm::sum_of([x])).unwrap();
        for _ in 0..2 {
            p.add_constraint(vec![(x, one()), (y, one())], Relation::Eq, rat(2))
                .unwrap();
        }
        p.add_constraint(vec![(y, one())], Relation::Le, ratio(3, 2))
            .unwrap();
        let s = solve(&p);
        assert_eq!(s.outcome.value(), Some(&ratio(1, 2)));
    }

    #[test]
    fn unknown_variable() {
        let mut p = LpProblem::new();
        p.add_variable("x");
        assert_eq!(
            p.add_constraint(vec![(3, one())], Relation::Eq, one()),
            Err(LpError::UnknownVariable(3))
        );
    }

    #[test]
    fn printing() {
        let mut p = LpProblem::new();
        let a = p.add_variable("m1");
        let b = p.add_variable("m7'");
        p.set_objective(LinearForm::sum_of([b])).unwrap();
        assert_eq!(p.to_string(), "min: m7';\n");
        p.add_constraint(vec![(a, one())], Relation::Eq, one())
            .unwrap();
        p.add_constraint(vec![(a, rat(2)), (b, rat(-1))], Relation::Le, ratio(1, 2))
            .unwrap();
        p.add_constraint(vec![(a, rat(-1)), (b, ratio(-3, 4))], Relation::Eq, rat(0))
            .unwrap();
        assert_eq!(
            print_problem(&p),
            "min: m7';\nm1 = 1;\n2 m1 - m7' <= 1/2;\n-m1 - 3/4 m7' = 0;\n"
        );
        let mut q = LpProblem::new();
        q.set_objective(LinearForm::constant(rat(0))).unwrap();
        assert_eq!(q.to_string(), "min: 0;\n");
    }
}
