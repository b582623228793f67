//! Lattice equations: terms, hypotheses, a small text syntax, and
//! exhaustive checking on finite lattices.
//!
//! The syntax reads `a _|_ b & c _|_ d |= (a v b) ^ (c v d) =< b v d`:
//! optional orthogonality hypotheses, `|=`, then a relation `=` or `=<`
//! between two terms. Term operators are postfix `'` (complement), `^`
//! (meet), `v` (join) and `->` (Sasaki implication), binding in that order
//! from tightest to loosest. `0` and `1` are the bounds; variables are
//! single letters other than `v`.

mod check;
mod families;
mod parse;

use std::fmt;

use thiserror::Error;

use crate::lattice::{Elem, OrthoStructure};

pub use check::{check_equation, CheckOptions, CheckResult, Verdict, DEFAULT_VAR_CAP};
pub use families::{generate_ngo, generate_ngo_implicational, mayet_e2_condition, variable_name};
pub use parse::{parse_equation, ParseError, ParseErrorKind};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    /// Index into the equation's variable list.
    Var(usize),
    Zero,
    One,
    Not(Box<Term>),
    Meet(Box<Term>, Box<Term>),
    Join(Box<Term>, Box<Term>),
    /// Sasaki implication `a' v (a ^ b)`.
    Imp(Box<Term>, Box<Term>),
}

impl Term {
    pub fn ortho(t: Term) -> Term {
        Term::Not(Box::new(t))
    }

    pub fn meet(a: Term, b: Term) -> Term {
        Term::Meet(Box::new(a), Box::new(b))
    }

    pub fn join(a: Term, b: Term) -> Term {
        Term::Join(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Term, b: Term) -> Term {
        Term::Imp(Box::new(a), Box::new(b))
    }

    /// Left-nested meet of a non-empty sequence.
    pub fn meet_all(terms: impl IntoIterator<Item = Term>) -> Option<Term> {
        terms.into_iter().reduce(Term::meet)
    }

    /// Left-nested join of a non-empty sequence.
    pub fn join_all(terms: impl IntoIterator<Item = Term>) -> Option<Term> {
        terms.into_iter().reduce(Term::join)
    }

    fn max_var(&self) -> Option<usize> {
        match self {
            Term::Var(i) => Some(*i),
            Term::Zero | Term::One => None,
            Term::Not(t) => t.max_var(),
            Term::Meet(a, b) | Term::Join(a, b) | Term::Imp(a, b) => a.max_var().max(b.max_var()),
        }
    }

    /// Evaluates the term under `assignment` (one element per variable).
    pub fn eval(&self, l: &OrthoStructure, assignment: &[Elem]) -> Elem {
        match self {
            Term::Var(i) => assignment[*i],
            Term::Zero => l.zero(),
            Term::One => l.one(),
            Term::Not(t) => l.ortho(t.eval(l, assignment)),
            Term::Meet(a, b) => l.meet(a.eval(l, assignment), b.eval(l, assignment)),
            Term::Join(a, b) => l.join(a.eval(l, assignment), b.eval(l, assignment)),
            Term::Imp(a, b) => l.sasaki_imp(a.eval(l, assignment), b.eval(l, assignment)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RelationKind {
    Eq,
    Le,
}

/// `x _|_ y`: `x <= y'`, over two variable indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Hypothesis(pub usize, pub usize);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EqnError {
    #[error("variable index {0} is not declared")]
    UndeclaredVariable(usize),
    #[error("assignment has no value for variable {name}")]
    MissingVariable { name: String },
    #[error("{count} variables exceed the cap of {cap}; checking costs |L|^{count} evaluations (raise the cap to force it)")]
    TooManyVariables { count: usize, cap: usize },
    #[error("n-Go needs n >= 3, got {0}")]
    NgoTooSmall(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Equation {
    variables: Vec<String>,
    hypotheses: Vec<Hypothesis>,
    lhs: Term,
    kind: RelationKind,
    rhs: Term,
}

impl Equation {
    pub fn new(
        variables: Vec<String>,
        hypotheses: Vec<Hypothesis>,
        lhs: Term,
        kind: RelationKind,
        rhs: Term,
    ) -> Result<Self, EqnError> {
        let count = variables.len();
        let too_big = |i: usize| (i >= count).then_some(EqnError::UndeclaredVariable(i));
        for h in &hypotheses {
            if let Some(e) = too_big(h.0).or_else(|| too_big(h.1)) {
                return Err(e);
            }
        }
        for t in [&lhs, &rhs] {
            if let Some(e) = t.max_var().and_then(too_big) {
                return Err(e);
            }
        }
        Ok(Equation {
            variables,
            hypotheses,
            lhs,
            kind,
            rhs,
        })
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn hypotheses(&self) -> &[Hypothesis] {
        &self.hypotheses
    }

    pub fn lhs(&self) -> &Term {
        &self.lhs
    }

    pub fn rhs(&self) -> &Term {
        &self.rhs
    }

    pub fn kind(&self) -> RelationKind {
        self.kind
    }

    /// Evaluates hypotheses and relation at one point.
    pub fn evaluate_at(
        &self,
        l: &OrthoStructure,
        assignment: &[Elem],
    ) -> Result<PointEval, EqnError> {
        if assignment.len() < self.variables.len() {
            return Err(EqnError::MissingVariable {
                name: self.variables[assignment.len()].clone(),
            });
        }
        let hypotheses_hold = self
            .hypotheses
            .iter()
            .all(|h| l.orthogonal(assignment[h.0], assignment[h.1]));
        let lhs = self.lhs.eval(l, assignment);
        let rhs = self.rhs.eval(l, assignment);
        let relation_holds = match self.kind {
            RelationKind::Eq => lhs == rhs,
            RelationKind::Le => l.leq(lhs, rhs),
        };
        Ok(PointEval {
            hypotheses_hold,
            relation_holds,
        })
    }

    /// Renders an assignment as `a=a1 b=I ...` using `name` for elements.
    pub fn format_assignment(&self, assignment: &[Elem], name: impl Fn(Elem) -> String) -> String {
        self.variables
            .iter()
            .zip(assignment)
            .map(|(v, e)| format!("{v}={}", name(*e)))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Outcome of evaluating an equation at a single assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PointEval {
    pub hypotheses_hold: bool,
    pub relation_holds: bool,
}

impl PointEval {
    /// The point falsifies the equation.
    pub fn is_counterexample(&self) -> bool {
        self.hypotheses_hold && !self.relation_holds
    }
}

/// Free-function form of [`Equation::evaluate_at`].
pub fn evaluate_at(
    l: &OrthoStructure,
    e: &Equation,
    assignment: &[Elem],
) -> Result<PointEval, EqnError> {
    e.evaluate_at(l, assignment)
}

// Binding strength used by the printer; larger binds tighter.
fn precedence(t: &Term) -> u8 {
    match t {
        Term::Imp(..) => 1,
        Term::Join(..) => 2,
        Term::Meet(..) => 3,
        Term::Not(..) => 4,
        Term::Var(_) | Term::Zero | Term::One => 5,
    }
}

struct Printer<'a> {
    vars: &'a [String],
}

impl Printer<'_> {
    fn term(&self, t: &Term, out: &mut String) {
        match t {
            Term::Var(i) => out.push_str(&self.vars[*i]),
            Term::Zero => out.push('0'),
            Term::One => out.push('1'),
            Term::Not(inner) => {
                self.child(inner, precedence(inner) < 4, out);
                out.push('\'');
            }
            Term::Meet(a, b) | Term::Join(a, b) => {
                let p = precedence(t);
                let op = if matches!(t, Term::Meet(..)) {
                    " ^ "
                } else {
                    " v "
                };
                // left-associative: same-level right child needs parentheses
                self.child(a, precedence(a) < p, out);
                out.push_str(op);
                self.child(b, precedence(b) <= p, out);
            }
            Term::Imp(a, b) => {
                // right-associative
                self.child(a, precedence(a) <= 1, out);
                out.push_str(" -> ");
                self.child(b, precedence(b) < 1, out);
            }
        }
    }

    fn child(&self, t: &Term, parens: bool, out: &mut String) {
        if parens {
            out.push('(');
        }
        self.term(t, out);
        if parens {
            out.push(')');
        }
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = Printer {
            vars: &self.variables,
        };
        let mut out = String::new();
        if !self.hypotheses.is_empty() {
            let hyps: Vec<String> = self
                .hypotheses
                .iter()
                .map(|h| format!("{} _|_ {}", self.variables[h.0], self.variables[h.1]))
                .collect();
            out.push_str(&hyps.join(" & "));
            out.push_str(" |= ");
        }
        p.term(&self.lhs, &mut out);
        out.push_str(match self.kind {
            RelationKind::Eq => " = ",
            RelationKind::Le => " =< ",
        });
        p.term(&self.rhs, &mut out);
        f.write_str(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::greechie::parse_diagram;
    use crate::lattice::build_lattice;

    #[test]
    fn display_minimal_parentheses() {
        let e = parse_equation("(a->b)^(b->c)^(c->a) = (c->b)^(b->a)^(a->c)").unwrap();
        assert_eq!(
            e.to_string(),
            "(a -> b) ^ (b -> c) ^ (c -> a) = (c -> b) ^ (b -> a) ^ (a -> c)"
        );
        let e = parse_equation("a ^ (b ^ c) = (a v b)' -> c -> a").unwrap();
        assert_eq!(e.to_string(), "a ^ (b ^ c) = (a v b)' -> c -> a");
        let e = parse_equation("(a -> b) -> c =< a''").unwrap();
        assert_eq!(e.to_string(), "(a -> b) -> c =< a''");
    }

    #[test]
    fn undeclared_variable_rejected() {
        let err = Equation::new(
            vec!["a".into()],
            vec![],
            Term::Var(1),
            RelationKind::Eq,
            Term::Zero,
        )
        .unwrap_err();
        assert_eq!(err, EqnError::UndeclaredVariable(1));
        let err = Equation::new(
            vec!["a".into()],
            vec![Hypothesis(0, 2)],
            Term::Zero,
            RelationKind::Eq,
            Term::Zero,
        )
        .unwrap_err();
        assert_eq!(err, EqnError::UndeclaredVariable(2));
    }

    #[test]
    fn point_evaluation() {
        let b3 = build_lattice(&parse_diagram(catalog::BOOLEAN_3).unwrap()).unwrap();
        // 3-Go in its orthogonality-hypothesis form
        let go3 = parse_equation("a _|_ d _|_ b _|_ e _|_ c _|_ f _|_ a |= (a v d) ^ (b v e) ^ (c v f) = (d v b) ^ (e v c) ^ (f v a)")
            .unwrap();
        let ones = vec![b3.one(); 6];
        assert!(!go3.evaluate_at(&b3, &ones).unwrap().hypotheses_hold);
        let zeros = vec![b3.zero(); 6];
        assert_eq!(
            go3.evaluate_at(&b3, &zeros).unwrap(),
            PointEval {
                hypotheses_hold: true,
                relation_holds: true
            }
        );
        let err = go3.evaluate_at(&b3, &zeros[..4]).unwrap_err();
        assert_eq!(err, EqnError::MissingVariable { name: "c".into() });

        let ngo = generate_ngo(3).unwrap();
        let p = ngo.evaluate_at(&b3, &[b3.one(); 3]).unwrap();
        assert!(p.hypotheses_hold && p.relation_holds);
    }
}
