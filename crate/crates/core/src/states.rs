//! Strong sets of states via linear programming.
//!
//! A state on a pasted lattice is fixed by its atom values: every block's
//! atoms sum to 1 and every other element is a join of orthogonal atoms
//! inside a block. A lattice admits a strong set of states iff for every
//! pair `x ≰ y` some state has `m(x) = 1` and `m(y) < 1`, which is one LP
//! per pair: fix `m(x) = 1` and minimize `m(y)`.

use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};

use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::greechie::Atom;
use crate::lattice::{Elem, ElementId, OmlLattice};
use crate::simplex::{solve, LinearForm, LpOutcome, LpProblem, Rational, Relation};

fn atom_var(a: Atom) -> String {
    format!("m{a}")
}

fn complement_var(a: Atom) -> String {
    format!("m{a}'")
}

/// One equality per block: the block's atom variables sum to 1.
///
/// Variables are `m<atom>` in atom order; constraint `i` is block `i`.
pub fn block_constraints(l: &OmlLattice) -> LpProblem {
    let mut p = LpProblem::new();
    for a in l.diagram().atoms() {
        p.add_variable(atom_var(a));
    }
    add_block_rows(l, &mut p);
    p
}

fn add_block_rows(l: &OmlLattice, p: &mut LpProblem) -> Vec<usize> {
    l.diagram()
        .blocks()
        .iter()
        .map(|block| {
            let terms = block.iter().map(|a| (a.index(), Rational::one())).collect();
            p.add_constraint(terms, Relation::Eq, Rational::one())
                .expect("atom variables are declared first")
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PairError {
    #[error("{x} <= {y}: the pair carries no information")]
    Comparable { x: String, y: String },
}

/// The LP deciding whether some state has `m(x) = 1` and `m(y) < 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairProblem {
    pub x: Elem,
    pub y: Elem,
    pub problem: LpProblem,
    /// Constraint index of each diagram block, in block order.
    pub block_rows: Vec<usize>,
}

struct FormBuilder<'a> {
    l: &'a OmlLattice,
    problem: LpProblem,
    couplings: Vec<(usize, usize)>,
}

impl FormBuilder<'_> {
    /// `m(e)` as a linear form; complements get their own variable coupled
    /// to the atom by `mK + mK' = 1`.
    fn form(&mut self, e: Elem) -> LinearForm {
        match self.l.id(e) {
            ElementId::Zero => LinearForm::constant(Rational::zero()),
            ElementId::One => LinearForm::constant(Rational::one()),
            ElementId::Atom(a) => LinearForm::sum_of([a.index()]),
            ElementId::BlockJoin { atoms, .. } => {
                LinearForm::sum_of(atoms.iter().map(|a| a.index()))
            }
            ElementId::Complement(a) => {
                let name = complement_var(*a);
                let var = match self.problem.variable_index(&name) {
                    Some(v) => v,
                    None => {
                        let v = self.problem.add_variable(name);
                        self.couplings.push((a.index(), v));
                        v
                    }
                };
                LinearForm::sum_of([var])
            }
        }
    }
}

/// Block constraints plus `m(x) = 1`, minimizing `m(y)`.
///
/// Constraint order: `m(x) = 1`, complement couplings, then the blocks.
pub fn pair_problem(l: &OmlLattice, x: Elem, y: Elem) -> Result<PairProblem, PairError> {
    if l.leq(x, y) {
        return Err(PairError::Comparable {
            x: l.name(x),
            y: l.name(y),
        });
    }
    let mut b = FormBuilder {
        l,
        problem: LpProblem::new(),
        couplings: Vec::new(),
    };
    for a in l.diagram().atoms() {
        b.problem.add_variable(atom_var(a));
    }
    let fx = b.form(x);
    let fy = b.form(y);
    let mut p = b.problem;
    let declared = "forms only use declared variables";
    p.add_constraint(fx.terms, Relation::Eq, Rational::one() - fx.constant)
        .expect(declared);
    for (atom, comp) in b.couplings {
        p.add_constraint(
            vec![(atom, Rational::one()), (comp, Rational::one())],
            Relation::Eq,
            Rational::one(),
        )
        .expect(declared);
    }
    p.set_objective(fy).expect(declared);
    let block_rows = add_block_rows(l, &mut p);
    Ok(PairProblem {
        x,
        y,
        problem: p,
        block_rows,
    })
}

/// Atom values of a state; every other element is derived.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StateVector {
    atoms: Vec<Rational>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateProperty {
    BlockSum,
    Top,
    Additive,
    Complement,
    Monotone,
    Range,
    AllOnes,
    MeetOne,
}

impl fmt::Display for StateProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StateProperty::BlockSum => "block atoms sum to 1",
            StateProperty::Top => "m(1) = 1",
            StateProperty::Additive => "additivity on orthogonal pairs",
            StateProperty::Complement => "m(a) + m(a') = 1",
            StateProperty::Monotone => "monotonicity",
            StateProperty::Range => "range [0,1]",
            StateProperty::AllOnes => "all ones iff sum is n",
            StateProperty::MeetOne => "m(a ^ b) = 1 implies m(a) = m(b) = 1",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("state violates {property} at {elements:?}")]
pub struct StateViolation {
    pub property: StateProperty,
    /// Elements or, for `BlockSum`, the block index.
    pub elements: Vec<usize>,
}

impl StateVector {
    pub fn from_atom_values(atoms: Vec<Rational>) -> Self {
        StateVector { atoms }
    }

    pub fn atom_values(&self) -> &[Rational] {
        &self.atoms
    }

    pub fn value(&self, l: &OmlLattice, e: Elem) -> Rational {
        match l.id(e) {
            ElementId::Zero => Rational::zero(),
            ElementId::One => Rational::one(),
            ElementId::Atom(a) => self.atoms[a.index()].clone(),
            ElementId::Complement(a) => Rational::one() - &self.atoms[a.index()],
            ElementId::BlockJoin { atoms, .. } => {
                atoms.iter().map(|a| &self.atoms[a.index()]).sum()
            }
        }
    }

    /// Checks the block equalities, the state axioms and the derived state
    /// properties on every element and pair of elements.
    pub fn check(&self, l: &OmlLattice) -> Result<(), StateViolation> {
        let fail = |property, elements: Vec<usize>| Err(StateViolation { property, elements });
        for (i, block) in l.diagram().blocks().iter().enumerate() {
            let sum: Rational = block.iter().map(|a| &self.atoms[a.index()]).sum();
            if !sum.is_one() {
                return fail(StateProperty::BlockSum, vec![i]);
            }
        }
        let m: Vec<Rational> = l.elements().map(|e| self.value(l, e)).collect();
        if !m[l.one().index()].is_one() {
            return fail(StateProperty::Top, vec![l.one().index()]);
        }
        let one = Rational::one();
        let two = &one + &one;
        for a in l.elements() {
            let i = a.index();
            if m[i] < Rational::zero() || m[i] > one {
                return fail(StateProperty::Range, vec![i]);
            }
            if &m[i] + &m[l.ortho(a).index()] != one {
                return fail(StateProperty::Complement, vec![i]);
            }
        }
        for a in l.elements() {
            for b in l.elements() {
                let (i, j) = (a.index(), b.index());
                if l.orthogonal(a, b) && m[l.join(a, b).index()] != &m[i] + &m[j] {
                    return fail(StateProperty::Additive, vec![i, j]);
                }
                if l.leq(a, b) && m[i] > m[j] {
                    return fail(StateProperty::Monotone, vec![i, j]);
                }
                let both_one = m[i].is_one() && m[j].is_one();
                if both_one != (&m[i] + &m[j] == two) {
                    return fail(StateProperty::AllOnes, vec![i, j]);
                }
                if m[l.meet(a, b).index()].is_one() && !both_one {
                    return fail(StateProperty::MeetOne, vec![i, j]);
                }
            }
        }
        Ok(())
    }
}

/// A pair whose LP shows no state separates it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refutation {
    pub x: Elem,
    pub y: Elem,
    /// Forced minimum of `m(y)`; `None` when no state has `m(x) = 1`.
    pub minimum: Option<Rational>,
    /// `x` and `y` are incomparable (otherwise `y < x`).
    pub incomparable: bool,
    pub problem: PairProblem,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StrongSetVerdict {
    /// Distinct optimal vertex states, one found per pair `x ≰ y`.
    Admits { states: Vec<StateVector> },
    /// Refuting pairs in scan order; only the first unless all pairs were requested.
    Refutes(Vec<Refutation>),
    /// The block equalities alone are infeasible.
    Stateless,
}

impl StrongSetVerdict {
    pub fn witness(&self) -> Option<&Refutation> {
        match self {
            StrongSetVerdict::Refutes(r) => r.first(),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct StatesOptions {
    /// Keep scanning after the first refuting pair.
    pub all_pairs: bool,
}

/// Ordered pairs `x ≰ y`, `x` outer and `y` inner, both in element order.
pub fn unordered_pairs(l: &OmlLattice) -> Vec<(Elem, Elem)> {
    l.elements()
        .flat_map(|x| l.elements().map(move |y| (x, y)))
        .filter(|&(x, y)| !l.leq(x, y))
        .collect()
}

enum PairVerdict {
    Separated(StateVector),
    Refuted(Box<Refutation>),
}

fn decide_pair(l: &OmlLattice, x: Elem, y: Elem) -> PairVerdict {
    let pp = pair_problem(l, x, y).expect("scan only visits pairs x </= y");
    let refuted = |minimum| {
        PairVerdict::Refuted(Box::new(Refutation {
            x,
            y,
            minimum,
            incomparable: !l.leq(y, x),
            problem: pp.clone(),
        }))
    };
    match solve(&pp.problem).outcome {
        LpOutcome::Optimal { value, point } => {
            if value.is_one() {
                refuted(Some(value))
            } else {
                PairVerdict::Separated(StateVector::from_atom_values(
                    point[..l.diagram().atom_count()].to_vec(),
                ))
            }
        }
        LpOutcome::Infeasible => refuted(None),
        LpOutcome::Unbounded => unreachable!("objective is bounded by the block equalities"),
    }
}

/// Decides whether the lattice admits a strong set of states.
///
/// Pairs are solved in parallel; the reported witness is the first
/// refuting pair in scan order regardless of completion order.
pub fn strong_state_verdict(l: &OmlLattice, options: StatesOptions) -> StrongSetVerdict {
    if !matches!(
        solve(&block_constraints(l)).outcome,
        LpOutcome::Optimal { .. }
    ) {
        return StrongSetVerdict::Stateless;
    }
    let pairs = unordered_pairs(l);
    let earliest = AtomicUsize::new(usize::MAX);
    let results: Vec<Option<PairVerdict>> = pairs
        .par_iter()
        .enumerate()
        .map(|(i, &(x, y))| {
            if !options.all_pairs && i > earliest.load(Ordering::Relaxed) {
                return None;
            }
            let v = decide_pair(l, x, y);
            if matches!(v, PairVerdict::Refuted(_)) {
                earliest.fetch_min(i, Ordering::Relaxed);
            }
            Some(v)
        })
        .collect();

    let mut refutations = Vec::new();
    let mut states: Vec<StateVector> = Vec::new();
    for v in results.into_iter().flatten() {
        match v {
            PairVerdict::Refuted(r) => {
                refutations.push(*r);
                if !options.all_pairs {
                    break;
                }
            }
            PairVerdict::Separated(s) => {
                if !states.contains(&s) {
                    states.push(s);
                }
            }
        }
    }
    if refutations.is_empty() {
        StrongSetVerdict::Admits { states }
    } else {
        StrongSetVerdict::Refutes(refutations)
    }
}

/// First pair `x ≰ y` for which no state in the set has `m(x) = 1` and
/// `m(y) < 1`; `None` when the set is strong.
pub fn uncovered_pair(l: &OmlLattice, states: &[StateVector]) -> Option<(Elem, Elem)> {
    let values: Vec<Vec<Rational>> = states
        .iter()
        .map(|s| l.elements().map(|e| s.value(l, e)).collect())
        .collect();
    unordered_pairs(l).into_iter().find(|&(x, y)| {
        !values
            .iter()
            .any(|m| m[x.index()].is_one() && !m[y.index()].is_one())
    })
}
