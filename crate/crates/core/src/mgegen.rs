//! Mayet-Godowski equations from lattices without strong states.
//!
//! Starting from a pair LP forced to optimum 1, block equalities are
//! relaxed to `<= 1` one at a time while the optimum stays 1. The blocks
//! left tight give the left side of a condensed state equation, the relaxed
//! ones its right side; the equation is then read as an MGE.

use std::collections::HashMap;
use std::fmt;

use num_traits::One;
use thiserror::Error;

use crate::eqn::{variable_name, EqnError, Equation, Hypothesis, RelationKind, Term};
use crate::greechie::{block_label, Atom};
use crate::lattice::{Elem, ElementId, OmlLattice};
use crate::simplex::{solve, LpOutcome, Rational, Relation};
use crate::states::{strong_state_verdict, PairProblem, StatesOptions, StrongSetVerdict};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MgeError {
    #[error("base problem does not force the minimum to 1 (got {0})")]
    NotForced(String),
    #[error("lattice admits a strong set of states")]
    AdmitsStrongStates,
    #[error("lattice has no states at all")]
    Stateless,
    #[error("no refuting pair forces a minimum of 1")]
    NoForcedPair,
    #[error("no tight block keeps a nonzero atom")]
    EmptyLhs,
    #[error("no relaxed block shares an atom with the left side")]
    EmptyRhs,
    #[error("balancing did not converge within {bound} repetitions; counts (lhs, rhs) per variable: {counts:?}")]
    Unbalanced {
        bound: usize,
        counts: Vec<(usize, usize)>,
    },
    #[error("balanced sides have {lhs} and {rhs} terms")]
    TermCounts { lhs: usize, rhs: usize },
    #[error("condensed equation: {0}")]
    Syntax(String),
    #[error("generated equation survives its witness assignment")]
    WitnessSurvives,
    #[error(transparent)]
    Equation(#[from] EqnError),
}

/// The result of greedy constraint weakening.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Weakening {
    /// The final problem, relaxed blocks written `<= 1`.
    pub problem: PairProblem,
    /// Relaxed block indices, in diagram order.
    pub weakened: Vec<usize>,
    /// Tight block indices, in diagram order.
    pub kept: Vec<usize>,
}

fn optimum(pp: &PairProblem) -> Option<Rational> {
    match solve(&pp.problem).outcome {
        LpOutcome::Optimal { value, .. } => Some(value),
        _ => None,
    }
}

/// Relaxes block equalities in `order` (default: diagram order), keeping
/// each relaxation that leaves the optimum at 1.
pub fn minimize_constraints(
    base: &PairProblem,
    order: Option<&[usize]>,
) -> Result<Weakening, MgeError> {
    match optimum(base) {
        Some(v) if v.is_one() => {}
        other => {
            return Err(MgeError::NotForced(
                other.map_or("no optimum".into(), |v| v.to_string()),
            ))
        }
    }
    let blocks = base.block_rows.len();
    let default: Vec<usize> = (0..blocks).collect();
    let order = order.unwrap_or(&default);
    let mut pp = base.clone();
    let mut relaxed = vec![false; blocks];
    for &b in order {
        let row = pp.block_rows[b];
        pp.problem.set_relation(row, Relation::Le);
        if optimum(&pp).is_some_and(|v| v.is_one()) {
            relaxed[b] = true;
        } else {
            pp.problem.set_relation(row, Relation::Eq);
        }
    }
    let (weakened, kept) = (0..blocks).partition(|&b| relaxed[b]);
    Ok(Weakening {
        problem: pp,
        weakened,
        kept,
    })
}

/// `t1+t2+...=s1+s2+...`, each term a juxtaposed group of variables.
///
/// Juxtaposition is join, `+` is the sum of state values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CondensedStateEquation {
    pub variables: Vec<String>,
    pub lhs: Vec<Vec<usize>>,
    pub rhs: Vec<Vec<usize>>,
}

fn write_side(
    f: &mut fmt::Formatter<'_>,
    terms: &[Vec<usize>],
    name: impl Fn(usize) -> String,
) -> fmt::Result {
    for (i, t) in terms.iter().enumerate() {
        if i > 0 {
            f.write_str("+")?;
        }
        for &v in t {
            f.write_str(&name(v))?;
        }
    }
    Ok(())
}

impl fmt::Display for CondensedStateEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |v: usize| self.variables[v].clone();
        write_side(f, &self.lhs, name)?;
        f.write_str("=")?;
        write_side(f, &self.rhs, name)
    }
}

impl CondensedStateEquation {
    /// Parses `ad+be+cf=db+ec+fa`; every letter is one variable.
    pub fn parse(text: &str) -> Result<Self, MgeError> {
        let (l, r) = text
            .split_once('=')
            .ok_or_else(|| MgeError::Syntax("missing '='".into()))?;
        let mut variables: Vec<String> = Vec::new();
        let mut side = |s: &str| -> Result<Vec<Vec<usize>>, MgeError> {
            s.split('+')
                .map(|t| {
                    let t = t.trim();
                    if t.is_empty() {
                        return Err(MgeError::Syntax("empty term".into()));
                    }
                    t.chars()
                        .map(|c| {
                            if !c.is_ascii_alphabetic() || c == 'v' {
                                return Err(MgeError::Syntax(format!("invalid variable '{c}'")));
                            }
                            let name = c.to_string();
                            Ok(match variables.iter().position(|v| *v == name) {
                                Some(i) => i,
                                None => {
                                    variables.push(name);
                                    variables.len() - 1
                                }
                            })
                        })
                        .collect()
                })
                .collect()
        };
        let lhs = side(l)?;
        let rhs = side(r)?;
        Ok(CondensedStateEquation {
            variables,
            lhs,
            rhs,
        })
    }

    /// Occurrences of each variable on the (lhs, rhs).
    pub fn counts(&self) -> Vec<(usize, usize)> {
        let mut c = vec![(0, 0); self.variables.len()];
        for &v in self.lhs.iter().flatten() {
            c[v].0 += 1;
        }
        for &v in self.rhs.iter().flatten() {
            c[v].1 += 1;
        }
        c
    }

    pub fn is_balanced(&self) -> bool {
        self.lhs.len() == self.rhs.len() && self.counts().iter().all(|(a, b)| a == b)
    }

    fn term_key(&self, t: &[usize]) -> String {
        t.iter().map(|&v| self.variables[v].as_str()).collect()
    }

    /// Repeats terms until every variable occurs equally often on both sides.
    ///
    /// While a variable is short on one side, the lexicographically first
    /// term on that side containing it is duplicated.
    pub fn balance(&mut self) -> Result<(), MgeError> {
        let bound = self.variables.len() * (self.lhs.len() + self.rhs.len());
        for _ in 0..=bound {
            let counts = self.counts();
            let Some((v, &(l, r))) = counts.iter().enumerate().find(|(_, (l, r))| l != r) else {
                if self.lhs.len() != self.rhs.len() {
                    return Err(MgeError::TermCounts {
                        lhs: self.lhs.len(),
                        rhs: self.rhs.len(),
                    });
                }
                return Ok(());
            };
            let side = if l < r { &self.lhs } else { &self.rhs };
            let term = side
                .iter()
                .filter(|t| t.contains(&v))
                .min_by_key(|t| self.term_key(t))
                .cloned()
                .ok_or_else(|| MgeError::Unbalanced {
                    bound,
                    counts: counts.clone(),
                })?;
            if l < r {
                self.lhs.push(term);
            } else {
                self.rhs.push(term);
            }
        }
        Err(MgeError::Unbalanced {
            bound,
            counts: self.counts(),
        })
    }

    /// Same equation up to renaming variables, reordering terms, reordering
    /// variables inside a term, and swapping sides.
    pub fn equivalent(&self, other: &CondensedStateEquation) -> bool {
        let swapped = CondensedStateEquation {
            variables: other.variables.clone(),
            lhs: other.rhs.clone(),
            rhs: other.lhs.clone(),
        };
        renames_to(self, other) || renames_to(self, &swapped)
    }
}

fn normalized(side: &[Vec<usize>], map: &[usize]) -> Vec<Vec<usize>> {
    let mut terms: Vec<Vec<usize>> = side
        .iter()
        .map(|t| {
            let mut t: Vec<usize> = t.iter().map(|&v| map[v]).collect();
            t.sort_unstable();
            t
        })
        .collect();
    terms.sort();
    terms
}

fn renames_to(a: &CondensedStateEquation, b: &CondensedStateEquation) -> bool {
    let n = a.variables.len();
    if n != b.variables.len() || a.lhs.len() != b.lhs.len() || a.rhs.len() != b.rhs.len() {
        return false;
    }
    let (ca, cb) = (a.counts(), b.counts());
    let target = (
        normalized(&b.lhs, &(0..n).collect::<Vec<_>>()),
        normalized(&b.rhs, &(0..n).collect::<Vec<_>>()),
    );
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];

    fn search(
        i: usize,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        ca: &[(usize, usize)],
        cb: &[(usize, usize)],
        a: &CondensedStateEquation,
        target: &(Vec<Vec<usize>>, Vec<Vec<usize>>),
    ) -> bool {
        if i == map.len() {
            return normalized(&a.lhs, map) == target.0 && normalized(&a.rhs, map) == target.1;
        }
        for j in 0..map.len() {
            if used[j] || ca[i] != cb[j] {
                continue;
            }
            map[i] = j;
            used[j] = true;
            if search(i + 1, map, used, ca, cb, a, target) {
                return true;
            }
            used[j] = false;
        }
        false
    }

    search(0, &mut map, &mut used, &ca, &cb, a, &target)
}

/// Meets of joins on each side; every pair inside a term is orthogonal.
pub fn mge_from_condensed(c: &CondensedStateEquation) -> Result<Equation, MgeError> {
    if !c.is_balanced() {
        return Err(MgeError::Unbalanced {
            bound: 0,
            counts: c.counts(),
        });
    }
    let mut hypotheses: Vec<Hypothesis> = Vec::new();
    for t in c.lhs.iter().chain(&c.rhs) {
        for (i, &x) in t.iter().enumerate() {
            for &y in &t[i + 1..] {
                let h = Hypothesis(x, y);
                if !hypotheses.contains(&h) && !hypotheses.contains(&Hypothesis(y, x)) {
                    hypotheses.push(h);
                }
            }
        }
    }
    let side =
        |terms: &[Vec<usize>]| {
            Term::meet_all(terms.iter().map(|t| {
                Term::join_all(t.iter().map(|&v| Term::Var(v))).expect("terms are nonempty")
            }))
            .expect("sides are nonempty")
        };
    Ok(Equation::new(
        c.variables.clone(),
        hypotheses,
        side(&c.lhs),
        RelationKind::Eq,
        side(&c.rhs),
    )?)
}

/// Condensed equation read off a weakened pair problem, plus the atom each
/// variable stands for.
pub fn build_condensed(
    l: &OmlLattice,
    x: Elem,
    weakening: &Weakening,
) -> Result<(CondensedStateEquation, Vec<Atom>), MgeError> {
    let blocks = l.diagram().blocks();
    let not_x = l.ortho(x);
    let zero = |a: Atom| l.leq(l.atom(a), not_x);

    let lhs_atoms: Vec<Vec<Atom>> = weakening
        .kept
        .iter()
        .map(|&b| {
            blocks[b]
                .iter()
                .copied()
                .filter(|&a| !zero(a))
                .collect::<Vec<_>>()
        })
        .filter(|g| !g.is_empty())
        .collect();
    if lhs_atoms.is_empty() {
        return Err(MgeError::EmptyLhs);
    }
    let mut atoms: Vec<Atom> = Vec::new();
    for &a in lhs_atoms.iter().flatten() {
        if !atoms.contains(&a) {
            atoms.push(a);
        }
    }
    let rhs_atoms: Vec<Vec<Atom>> = weakening
        .weakened
        .iter()
        .map(|&b| {
            blocks[b]
                .iter()
                .copied()
                .filter(|a| atoms.contains(a))
                .collect::<Vec<_>>()
        })
        .filter(|g| !g.is_empty())
        .collect();
    if rhs_atoms.is_empty() {
        return Err(MgeError::EmptyRhs);
    }
    let var: HashMap<Atom, usize> = atoms.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let rename = |groups: Vec<Vec<Atom>>| -> Vec<Vec<usize>> {
        groups
            .into_iter()
            .map(|g| g.iter().map(|a| var[a]).collect())
            .collect()
    };
    let mut c = CondensedStateEquation {
        variables: (0..atoms.len()).map(variable_name).collect(),
        lhs: rename(lhs_atoms),
        rhs: rename(rhs_atoms),
    };
    c.balance()?;
    Ok((c, atoms))
}

/// Everything produced for one refuting lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MgeResult {
    pub x: Elem,
    pub y: Elem,
    pub weakening: Weakening,
    pub condensed: CondensedStateEquation,
    /// Atom standing for each variable.
    pub atoms: Vec<Atom>,
    pub mge: Equation,
    pub witness_assignment: Vec<Elem>,
}

impl MgeResult {
    /// The condensed equation written with atom names, before renaming.
    pub fn atom_form(&self) -> String {
        struct AtomForm<'a>(&'a MgeResult);
        impl fmt::Display for AtomForm<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let name = |v: usize| self.0.atoms[v].to_string();
                write_side(f, &self.0.condensed.lhs, name)?;
                f.write_str("=")?;
                write_side(f, &self.0.condensed.rhs, name)
            }
        }
        AtomForm(self).to_string()
    }

    pub fn block_labels(&self, l: &OmlLattice, blocks: &[usize]) -> Vec<String> {
        blocks
            .iter()
            .map(|&b| block_label(&l.diagram().blocks()[b]))
            .collect()
    }
}

#[derive(Debug, Clone, Default)]
pub struct MgeOptions {
    /// Block relaxation order; diagram order when absent.
    pub order: Option<Vec<usize>>,
    /// Use this pair instead of the first refuting one.
    pub pair: Option<(Elem, Elem)>,
}

/// Runs the pipeline for the given pair problem.
pub fn mge_for_pair(
    l: &OmlLattice,
    base: &PairProblem,
    order: Option<&[usize]>,
) -> Result<MgeResult, MgeError> {
    let weakening = minimize_constraints(base, order)?;
    let (condensed, atoms) = build_condensed(l, base.x, &weakening)?;
    let mge = mge_from_condensed(&condensed)?;
    let witness_assignment: Vec<Elem> = atoms.iter().map(|&a| l.atom(a)).collect();
    if !mge.evaluate_at(l, &witness_assignment)?.is_counterexample() {
        return Err(MgeError::WitnessSurvives);
    }
    Ok(MgeResult {
        x: base.x,
        y: base.y,
        weakening,
        condensed,
        atoms,
        mge,
        witness_assignment,
    })
}

/// Finds a refuting pair with forced minimum 1 and builds an MGE failing
/// on the lattice at the stored witness assignment.
pub fn generate_mge(l: &OmlLattice, options: &MgeOptions) -> Result<MgeResult, MgeError> {
    let base = match options.pair {
        Some((x, y)) => {
            crate::states::pair_problem(l, x, y).map_err(|e| MgeError::NotForced(e.to_string()))?
        }
        None => forced_pair(l)?,
    };
    mge_for_pair(l, &base, options.order.as_deref())
}

fn forced_pair(l: &OmlLattice) -> Result<PairProblem, MgeError> {
    let forced = |v: &StrongSetVerdict| match v {
        StrongSetVerdict::Refutes(rs) => rs
            .iter()
            .find(|r| r.minimum.is_some())
            .map(|r| r.problem.clone()),
        _ => None,
    };
    let first = strong_state_verdict(l, StatesOptions::default());
    match &first {
        StrongSetVerdict::Admits { .. } => return Err(MgeError::AdmitsStrongStates),
        StrongSetVerdict::Stateless => return Err(MgeError::Stateless),
        StrongSetVerdict::Refutes(_) => {}
    }
    if let Some(pp) = forced(&first) {
        return Ok(pp);
    }
    forced(&strong_state_verdict(l, StatesOptions { all_pairs: true }))
        .ok_or(MgeError::NoForcedPair)
}

/// Whether the element is one the condensed construction can name.
pub fn is_atom(l: &OmlLattice, e: Elem) -> bool {
    matches!(l.id(e), ElementId::Atom(_))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::PETERSON;
    use crate::eqn::{check_equation, CheckOptions};
    use crate::greechie::parse_diagram;
    use crate::lattice::build_lattice;
    use crate::simplex::{print_problem, rat};
    use crate::states::pair_problem;

    fn lattice(line: &str) -> OmlLattice {
        build_lattice(&parse_diagram(line).unwrap()).unwrap()
    }

    const WEAKENED_LISTING: &str = "min: m7';
m1 = 1;
m7 + m7' = 1;
m1 + m2 + m3 <= 1;
m3 + m4 + m5 = 1;
m5 + m6 + m7 <= 1;
m7 + m8 + m9 <= 1;
m9 + mA + mB = 1;
mB + mC + m1 <= 1;
m2 + mE + m8 = 1;
m4 + mF + mA <= 1;
m6 + mD + mC = 1;
mD + mE + mF <= 1;
";

    fn peterson_base(l: &OmlLattice) -> PairProblem {
        pair_problem(l, l.find("a1").unwrap(), l.find("a7'").unwrap()).unwrap()
    }

    #[test]
    fn peterson_weakening() {
        let l = lattice(PETERSON);
        let w = minimize_constraints(&peterson_base(&l), None).unwrap();
        assert_eq!(w.weakened, vec![0, 2, 3, 5, 7, 9]);
        assert_eq!(w.kept, vec![1, 4, 6, 8]);
        assert_eq!(print_problem(&w.problem.problem), WEAKENED_LISTING);
        assert_eq!(optimum(&w.problem), Some(rat(1)));
        // every kept block is needed
        for &b in &w.kept {
            let mut pp = w.problem.clone();
            pp.problem.set_relation(pp.block_rows[b], Relation::Le);
            assert!(optimum(&pp).unwrap() < rat(1));
        }
    }

    #[test]
    fn peterson_condensed() {
        let l = lattice(PETERSON);
        let r = mge_for_pair(&l, &peterson_base(&l), None).unwrap();
        assert_eq!(r.atom_form(), "45+9A+E8+6D=56+89+4A+DE");
        assert_eq!(r.condensed.to_string(), "ab+cd+ef+gh=bg+fc+ad+he");
        let eval = r.mge.evaluate_at(&l, &r.witness_assignment).unwrap();
        assert!(eval.hypotheses_hold && !eval.relation_holds);
        assert_eq!(r, generate_mge(&l, &MgeOptions::default()).unwrap());
    }

    #[test]
    fn no_relaxation_possible() {
        let l = lattice("123.");
        let a1 = l.find("a1").unwrap();
        let base = pair_problem(&l, a1, l.find("a2").unwrap()).unwrap();
        assert!(matches!(
            minimize_constraints(&base, None),
            Err(MgeError::NotForced(_))
        ));
        // a pair with x = I forces nothing either
        let base = pair_problem(&l, l.one(), a1).unwrap();
        assert!(minimize_constraints(&base, None).is_err());
        assert_eq!(
            generate_mge(&l, &MgeOptions::default()).unwrap_err(),
            MgeError::AdmitsStrongStates
        );
    }

    #[test]
    fn every_block_needed() {
        // min m2 with m1 = 0 pinned: relaxing the only block frees m2 to 0.
        let mut p = crate::simplex::LpProblem::new();
        let m1 = p.add_variable("m1");
        let m2 = p.add_variable("m2");
        p.set_objective(crate::simplex::LinearForm::sum_of([m2]))
            .unwrap();
        p.add_constraint(vec![(m1, rat(1))], Relation::Le, rat(0))
            .unwrap();
        let row = p
            .add_constraint(vec![(m1, rat(1)), (m2, rat(1))], Relation::Eq, rat(1))
            .unwrap();
        let pp = PairProblem {
            x: Elem::new(2),
            y: Elem::new(3),
            problem: p,
            block_rows: vec![row],
        };
        let w = minimize_constraints(&pp, None).unwrap();
        assert!(w.weakened.is_empty());
        assert_eq!(w.kept, vec![0]);
    }

    #[test]
    fn three_go_condensed() {
        let c = CondensedStateEquation::parse("ad+be+cf=db+ec+fa").unwrap();
        assert!(c.is_balanced());
        let e = mge_from_condensed(&c).unwrap();
        assert_eq!(
            e.to_string(),
            "a _|_ d & b _|_ e & c _|_ f & d _|_ b & e _|_ c & f _|_ a |= (a v d) ^ (b v e) ^ (c v f) = (d v b) ^ (e v c) ^ (f v a)"
        );
        let single =
            mge_from_condensed(&CondensedStateEquation::parse("a+b=b+a").unwrap()).unwrap();
        assert_eq!(single.to_string(), "a ^ b = b ^ a");
        assert!(mge_from_condensed(&CondensedStateEquation::parse("ab=a").unwrap()).is_err());
    }

    #[test]
    fn renaming_equivalence() {
        let p = CondensedStateEquation::parse("ab+cd+ef+gh=bg+fc+ad+he").unwrap();
        let parse = |t| CondensedStateEquation::parse(t).unwrap();
        assert!(p.equivalent(&parse("hg+fe+dc+ba=gb+ce+da+hf")));
        assert!(p.equivalent(&parse("bg+fc+ad+he=ab+cd+ef+gh")));
        // two 4-cycles instead of one 8-cycle
        assert!(!p.equivalent(&parse("ab+cd+ef+gh=bc+da+fg+he")));
        assert!(!p.equivalent(&parse("ad+be+cf=db+ec+fa")));
    }

    #[test]
    fn balancing_repeats_terms() {
        let parse = |t| CondensedStateEquation::parse(t).unwrap();
        let mut c = parse("ab+c=a+bc");
        c.balance().unwrap();
        assert_eq!(c.to_string(), "ab+c=a+bc");
        let mut c = parse("ab+ab=ab");
        c.balance().unwrap();
        assert_eq!(c.to_string(), "ab+ab=ab+ab");
        let mut c = parse("ab+c=a+b+abc");
        c.balance().unwrap();
        assert_eq!(c.to_string(), "ab+c+ab=a+b+abc");
        assert_eq!(
            parse("ab+cd=ac+b+d").balance().unwrap_err(),
            MgeError::TermCounts { lhs: 2, rhs: 3 }
        );
        assert!(matches!(
            parse("ab+a=ab+b").balance(),
            Err(MgeError::Unbalanced { .. })
        ));
    }

    #[test]
    fn mge_holds_on_admitting_lattices() {
        let l = lattice(PETERSON);
        let r = generate_mge(&l, &MgeOptions::default()).unwrap();
        for line in ["123.", "123,345.", "1234."] {
            let a = lattice(line);
            assert!(
                check_equation(&a, &r.mge, CheckOptions::default())
                    .unwrap()
                    .holds(),
                "{line}"
            );
        }
    }

    #[test]
    fn reordered_relaxation_still_refutes() {
        let l = lattice(PETERSON);
        let order: Vec<usize> = (0..10).rev().collect();
        let r = mge_for_pair(&l, &peterson_base(&l), Some(&order)).unwrap();
        assert!(r
            .mge
            .evaluate_at(&l, &r.witness_assignment)
            .unwrap()
            .is_counterexample());
        assert!(is_atom(&l, r.x));
    }
}
