//! Exhaustive assignment search.
//!
//! Assignments are enumerated with the last variable varying fastest and
//! elements in table order. Sub-terms are hash-consed and evaluated as soon
//! as their last variable is bound, and each hypothesis prunes the search
//! at the depth where both of its variables are known.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use super::{EqnError, Equation, RelationKind, Term};
use crate::lattice::{Elem, OrthoStructure};

pub const DEFAULT_VAR_CAP: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    /// Refuse equations with more variables than this.
    pub var_cap: usize,
    /// Split the search over the first variable's values.
    pub parallel: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            var_cap: DEFAULT_VAR_CAP,
            parallel: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub verdict: Verdict,
    /// First falsifying assignment, one element per variable.
    pub witness: Option<Vec<Elem>>,
    /// Complete assignments that satisfied the hypotheses and had the
    /// relation evaluated, up to and including the witness.
    pub assignments_tried: u64,
}

impl CheckResult {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Op {
    Var(usize),
    Const(u16),
    Not(usize),
    Meet(usize, usize),
    Join(usize, usize),
    Imp(usize, usize),
}

/// An equation flattened into slots grouped by the depth at which they
/// become computable.
struct Program {
    ops: Vec<Op>,
    /// `by_depth[d]` lists slots computable once variables `0..d` are bound.
    by_depth: Vec<Vec<usize>>,
    /// Hypotheses (as variable pairs) checkable at each depth.
    hyps_at: Vec<Vec<(usize, usize)>>,
    lhs: usize,
    rhs: usize,
    le: bool,
}

struct Compiler<'a> {
    l: &'a OrthoStructure,
    ops: Vec<Op>,
    depth: Vec<usize>,
    seen: HashMap<Op, usize>,
}

impl Compiler<'_> {
    fn push(&mut self, op: Op, depth: usize) -> usize {
        if let Some(&slot) = self.seen.get(&op) {
            return slot;
        }
        self.ops.push(op);
        self.depth.push(depth);
        self.seen.insert(op, self.ops.len() - 1);
        self.ops.len() - 1
    }

    fn term(&mut self, t: &Term) -> usize {
        match t {
            Term::Var(i) => self.push(Op::Var(*i), i + 1),
            Term::Zero => self.push(Op::Const(self.l.zero().index() as u16), 0),
            Term::One => self.push(Op::Const(self.l.one().index() as u16), 0),
            Term::Not(a) => {
                let a = self.term(a);
                self.push(Op::Not(a), self.depth[a])
            }
            Term::Meet(a, b) | Term::Join(a, b) | Term::Imp(a, b) => {
                let (a, b) = (self.term(a), self.term(b));
                let d = self.depth[a].max(self.depth[b]);
                let op = match t {
                    Term::Meet(..) => Op::Meet(a, b),
                    Term::Join(..) => Op::Join(a, b),
                    _ => Op::Imp(a, b),
                };
                self.push(op, d)
            }
        }
    }
}

impl Program {
    fn compile(l: &OrthoStructure, e: &Equation) -> Program {
        let k = e.variables().len();
        let mut c = Compiler {
            l,
            ops: Vec::new(),
            depth: Vec::new(),
            seen: HashMap::new(),
        };
        let lhs = c.term(e.lhs());
        let rhs = c.term(e.rhs());
        let mut by_depth = vec![Vec::new(); k + 1];
        for (slot, &d) in c.depth.iter().enumerate() {
            by_depth[d].push(slot);
        }
        let mut hyps_at = vec![Vec::new(); k + 1];
        for h in e.hypotheses() {
            hyps_at[h.0.max(h.1) + 1].push((h.0, h.1));
        }
        Program {
            ops: c.ops,
            by_depth,
            hyps_at,
            lhs,
            rhs,
            le: e.kind() == RelationKind::Le,
        }
    }

    #[inline]
    fn eval_depth(&self, l: &OrthoStructure, d: usize, assignment: &[Elem], slots: &mut [Elem]) {
        for &s in &self.by_depth[d] {
            slots[s] = match self.ops[s] {
                Op::Var(i) => assignment[i],
                Op::Const(c) => Elem::new(c as usize),
                Op::Not(a) => l.ortho(slots[a]),
                Op::Meet(a, b) => l.meet(slots[a], slots[b]),
                Op::Join(a, b) => l.join(slots[a], slots[b]),
                Op::Imp(a, b) => l.sasaki_imp(slots[a], slots[b]),
            };
        }
    }

    #[inline]
    fn hyps_ok(&self, l: &OrthoStructure, d: usize, assignment: &[Elem]) -> bool {
        self.hyps_at[d]
            .iter()
            .all(|&(x, y)| l.orthogonal(assignment[x], assignment[y]))
    }

    #[inline]
    fn relation_holds(&self, l: &OrthoStructure, slots: &[Elem]) -> bool {
        let (a, b) = (slots[self.lhs], slots[self.rhs]);
        if self.le {
            l.leq(a, b)
        } else {
            a == b
        }
    }
}

struct Search<'a> {
    l: &'a OrthoStructure,
    prog: &'a Program,
    k: usize,
    assignment: Vec<Elem>,
    slots: Vec<Elem>,
    tried: u64,
    /// Index of the earliest failing top-level branch seen by any worker.
    cutoff: Option<(&'a AtomicUsize, usize)>,
}

impl Search<'_> {
    fn cancelled(&self) -> bool {
        self.cutoff
            .is_some_and(|(best, me)| best.load(Ordering::Relaxed) < me)
    }

    /// Depth-first search from `depth` (variables `0..depth` are bound).
    fn run(&mut self, depth: usize) -> bool {
        if depth == self.k {
            self.tried += 1;
            return !self.prog.relation_holds(self.l, &self.slots);
        }
        if depth == 1 && self.cancelled() {
            return false;
        }
        for e in self.l.elements() {
            self.assignment[depth] = e;
            if !self.prog.hyps_ok(self.l, depth + 1, &self.assignment) {
                continue;
            }
            self.prog
                .eval_depth(self.l, depth + 1, &self.assignment, &mut self.slots);
            if self.run(depth + 1) {
                return true;
            }
        }
        false
    }
}

/// Checks `e` on every assignment of elements of `l` to its variables.
pub fn check_equation(
    l: &OrthoStructure,
    e: &Equation,
    options: CheckOptions,
) -> Result<CheckResult, EqnError> {
    let k = e.variables().len();
    if k > options.var_cap {
        return Err(EqnError::TooManyVariables {
            count: k,
            cap: options.var_cap,
        });
    }
    let prog = Program::compile(l, e);
    let mut base = Search {
        l,
        prog: &prog,
        k,
        assignment: vec![l.zero(); k],
        slots: vec![l.zero(); prog.ops.len()],
        tried: 0,
        cutoff: None,
    };
    prog.eval_depth(l, 0, &base.assignment, &mut base.slots);

    if k == 0 || !options.parallel {
        let failed = base.run(0);
        return Ok(result(
            failed,
            base.tried,
            failed.then(|| base.assignment.clone()),
        ));
    }

    let best = AtomicUsize::new(usize::MAX);
    let branches: Vec<(u64, Option<Vec<Elem>>)> = (0..l.len())
        .into_par_iter()
        .map(|first| {
            let mut s = Search {
                l,
                prog: &prog,
                k,
                assignment: base.assignment.clone(),
                slots: base.slots.clone(),
                tried: 0,
                cutoff: Some((&best, first)),
            };
            s.assignment[0] = Elem::new(first);
            if !prog.hyps_ok(l, 1, &s.assignment) {
                return (0, None);
            }
            prog.eval_depth(l, 1, &s.assignment, &mut s.slots);
            if s.run(1) {
                best.fetch_min(first, Ordering::Relaxed);
                (s.tried, Some(s.assignment))
            } else {
                (s.tried, None)
            }
        })
        .collect();

    let mut tried = 0;
    for (count, witness) in branches {
        tried += count;
        if witness.is_some() {
            return Ok(result(true, tried, witness));
        }
    }
    Ok(result(false, tried, None))
}

fn result(failed: bool, tried: u64, witness: Option<Vec<Elem>>) -> CheckResult {
    CheckResult {
        verdict: if failed {
            Verdict::Fails
        } else {
            Verdict::Holds
        },
        witness,
        assignments_tried: tried,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::eqn::{generate_ngo, generate_ngo_implicational, parse_equation};
    use crate::greechie::parse_diagram;
    use crate::lattice::{build_lattice, OmlLattice};

    fn lat(line: &str) -> OmlLattice {
        build_lattice(&parse_diagram(line).unwrap()).unwrap()
    }

    /// Plain odometer enumeration with no pruning or sharing.
    fn naive(l: &OrthoStructure, e: &Equation) -> (Verdict, Option<Vec<Elem>>, u64) {
        let k = e.variables().len();
        let n = l.len();
        let mut idx = vec![0usize; k];
        let mut tried = 0;
        loop {
            let a: Vec<Elem> = idx.iter().map(|&i| Elem::new(i)).collect();
            let p = e.evaluate_at(l, &a).unwrap();
            if p.hypotheses_hold {
                tried += 1;
                if !p.relation_holds {
                    return (Verdict::Fails, Some(a), tried);
                }
            }
            let mut pos = k;
            loop {
                if pos == 0 {
                    return (Verdict::Holds, None, tried);
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < n {
                    break;
                }
                idx[pos] = 0;
            }
        }
    }

    #[test]
    fn three_go_holds_on_boolean() {
        let l = lat(catalog::BOOLEAN_3);
        let r = check_equation(&l, &generate_ngo(3).unwrap(), CheckOptions::default()).unwrap();
        assert!(r.holds());
        assert_eq!(r.assignments_tried, 512);
    }

    #[test]
    fn four_go_fails_on_peterson() {
        let l = lat(catalog::PETERSON);
        let e = generate_ngo(4).unwrap();
        let r = check_equation(&l, &e, CheckOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Fails);
        let w = r.witness.unwrap();
        assert!(e.evaluate_at(&l, &w).unwrap().is_counterexample());
    }

    #[test]
    fn distinct_variables_first_witness() {
        let l = lat(catalog::BOOLEAN_3);
        let e = parse_equation("a = b").unwrap();
        let r = check_equation(&l, &e, CheckOptions::default()).unwrap();
        assert_eq!(r.witness, Some(vec![l.zero(), l.one()]));
        assert_eq!(r.assignments_tried, 2);
        assert_eq!(
            e.format_assignment(r.witness.as_ref().unwrap(), |x| l.name(x)),
            "a=0 b=I"
        );
    }

    #[test]
    fn variable_cap() {
        let l = lat(catalog::BOOLEAN_3);
        let e = generate_ngo(4).unwrap();
        let opts = CheckOptions {
            var_cap: 3,
            ..Default::default()
        };
        assert_eq!(
            check_equation(&l, &e, opts).unwrap_err(),
            EqnError::TooManyVariables { count: 4, cap: 3 }
        );
    }

    #[test]
    fn closed_equations() {
        let l = lat(catalog::BOOLEAN_3);
        let r = check_equation(
            &l,
            &parse_equation("0 = 1").unwrap(),
            CheckOptions::default(),
        )
        .unwrap();
        assert_eq!((r.verdict, r.assignments_tried), (Verdict::Fails, 1));
        assert_eq!(r.witness, Some(vec![]));
        let r = check_equation(
            &l,
            &parse_equation("0' = 1").unwrap(),
            CheckOptions::default(),
        )
        .unwrap();
        assert!(r.holds());
    }

    #[test]
    fn matches_naive_enumeration() {
        let eqs = [
            "a _|_ b |= a v b = b v a",
            "a _|_ b |= a ^ (a' v b) =< b",
            "a ^ (a' v b) =< b",
            "(a -> b) ^ (b -> c) =< a -> c",
            "a _|_ b & b _|_ c |= (a v b) ^ (b v c) = b",
            "c _|_ a |= a v c' = (a -> c) v b",
        ];
        for line in [catalog::BOOLEAN_3, "123,345.", catalog::PENTAGON] {
            let l = lat(line);
            for text in eqs {
                let e = parse_equation(text).unwrap();
                let (verdict, witness, tried) = naive(&l, &e);
                for parallel in [false, true] {
                    let r = check_equation(
                        &l,
                        &e,
                        CheckOptions {
                            parallel,
                            ..Default::default()
                        },
                    )
                    .unwrap();
                    assert_eq!(r.verdict, verdict, "{text} on {line}");
                    assert_eq!(r.witness, witness, "{text} on {line}");
                    assert_eq!(r.assignments_tried, tried, "{text} on {line}");
                }
            }
        }
    }

    #[test]
    fn verdict_independent_of_variable_order() {
        let l = lat(catalog::PETERSON);
        let forward = generate_ngo_implicational(4).unwrap();
        // same equation with variables introduced in reverse order
        let reversed =
            parse_equation("(d -> c) ^ (c -> b) ^ (b -> a) ^ (a -> d) =< d -> a").unwrap();
        let a = check_equation(&l, &forward, CheckOptions::default()).unwrap();
        let b = check_equation(&l, &reversed, CheckOptions::default()).unwrap();
        assert_eq!(a.verdict, b.verdict);
    }
}
