//! Exhaustive checks of the lattice, ortholattice and orthomodular laws.

use std::fmt;

use super::{Elem, OrthoStructure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Law {
    PartialOrder,
    /// `a <= b` iff `a = a ^ b` iff `b = a v b`.
    OrderAgreesWithOperations,
    Commutativity,
    Associativity,
    Absorption,
    /// `a v a' = 1` and `a ^ a' = 0`.
    Complementation,
    /// `a <= b` implies `b' <= a'`.
    Antitone,
    /// `a'' = a`.
    Involution,
    /// `(a -> b) ^ (b -> a) = 1` iff `a = b`, Sasaki implication.
    Orthomodularity,
    /// `a = (a ^ b) v (a ^ b')` iff `a ^ (a' v b) <= b`.
    CommutationForms,
}

impl Law {
    pub const ALL: [Law; 10] = [
        Law::PartialOrder,
        Law::OrderAgreesWithOperations,
        Law::Commutativity,
        Law::Associativity,
        Law::Absorption,
        Law::Complementation,
        Law::Antitone,
        Law::Involution,
        Law::Orthomodularity,
        Law::CommutationForms,
    ];
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Law::PartialOrder => "partial order",
            Law::OrderAgreesWithOperations => "order/meet/join agreement",
            Law::Commutativity => "commutativity",
            Law::Associativity => "associativity",
            Law::Absorption => "absorption",
            Law::Complementation => "complementation",
            Law::Antitone => "antitone complement",
            Law::Involution => "involution",
            Law::Orthomodularity => "orthomodularity",
            Law::CommutationForms => "commutation forms",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawCheck {
    pub law: Law,
    /// First falsifying tuple in index order, if any.
    pub counterexample: Option<Vec<Elem>>,
}

impl LawCheck {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawReport {
    pub checks: Vec<LawCheck>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(LawCheck::passed)
    }

    pub fn first_failure(&self) -> Option<&LawCheck> {
        self.checks.iter().find(|c| !c.passed())
    }

    pub fn get(&self, law: Law) -> Option<&LawCheck> {
        self.checks.iter().find(|c| c.law == law)
    }
}

fn find1(l: &OrthoStructure, bad: impl Fn(Elem) -> bool) -> Option<Vec<Elem>> {
    l.elements().find(|&a| bad(a)).map(|a| vec![a])
}

fn find2(l: &OrthoStructure, bad: impl Fn(Elem, Elem) -> bool) -> Option<Vec<Elem>> {
    for a in l.elements() {
        for b in l.elements() {
            if bad(a, b) {
                return Some(vec![a, b]);
            }
        }
    }
    None
}

fn find3(l: &OrthoStructure, bad: impl Fn(Elem, Elem, Elem) -> bool) -> Option<Vec<Elem>> {
    for a in l.elements() {
        for b in l.elements() {
            for c in l.elements() {
                if bad(a, b, c) {
                    return Some(vec![a, b, c]);
                }
            }
        }
    }
    None
}

/// Runs every law over all element pairs (and triples where needed).
pub fn verify_laws(l: &OrthoStructure) -> LawReport {
    let one = l.one();
    let zero = l.zero();
    let checks = Law::ALL
        .iter()
        .map(|&law| {
            let counterexample = match law {
                Law::PartialOrder => find1(l, |a| !l.leq(a, a))
                    .or_else(|| find2(l, |a, b| a != b && l.leq(a, b) && l.leq(b, a)))
                    .or_else(|| find3(l, |a, b, c| l.leq(a, b) && l.leq(b, c) && !l.leq(a, c))),
                Law::OrderAgreesWithOperations => find2(l, |a, b| {
                    let le = l.leq(a, b);
                    le != (l.meet(a, b) == a) || le != (l.join(a, b) == b)
                }),
                Law::Commutativity => find2(l, |a, b| {
                    l.meet(a, b) != l.meet(b, a) || l.join(a, b) != l.join(b, a)
                }),
                Law::Associativity => find3(l, |a, b, c| {
                    l.meet(l.meet(a, b), c) != l.meet(a, l.meet(b, c))
                        || l.join(l.join(a, b), c) != l.join(a, l.join(b, c))
                }),
                Law::Absorption => find2(l, |a, b| {
                    l.meet(a, l.join(a, b)) != a || l.join(a, l.meet(a, b)) != a
                }),
                Law::Complementation => find1(l, |a| {
                    l.join(a, l.ortho(a)) != one || l.meet(a, l.ortho(a)) != zero
                }),
                Law::Antitone => find2(l, |a, b| l.leq(a, b) && !l.leq(l.ortho(b), l.ortho(a))),
                Law::Involution => find1(l, |a| l.ortho(l.ortho(a)) != a),
                Law::Orthomodularity => find2(l, |a, b| {
                    let equivalent = l.meet(l.sasaki_imp(a, b), l.sasaki_imp(b, a)) == one;
                    equivalent != (a == b)
                }),
                Law::CommutationForms => find2(l, |a, b| {
                    let bound = l.meet(a, l.join(l.ortho(a), b));
                    l.commutes(a, b) != l.leq(bound, b)
                }),
            };
            LawCheck {
                law,
                counterexample,
            }
        })
        .collect();
    LawReport { checks }
}
