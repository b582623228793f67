//! Built-in equation families.

use super::{parse_equation, EqnError, Equation, RelationKind, Term};

/// Name of the `i`-th generated variable: `a`..`z` without `v`, then
/// `A`..`Z`, then `x51`, `x52`, ... (the last form is not valid input syntax).
pub fn variable_name(i: usize) -> String {
    const LOWER: &str = "abcdefghijklmnopqrstuwxyz";
    const UPPER: &str = "ABCDEFGHIJKLMNOPQRSTUVWXYZ";
    if i < LOWER.len() {
        LOWER[i..=i].to_string()
    } else if i < LOWER.len() + UPPER.len() {
        let j = i - LOWER.len();
        UPPER[j..=j].to_string()
    } else {
        format!("x{i}")
    }
}

fn names(n: usize) -> Vec<String> {
    (0..n).map(variable_name).collect()
}

fn imp(a: usize, b: usize) -> Term {
    Term::imp(Term::Var(a), Term::Var(b))
}

/// `(a1 -> a2) ^ (a2 -> a3) ^ ... ^ (an -> a1)`, variables 0-based.
fn godowski_chain(order: &[usize]) -> Term {
    let n = order.len();
    Term::meet_all((0..n).map(|i| imp(order[i], order[(i + 1) % n]))).expect("n >= 3")
}

/// n-Go in identity form: the Godowski chain from `a1` around to `an`
/// equals the chain taken in the opposite direction.
pub fn generate_ngo(n: usize) -> Result<Equation, EqnError> {
    if n < 3 {
        return Err(EqnError::NgoTooSmall(n));
    }
    let forward: Vec<usize> = (0..n).collect();
    let backward: Vec<usize> = (0..n).rev().collect();
    Equation::new(
        names(n),
        vec![],
        godowski_chain(&forward),
        RelationKind::Eq,
        godowski_chain(&backward),
    )
}

/// n-Go as an inequality: `(a1 -> a2) ^ ... ^ (an -> a1) =< a1 -> an`.
pub fn generate_ngo_implicational(n: usize) -> Result<Equation, EqnError> {
    if n < 3 {
        return Err(EqnError::NgoTooSmall(n));
    }
    let forward: Vec<usize> = (0..n).collect();
    Equation::new(
        names(n),
        vec![],
        godowski_chain(&forward),
        RelationKind::Le,
        imp(0, n - 1),
    )
}

/// The condition `a1 _|_ b1 & a2 _|_ b2 & a1 _|_ a2 |= (a1 v b1) ^ (a2 v b2) =< b1 v b2 v (a1 v a2)'`,
/// with `a1, b1, a2, b2` written `a, b, c, d`. It holds in every OML.
pub fn mayet_e2_condition() -> Equation {
    parse_equation("a _|_ b & c _|_ d & a _|_ c |= (a v b) ^ (c v d) =< b v d v (a v c)'")
        .expect("built-in equation parses")
}
