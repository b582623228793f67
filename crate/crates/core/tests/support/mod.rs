#![allow(dead_code, clippy::needless_range_loop)]

use num_traits::{One, Signed, Zero};
use omlkit_core::simplex::{rat, LinearForm, LpProblem, Rational, Relation};
use omlkit_core::{build_lattice, catalog, parse_diagram, OmlLattice};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Law-verified lattices of at most 40 elements.
pub fn small_corpus() -> Vec<(String, OmlLattice)> {
    let lines = [
        catalog::BOOLEAN_3.to_string(),
        catalog::BOOLEAN_4.to_string(),
        catalog::chain3(2),
        catalog::chain3(3),
        catalog::chain3(5),
        catalog::star3(3),
        catalog::chain4(2),
        catalog::PENTAGON.to_string(),
        catalog::HEXAGON.to_string(),
        catalog::loop3(7),
        catalog::PETERSON.to_string(),
        "1234,456,678,89A,AB1.".to_string(),
        "123,345,567,789,9A1,2BC.".to_string(),
    ];
    lines
        .into_iter()
        .map(|line| {
            let l = build_lattice(&parse_diagram(&line).unwrap())
                .unwrap_or_else(|e| panic!("{line}: {e}"));
            assert!(l.len() <= 40, "{line} has {} elements", l.len());
            (line, l)
        })
        .collect()
}

/// Solves a square system exactly; `None` when singular.
fn solve_square(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = &a[r][col] / &a[col][col];
                for c in col..n {
                    let d = &f * &a[col][c];
                    a[r][c] -= d;
                }
                let d = &f * &b[col];
                b[r] -= d;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

fn combinations(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for i in start..n {
        cur.push(i);
        combinations(n, k, i + 1, cur, out);
        cur.pop();
    }
}

/// Minimum over all basic feasible solutions: every choice of `n` rows
/// among the constraints and the bounds `x >= 0`, solved as equalities.
/// `None` when no vertex is feasible. Only meaningful for bounded problems.
pub fn vertex_oracle(p: &LpProblem) -> Option<Rational> {
    let n = p.variables().len();
    let mut rows: Vec<(Vec<Rational>, Rational)> = p
        .constraints()
        .iter()
        .map(|c| {
            let mut row = vec![Rational::zero(); n];
            for (v, coef) in &c.terms {
                row[*v] += coef;
            }
            (row, c.rhs.clone())
        })
        .collect();
    for i in 0..n {
        let mut row = vec![Rational::zero(); n];
        row[i] = Rational::one();
        rows.push((row, Rational::zero()));
    }
    let mut subsets = Vec::new();
    combinations(rows.len(), n, 0, &mut Vec::new(), &mut subsets);
    subsets
        .into_iter()
        .filter_map(|s| {
            let a = s.iter().map(|&i| rows[i].0.clone()).collect();
            let b = s.iter().map(|&i| rows[i].1.clone()).collect();
            solve_square(a, b)
        })
        .filter(|x| p.is_feasible(x))
        .map(|x| p.objective().eval(&x))
        .min()
}

/// A bounded random LP: every variable is capped by a `<=` row.
pub fn random_lp(rng: &mut StdRng, vars: usize, rows: usize) -> LpProblem {
    let mut p = LpProblem::new();
    for i in 0..vars {
        p.add_variable(format!("x{i}"));
    }
    let objective = LinearForm {
        terms: (0..vars).map(|v| (v, rat(rng.gen_range(-4..=4)))).collect(),
        constant: rat(rng.gen_range(-2..=2)),
    };
    p.set_objective(objective).unwrap();
    for _ in 0..rows {
        let mut terms = Vec::new();
        for v in 0..vars {
            if rng.gen_bool(0.7) {
                terms.push((v, rat(rng.gen_range(-3..=3))));
            }
        }
        let relation = if rng.gen_bool(0.3) {
            Relation::Eq
        } else {
            Relation::Le
        };
        p.add_constraint(terms, relation, rat(rng.gen_range(-2..=6)))
            .unwrap();
    }
    for v in 0..vars {
        p.add_constraint(vec![(v, rat(1))], Relation::Le, rat(rng.gen_range(1..=5)))
            .unwrap();
    }
    p
}

pub fn lp_fixtures() -> Vec<LpProblem> {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut out: Vec<LpProblem> = (0..16)
        .map(|i| random_lp(&mut rng, 2 + i % 5, 1 + i % 4))
        .collect();
    // degenerate vertex: three constraints through one point in the plane
    let mut p = LpProblem::new();
    let x = p.add_variable("x");
    let y = p.add_variable("y");
    p.set_objective(LinearForm {
        terms: vec![(x, rat(-1)), (y, rat(-1))],
        constant: rat(0),
    })
    .unwrap();
    p.add_constraint(vec![(x, rat(1)), (y, rat(1))], Relation::Le, rat(2))
        .unwrap();
    p.add_constraint(vec![(x, rat(1))], Relation::Le, rat(1))
        .unwrap();
    p.add_constraint(vec![(y, rat(1))], Relation::Le, rat(1))
        .unwrap();
    p.add_constraint(vec![(x, rat(2)), (y, rat(-1))], Relation::Le, rat(1))
        .unwrap();
    out.push(p);
    out
}

pub fn is_nonnegative(x: &[Rational]) -> bool {
    x.iter().all(|v| !v.is_negative())
}
