mod support;

use omlkit_core::godp::{ngo_scan, NGoOutcome, ScanOptions};
use omlkit_core::mgegen::{generate_mge, MgeOptions};
use omlkit_core::simplex::{solve, LpOutcome};
use omlkit_core::states::{strong_state_verdict, StatesOptions, StrongSetVerdict};
use omlkit_core::{build_lattice, catalog, parse_diagram};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn verdict_kind(v: &StrongSetVerdict) -> &'static str {
    match v {
        StrongSetVerdict::Admits { .. } => "admits",
        StrongSetVerdict::Refutes(_) => "refutes",
        StrongSetVerdict::Stateless => "stateless",
    }
}

fn first_failure(o: &NGoOutcome) -> Option<usize> {
    match o {
        NGoOutcome::FailsAt { n, .. } => Some(*n),
        _ => None,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn simplex_matches_vertex_enumeration(seed in any::<u64>(), vars in 1usize..=5, rows in 1usize..=4) {
        let p = support::random_lp(&mut StdRng::seed_from_u64(seed), vars, rows);
        let s = solve(&p);
        match (s.outcome, support::vertex_oracle(&p)) {
            (LpOutcome::Optimal { value, point }, Some(best)) => {
                prop_assert_eq!(&value, &best);
                prop_assert!(p.is_feasible(&point));
            }
            (LpOutcome::Infeasible, None) => {}
            (o, b) => prop_assert!(false, "simplex {:?} oracle {:?}", o, b),
        }
    }

    #[test]
    fn verdicts_ignore_block_order(order in Just((0..10).collect::<Vec<usize>>()).prop_shuffle(), which in 0usize..3) {
        let line = [catalog::PETERSON, catalog::PENTAGON, "123,345,567,789,9A1,2BC."][which];
        let d = parse_diagram(line).unwrap();
        let order: Vec<usize> = order.into_iter().filter(|&b| b < d.blocks().len()).collect();
        let base = build_lattice(&d).unwrap();
        let moved = build_lattice(&d.with_block_order(&order)).unwrap();
        let opts = StatesOptions::default();
        prop_assert_eq!(
            verdict_kind(&strong_state_verdict(&base, opts)),
            verdict_kind(&strong_state_verdict(&moved, opts))
        );
        let scan = |l| ngo_scan(l, ScanOptions::default()).unwrap().outcome;
        prop_assert_eq!(first_failure(&scan(&base)), first_failure(&scan(&moved)));
    }
}

#[test]
fn mge_generation_is_deterministic() {
    let l = build_lattice(&parse_diagram(catalog::PETERSON).unwrap()).unwrap();
    let a = generate_mge(&l, &MgeOptions::default()).unwrap();
    let b = generate_mge(&l, &MgeOptions::default()).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.mge.to_string(), b.mge.to_string());
}

#[test]
fn relaxation_orders_all_refute() {
    let l = build_lattice(&parse_diagram(catalog::PETERSON).unwrap()).unwrap();
    for shift in 0..10 {
        let order: Vec<usize> = (0..10).map(|i| (i + shift) % 10).collect();
        let r = generate_mge(
            &l,
            &MgeOptions {
                order: Some(order),
                pair: None,
            },
        )
        .unwrap();
        assert!(r
            .mge
            .evaluate_at(&l, &r.witness_assignment)
            .unwrap()
            .is_counterexample());
        for line in [catalog::BOOLEAN_3, catalog::PENTAGON] {
            let a = build_lattice(&parse_diagram(line).unwrap()).unwrap();
            assert!(omlkit_core::check_equation(&a, &r.mge, Default::default())
                .unwrap()
                .holds());
        }
    }
}
