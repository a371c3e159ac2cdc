use std::collections::BTreeSet;

use proptest::prelude::*;

use spinecycles::arith::next_prime;
use spinecycles::cycles::{census, enumerate_cycles};
use spinecycles::predictor::{disc_set_exact, disc_set_exact_by_difference, Predictor};
use spinecycles::ssgraph::build_graph;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn residue_table_matches_predictions(ell in prop::sample::select(vec![2u64, 3, 5]), raw in 0u64..400_000) {
        let pred = Predictor::new(ell, 3).unwrap();
        let p = next_prime(pred.bound().operative().to_integer() + raw);
        let table = pred.residue_census();
        let direct = pred.predict(p).unwrap();
        prop_assert!(direct.valid);
        prop_assert_eq!(table.entry(table.residue_of(p)), Some((direct.n_s, direct.n_t)));
        prop_assert!(direct.n_s <= direct.n_t);
        prop_assert_eq!(direct.n_s % 2, 0);
        prop_assert_eq!(direct.n_t % 2, 0);
    }

    #[test]
    fn exact_sets_agree_across_routes(ell in prop::sample::select(vec![2u64, 3, 5, 7]), r in 1u32..=6) {
        prop_assert_eq!(
            disc_set_exact(ell, r).unwrap().values(),
            disc_set_exact_by_difference(ell, r).unwrap().values()
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn graph_counts_match_formula_past_bound(raw in 2783u64..9000) {
        let p = next_prime(raw);
        let g = build_graph(p, 3, raw).unwrap();
        let cycles = enumerate_cycles(&g, 3).unwrap();
        let set: BTreeSet<_> = cycles.iter().cloned().collect();
        for c in &cycles {
            prop_assert!(set.contains(&c.opposite(&g)));
        }
        let c = census(&g, 3).unwrap();
        if !c.tainted_present {
            let pred = Predictor::new(3, 3).unwrap().predict(p).unwrap();
            prop_assert_eq!((c.n_s_graph, c.n_t_graph), (pred.n_s, pred.n_t));
            prop_assert!(c.spine_count_histogram.keys().all(|&k| k <= 1));
        }
    }

    #[test]
    fn seed_does_not_change_graph(p in prop::sample::select(vec![1009u64, 1013, 1019, 1021]), seed in any::<u64>()) {
        prop_assert_eq!(build_graph(p, 5, seed).unwrap(), build_graph(p, 5, 0).unwrap());
    }
}
