//! Property tests for the structural invariants of the model.

use proptest::prelude::*;

use swap_schelling::analysis::{empirical_poa, PoaValue, ScanOptions};
use swap_schelling::dynamics::{classify_swap, enumerate_profitable, Locality, SwapCandidate};
use swap_schelling::equilibrium::{check_characterization, is_equilibrium};
use swap_schelling::game::{
    apply_swap, phi, psi, social_welfare, utility, Coloring, TypeVector,
};
use swap_schelling::graph::{parse_graph, serialize_graph, Graph};
use swap_schelling::rational::Rational;
use swap_schelling::rng::SplitMix64;
use swap_schelling::suites::{random_coloring, random_connected_graph};

/// Connected graph, a coloring on it, and the seed that derived them.
fn instance() -> impl Strategy<Value = (Graph, Coloring)> {
    (2usize..=9, any::<u64>()).prop_map(|(n, seed)| {
        let mut rng = SplitMix64::new(seed);
        let g = random_connected_graph(n, &mut rng);
        let o = 1 + rng.next_usize(n - 1);
        let t = TypeVector::new(vec![o, n - o]).unwrap();
        let c = random_coloring(&t, &mut rng);
        (g, c)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn utilities_stay_in_unit_interval((g, c) in instance()) {
        for v in 0..g.n() {
            let u = utility(&g, &c, v);
            prop_assert!(u >= Rational::ZERO && u <= Rational::ONE);
            // utility 1 exactly when the whole neighborhood shares the color
            let all_same = g.neighbors(v).iter().all(|&w| c.color(w) == c.color(v));
            prop_assert_eq!(u == Rational::ONE, all_same && g.degree(v) > 0);
        }
    }

    #[test]
    fn welfare_matches_monochromatic_edge_sum((g, c) in instance()) {
        let mut edge_sum = Rational::ZERO;
        for (u, v) in g.edges() {
            if c.color(u) == c.color(v) {
                edge_sum = edge_sum
                    + Rational::new(1, g.degree(u) as i64)
                    + Rational::new(1, g.degree(v) as i64);
            }
        }
        prop_assert_eq!(social_welfare(&g, &c), edge_sum);
    }

    #[test]
    fn classification_agrees_with_recomputation((g, c) in instance()) {
        for u in 0..g.n() {
            for v in (u + 1)..g.n() {
                if c.color(u) == c.color(v) {
                    continue;
                }
                let cand = SwapCandidate { u, v, is_local: g.has_edge(u, v) };
                let class = classify_swap(&g, &c, &cand).unwrap();
                let after = apply_swap(&c, u, v).unwrap();
                prop_assert_eq!(
                    class.delta_phi,
                    phi(&g, &after) as i64 - phi(&g, &c) as i64
                );
                let (pb, pa) = (psi(&g, &c), psi(&g, &after));
                prop_assert_eq!(
                    class.delta_psi,
                    (pa.phi as i64 - pb.phi as i64, pa.nonzero as i64 - pb.nonzero as i64)
                );
                // swap gains match recomputed utilities
                prop_assert_eq!(class.gain_u, utility(&g, &after, v) - utility(&g, &c, u));
                prop_assert_eq!(class.gain_v, utility(&g, &after, u) - utility(&g, &c, v));
            }
        }
    }

    #[test]
    fn apply_swap_is_involution_preserving_counts((g, c) in instance()) {
        for u in 0..g.n() {
            for v in (u + 1)..g.n() {
                if c.color(u) == c.color(v) {
                    continue;
                }
                let once = apply_swap(&c, u, v).unwrap();
                prop_assert_eq!(once.color_counts(), c.color_counts());
                prop_assert_eq!(apply_swap(&once, u, v).unwrap(), c.clone());
            }
        }
    }

    #[test]
    fn profitable_swaps_are_bichromatic_and_mutual((g, c) in instance()) {
        for (cand, class) in enumerate_profitable(&g, &c, Locality::Global) {
            prop_assert_ne!(c.color(cand.u), c.color(cand.v));
            prop_assert!(class.gain_u.is_positive() && class.gain_v.is_positive());
            prop_assert_eq!(cand.is_local, g.has_edge(cand.u, cand.v));
        }
    }

    #[test]
    fn global_equilibria_are_local_equilibria((g, c) in instance()) {
        if is_equilibrium(&g, &c, Locality::Global).is_equilibrium {
            prop_assert!(is_equilibrium(&g, &c, Locality::Local).is_equilibrium);
        }
    }

    #[test]
    fn characterization_matches_direct_check((g, c) in instance()) {
        prop_assert_eq!(
            check_characterization(&g, &c).unwrap(),
            is_equilibrium(&g, &c, Locality::Global).is_equilibrium
        );
    }

    #[test]
    fn graph_serialization_round_trips(n in 2usize..=10, seed in any::<u64>()) {
        let mut rng = SplitMix64::new(seed);
        let g = random_connected_graph(n, &mut rng);
        let text = serialize_graph(&g);
        prop_assert_eq!(parse_graph(&text).unwrap(), g);
    }

    #[test]
    fn global_poa_never_exceeds_local_poa(n in 4usize..=8, seed in any::<u64>()) {
        let mut rng = SplitMix64::new(seed);
        let g = random_connected_graph(n, &mut rng);
        let o = 1 + rng.next_usize(n / 2);
        let t = TypeVector::two(o, n - o).unwrap();
        let opts = ScanOptions::default();
        let global = empirical_poa(&g, &t, Locality::Global, &opts).unwrap();
        let local = empirical_poa(&g, &t, Locality::Local, &opts).unwrap();
        // every swap equilibrium is a local swap equilibrium, so the local
        // worst can only be worse
        match (global.poa, local.poa) {
            (PoaValue::Finite(a), PoaValue::Finite(b)) => prop_assert!(a <= b),
            (_, PoaValue::Infinity) => {}
            (PoaValue::NoEquilibrium, _) => {}
            (a, b) => prop_assert!(false, "global {a} vs local {b}"),
        }
        // the optimum never exceeds n - 1/o - 1/b when both colors appear
        let cap = Rational::from_int(n as i64)
            - Rational::new(1, o as i64)
            - Rational::new(1, (n - o) as i64);
        prop_assert!(global.opt_welfare <= cap);
    }
}
