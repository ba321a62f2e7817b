mod common;

use indpath_core::constellation::{
    build_tr_constellation, decompose_star_forest, is_constellation, is_constellation_inductive, mirror_witness,
    star_condition_fast, star_condition_pairwise, validate_witness, ConstellationWitness, OrientedStar, Shape,
};
use indpath_core::OrderedGraph;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[test]
fn exhaustive_up_to_seven_vertices() {
    let mut yes = 0;
    for n in 1..=7 {
        for h in common::all_star_forests(n) {
            let w = is_constellation(&h);
            assert_eq!(w.is_some(), is_constellation_inductive(&h), "{:?}", h.edges().collect::<Vec<_>>());
            if let Some(w) = w {
                assert!(validate_witness(&h, &w));
                assert!(star_condition_pairwise(&w));
                yes += 1;
            }
        }
    }
    assert!(yes > 0);
}

#[test]
fn builders_are_constellations() {
    for t in 1..=5 {
        for r in 1..=4 {
            for shape in [Shape::Sequential, Shape::Nested] {
                let h = build_tr_constellation(t, r, shape).unwrap();
                let w = is_constellation(&h).expect("builder output is a constellation");
                assert!(validate_witness(&h, &w));
                assert_eq!(w.stars.len(), t);
                assert!(w.stars.iter().all(|s| s.arity() == r));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn recognizers_agree_on_random_forests(seed in any::<u64>(), n in 2usize..=14) {
        let h = common::random_star_forest(&mut rng(seed), n);
        let w = is_constellation(&h);
        prop_assert_eq!(w.is_some(), is_constellation_inductive(&h));
        if let Some(w) = w {
            prop_assert!(validate_witness(&h, &w));
            prop_assert!(star_condition_pairwise(&w));
            prop_assert!(star_condition_fast(&w, h.n()));
        }
    }

    #[test]
    fn generated_constellations_are_recognized(seed in any::<u64>(), t in 1usize..=6, r in 1usize..=3) {
        let h = common::random_constellation(&mut rng(seed), t, r);
        prop_assert_eq!(h.n(), t * (r + 1));
        let w = is_constellation(&h);
        prop_assert!(w.is_some());
        prop_assert!(validate_witness(&h, &w.unwrap()));
        prop_assert!(is_constellation_inductive(&h));
    }

    #[test]
    fn reversal_symmetry(seed in any::<u64>(), n in 2usize..=14) {
        let h = common::random_star_forest(&mut rng(seed), n);
        let rev = h.reversed();
        let (a, b) = (is_constellation(&h), is_constellation(&rev));
        prop_assert_eq!(a.is_some(), b.is_some());
        if let Some(w) = a {
            let m = mirror_witness(&w, h.n());
            prop_assert!(validate_witness(&rev, &m));
        }
    }

    #[test]
    fn fast_and_pairwise_checks_agree(seed in any::<u64>(), n in 2usize..=14) {
        use rand::seq::SliceRandom;
        let mut r = rng(seed);
        let h = common::random_star_forest(&mut r, n);
        let Some(forest) = decompose_star_forest(&h) else { return Ok(()) };
        let mut order: Vec<usize> = (0..forest.stars.len()).collect();
        order.shuffle(&mut r);
        let w = ConstellationWitness { stars: forest.stars, order };
        prop_assert_eq!(star_condition_pairwise(&w), star_condition_fast(&w, n));
    }

    #[test]
    fn mutated_witnesses_are_rejected(seed in any::<u64>(), t in 2usize..=5, r in 1usize..=3, which in 0usize..4) {
        let h = common::random_constellation(&mut rng(seed), t, r);
        let mut w = is_constellation(&h).unwrap();
        match which {
            // Drop a star: its edges are no longer covered.
            0 => {
                let gone = w.order.pop().unwrap();
                w.stars.remove(gone);
                for i in w.order.iter_mut() {
                    if *i > gone {
                        *i -= 1;
                    }
                }
            }
            // Repeat an index in the order.
            1 => {
                let first = w.order[0];
                *w.order.last_mut().unwrap() = first;
            }
            // Move a leaf onto a vertex that is not its neighbour.
            2 => {
                let s = &w.stars[0];
                let mut leaves = s.leaves.clone();
                let bad = (1..=h.n()).find(|&v| v != s.center && !h.has_edge(s.center, v)).unwrap();
                leaves[0] = bad;
                w.stars[0] = OrientedStar { center: s.center, leaves, orientation: s.orientation };
            }
            // Claim a pattern with one edge fewer.
            _ => {
                let mut edges: Vec<_> = h.edges().collect();
                edges.pop();
                let smaller = OrderedGraph::from_edges(h.n(), edges).unwrap();
                prop_assert!(!validate_witness(&smaller, &w));
                return Ok(());
            }
        }
        prop_assert!(!validate_witness(&h, &w));
    }
}

#[test]
fn reversing_the_order_of_a_nested_constellation_fails() {
    let h = build_tr_constellation(3, 2, Shape::Nested).unwrap();
    let mut w = is_constellation(&h).unwrap();
    w.order.reverse();
    assert!(!star_condition_pairwise(&w));
    assert!(!validate_witness(&h, &w));
}
