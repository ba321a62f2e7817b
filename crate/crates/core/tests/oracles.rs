mod common;

use indpath_core::decomposition::longest_induced_path_decomposed;
use indpath_core::io::{parse_edge_list, write_edge_list};
use indpath_core::oracle::{is_induced_path, longest_induced_path_oracle};
use indpath_core::ordered::{contains_pattern, gen_halfgraph, is_embedding};
use indpath_core::OrderedGraph;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_graph(seed: u64, n: usize, density: f64) -> OrderedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 1..=n {
        for v in u + 1..=n {
            if rng.gen_bool(density) {
                edges.push((u, v));
            }
        }
    }
    OrderedGraph::from_edges(n, edges).unwrap()
}

/// Longest induced path by trying every vertex subset.
fn brute_force(g: &OrderedGraph) -> usize {
    let n = g.n();
    let mut best = 0;
    for mask in 1u32..(1 << n) {
        let vs: Vec<usize> = (1..=n).filter(|&v| mask >> (v - 1) & 1 == 1).collect();
        if vs.len() <= best {
            continue;
        }
        let deg = |v: usize| vs.iter().filter(|&&w| g.has_edge(v, w)).count();
        let edges: usize = vs.iter().map(|&v| deg(v)).sum::<usize>() / 2;
        if edges + 1 != vs.len() || vs.iter().any(|&v| deg(v) > 2) {
            continue;
        }
        // A forest with max degree 2 and one fewer edge than vertices is a path.
        let mut seen = vec![vs[0]];
        let mut i = 0;
        while i < seen.len() {
            let v = seen[i];
            for &w in &vs {
                if g.has_edge(v, w) && !seen.contains(&w) {
                    seen.push(w);
                }
            }
            i += 1;
        }
        if seen.len() == vs.len() {
            best = vs.len();
        }
    }
    best
}

#[test]
fn halfgraph_longest_induced_path_is_four() {
    for n in [8, 12, 20] {
        let g = gen_halfgraph(n).unwrap();
        let dfs = longest_induced_path_oracle(g.graph(), usize::MAX).unwrap();
        assert_eq!(dfs.length, 4);
        assert_eq!(longest_induced_path_decomposed(g.graph()).unwrap().length, 4);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn search_matches_brute_force(seed in any::<u64>(), n in 1usize..=11, d in 0.1f64..0.7) {
        let g = random_graph(seed, n, d);
        let r = longest_induced_path_oracle(&g, usize::MAX).unwrap();
        prop_assert!(!r.capped);
        prop_assert_eq!(r.length, brute_force(&g));
        prop_assert!(is_induced_path(&g, &r.witness));
    }

    #[test]
    fn decomposition_matches_search(seed in any::<u64>(), n in 1usize..=26, d in 0.05f64..0.25) {
        let g = random_graph(seed, n, d);
        // Dense draws can exceed the supported separator size.
        let Ok(b) = longest_induced_path_decomposed(&g) else { return Ok(()) };
        let a = longest_induced_path_oracle(&g, usize::MAX).unwrap();
        prop_assert_eq!(a.length, b.length);
        prop_assert_eq!(b.witness.len(), b.length);
        prop_assert!(is_induced_path(&g, &b.witness));
    }

    #[test]
    fn capped_search_returns_a_path_of_cap(seed in any::<u64>(), n in 6usize..=20) {
        let g = random_graph(seed, n, 0.2);
        let full = longest_induced_path_oracle(&g, usize::MAX).unwrap();
        let cap = full.length.saturating_sub(1).max(1);
        let r = longest_induced_path_oracle(&g, cap).unwrap();
        prop_assert!(r.length >= cap);
        prop_assert!(r.length <= full.length);
        prop_assert!(is_induced_path(&g, &r.witness));
    }

    #[test]
    fn edge_lists_round_trip(seed in any::<u64>(), n in 0usize..=40, d in 0.0f64..0.5) {
        let g = random_graph(seed, n, d);
        let text = write_edge_list(&g);
        let back = parse_edge_list(&text).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(write_edge_list(&back), text);
    }

    #[test]
    fn planted_patterns_are_found(seed in any::<u64>(), t in 1usize..=3, r in 1usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = common::random_constellation(&mut rng, t, r);
        let n = 2 * h.n() + rng.gen_range(0..20);
        let (g, _) = common::plant(&mut rng, n, &h, 0.05);
        let pattern = g.pattern_graph();
        let emb = contains_pattern(&pattern, &h, 1).unwrap();
        prop_assert!(emb.is_some());
        prop_assert!(is_embedding(&pattern, &h, &emb.unwrap(), 1));
    }
}
