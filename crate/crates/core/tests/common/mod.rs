#![allow(dead_code)]

use std::collections::HashSet;

use indpath_core::{OrderedGraph, TracedGraph};
use rand::seq::SliceRandom;
use rand::Rng;

/// Every ordered star forest on `n` vertices (isolated vertices allowed),
/// including forests whose stars have leaves on both sides of the center.
pub fn all_star_forests(n: usize) -> Vec<OrderedGraph> {
    // Each vertex either points at a center or at nothing; a vertex pointed
    // at must itself point at nothing.
    fn go(n: usize, v: usize, f: &mut Vec<usize>, seen: &mut HashSet<Vec<(usize, usize)>>, out: &mut Vec<OrderedGraph>) {
        if v > n {
            if (1..=n).any(|u| f[u] != 0 && f[f[u]] != 0) {
                return;
            }
            let mut edges: Vec<(usize, usize)> = (1..=n).filter(|&u| f[u] != 0).map(|u| (u.min(f[u]), u.max(f[u]))).collect();
            edges.sort_unstable();
            edges.dedup();
            if seen.insert(edges.clone()) {
                out.push(OrderedGraph::from_edges(n, edges).unwrap());
            }
            return;
        }
        for c in 0..=n {
            if c == v {
                continue;
            }
            f[v] = c;
            go(n, v + 1, f, seen, out);
        }
        f[v] = 0;
    }
    let mut out = Vec::new();
    go(n, 1, &mut vec![0; n + 1], &mut HashSet::new(), &mut out);
    out
}

/// A random star forest: stars of random arity on randomly chosen vertices.
pub fn random_star_forest<R: Rng>(rng: &mut R, n: usize) -> OrderedGraph {
    let mut free: Vec<usize> = (1..=n).collect();
    free.shuffle(rng);
    let mut edges = Vec::new();
    while free.len() >= 2 && rng.gen_bool(0.85) {
        let c = free.pop().unwrap();
        let k = rng.gen_range(1..=free.len().min(4));
        for _ in 0..k {
            edges.push((c, free.pop().unwrap()));
        }
    }
    OrderedGraph::from_edges(n, edges.into_iter().map(|(a, b)| (a.min(b), a.max(b)))).unwrap()
}

/// A random `(t, r)`-constellation built from the inductive definition:
/// a right star whose center goes first, a left star whose center goes
/// last, or a concatenation. Leaves are inserted at random positions.
pub fn random_constellation<R: Rng>(rng: &mut R, t: usize, r: usize) -> OrderedGraph {
    fn build<R: Rng>(rng: &mut R, t: usize, r: usize, next: &mut usize, edges: &mut Vec<(usize, usize)>) -> Vec<usize> {
        if t == 0 {
            return Vec::new();
        }
        let op = if t >= 2 { rng.gen_range(0..3) } else { rng.gen_range(0..2) };
        if op == 2 {
            let a = rng.gen_range(1..t);
            let mut left = build(rng, a, r, next, edges);
            left.extend(build(rng, t - a, r, next, edges));
            return left;
        }
        let mut rest = build(rng, t - 1, r, next, edges);
        let center = *next;
        *next += 1;
        for _ in 0..r {
            let leaf = *next;
            *next += 1;
            edges.push((center, leaf));
            let at = rng.gen_range(0..=rest.len());
            rest.insert(at, leaf);
        }
        if op == 0 {
            rest.insert(0, center);
        } else {
            rest.push(center);
        }
        rest
    }
    let mut edges = Vec::new();
    let mut next = 0;
    let order = build(rng, t, r, &mut next, &mut edges);
    let mut pos = vec![0; next];
    for (i, &id) in order.iter().enumerate() {
        pos[id] = i + 1;
    }
    let mapped = edges.into_iter().map(|(a, b)| (pos[a].min(pos[b]), pos[a].max(pos[b])));
    OrderedGraph::from_edges(order.len(), mapped).unwrap()
}

/// A traced graph whose non-path pairs are pattern edges with probability
/// `density`.
pub fn random_traced<R: Rng>(rng: &mut R, n: usize, density: f64) -> TracedGraph {
    let mut pattern = Vec::new();
    for u in 1..=n {
        for v in (u + 2)..=n {
            if rng.gen_bool(density) {
                pattern.push((u, v));
            }
        }
    }
    TracedGraph::from_pattern_edges(n, pattern).unwrap()
}

/// A traced graph on `n` vertices containing `h` as a pattern at random
/// positions at least two apart, plus random pattern edges of the given
/// density. Returns the positions used.
pub fn plant<R: Rng>(rng: &mut R, n: usize, h: &OrderedGraph, density: f64) -> (TracedGraph, Vec<usize>) {
    let k = h.n();
    assert!(n >= 2 * k, "host too small to plant");
    let mut slots: Vec<usize> = (1..=n - k).collect();
    slots.shuffle(rng);
    let mut chosen: Vec<usize> = slots[..k].to_vec();
    chosen.sort_unstable();
    // Spread to gaps of at least two: the i-th chosen slot moves right by i.
    let pos: Vec<usize> = chosen.iter().enumerate().map(|(i, &x)| x + i).collect();
    let mut pattern: Vec<(usize, usize)> = h.edges().map(|(u, v)| (pos[u - 1], pos[v - 1])).collect();
    for u in 1..=n {
        for v in (u + 2)..=n {
            if rng.gen_bool(density) {
                pattern.push((u, v));
            }
        }
    }
    pattern.sort_unstable();
    pattern.dedup();
    (TracedGraph::from_pattern_edges(n, pattern).unwrap(), pos)
}
