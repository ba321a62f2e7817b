//! Exhaustive search for a longest induced path (order = number of vertices).
//!
//! Paths are grown from one end. A vertex `w` may be appended to a path
//! ending in `e` iff `w` is adjacent to `e` and to no other path vertex;
//! `touch[w]` counts the path vertices in the closed neighbourhood of `w`, so
//! the test is `adjacent(e, w) && touch[w] == 1`.
//!
//! Pruning: the path can only continue through vertices untouched by the
//! path, so `len + |component of untouched vertices next to e|` bounds every
//! extension. Starting points are searched in parallel; without a cap hit the
//! witness is the lexicographically least longest path, independent of
//! scheduling. Once one search reaches the cap all of them stop, and the
//! witness is whichever path reached it.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{CoreError, Result};
use crate::ordered::OrderedGraph;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InducedPathResult {
    /// Number of vertices of the longest induced path found.
    pub length: usize,
    pub witness: Vec<usize>,
    /// The search stopped at `cap`; the true maximum is at least `length`.
    pub capped: bool,
}

struct Search<'a> {
    g: &'a OrderedGraph,
    cap: usize,
    best_global: &'a AtomicUsize,
    stop: &'a AtomicBool,
    touch: Vec<u32>,
    path: Vec<u32>,
    best: Vec<u32>,
    // scratch for the bound
    seen: Vec<u32>,
    stamp: u32,
    queue: Vec<u32>,
}

impl<'a> Search<'a> {
    fn new(g: &'a OrderedGraph, cap: usize, best_global: &'a AtomicUsize, stop: &'a AtomicBool) -> Self {
        let n = g.n();
        Search {
            g,
            cap,
            best_global,
            stop,
            touch: vec![0; n + 1],
            path: Vec::new(),
            best: Vec::new(),
            seen: vec![0; n + 1],
            stamp: 0,
            queue: Vec::new(),
        }
    }

    fn push(&mut self, v: u32) {
        self.path.push(v);
        self.touch[v as usize] += 1;
        for &w in self.g.neighbors(v as usize) {
            self.touch[w as usize] += 1;
        }
    }

    fn pop(&mut self) {
        let v = self.path.pop().expect("non-empty path");
        self.touch[v as usize] -= 1;
        for &w in self.g.neighbors(v as usize) {
            self.touch[w as usize] -= 1;
        }
    }

    /// Upper bound on the order of any extension of the current path.
    fn bound(&mut self) -> usize {
        let end = *self.path.last().unwrap() as usize;
        self.stamp += 1;
        let stamp = self.stamp;
        self.queue.clear();
        for &w in self.g.neighbors(end) {
            if self.touch[w as usize] == 1 && self.seen[w as usize] != stamp {
                self.seen[w as usize] = stamp;
                self.queue.push(w);
            }
        }
        let mut head = 0;
        while head < self.queue.len() {
            let u = self.queue[head] as usize;
            head += 1;
            for &w in self.g.neighbors(u) {
                if self.touch[w as usize] == 0 && self.seen[w as usize] != stamp {
                    self.seen[w as usize] = stamp;
                    self.queue.push(w);
                }
            }
        }
        self.path.len() + self.queue.len()
    }

    /// Returns true when the cap was reached.
    fn dfs(&mut self) -> bool {
        let len = self.path.len();
        if len > self.best.len() {
            self.best = self.path.clone();
            self.best_global.fetch_max(len, Ordering::Relaxed);
            if len >= self.cap {
                self.stop.store(true, Ordering::Relaxed);
                return true;
            }
        }
        if self.stop.load(Ordering::Relaxed) {
            return false;
        }
        // Strict comparison keeps equally long paths, so the lexicographic
        // tie-break does not depend on other threads.
        let target = self.best_global.load(Ordering::Relaxed).max(self.best.len());
        if len >= 2 {
            let b = self.bound();
            if b < target {
                return false;
            }
            if b == target && target == self.best.len() {
                // An extension could at best tie with a path already found
                // from this start, which is lexicographically smaller.
                return false;
            }
        }
        let end = *self.path.last().unwrap() as usize;
        let g = self.g;
        for &w in g.neighbors(end) {
            if self.touch[w as usize] == 1 {
                self.push(w);
                let done = self.dfs();
                self.pop();
                if done {
                    return true;
                }
            }
        }
        false
    }
}

/// Exhaustive longest induced path search, stopped once a path of `cap`
/// vertices is found.
pub fn longest_induced_path_oracle(g: &OrderedGraph, cap: usize) -> Result<InducedPathResult> {
    if cap == 0 {
        return Err(CoreError::Precondition("cap must be >= 1".into()));
    }
    if g.n() == 0 {
        return Ok(InducedPathResult {
            length: 0,
            witness: Vec::new(),
            capped: false,
        });
    }
    let best_global = AtomicUsize::new(0);
    // Set once some start reaches `cap`; the other searches then unwind.
    let stop = AtomicBool::new(false);
    let per_start: Vec<(Vec<u32>, bool)> = (1..=g.n() as u32)
        .into_par_iter()
        .map_init(
            || Search::new(g, cap, &best_global, &stop),
            |s, v| {
                s.best.clear();
                s.push(v);
                let capped = s.dfs();
                s.pop();
                (std::mem::take(&mut s.best), capped)
            },
        )
        .collect();
    let mut best: Vec<u32> = Vec::new();
    for (p, _) in per_start {
        if p.len() > best.len() {
            best = p;
        }
    }
    let capped = stop.load(Ordering::Relaxed);
    Ok(InducedPathResult {
        length: best.len(),
        witness: best.into_iter().map(|v| v as usize).collect(),
        capped,
    })
}

/// Whether `p` is an induced path of `g` (in the given vertex order).
pub fn is_induced_path(g: &OrderedGraph, p: &[usize]) -> bool {
    if p.is_empty() || p.iter().any(|&v| v == 0 || v > g.n()) {
        return false;
    }
    let mut sorted = p.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return false;
    }
    for i in 0..p.len() {
        for j in (i + 1)..p.len() {
            if g.has_edge(p[i], p[j]) != (j == i + 1) {
                return false;
            }
        }
    }
    true
}
