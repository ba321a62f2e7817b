//! Star forests made of left and right stars, and constellations.
//!
//! A constellation is recognised through the ordering criterion: the stars
//! can be listed so that the center of every star lies outside (before or
//! after) the vertex set of every later star. A 1-star is both a left and a
//! right star, so either endpoint may serve as its center.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::ordered::{Embedding, OrderedGraph, TracedGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    /// Center after all leaves.
    #[serde(rename = "L")]
    Left,
    /// Center before all leaves.
    #[serde(rename = "R")]
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrientedStar {
    pub center: usize,
    pub leaves: Vec<usize>,
    pub orientation: Orientation,
}

impl OrientedStar {
    /// Builds a star, deriving the orientation from the positions. Leaves are
    /// sorted.
    pub fn new(center: usize, mut leaves: Vec<usize>) -> Result<Self> {
        leaves.sort_unstable();
        if leaves.is_empty() {
            return Err(CoreError::InvalidGraph(format!("star at {center} has no leaves")));
        }
        if leaves.windows(2).any(|w| w[0] == w[1]) || leaves.contains(&center) {
            return Err(CoreError::InvalidGraph(format!("star at {center} repeats a vertex")));
        }
        let orientation = if leaves[0] > center {
            Orientation::Right
        } else if *leaves.last().unwrap() < center {
            Orientation::Left
        } else {
            return Err(CoreError::InvalidGraph(format!(
                "star at {center} has leaves on both sides"
            )));
        };
        Ok(OrientedStar { center, leaves, orientation })
    }

    pub fn arity(&self) -> usize {
        self.leaves.len()
    }

    pub fn min_vertex(&self) -> usize {
        self.center.min(self.leaves[0])
    }

    pub fn max_vertex(&self) -> usize {
        self.center.max(*self.leaves.last().unwrap())
    }

    /// `v` precedes or succeeds every vertex of the star.
    pub fn has_outside(&self, v: usize) -> bool {
        v < self.min_vertex() || v > self.max_vertex()
    }

    /// Whether the recorded orientation agrees with the positions.
    pub fn is_consistent(&self) -> bool {
        !self.leaves.is_empty()
            && match self.orientation {
                Orientation::Right => self.leaves.iter().all(|&l| l > self.center),
                Orientation::Left => self.leaves.iter().all(|&l| l < self.center),
            }
    }

    /// The same star read from the other end of a 1-star.
    fn flipped(&self) -> Option<OrientedStar> {
        (self.arity() == 1).then(|| OrientedStar::new(self.leaves[0], vec![self.center]).unwrap())
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        std::iter::once(self.center).chain(self.leaves.iter().copied())
    }

    /// Image under `v -> n + 1 - v`.
    pub fn mirrored(&self, n: usize) -> OrientedStar {
        OrientedStar::new(n + 1 - self.center, self.leaves.iter().map(|&l| n + 1 - l).collect()).unwrap()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarForest {
    pub n: usize,
    /// Sorted by center.
    pub stars: Vec<OrientedStar>,
}

impl StarForest {
    /// Arities of the stars, in star order.
    pub fn arities(&self) -> Vec<usize> {
        self.stars.iter().map(|s| s.arity()).collect()
    }
}

/// Splits `h` into oriented stars, or returns `None` if some component is not
/// a star or has leaves on both sides of its center. 1-stars are reported as
/// right stars. Isolated vertices belong to no star.
pub fn decompose_star_forest(h: &OrderedGraph) -> Option<StarForest> {
    let mut stars = Vec::new();
    for v in 1..=h.n() {
        let nb = h.neighbors(v);
        match nb.len() {
            0 => {}
            1 => {
                let w = nb[0] as usize;
                // A 1-star is reported once, from its smaller endpoint.
                if h.degree(w) == 1 && v < w {
                    stars.push(OrientedStar::new(v, vec![w]).ok()?);
                }
            }
            _ => {
                if nb.iter().any(|&w| h.degree(w as usize) != 1) {
                    return None;
                }
                stars.push(OrientedStar::new(v, nb.iter().map(|&w| w as usize).collect()).ok()?);
            }
        }
    }
    stars.sort_by_key(|s| s.center);
    Some(StarForest { n: h.n(), stars })
}

/// Stars with their chosen centers, and an order satisfying the ordering
/// criterion. `order` lists indices into `stars`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstellationWitness {
    pub stars: Vec<OrientedStar>,
    pub order: Vec<usize>,
}

impl ConstellationWitness {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("witness serialises")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| CoreError::Certificate(e.to_string()))
    }

    /// Stars in witness order.
    pub fn ordered_stars(&self) -> impl Iterator<Item = &OrientedStar> + '_ {
        self.order.iter().map(move |&i| &self.stars[i])
    }
}

/// Searches for an order of the stars in which each center lies outside
/// every later star.
///
/// Greedy selection is complete here: if a star can be placed first, the
/// remaining stars still admit an order whenever the whole forest does,
/// because the criterion is inherited by every subset of stars. A 1-star may
/// be placed with either endpoint as its center.
pub fn is_constellation(h: &OrderedGraph) -> Option<ConstellationWitness> {
    let forest = decompose_star_forest(h)?;
    order_stars(&forest.stars)
}

/// The greedy ordering over a given set of stars.
pub fn order_stars(stars: &[OrientedStar]) -> Option<ConstellationWitness> {
    let t = stars.len();
    // Candidate centers, as (position, star, variant).
    let mut cands: Vec<(usize, usize, u8)> = Vec::with_capacity(t + t / 2);
    for (i, s) in stars.iter().enumerate() {
        cands.push((s.center, i, 0));
        if s.arity() == 1 {
            cands.push((s.leaves[0], i, 1));
        }
    }
    cands.sort_unstable();
    let idx_of = |pos: usize| cands.partition_point(|c| c.0 < pos);
    // blockers[k]: live stars (other than the owner) whose span strictly
    // contains candidate k. Computed with a difference array over the sorted
    // candidate list.
    let mut diff = vec![0i64; cands.len() + 1];
    for s in stars {
        let lo = idx_of(s.min_vertex() + 1);
        let hi = idx_of(s.max_vertex());
        if lo < hi {
            diff[lo] += 1;
            diff[hi] -= 1;
        }
    }
    let mut blockers = vec![0i64; cands.len()];
    let mut run = 0;
    for k in 0..cands.len() {
        run += diff[k];
        blockers[k] = run;
    }
    // Every candidate is an endpoint of its own star's span, so it is never
    // counted as blocked by its own star.
    let mut alive = vec![true; t];
    let mut ready: std::collections::BTreeSet<(usize, usize)> = std::collections::BTreeSet::new();
    for (k, &(_, i, _)) in cands.iter().enumerate() {
        if blockers[k] == 0 {
            ready.insert((i, k));
        }
    }
    let mut chosen = Vec::with_capacity(t);
    let mut out_stars = Vec::with_capacity(t);
    while let Some(&(i, k)) = ready.iter().next() {
        ready.remove(&(i, k));
        if !alive[i] {
            continue;
        }
        alive[i] = false;
        let s = &stars[i];
        let star = if cands[k].2 == 0 { s.clone() } else { s.flipped().unwrap() };
        out_stars.push(star);
        chosen.push(out_stars.len() - 1);
        // Candidates inside the removed star's span lose a blocker.
        let lo = idx_of(s.min_vertex() + 1);
        let hi = idx_of(s.max_vertex());
        for kk in lo..hi {
            blockers[kk] -= 1;
            let owner = cands[kk].1;
            if blockers[kk] == 0 && alive[owner] {
                ready.insert((owner, kk));
            }
        }
    }
    if out_stars.len() < t {
        return None;
    }
    Some(ConstellationWitness {
        stars: out_stars,
        order: chosen,
    })
}

/// Checks the ordering criterion pairwise: for every `i < j` in the order,
/// the center of the `i`-th star lies outside the `j`-th star.
pub fn star_condition_pairwise(w: &ConstellationWitness) -> bool {
    let ord: Vec<&OrientedStar> = w.ordered_stars().collect();
    for i in 0..ord.len() {
        for j in (i + 1)..ord.len() {
            if !ord[j].has_outside(ord[i].center) {
                return false;
            }
        }
    }
    true
}

/// Fenwick tree over positions with range add and point query.
struct Stabbing {
    tree: Vec<i64>,
}

impl Stabbing {
    fn new(n: usize) -> Self {
        Stabbing { tree: vec![0; n + 2] }
    }

    fn add_at(&mut self, mut i: usize, v: i64) {
        while i < self.tree.len() {
            self.tree[i] += v;
            i += i & i.wrapping_neg();
        }
    }

    /// Adds `v` to every position in `[a, b]`.
    fn add_range(&mut self, a: usize, b: usize, v: i64) {
        if a <= b {
            self.add_at(a, v);
            self.add_at(b + 1, -v);
        }
    }

    fn at(&self, mut i: usize) -> i64 {
        let mut s = 0;
        while i > 0 {
            s += self.tree[i];
            i -= i & i.wrapping_neg();
        }
        s
    }
}

/// The same check as [`star_condition_pairwise`] in `O(t log n)`: walk the
/// order backwards, keeping for every position the number of later stars
/// whose span strictly contains it.
pub fn star_condition_fast(w: &ConstellationWitness, n: usize) -> bool {
    let mut st = Stabbing::new(n);
    for s in w.order.iter().rev().map(|&i| &w.stars[i]) {
        if s.center == 0 || s.max_vertex() > n {
            return false;
        }
        if st.at(s.center) != 0 {
            return false;
        }
        st.add_range(s.min_vertex() + 1, s.max_vertex() - 1, 1);
    }
    true
}

/// Full certificate check: the stars are consistent, vertex-disjoint, their
/// edges are exactly the edges of `h`, `order` is a permutation, and the
/// ordering criterion holds.
pub fn validate_witness(h: &OrderedGraph, w: &ConstellationWitness) -> bool {
    let t = w.stars.len();
    if w.order.len() != t {
        return false;
    }
    let mut seen = vec![false; t];
    for &i in &w.order {
        if i >= t || seen[i] {
            return false;
        }
        seen[i] = true;
    }
    let mut used = vec![false; h.n() + 1];
    let mut edges = 0usize;
    for s in &w.stars {
        if !s.is_consistent() {
            return false;
        }
        for v in s.vertices() {
            if v == 0 || v > h.n() || used[v] {
                return false;
            }
            used[v] = true;
        }
        for &l in &s.leaves {
            if !h.has_edge(s.center, l) {
                return false;
            }
        }
        edges += s.arity();
    }
    edges == h.m() && star_condition_fast(w, h.n())
}

/// Recognises constellations straight from the inductive definition: the
/// first vertex is the center of a right star whose removal leaves a
/// constellation, or the last vertex is the center of a left star likewise,
/// or the forest splits as a concatenation of two constellations.
/// Memoised over subsets of stars; exponential in the number of stars.
pub fn is_constellation_inductive(h: &OrderedGraph) -> bool {
    let Some(forest) = decompose_star_forest(h) else {
        return false;
    };
    let t = forest.stars.len();
    assert!(t <= 40, "inductive recognition is exponential; {t} stars is too many");
    let mut memo = HashMap::new();
    inductive(&forest.stars, (1u64 << t) - 1, &mut memo)
}

fn inductive(stars: &[OrientedStar], mask: u64, memo: &mut HashMap<u64, bool>) -> bool {
    if mask == 0 {
        return true;
    }
    if let Some(&v) = memo.get(&mask) {
        return v;
    }
    let members: Vec<usize> = (0..stars.len()).filter(|&i| mask >> i & 1 == 1).collect();
    let first = members.iter().map(|&i| stars[i].min_vertex()).min().unwrap();
    let last = members.iter().map(|&i| stars[i].max_vertex()).max().unwrap();
    let mut ok = false;
    // The star holding the first vertex, if that vertex is a right center.
    for &i in &members {
        let s = &stars[i];
        let right_center = (s.orientation == Orientation::Right && s.center == first)
            || (s.arity() == 1 && s.min_vertex() == first);
        if right_center && inductive(stars, mask & !(1 << i), memo) {
            ok = true;
            break;
        }
    }
    if !ok {
        for &i in &members {
            let s = &stars[i];
            let left_center = (s.orientation == Orientation::Left && s.center == last)
                || (s.arity() == 1 && s.max_vertex() == last);
            if left_center && inductive(stars, mask & !(1 << i), memo) {
                ok = true;
                break;
            }
        }
    }
    if !ok {
        let mut by_min = members.clone();
        by_min.sort_by_key(|&i| stars[i].min_vertex());
        let mut prefix_max = 0;
        let mut prefix = 0u64;
        for k in 0..by_min.len() - 1 {
            let i = by_min[k];
            prefix |= 1 << i;
            prefix_max = prefix_max.max(stars[i].max_vertex());
            if prefix_max < stars[by_min[k + 1]].min_vertex()
                && inductive(stars, prefix, memo)
                && inductive(stars, mask & !prefix, memo)
            {
                ok = true;
                break;
            }
        }
    }
    memo.insert(mask, ok);
    ok
}

/// Mirror image of a witness under `v -> n + 1 - v`; left and right swap.
pub fn mirror_witness(w: &ConstellationWitness, n: usize) -> ConstellationWitness {
    ConstellationWitness {
        stars: w.stars.iter().map(|s| s.mirrored(n)).collect(),
        order: w.order.clone(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    /// Right stars placed one after another.
    Sequential,
    /// All centers first, then the leaves of each star in center order.
    Nested,
}

/// A `(t, r)`-constellation of the given shape.
pub fn build_tr_constellation(t: usize, r: usize, shape: Shape) -> Result<OrderedGraph> {
    if t == 0 || r == 0 {
        return Err(CoreError::Precondition(format!("need t, r >= 1, got t={t}, r={r}")));
    }
    let n = t * (r + 1);
    let mut edges = Vec::with_capacity(t * r);
    for i in 0..t {
        for j in 0..r {
            match shape {
                Shape::Sequential => edges.push((i * (r + 1) + 1, i * (r + 1) + 2 + j)),
                Shape::Nested => edges.push((i + 1, t + i * r + j + 1)),
            }
        }
    }
    OrderedGraph::from_edges(n, edges)
}

/// Position of leaf `l_{i,j}` (`i != j`, 1-based) in the top-minor pattern.
fn topminor_leaf(t: usize, i: usize, j: usize) -> usize {
    let (a, b) = (i.min(j), i.max(j));
    // pairs (a', b') with a' < a come first: sum_{x < a} (t - x)
    let before: usize = (1..a).map(|x| t - x).sum::<usize>() + (b - a - 1);
    t + 2 * before + if i < j { 1 } else { 2 }
}

/// Right stars centered at `1..=t` whose leaves come in consecutive pairs
/// `l_{i,j}, l_{j,i}` for `i < j` in lexicographic order; `c_i` is adjacent to
/// every `l_{i,j}`. A `(t, t-1)`-constellation on `t^2` vertices.
pub fn build_topminor_pattern(t: usize) -> Result<OrderedGraph> {
    if t < 2 {
        return Err(CoreError::Precondition(format!("need t >= 2, got {t}")));
    }
    let mut edges = Vec::with_capacity(t * (t - 1));
    for i in 1..=t {
        for j in 1..=t {
            if i != j {
                edges.push((i, topminor_leaf(t, i, j)));
            }
        }
    }
    OrderedGraph::from_edges(t * t, edges)
}

/// Paths of a subdivided `K_t`, one for each pair `i < j`, given an
/// embedding of the top-minor pattern into the pattern graph of `g`:
/// `c_i, l_{i,j}, (the path P from l_{i,j} to l_{j,i}), c_j`.
/// Verifies that every step is an edge of `g` and that the paths are
/// internally disjoint and avoid the branch vertices.
pub fn subdivision_certificate(g: &TracedGraph, e: &Embedding, t: usize) -> Result<Vec<Vec<usize>>> {
    let pattern = build_topminor_pattern(t)?;
    let host = g.pattern_graph();
    if !crate::ordered::is_embedding(&host, &pattern, e, 1) {
        return Err(CoreError::Certificate(
            "not an embedding of the top-minor pattern into G - E(P)".into(),
        ));
    }
    let pos = &e.positions;
    let mut internal = vec![false; g.n() + 1];
    for &c in &pos[..t] {
        internal[c] = true;
    }
    let mut paths = Vec::with_capacity(t * (t - 1) / 2);
    for i in 1..=t {
        for j in (i + 1)..=t {
            let a = pos[topminor_leaf(t, i, j) - 1];
            let b = pos[topminor_leaf(t, j, i) - 1];
            let mut p = vec![pos[i - 1]];
            p.extend(a..=b);
            p.push(pos[j - 1]);
            for w in p.windows(2) {
                if !g.has_edge(w[0], w[1]) {
                    return Err(CoreError::Certificate(format!("({}, {}) is not an edge", w[0], w[1])));
                }
            }
            for &v in &p[1..p.len() - 1] {
                if internal[v] {
                    return Err(CoreError::Certificate(format!("vertex {v} is shared")));
                }
                internal[v] = true;
            }
            paths.push(p);
        }
    }
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, e: &[(usize, usize)]) -> OrderedGraph {
        OrderedGraph::from_edges(n, e.iter().copied()).unwrap()
    }

    #[test]
    fn decomposition_examples() {
        let f = decompose_star_forest(&g(3, &[(1, 2), (1, 3)])).unwrap();
        assert_eq!(f.stars.len(), 1);
        assert_eq!(f.stars[0].orientation, Orientation::Right);
        assert!(decompose_star_forest(&g(3, &[(1, 2), (2, 3)])).is_none());
        let f = decompose_star_forest(&g(6, &[(2, 4), (2, 6), (1, 5), (3, 5)])).unwrap();
        assert_eq!(f.stars[0], OrientedStar::new(2, vec![4, 6]).unwrap());
        assert_eq!(f.stars[1].orientation, Orientation::Left);
        assert_eq!(f.stars[1].leaves, vec![1, 3]);
    }

    #[test]
    fn interleaved_two_stars_rejected() {
        let h = g(6, &[(2, 4), (2, 6), (1, 5), (3, 5)]);
        assert!(is_constellation(&h).is_none());
        assert!(!is_constellation_inductive(&h));
    }

    #[test]
    fn crossing_matching_accepted() {
        let h = g(4, &[(1, 3), (2, 4)]);
        let w = is_constellation(&h).unwrap();
        assert!(validate_witness(&h, &w));
        assert!(star_condition_pairwise(&w));
        assert!(is_constellation_inductive(&h));
    }

    #[test]
    fn one_star_endpoint_choice_matters() {
        // With centers fixed at the smaller endpoints this matching has no
        // valid order; choosing 5 as the center of (2,5) resolves it.
        let h = g(6, &[(2, 5), (1, 3), (4, 6)]);
        let w = is_constellation(&h).unwrap();
        assert!(validate_witness(&h, &w));
        assert!(is_constellation_inductive(&h));
    }

    #[test]
    fn empty_forest_is_a_constellation() {
        let h = OrderedGraph::empty(3);
        assert!(is_constellation_inductive(&h));
        let w = is_constellation(&h).unwrap();
        assert!(w.stars.is_empty());
    }

    #[test]
    fn builders() {
        assert_eq!(
            build_tr_constellation(1, 2, Shape::Sequential).unwrap().edges().collect::<Vec<_>>(),
            vec![(1, 2), (1, 3)]
        );
        assert_eq!(
            build_tr_constellation(2, 1, Shape::Sequential).unwrap().edges().collect::<Vec<_>>(),
            vec![(1, 2), (3, 4)]
        );
        let nested = build_tr_constellation(2, 2, Shape::Nested).unwrap();
        assert_eq!(nested.edges().collect::<Vec<_>>(), vec![(1, 3), (1, 4), (2, 5), (2, 6)]);
        assert!(is_constellation(&nested).is_some());
        assert!(build_tr_constellation(0, 1, Shape::Nested).is_err());
    }

    #[test]
    fn topminor_layout() {
        assert_eq!(build_topminor_pattern(2).unwrap().edges().collect::<Vec<_>>(), vec![(1, 3), (2, 4)]);
        let t = 4;
        let order: Vec<(usize, usize)> = (5..=16)
            .map(|p| {
                (1..=t)
                    .flat_map(|i| (1..=t).map(move |j| (i, j)))
                    .find(|&(i, j)| i != j && topminor_leaf(t, i, j) == p)
                    .unwrap()
            })
            .collect();
        assert_eq!(
            order,
            vec![(1, 2), (2, 1), (1, 3), (3, 1), (1, 4), (4, 1), (2, 3), (3, 2), (2, 4), (4, 2), (3, 4), (4, 3)]
        );
        assert!(build_topminor_pattern(1).is_err());
    }

    #[test]
    fn subdivision_on_small_host() {
        // Pattern at positions (1, 2, 5, 7): c1=1, c2=2, l12=5, l21=7.
        let host = TracedGraph::from_pattern_edges(8, [(1, 5), (2, 7)]).unwrap();
        let paths = subdivision_certificate(&host, &Embedding::new(vec![1, 2, 5, 7]), 2).unwrap();
        assert_eq!(paths, vec![vec![1, 5, 6, 7, 2]]);
        assert!(subdivision_certificate(&host, &Embedding::new(vec![1, 2, 5, 6]), 2).is_err());
    }

    #[test]
    fn witness_json_round_trip() {
        let h = g(4, &[(1, 3), (2, 4)]);
        let w = is_constellation(&h).unwrap();
        let json = w.to_json();
        assert!(json.contains("\"orientation\":\"R\""));
        assert_eq!(ConstellationWitness::from_json(&json).unwrap(), w);
    }

    #[test]
    fn fast_and_pairwise_checks_agree_on_bad_order() {
        let h = g(4, &[(1, 3), (2, 4)]);
        let mut w = is_constellation(&h).unwrap();
        // Force both centers to the smaller endpoints in the bad order.
        w.stars = vec![OrientedStar::new(2, vec![4]).unwrap(), OrientedStar::new(1, vec![3]).unwrap()];
        w.order = vec![0, 1];
        assert!(!star_condition_pairwise(&w));
        assert!(!star_condition_fast(&w, 4));
    }
}
