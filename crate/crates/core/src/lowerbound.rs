//! A 2-degenerate traced graph whose pattern graph is a constellation and
//! whose induced paths stay short.
//!
//! Start from a complete binary tree of depth `h(l) = 5 * 2^(l-1) - 2`,
//! replace every node by a 16-vertex gadget, join each gadget to its
//! children through its connectors, and add ribs from the out-ports of a node
//! at depth `i` to the in-ports of its descendants at depth `j` for every
//! interval `(i, j)` of a nested interval system.
//!
//! Nodes are heap-indexed: the root is 1 and node `s` has children `2s` and
//! `2s + 1`; the root has depth 1.

use std::fmt::Write as _;

use crate::constellation::{
    is_constellation, star_condition_pairwise, validate_witness, ConstellationWitness, OrientedStar,
};
use crate::error::{CoreError, Result};
use crate::ordered::{OrderedGraph, TracedGraph};

/// Largest supported `l`; `l = 4` would need `16 (2^38 - 1)` vertices.
pub const ELL_MAX: u32 = 3;

/// `h(l) = 5 * 2^(l-1) - 2`.
pub fn h_fn(ell: u32) -> Result<u64> {
    if ell == 0 || ell > 62 {
        return Err(CoreError::Precondition(format!("ell must be in 1..=62, got {ell}")));
    }
    Ok(5 * (1u64 << (ell - 1)) - 2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Interval {
    pub start: u64,
    pub end: u64,
    pub rank: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalSystem {
    pub ell: u32,
    /// Sorted by start.
    pub intervals: Vec<Interval>,
}

/// `N_1 = {(1,3)}` and `N_l = {(1, h(l))} + (N_{l-1} shifted by 1) +
/// (N_{l-1} shifted by h(l-1) + 1)`.
pub fn build_intervals(ell: u32) -> Result<IntervalSystem> {
    let h = h_fn(ell)?;
    let mut intervals = vec![Interval { start: 1, end: h, rank: ell }];
    if ell > 1 {
        let prev = build_intervals(ell - 1)?;
        let shift = h_fn(ell - 1)? + 1;
        for off in [1, shift] {
            intervals.extend(prev.intervals.iter().map(|iv| Interval {
                start: iv.start + off,
                end: iv.end + off,
                rank: iv.rank,
            }));
        }
    }
    intervals.sort_unstable();
    Ok(IntervalSystem { ell, intervals })
}

impl IntervalSystem {
    pub fn pairs(&self) -> Vec<(u64, u64)> {
        self.intervals.iter().map(|iv| (iv.start, iv.end)).collect()
    }

    /// Endpoints lie in `1..=h(l)` and are pairwise distinct.
    pub fn endpoints_distinct(&self) -> bool {
        let h = h_fn(self.ell).unwrap();
        let mut ends: Vec<u64> = self.intervals.iter().flat_map(|iv| [iv.start, iv.end]).collect();
        ends.sort_unstable();
        ends.iter().all(|&e| (1..=h).contains(&e)) && ends.windows(2).all(|w| w[0] < w[1])
    }

    /// Every interval is `(i, i + h(a) - 1)` with its rank `a` in `1..=l`.
    pub fn ranks_consistent(&self) -> bool {
        self.intervals.iter().all(|iv| {
            (1..=self.ell).contains(&iv.rank) && iv.end + 1 == iv.start + h_fn(iv.rank).unwrap()
        })
    }

    /// No two intervals cross.
    pub fn non_crossing(&self) -> bool {
        let v = &self.intervals;
        // With starts sorted, a crossing (i < i' < j < j') exists iff the
        // open intervals fail to nest, which a stack detects.
        let mut stack: Vec<u64> = Vec::new();
        for iv in v {
            while stack.last().is_some_and(|&e| e < iv.start) {
                stack.pop();
            }
            if stack.last().is_some_and(|&e| e < iv.end) {
                return false;
            }
            stack.push(iv.end);
        }
        true
    }

    pub fn check_properties(&self) -> bool {
        self.endpoints_distinct() && self.ranks_consistent() && self.non_crossing()
    }

    /// Rank of the interval starting at `depth`, if any.
    pub fn rank_starting_at(&self, depth: u64) -> Option<u32> {
        self.intervals.iter().find(|iv| iv.start == depth).map(|iv| iv.rank)
    }

    /// One `start end rank` line per interval.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for iv in &self.intervals {
            writeln!(s, "{} {} {}", iv.start, iv.end, iv.rank).unwrap();
        }
        s
    }
}

/// Vertex roles inside a gadget, listed in the order in which the
/// canonical Hamiltonian path visits them.
///
/// The four chains are NW-SW and S-SW on the left, S-SE and NE-SE on the
/// right; each is `A - B - C` where `A`, `B` are in-ports and `C` is a
/// connector. The NW-SW chain hangs from `LeftTop`, the NE-SE chain from
/// `RightTop`, and the two S chains meet at their `A` ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum Role {
    LeftOut,
    LeftTop,
    NwswA,
    NwswB,
    NwswC,
    SswC,
    SswB,
    SswA,
    SseA,
    SseB,
    SseC,
    NeseC,
    NeseB,
    NeseA,
    RightTop,
    RightOut,
}

impl Role {
    pub const ALL: [Role; 16] = [
        Role::LeftOut,
        Role::LeftTop,
        Role::NwswA,
        Role::NwswB,
        Role::NwswC,
        Role::SswC,
        Role::SswB,
        Role::SswA,
        Role::SseA,
        Role::SseB,
        Role::SseC,
        Role::NeseC,
        Role::NeseB,
        Role::NeseA,
        Role::RightTop,
        Role::RightOut,
    ];

    pub const IN_A: [Role; 4] = [Role::NwswA, Role::SswA, Role::SseA, Role::NeseA];
    pub const IN_B: [Role; 4] = [Role::NwswB, Role::SswB, Role::SseB, Role::NeseB];

    pub fn is_out_port(self) -> bool {
        matches!(self, Role::LeftOut | Role::RightOut)
    }

    pub fn is_in_port(self) -> bool {
        Self::IN_A.contains(&self) || Self::IN_B.contains(&self)
    }

    pub fn is_connector(self) -> bool {
        matches!(self, Role::NwswC | Role::SswC | Role::SseC | Role::NeseC)
    }

    pub fn is_left_connector(self) -> bool {
        matches!(self, Role::NwswC | Role::SswC)
    }

    pub fn is_right_connector(self) -> bool {
        matches!(self, Role::SseC | Role::NeseC)
    }
}

/// The 17 edges inside a gadget.
pub const GADGET_EDGES: [(Role, Role); 17] = [
    (Role::LeftOut, Role::LeftTop),
    (Role::LeftOut, Role::RightTop),
    (Role::RightOut, Role::RightTop),
    (Role::RightOut, Role::LeftTop),
    (Role::LeftTop, Role::NwswA),
    (Role::NwswA, Role::NwswB),
    (Role::NwswB, Role::NwswC),
    (Role::SswA, Role::SswB),
    (Role::SswB, Role::SswC),
    (Role::SseA, Role::SseB),
    (Role::SseB, Role::SseC),
    (Role::RightTop, Role::NeseA),
    (Role::NeseA, Role::NeseB),
    (Role::NeseB, Role::NeseC),
    (Role::NwswC, Role::SswC),
    (Role::SseC, Role::NeseC),
    (Role::SswA, Role::SseA),
];

/// The graph `G_l` with vertices labelled `16 (s - 1) + role + 1`.
#[derive(Clone, Debug)]
pub struct Construction {
    pub ell: u32,
    /// Depth of the tree, `h(l)`.
    pub depth: u32,
    pub intervals: IntervalSystem,
    pub graph: OrderedGraph,
    pub rib_count: usize,
}

impl Construction {
    pub fn node_count(&self) -> usize {
        (1usize << self.depth) - 1
    }

    pub fn vertex(&self, node: usize, role: Role) -> usize {
        16 * (node - 1) + role as usize + 1
    }

    pub fn node_of(&self, v: usize) -> usize {
        (v - 1) / 16 + 1
    }

    pub fn role_of(&self, v: usize) -> Role {
        Role::ALL[(v - 1) % 16]
    }

    pub fn node_depth(node: usize) -> u32 {
        usize::BITS - node.leading_zeros()
    }

    pub fn is_leaf(&self, node: usize) -> bool {
        Self::node_depth(node) == self.depth
    }

    /// `a` is a proper ancestor of `b`.
    pub fn is_ancestor(a: usize, b: usize) -> bool {
        let (da, db) = (Self::node_depth(a), Self::node_depth(b));
        da < db && b >> (db - da) == a
    }

    /// Whether an edge is a rib: its endpoints lie in gadgets that are
    /// neither equal nor parent and child.
    pub fn is_rib(&self, u: usize, v: usize) -> bool {
        let (a, b) = (self.node_of(u), self.node_of(v));
        a != b && a / 2 != b && b / 2 != a
    }

    /// Nodes whose depth starts an interval, with the rank of that interval.
    pub fn sources(&self) -> Vec<(usize, u32)> {
        (1..=self.node_count())
            .filter_map(|s| {
                self.intervals
                    .rank_starting_at(Self::node_depth(s) as u64)
                    .map(|rank| (s, rank))
            })
            .collect()
    }

    /// Every edge joins ancestor-comparable nodes, and same-node edges are
    /// gadget edges.
    pub fn edges_respect_ancestry(&self) -> bool {
        self.graph.edges().all(|(u, v)| {
            let (a, b) = (self.node_of(u), self.node_of(v));
            a == b || Self::is_ancestor(a, b) || Self::is_ancestor(b, a)
        })
    }

    /// Each node owns exactly 16 vertices.
    pub fn preimages_have_size_16(&self) -> bool {
        let mut count = vec![0u32; self.node_count() + 1];
        for v in 1..=self.graph.n() {
            count[self.node_of(v)] += 1;
        }
        count[1..].iter().all(|&c| c == 16)
    }
}

/// Builds `G_l` for `1 <= l <= ELL_MAX`.
pub fn build_construction(ell: u32) -> Result<Construction> {
    if ell == 0 || ell > ELL_MAX {
        return Err(CoreError::Precondition(format!("ell must be in 1..={ELL_MAX}, got {ell}")));
    }
    let depth = h_fn(ell)? as u32;
    let intervals = build_intervals(ell)?;
    let nodes = (1usize << depth) - 1;
    let vx = |node: usize, role: Role| 16 * (node - 1) + role as usize + 1;
    let mut edges = Vec::with_capacity(nodes * 22);
    for s in 1..=nodes {
        for &(a, b) in &GADGET_EDGES {
            edges.push((vx(s, a), vx(s, b)));
        }
        if Construction::node_depth(s) < depth {
            let (s1, s2) = (2 * s, 2 * s + 1);
            edges.push((vx(s, Role::SswC), vx(s1, Role::RightOut)));
            edges.push((vx(s, Role::NwswC), vx(s1, Role::LeftOut)));
            edges.push((vx(s, Role::SseC), vx(s2, Role::LeftOut)));
            edges.push((vx(s, Role::NeseC), vx(s2, Role::RightOut)));
        }
    }
    let mut rib_count = 0;
    for iv in &intervals.intervals {
        let span = (iv.end - iv.start) as u32;
        for s in (1usize << (iv.start - 1))..(1usize << iv.start) {
            for t in (s << span)..((s + 1) << span) {
                for k in 0..4 {
                    edges.push((vx(s, Role::RightOut), vx(t, Role::IN_B[k])));
                    edges.push((vx(s, Role::LeftOut), vx(t, Role::IN_A[k])));
                }
                rib_count += 8;
            }
        }
    }
    let graph = OrderedGraph::from_edges(16 * nodes, edges)?;
    Ok(Construction { ell, depth, intervals, graph, rib_count })
}

/// The canonical Hamiltonian path, in construction labels. At every gadget
/// it runs `LeftOut, LeftTop`, down the NW-SW chain, through the left
/// subtree (or the connector edge at a leaf), up the S-SW chain, across the
/// bottom edge, down the S-SE chain, through the right subtree, up the NE-SE
/// chain, and out through `RightTop, RightOut`.
pub fn ham_path(c: &Construction) -> Vec<usize> {
    let mut out = Vec::with_capacity(c.graph.n());
    visit(c, 1, &mut out);
    out
}

fn visit(c: &Construction, s: usize, out: &mut Vec<usize>) {
    let leaf = c.is_leaf(s);
    for role in Role::ALL {
        out.push(c.vertex(s, role));
        if !leaf {
            if role == Role::NwswC {
                visit(c, 2 * s, out);
            } else if role == Role::SseC {
                visit(c, 2 * s + 1, out);
            }
        }
    }
}

/// Checks that `path` visits every vertex once along edges of the graph,
/// starts at the root's left out-port, ends at its right out-port and uses
/// no rib.
pub fn validate_ham_path(c: &Construction, path: &[usize]) -> Result<()> {
    let n = c.graph.n();
    if path.len() != n {
        return Err(CoreError::Certificate(format!("path has {} vertices, graph has {n}", path.len())));
    }
    let mut seen = vec![false; n + 1];
    for &v in path {
        if v == 0 || v > n || seen[v] {
            return Err(CoreError::Certificate(format!("vertex {v} repeated or out of range")));
        }
        seen[v] = true;
    }
    for w in path.windows(2) {
        if !c.graph.has_edge(w[0], w[1]) {
            return Err(CoreError::Certificate(format!("({}, {}) is not an edge", w[0], w[1])));
        }
        if c.is_rib(w[0], w[1]) {
            return Err(CoreError::Certificate(format!("({}, {}) is a rib", w[0], w[1])));
        }
    }
    if path[0] != c.vertex(1, Role::LeftOut) || path[n - 1] != c.vertex(1, Role::RightOut) {
        return Err(CoreError::Certificate("path does not run between the root out-ports".into()));
    }
    Ok(())
}

/// The construction relabelled by position along `path`.
pub fn to_traced(c: &Construction, path: &[usize]) -> Result<TracedGraph> {
    validate_ham_path(c, path)?;
    let mut pos = vec![0usize; c.graph.n() + 1];
    for (i, &v) in path.iter().enumerate() {
        pos[v] = i + 1;
    }
    let g = OrderedGraph::from_edges(c.graph.n(), c.graph.edges().map(|(u, v)| (pos[u], pos[v])))?;
    TracedGraph::new(g)
}

/// A degeneracy order: repeatedly remove a vertex of minimum remaining
/// degree. Returns the order if no removed vertex had degree above 2.
pub fn check_two_degenerate(g: &OrderedGraph) -> Option<Vec<usize>> {
    let n = g.n();
    let mut deg: Vec<usize> = (0..=n).map(|v| if v == 0 { 0 } else { g.degree(v) }).collect();
    let maxd = deg.iter().copied().max().unwrap_or(0);
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); maxd + 1];
    for v in (1..=n).rev() {
        buckets[deg[v]].push(v);
    }
    let mut removed = vec![false; n + 1];
    let mut order = Vec::with_capacity(n);
    let mut low = 0;
    while order.len() < n {
        while buckets[low].is_empty() {
            low += 1;
        }
        let v = buckets[low].pop().unwrap();
        if removed[v] || deg[v] != low {
            continue;
        }
        if low > 2 {
            return None;
        }
        removed[v] = true;
        order.push(v);
        for &w in g.neighbors(v) {
            let w = w as usize;
            if !removed[w] {
                deg[w] -= 1;
                buckets[deg[w]].push(w);
                low = low.min(deg[w]);
            }
        }
    }
    Some(order)
}

/// The stars of `G_l - E(P)` in traced positions, ordered by the depth of
/// their center's node; at each depth the out-port stars come before the
/// connector 1-stars.
///
/// `LeftOut(s)` keeps its edge to `RightTop(s)` and its ribs to in-ports
/// `A`; `RightOut(s)` keeps its edge to `LeftTop(s)` and its ribs to in-ports
/// `B`; at an inner node both connector pairs are off the path.
pub fn depth_ordered_witness(c: &Construction, path: &[usize]) -> Result<ConstellationWitness> {
    let mut pos = vec![0usize; c.graph.n() + 1];
    for (i, &v) in path.iter().enumerate() {
        pos[v] = i + 1;
    }
    let nodes = c.node_count();
    let mut out_port_stars = Vec::with_capacity(2 * nodes);
    let mut connector_stars = Vec::new();
    let mut keys = Vec::new();
    for s in 1..=nodes {
        let d = Construction::node_depth(s);
        for (center, partner, in_ports) in [
            (Role::LeftOut, Role::RightTop, Role::IN_A),
            (Role::RightOut, Role::LeftTop, Role::IN_B),
        ] {
            let cv = c.vertex(s, center);
            let mut leaves = vec![pos[c.vertex(s, partner)]];
            for &w in c.graph.neighbors(cv) {
                let w = w as usize;
                if c.is_rib(cv, w) {
                    debug_assert!(in_ports.contains(&c.role_of(w)));
                    leaves.push(pos[w]);
                }
            }
            keys.push((d, 0u8, out_port_stars.len()));
            out_port_stars.push(OrientedStar::new(pos[cv], leaves)?);
        }
        if !c.is_leaf(s) {
            for (a, b) in [(Role::NwswC, Role::SswC), (Role::SseC, Role::NeseC)] {
                keys.push((d, 1u8, connector_stars.len()));
                connector_stars.push(OrientedStar::new(pos[c.vertex(s, a)], vec![pos[c.vertex(s, b)]])?);
            }
        }
    }
    keys.sort_unstable();
    let offset = out_port_stars.len();
    let mut stars = out_port_stars;
    stars.extend(connector_stars);
    let order = keys
        .into_iter()
        .map(|(_, kind, i)| if kind == 0 { i } else { offset + i })
        .collect();
    Ok(ConstellationWitness { stars, order })
}

#[derive(Clone, Debug)]
pub struct PatternCheck {
    pub witness: ConstellationWitness,
    /// The generic recognizer also accepted the pattern graph (run for
    /// `l <= 2`).
    pub recognized: bool,
    /// The ordering criterion was checked on all pairs of stars (run for
    /// `l <= 2`); otherwise only the `O(t log n)` check ran.
    pub pairwise_checked: bool,
}

/// Shows that `G_l - E(P)` is a constellation. The depth-ordered witness is
/// always validated against the pattern graph; for `l <= 2` the generic
/// recognizer must accept as well and its witness is checked pairwise.
pub fn pattern_is_constellation(c: &Construction, traced: &TracedGraph, path: &[usize]) -> Result<PatternCheck> {
    let pattern = traced.pattern_graph();
    let witness = depth_ordered_witness(c, path)?;
    if !validate_witness(&pattern, &witness) {
        return Err(CoreError::Certificate("depth-ordered star order is not a valid witness".into()));
    }
    if c.ell > 2 {
        return Ok(PatternCheck { witness, recognized: false, pairwise_checked: false });
    }
    let found = is_constellation(&pattern).ok_or(CoreError::NotConstellation)?;
    if !validate_witness(&pattern, &found) || !star_condition_pairwise(&found) || !star_condition_pairwise(&witness) {
        return Err(CoreError::Certificate("pairwise check failed".into()));
    }
    Ok(PatternCheck { witness: found, recognized: true, pairwise_checked: true })
}
