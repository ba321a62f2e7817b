//! Ordered graphs, traced graphs and ordered pattern containment.
//!
//! Vertices are `1..=n` and the vertex order is the numeric order. Adjacency
//! is stored in compressed form with sorted neighbour lists.

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct OrderedGraph {
    n: usize,
    // neighbours of v are adj[offsets[v-1]..offsets[v]]
    offsets: Vec<usize>,
    adj: Vec<u32>,
}

impl std::fmt::Debug for OrderedGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OrderedGraph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl OrderedGraph {
    /// `n` isolated vertices.
    pub fn empty(n: usize) -> Self {
        OrderedGraph {
            n,
            offsets: vec![0; n + 1],
            adj: Vec::new(),
        }
    }

    /// Builds a graph from unordered pairs. Rejects endpoints outside `1..=n`,
    /// self-loops and repeated edges.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n > u32::MAX as usize {
            return Err(CoreError::InvalidGraph(format!("too many vertices: {n}")));
        }
        let mut pairs = Vec::new();
        for (u, v) in edges {
            if u == v {
                return Err(CoreError::InvalidGraph(format!("self-loop at {u}")));
            }
            if u == 0 || v == 0 || u > n || v > n {
                return Err(CoreError::InvalidGraph(format!(
                    "edge ({u}, {v}) has an endpoint outside 1..={n}"
                )));
            }
            pairs.push((u.min(v) as u32, u.max(v) as u32));
        }
        pairs.sort_unstable();
        if let Some(w) = pairs.windows(2).find(|w| w[0] == w[1]) {
            return Err(CoreError::InvalidGraph(format!(
                "duplicate edge ({}, {})",
                w[0].0, w[0].1
            )));
        }
        Ok(Self::from_sorted_unique(n, &pairs))
    }

    fn from_sorted_unique(n: usize, pairs: &[(u32, u32)]) -> Self {
        let mut deg = vec![0usize; n + 1];
        for &(u, v) in pairs {
            deg[u as usize] += 1;
            deg[v as usize] += 1;
        }
        let mut offsets = vec![0usize; n + 1];
        for v in 1..=n {
            offsets[v] = offsets[v - 1] + deg[v];
        }
        let mut fill = offsets.clone();
        let mut adj = vec![0u32; offsets[n]];
        for &(u, v) in pairs {
            adj[fill[u as usize - 1]] = v;
            fill[u as usize - 1] += 1;
            adj[fill[v as usize - 1]] = u;
            fill[v as usize - 1] += 1;
        }
        for v in 0..n {
            adj[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        OrderedGraph { n, offsets, adj }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of edges.
    pub fn m(&self) -> usize {
        self.adj.len() / 2
    }

    /// Sorted neighbours of `v`.
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[self.offsets[v - 1]..self.offsets[v]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v] - self.offsets[v - 1]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        if u == 0 || v == 0 || u > self.n || v > self.n {
            return false;
        }
        let (a, b) = if self.degree(u) <= self.degree(v) { (u, v) } else { (v, u) };
        self.neighbors(a).binary_search(&(b as u32)).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..=self.n).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .filter(move |&&v| v as usize > u)
                .map(move |&v| (u, v as usize))
        })
    }

    /// The subgraph induced by positions `a..=b`, renumbered from 1.
    pub fn slice(&self, a: usize, b: usize) -> Result<OrderedGraph> {
        if a == 0 || a > b || b > self.n {
            return Err(CoreError::OutOfRange { a, b, n: self.n });
        }
        let mut pairs = Vec::new();
        for u in a..=b {
            for &v in self.neighbors(u) {
                let v = v as usize;
                if v > u && v <= b {
                    pairs.push(((u - a + 1) as u32, (v - a + 1) as u32));
                }
            }
        }
        Ok(Self::from_sorted_unique(b - a + 1, &pairs))
    }

    /// The same graph under the order-reversing map `v -> n + 1 - v`.
    pub fn reversed(&self) -> OrderedGraph {
        let n = self.n;
        let mut pairs: Vec<(u32, u32)> = self
            .edges()
            .map(|(u, v)| ((n + 1 - v) as u32, (n + 1 - u) as u32))
            .collect();
        pairs.sort_unstable();
        Self::from_sorted_unique(n, &pairs)
    }

    /// The subgraph induced by an increasing list of vertices, renumbered
    /// `1..=k` in that order.
    pub fn induced(&self, vertices: &[usize]) -> Result<OrderedGraph> {
        if vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CoreError::Precondition("vertices must be strictly increasing".into()));
        }
        if let Some(&v) = vertices.iter().find(|&&v| v == 0 || v > self.n) {
            return Err(CoreError::OutOfRange { a: v, b: v, n: self.n });
        }
        let mut pairs = Vec::new();
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    pairs.push(((i + 1) as u32, (j + 1) as u32));
                }
            }
        }
        Ok(Self::from_sorted_unique(vertices.len(), &pairs))
    }
}

/// `A . B`: `B` placed after `A`, with its vertices shifted by `A.n`.
pub fn concatenate(a: &OrderedGraph, b: &OrderedGraph) -> OrderedGraph {
    let shift = a.n() as u32;
    let mut pairs: Vec<(u32, u32)> = a.edges().map(|(u, v)| (u as u32, v as u32)).collect();
    pairs.extend(b.edges().map(|(u, v)| (u as u32 + shift, v as u32 + shift)));
    OrderedGraph::from_sorted_unique(a.n() + b.n(), &pairs)
}

/// Every vertex has all neighbours before it or all neighbours after it.
pub fn is_one_sided(h: &OrderedGraph) -> bool {
    (1..=h.n()).all(|v| {
        let nb = h.neighbors(v);
        match (nb.first(), nb.last()) {
            (Some(&lo), Some(&hi)) => (hi as usize) < v || (lo as usize) > v,
            _ => true,
        }
    })
}

/// A graph whose Hamiltonian path is `1, 2, ..., n`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TracedGraph {
    g: OrderedGraph,
}

impl TracedGraph {
    /// Checks that every consecutive pair is an edge.
    pub fn new(g: OrderedGraph) -> Result<Self> {
        for i in 1..g.n() {
            if !g.has_edge(i, i + 1) {
                return Err(CoreError::NotTraced(i, i + 1));
            }
        }
        Ok(TracedGraph { g })
    }

    /// Adds the path edges to a set of pattern edges.
    pub fn from_pattern_edges<I>(n: usize, pattern: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut edges: Vec<(usize, usize)> = (1..n).map(|i| (i, i + 1)).collect();
        for (u, v) in pattern {
            if u.abs_diff(v) == 1 {
                return Err(CoreError::InvalidGraph(format!(
                    "({u}, {v}) is a path edge, not a pattern edge"
                )));
            }
            edges.push((u, v));
        }
        TracedGraph::new(OrderedGraph::from_edges(n, edges)?)
    }

    /// The bare path on `n` vertices.
    pub fn path(n: usize) -> Self {
        TracedGraph::from_pattern_edges(n, std::iter::empty()).expect("a path is traced")
    }

    pub fn n(&self) -> usize {
        self.g.n()
    }

    pub fn graph(&self) -> &OrderedGraph {
        &self.g
    }

    pub fn into_graph(self) -> OrderedGraph {
        self.g
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.g.has_edge(u, v)
    }

    /// `G - E(P)`.
    pub fn pattern_graph(&self) -> OrderedGraph {
        let pairs: Vec<(u32, u32)> = self
            .g
            .edges()
            .filter(|(u, v)| v - u != 1)
            .map(|(u, v)| (u as u32, v as u32))
            .collect();
        OrderedGraph::from_sorted_unique(self.n(), &pairs)
    }

    /// Whether `(u, v)` is an edge of `G - E(P)`.
    pub fn has_pattern_edge(&self, u: usize, v: usize) -> bool {
        u.abs_diff(v) > 1 && self.g.has_edge(u, v)
    }

    /// `G[a, b]`, which keeps its path edges and so stays traced.
    pub fn slice(&self, a: usize, b: usize) -> Result<TracedGraph> {
        Ok(TracedGraph { g: self.g.slice(a, b)? })
    }

    pub fn reversed(&self) -> TracedGraph {
        TracedGraph { g: self.g.reversed() }
    }
}

/// Path edges plus `(i, j)` for every odd `i` and even `j > i`.
pub fn gen_halfgraph(n: usize) -> Result<TracedGraph> {
    if n < 2 {
        return Err(CoreError::Precondition(format!("half-graph needs n >= 2, got {n}")));
    }
    let mut pattern = Vec::new();
    for i in (1..=n).step_by(2) {
        for j in ((i + 3)..=n).step_by(2) {
            pattern.push((i, j));
        }
    }
    TracedGraph::from_pattern_edges(n, pattern)
}

/// Host positions of the pattern vertices, in pattern order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    pub positions: Vec<usize>,
}

impl Embedding {
    pub fn new(positions: Vec<usize>) -> Self {
        Embedding { positions }
    }

    /// Minimum distance between consecutive positions; `host_n` when fewer
    /// than two vertices are embedded.
    pub fn gap(&self, host_n: usize) -> usize {
        self.positions
            .windows(2)
            .map(|w| w[1].saturating_sub(w[0]))
            .min()
            .unwrap_or(host_n)
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}

/// Whether `emb` maps `pattern` monotonically into `host`, sends every
/// pattern edge to a host edge, and has gap at least `min_gap`.
pub fn is_embedding(host: &OrderedGraph, pattern: &OrderedGraph, emb: &Embedding, min_gap: usize) -> bool {
    let pos = &emb.positions;
    if pos.len() != pattern.n() {
        return false;
    }
    if pos.iter().any(|&p| p == 0 || p > host.n()) {
        return false;
    }
    if pos.windows(2).any(|w| w[0] >= w[1]) {
        return false;
    }
    if emb.gap(host.n()) < min_gap {
        return false;
    }
    pattern.edges().all(|(u, v)| host.has_edge(pos[u - 1], pos[v - 1]))
}

/// Finds the lexicographically smallest monotone embedding of `pattern` in
/// `host` with gap at least `min_gap`, by backtracking.
pub fn contains_pattern(host: &OrderedGraph, pattern: &OrderedGraph, min_gap: usize) -> Result<Option<Embedding>> {
    let k = pattern.n();
    if k == 0 {
        return Err(CoreError::Precondition("pattern must have at least one vertex".into()));
    }
    if min_gap == 0 {
        return Err(CoreError::Precondition("min_gap must be positive".into()));
    }
    let n = host.n();
    if n == 0 || (k - 1).saturating_mul(min_gap) >= n {
        return Ok(None);
    }
    // For each pattern vertex, its neighbours that come earlier.
    let back: Vec<Vec<usize>> = (1..=k)
        .map(|i| {
            pattern
                .neighbors(i)
                .iter()
                .map(|&j| j as usize)
                .filter(|&j| j < i)
                .collect()
        })
        .collect();
    let mut pos = vec![0usize; k];
    if search(host, &back, min_gap, 0, &mut pos) {
        Ok(Some(Embedding::new(pos)))
    } else {
        Ok(None)
    }
}

fn search(host: &OrderedGraph, back: &[Vec<usize>], gap: usize, i: usize, pos: &mut [usize]) -> bool {
    let k = back.len();
    if i == k {
        return true;
    }
    let n = host.n();
    let lo = if i == 0 { 1 } else { pos[i - 1] + gap };
    // Leave room for the remaining k - 1 - i vertices.
    let hi = match n.checked_sub((k - 1 - i) * gap) {
        Some(h) => h,
        None => return false,
    };
    if lo > hi {
        return false;
    }
    let fits = |v: usize, pos: &[usize]| back[i].iter().all(|&j| host.has_edge(pos[j - 1], v));
    if let Some(&anchor) = back[i].first() {
        let nb = host.neighbors(pos[anchor - 1]);
        let start = nb.partition_point(|&x| (x as usize) < lo);
        for &v in &nb[start..] {
            let v = v as usize;
            if v > hi {
                break;
            }
            if fits(v, pos) {
                pos[i] = v;
                if search(host, back, gap, i + 1, pos) {
                    return true;
                }
            }
        }
    } else {
        for v in lo..=hi {
            pos[i] = v;
            if search(host, back, gap, i + 1, pos) {
                return true;
            }
        }
    }
    false
}

/// Whether `p` is an increasing induced path of `g`: strictly increasing,
/// consecutive entries adjacent, and no other adjacencies among its vertices.
pub fn validate_increasing_induced_path(g: &TracedGraph, p: &[usize]) -> bool {
    if p.is_empty() {
        return false;
    }
    if p.iter().any(|&v| v == 0 || v > g.n()) || p.windows(2).any(|w| w[0] >= w[1]) {
        return false;
    }
    if p.windows(2).any(|w| !g.has_edge(w[0], w[1])) {
        return false;
    }
    // Each vertex may only see its path neighbours among the path vertices.
    // Walk the shorter of the two lists for every vertex.
    let graph = g.graph();
    for (i, &u) in p.iter().enumerate() {
        let nb = graph.neighbors(u);
        let count = if nb.len() <= p.len() {
            nb.iter().filter(|&&w| p.binary_search(&(w as usize)).is_ok()).count()
        } else {
            p.iter().filter(|&&w| graph.has_edge(u, w)).count()
        };
        let expected = usize::from(i > 0) + usize::from(i + 1 < p.len());
        if count != expected {
            return false;
        }
    }
    true
}
