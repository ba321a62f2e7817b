//! The peeling recursion: given a traced graph and a `(t, r)`-constellation,
//! find either an occurrence of the constellation in `G - E(P)` with a large
//! gap, or an increasing induced path.
//!
//! The recursion works on windows `G[a, b]` of the host, read forwards or
//! backwards; a left constellation is handled as the right constellation of
//! the reversed window. Every outcome is a certificate that
//! [`validate_outcome`] checks independently.

use std::sync::Arc;

use indpath_bounds::functions::{f_val, g_log, h_val, thr_bign};
use indpath_bounds::{BigReal, BoundContext, Integer, ParamFns};
use serde::{Deserialize, Serialize};

use crate::constellation::{decompose_star_forest, is_constellation, Orientation, OrientedStar};
use crate::error::{CoreError, Result};
use crate::ordered::{validate_increasing_induced_path, Embedding, OrderedGraph, TracedGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Anchor {
    Start,
    End,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum PropOutcome {
    /// An increasing induced path starting at the first vertex (right
    /// constellations) or ending at the last one (left constellations).
    P1 { path: Vec<usize>, anchored: Anchor },
    /// An increasing induced path.
    P2 { path: Vec<usize> },
    /// The pattern, with the gap of this occurrence.
    P3 { embedding: Embedding, gap: usize },
}

impl PropOutcome {
    pub fn kind(&self) -> &'static str {
        match self {
            PropOutcome::P1 { .. } => "P1",
            PropOutcome::P2 { .. } => "P2",
            PropOutcome::P3 { .. } => "P3",
        }
    }

    pub fn path(&self) -> Option<&[usize]> {
        match self {
            PropOutcome::P1 { path, .. } | PropOutcome::P2 { path } => Some(path),
            PropOutcome::P3 { .. } => None,
        }
    }
}

/// A threshold as a function of `(n, t, p)`.
pub type Threshold = Arc<dyn Fn(f64, usize, u64) -> f64 + Send + Sync>;

/// Stand-ins for `f`, `h` and `g` that make the recursion do real work on
/// graphs of a few thousand vertices. Only `f` steers the recursion; `h` and
/// `g` are reported targets.
#[derive(Clone)]
pub struct ToyThresholds {
    pub f: Threshold,
    pub h: Threshold,
    pub g: Threshold,
}

impl ToyThresholds {
    pub fn new(f: Threshold, h: Threshold, g: Threshold) -> Self {
        ToyThresholds { f, h, g }
    }

    /// `f = log2(n)/t - p/2`, `h = log2(n)/(2t) + p/2 - 1`, `g = n / (8^t (p+1))`.
    pub fn standard() -> Self {
        ToyThresholds {
            f: Arc::new(|n, t, p| n.log2() / t as f64 - p as f64 / 2.0),
            h: Arc::new(|n, t, p| n.log2() / (2.0 * t as f64) + p as f64 / 2.0 - 1.0),
            g: Arc::new(|n, t, p| n / (8f64.powi(t as i32) * (p as f64 + 1.0))),
        }
    }
}

#[derive(Clone)]
pub enum Thresholds {
    Toy(ToyThresholds),
    /// The functions `f`, `h`, `g` built from admissible parameters.
    Compliant(ParamFns),
}

#[derive(Clone)]
pub struct PeelConfig {
    pub r: usize,
    pub thresholds: Thresholds,
}

impl PeelConfig {
    pub fn toy(r: usize, thresholds: ToyThresholds) -> Result<Self> {
        Self::with(r, Thresholds::Toy(thresholds))
    }

    pub fn compliant(r: usize, params: ParamFns) -> Result<Self> {
        Self::with(r, Thresholds::Compliant(params))
    }

    fn with(r: usize, thresholds: Thresholds) -> Result<Self> {
        if r == 0 {
            return Err(CoreError::Precondition("r must be >= 1".into()));
        }
        Ok(PeelConfig { r, thresholds })
    }

    /// True when the thresholds are the real `f`, `h`, `g`.
    pub fn quantitative(&self) -> bool {
        matches!(self.thresholds, Thresholds::Compliant(_))
    }

    fn context(&self, params: &ParamFns, n: usize) -> Result<BoundContext> {
        Ok(BoundContext::from_n(self.r as u64, params.clone(), &Integer::from(n))?)
    }

    /// Whether a two-vertex path from the first vertex already settles the
    /// statement: `p >= 2 f(n,t,0)`, or `n` is below the size condition.
    /// Toy thresholds use `f(n,t,p) <= 2` instead.
    fn settled(&self, n: usize, t: usize, p: u64) -> Result<bool> {
        match &self.thresholds {
            Thresholds::Toy(toy) => Ok((toy.f)(n as f64, t, p) <= 2.0),
            Thresholds::Compliant(params) => {
                if n < 2 {
                    return Ok(true);
                }
                let ctx = self.context(params, n)?;
                let prec = params.precision();
                let f0 = f_val(&ctx, t as i64, &Integer::from(0))?;
                let big_p = BigReal::from_i64(prec, p as i64).ge(&f0.mul_i64(2)) != Some(false);
                let small_n = thr_bign(params, t as i64, &Integer::from(p)).gt(ctx.ell()) != Some(false);
                Ok(big_p || small_n)
            }
        }
    }

    /// `log2 m` for the single-star case, where `m = 2^{f(n,1,p) log2(2r)}`.
    fn base_log2_m(&self, n: usize, p: u64) -> Result<f64> {
        let f = match &self.thresholds {
            Thresholds::Toy(toy) => (toy.f)(n as f64, 1, p),
            Thresholds::Compliant(params) => {
                if n < 2 {
                    return Ok(0.0);
                }
                f_val(&self.context(params, n)?, 1, &Integer::from(p))?.to_f64()
            }
        };
        Ok(f * ((2 * self.r) as f64).log2())
    }

    /// Whether the outcome meets its target: `|path| >= f(n,t,p)` for P1,
    /// `|path| >= h(n,t,p)` for P2 and `gap >= g(n,t,p)` for P3. Compliant
    /// thresholds are compared rigorously; an undecidable comparison is an
    /// error.
    pub fn meets_targets(&self, n: usize, t: usize, p: u64, outcome: &PropOutcome) -> Result<bool> {
        match &self.thresholds {
            Thresholds::Toy(toy) => {
                let nf = n as f64;
                Ok(match outcome {
                    PropOutcome::P1 { path, .. } => path.len() as f64 >= (toy.f)(nf, t, p),
                    PropOutcome::P2 { path } => path.len() as f64 >= (toy.h)(nf, t, p),
                    PropOutcome::P3 { gap, .. } => *gap as f64 >= (toy.g)(nf, t, p),
                })
            }
            Thresholds::Compliant(params) => {
                let ctx = self.context(params, n.max(2))?;
                let prec = params.precision();
                let pz = Integer::from(p);
                let (have, want) = match outcome {
                    PropOutcome::P1 { path, .. } => {
                        (BigReal::from_i64(prec, path.len() as i64), f_val(&ctx, t as i64, &pz)?)
                    }
                    PropOutcome::P2 { path } => {
                        (BigReal::from_i64(prec, path.len() as i64), h_val(&ctx, t as i64, &pz)?)
                    }
                    PropOutcome::P3 { gap, .. } => (
                        ctx.log_r1(&BigReal::from_i64(prec, *gap as i64)),
                        g_log(&ctx, t as i64, &pz)?,
                    ),
                };
                have.ge(&want).ok_or_else(|| {
                    CoreError::Bounds(indpath_bounds::BoundsError::Inconclusive {
                        what: format!("{} target at n={n}, t={t}, p={p}", outcome.kind()),
                    })
                })
            }
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PeelStats {
    pub calls: u64,
    pub max_depth: usize,
}

/// The stretch of a window and its successor, in window coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Stretch {
    pub value: usize,
    pub successor: (usize, usize),
}

/// Stretch of `G` from the positions `a_1 < ... < a_d` of the neighbours of
/// the first vertex (so `a_1 = 2`), with `a_0 = 1` and `a_{d+1} = n`.
fn stretch_of(a: &[usize], n: usize) -> Stretch {
    let mut best_gap = a[0] - 1;
    let mut successor = (1, a[0] - 1);
    let mut value = 0;
    for i in 0..a.len() {
        let next = if i + 1 < a.len() { a[i + 1] } else { n };
        let gap = next - a[i];
        value = value.max(gap);
        if gap > best_gap {
            best_gap = gap;
            successor = (a[i], next - 1);
        }
    }
    Stretch { value, successor }
}

/// Stretch and successor window of a traced graph.
pub fn stretch(g: &TracedGraph) -> Result<Stretch> {
    if g.n() < 2 {
        return Err(CoreError::Precondition(format!("stretch needs n >= 2, got {}", g.n())));
    }
    let view = View::whole(g.n());
    Ok(stretch_of(&first_neighbors(g.graph(), view), g.n()))
}

/// A window `[lo, hi]` of the host, read forwards or backwards. Local
/// positions run from 1 to `len`.
#[derive(Clone, Copy, Debug)]
struct View {
    lo: usize,
    hi: usize,
    rev: bool,
}

impl View {
    fn whole(n: usize) -> Self {
        View { lo: 1, hi: n, rev: false }
    }

    fn len(&self) -> usize {
        self.hi + 1 - self.lo
    }

    fn global(&self, x: usize) -> usize {
        if self.rev {
            self.hi + 1 - x
        } else {
            self.lo + x - 1
        }
    }

    fn local(&self, v: usize) -> usize {
        if self.rev {
            self.hi + 1 - v
        } else {
            v + 1 - self.lo
        }
    }

    fn sub(&self, a: usize, b: usize) -> View {
        debug_assert!(1 <= a && a <= b && b <= self.len());
        if self.rev {
            View { lo: self.hi + 1 - b, hi: self.hi + 1 - a, rev: true }
        } else {
            View { lo: self.lo + a - 1, hi: self.lo + b - 1, rev: false }
        }
    }

    fn flipped(&self) -> View {
        View { rev: !self.rev, ..*self }
    }

    /// The path `(1, 2)` of the window, or `(1)` for a single vertex.
    fn first_edge(&self) -> Vec<usize> {
        (1..=self.len().min(2)).map(|x| self.global(x)).collect()
    }
}

/// Local positions of the neighbours of the window's first vertex inside
/// the window, ascending.
fn first_neighbors(g: &OrderedGraph, v: View) -> Vec<usize> {
    if v.rev {
        let nb = g.neighbors(v.hi);
        let a = nb.partition_point(|&w| (w as usize) < v.lo);
        let b = nb.partition_point(|&w| (w as usize) < v.hi);
        nb[a..b].iter().rev().map(|&w| v.hi + 1 - w as usize).collect()
    } else {
        let nb = g.neighbors(v.lo);
        let a = nb.partition_point(|&w| (w as usize) <= v.lo);
        let b = nb.partition_point(|&w| (w as usize) <= v.hi);
        nb[a..b].iter().map(|&w| w as usize + 1 - v.lo).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StretchPath {
    pub path: Vec<usize>,
    /// Every window visited had stretch at least `|window| / s`.
    pub stretch_held: bool,
}

/// Follows successors from `view` while the window has at least `min_len`
/// vertices, collecting first vertices. `probe` sees every window whose
/// stretch is below `|window| / s` and may stop the walk with a result.
fn successor_walk<T>(
    g: &OrderedGraph,
    view: View,
    s: usize,
    min_len: f64,
    mut probe: impl FnMut(View, &[usize]) -> Option<T>,
) -> (Vec<usize>, bool, Option<T>) {
    let mut cur = view;
    let mut path = vec![cur.global(1)];
    let mut held = true;
    loop {
        let len = cur.len();
        if (len as f64) < min_len || len < 2 {
            break;
        }
        let nb = first_neighbors(g, cur);
        let st = stretch_of(&nb, len);
        if st.value * s < len {
            held = false;
            if let Some(found) = probe(cur, &nb) {
                return (path, held, Some(found));
            }
        }
        let (a, b) = st.successor;
        if a == 1 {
            // The first vertex sees the whole window; the successor is the
            // first vertex alone and adds nothing to the path.
            break;
        }
        cur = cur.sub(a, b);
        path.push(cur.global(1));
    }
    (path, held, None)
}

/// The increasing induced path `v_{a[0]}, ..., v_{a[p]}` of first vertices
/// of the successor chain, followed while windows have at least `n/m`
/// vertices.
pub fn stretch_path(g: &TracedGraph, s: usize, m: usize) -> Result<StretchPath> {
    if s == 0 || m == 0 {
        return Err(CoreError::Precondition(format!("need s, m >= 1, got s={s}, m={m}")));
    }
    if g.n() == 0 {
        return Err(CoreError::Precondition("empty graph".into()));
    }
    let min_len = g.n() as f64 / m as f64;
    let (path, stretch_held, _) = successor_walk::<()>(g.graph(), View::whole(g.n()), s, min_len, |_, _| None);
    Ok(StretchPath { path, stretch_held })
}

/// A constellation with its vertices numbered `1..=n`, every vertex in a star.
#[derive(Clone, Debug)]
struct Pat {
    n: usize,
    stars: Vec<OrientedStar>,
}

enum Shape {
    Concat(Pat, Pat),
    /// Index of the star whose center can be vertex 1.
    Right(usize),
    /// Index of the star whose center can be vertex `n`.
    Left(usize),
}

impl Pat {
    fn from_stars(stars: Vec<&OrientedStar>) -> Pat {
        let mut verts: Vec<usize> = stars.iter().flat_map(|s| s.vertices()).collect();
        verts.sort_unstable();
        let rank = |v: usize| verts.binary_search(&v).unwrap() + 1;
        let stars = stars
            .iter()
            .map(|s| OrientedStar::new(rank(s.center), s.leaves.iter().map(|&l| rank(l)).collect()).unwrap())
            .collect();
        Pat { n: verts.len(), stars }
    }

    fn t(&self) -> usize {
        self.stars.len()
    }

    fn mirrored(&self) -> Pat {
        Pat {
            n: self.n,
            stars: self.stars.iter().map(|s| s.mirrored(self.n)).collect(),
        }
    }

    fn without(&self, i: usize) -> Pat {
        Pat::from_stars(self.stars.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, s)| s).collect())
    }

    fn shape(&self) -> Result<Shape> {
        let t = self.t();
        if t > 1 {
            let mut by_min: Vec<&OrientedStar> = self.stars.iter().collect();
            by_min.sort_by_key(|s| s.min_vertex());
            let mut reach = 0;
            for k in 0..t - 1 {
                reach = reach.max(by_min[k].max_vertex());
                if reach < by_min[k + 1].min_vertex() {
                    return Ok(Shape::Concat(
                        Pat::from_stars(by_min[..=k].to_vec()),
                        Pat::from_stars(by_min[k + 1..].to_vec()),
                    ));
                }
            }
        }
        for (i, s) in self.stars.iter().enumerate() {
            if s.min_vertex() == 1 && (s.arity() == 1 || s.orientation == Orientation::Right) {
                return Ok(Shape::Right(i));
            }
        }
        for (i, s) in self.stars.iter().enumerate() {
            if s.max_vertex() == self.n && (s.arity() == 1 || s.orientation == Orientation::Left) {
                return Ok(Shape::Left(i));
            }
        }
        Err(CoreError::NotConstellation)
    }
}

/// Outcomes while recursing: vertices are global but listed in the order of
/// the current view, so that flipping a view only reverses lists.
enum Out {
    P1 { path: Vec<usize>, start: bool },
    P2 { path: Vec<usize> },
    P3 { emb: Vec<usize> },
}

impl Out {
    fn flipped(self) -> Out {
        match self {
            Out::P1 { mut path, start } => {
                path.reverse();
                Out::P1 { path, start: !start }
            }
            Out::P2 { mut path } => {
                path.reverse();
                Out::P2 { path }
            }
            Out::P3 { mut emb } => {
                emb.reverse();
                Out::P3 { emb }
            }
        }
    }
}

struct Peeler<'a> {
    g: &'a OrderedGraph,
    cfg: &'a PeelConfig,
    stats: PeelStats,
}

impl Peeler<'_> {
    fn solve(&mut self, view: View, pat: &Pat, p: u64, depth: usize) -> Result<Out> {
        self.stats.calls += 1;
        self.stats.max_depth = self.stats.max_depth.max(depth);
        match pat.shape()? {
            Shape::Concat(h1, h2) => self.concat(view, pat, &h1, &h2, p, depth),
            Shape::Right(i) => self.right(view, pat, i, p, depth),
            Shape::Left(i) => Ok(self.right(view.flipped(), &pat.mirrored(), i, p, depth)?.flipped()),
        }
    }

    fn concat(&mut self, view: View, pat: &Pat, h1: &Pat, h2: &Pat, p: u64, depth: usize) -> Result<Out> {
        let n = view.len();
        if n < pat.n.max(5) {
            return Ok(Out::P2 { path: view.first_edge() });
        }
        let left = self.solve(view.sub(1, n.div_ceil(3)), h1, p, depth + 1)?;
        let right = self.solve(view.sub(2 * n / 3, n), h2, p, depth + 1)?;
        Ok(match (left, right) {
            (Out::P3 { mut emb }, Out::P3 { emb: e2 }) => {
                emb.extend(e2);
                Out::P3 { emb }
            }
            (a, b) => {
                let path_of = |o: Out| match o {
                    Out::P1 { path, .. } | Out::P2 { path } => Some(path),
                    Out::P3 { .. } => None,
                };
                let (pa, pb) = (path_of(a), path_of(b));
                let path = match (pa, pb) {
                    (Some(x), Some(y)) => {
                        if y.len() > x.len() {
                            y
                        } else {
                            x
                        }
                    }
                    (Some(x), None) | (None, Some(x)) => x,
                    (None, None) => unreachable!(),
                };
                Out::P2 { path }
            }
        })
    }

    /// `pat` is a right constellation whose star `i` can be centered at
    /// vertex 1.
    fn right(&mut self, view: View, pat: &Pat, i: usize, p: u64, depth: usize) -> Result<Out> {
        let n = view.len();
        let t = pat.t();
        let trivial = || Out::P1 { path: view.first_edge(), start: true };
        if n < pat.n.max(2) || self.cfg.settled(n, t, p)? {
            return Ok(trivial());
        }
        if t == 1 {
            return self.single_star(view, pat.n - 1, p);
        }
        if n < 5 {
            return Ok(trivial());
        }
        let rest = pat.without(i);
        let mid = view.sub(n / 3, (2 * n).div_ceil(3));
        let inner = match self.solve(mid, &rest, p, depth + 1)? {
            Out::P1 { path, .. } | Out::P2 { path } => return Ok(Out::P2 { path }),
            Out::P3 { emb } => emb,
        };
        let inner: Vec<usize> = inner.iter().map(|&v| view.local(v)).collect();
        let k = inner.windows(2).map(|w| w[1] - w[0]).min().unwrap_or(n);
        let nb = first_neighbors(self.g, view);
        let st = stretch_of(&nb, n);
        let r = self.cfg.r;
        if k >= 1 && st.value * (2 * r + 1) <= k - 1 {
            if let Some(full) = attach_star(&nb[1..], &inner, pat, i, n) {
                return Ok(Out::P3 {
                    emb: full.into_iter().map(|x| view.global(x)).collect(),
                });
            }
        }
        let (a, b) = st.successor;
        if a == 1 {
            return Ok(trivial());
        }
        Ok(match self.solve(view.sub(a, b), pat, p + 1, depth + 1)? {
            Out::P1 { path, start: true } => {
                let mut full = vec![view.global(1)];
                full.extend(path);
                Out::P1 { path: full, start: true }
            }
            Out::P1 { path, start: false } | Out::P2 { path } => Out::P2 { path },
            Out::P3 { emb } => Out::P3 { emb },
        })
    }

    /// A single right `r`-star: follow successors with `s = 2r`, stopping at
    /// the first window of small stretch where the star can be placed.
    fn single_star(&mut self, view: View, r: usize, p: u64) -> Result<Out> {
        let n = view.len();
        let s = 2 * r;
        let log2_m = self.cfg.base_log2_m(n, p)?;
        let min_len = n as f64 * (-log2_m).exp2();
        let (path, _, found) = successor_walk(self.g, view, s, min_len, |w, nb| {
            spread_star(&nb[1..], w.len(), r, s).map(|x| x.into_iter().map(|y| w.global(y)).collect::<Vec<_>>())
        });
        Ok(match found {
            Some(emb) => Out::P3 { emb },
            None => Out::P1 { path, start: true },
        })
    }
}

/// Vertex 1 and a neighbour of it in each interval
/// `[(2k-1) L/s + 1, 2k L/s]`, `k = 1..=r`, of a window of `L` vertices.
/// `nb` excludes position 2, which is joined to vertex 1 by a path edge.
fn spread_star(nb: &[usize], len: usize, r: usize, s: usize) -> Option<Vec<usize>> {
    let mut out = vec![1];
    let mut prev = 1;
    for k in 1..=r {
        let lo = ((2 * k - 1) * len).div_ceil(s) + 1;
        let idx = nb.partition_point(|&x| x < lo.max(prev + 1));
        let &x = nb.get(idx)?;
        out.push(x);
        prev = x;
    }
    Some(out)
}

/// Greedily picks `c` neighbours strictly between `lo` and `hi` (no upper
/// limit when `hi` is `None`) with spacing at least `gap` from each other and
/// from both ends.
fn place(nb: &[usize], lo: usize, hi: Option<usize>, c: usize, gap: usize) -> Option<Vec<usize>> {
    let mut out = Vec::with_capacity(c);
    let mut x = lo + gap;
    for _ in 0..c {
        let &a = nb.get(nb.partition_point(|&y| y < x))?;
        out.push(a);
        x = a + gap;
    }
    match hi {
        Some(h) if x > h => None,
        _ => Some(out),
    }
}

/// Places the leaves of star `i` (centered at vertex 1) around the occurrence
/// `inner` of the remaining stars, slot by slot, maximising the spacing in
/// every slot. Returns the full occurrence in window positions. `nb`
/// excludes position 2.
fn attach_star(nb: &[usize], inner: &[usize], pat: &Pat, i: usize, n: usize) -> Option<Vec<usize>> {
    let star = &pat.stars[i];
    let is_leaf = |v: usize| v != 1 && star.vertices().any(|u| u == v);
    let mut pos = vec![0usize; pat.n + 1];
    pos[1] = 1;
    let mut next_inner = 0;
    let mut v = 2;
    while v <= pat.n {
        if !is_leaf(v) {
            pos[v] = inner[next_inner];
            next_inner += 1;
            v += 1;
            continue;
        }
        let start = v;
        while v <= pat.n && is_leaf(v) {
            v += 1;
        }
        let c = v - start;
        let lo = pos[start - 1];
        let hi = inner.get(next_inner).copied();
        let room = hi.unwrap_or(n + 1) - lo;
        if room <= c {
            return None;
        }
        // Largest spacing for which the greedy placement succeeds.
        let (mut good, mut bad) = (0, room + 1);
        while bad - good > 1 {
            let mid = (good + bad) / 2;
            if place(nb, lo, hi, c, mid).is_some() {
                good = mid;
            } else {
                bad = mid;
            }
        }
        if good == 0 {
            return None;
        }
        for (j, x) in place(nb, lo, hi, c, good)?.into_iter().enumerate() {
            pos[start + j] = x;
        }
    }
    Some(pos[1..].to_vec())
}

/// Checks the preconditions on `h` and returns it as a list of stars.
fn prepare(h: &OrderedGraph, r: usize) -> Result<Pat> {
    if is_constellation(h).is_none() {
        return Err(CoreError::NotConstellation);
    }
    let forest = decompose_star_forest(h).ok_or(CoreError::NotConstellation)?;
    if forest.stars.is_empty() {
        return Err(CoreError::Precondition("pattern has no edges".into()));
    }
    if (1..=h.n()).any(|v| h.degree(v) == 0) {
        return Err(CoreError::Precondition("pattern has isolated vertices".into()));
    }
    let arities = forest.arities();
    if arities.iter().any(|&a| a != arities[0]) {
        return Err(CoreError::MixedArity(arities));
    }
    if arities[0] != r {
        return Err(CoreError::Precondition(format!(
            "pattern stars have {} leaves but r = {r}",
            arities[0]
        )));
    }
    Ok(Pat { n: h.n(), stars: forest.stars })
}

/// Runs the recursion with `p` as the starting value of the counter.
pub fn peel(g: &TracedGraph, h: &OrderedGraph, cfg: &PeelConfig, p: u64) -> Result<PropOutcome> {
    Ok(peel_with_stats(g, h, cfg, p)?.0)
}

pub fn peel_with_stats(g: &TracedGraph, h: &OrderedGraph, cfg: &PeelConfig, p: u64) -> Result<(PropOutcome, PeelStats)> {
    let pat = prepare(h, cfg.r)?;
    if g.n() == 0 {
        return Err(CoreError::Precondition("empty host graph".into()));
    }
    let mut peeler = Peeler { g: g.graph(), cfg, stats: PeelStats::default() };
    let out = peeler.solve(View::whole(g.n()), &pat, p, 1)?;
    let outcome = match out {
        Out::P1 { path, start } => PropOutcome::P1 {
            path,
            anchored: if start { Anchor::Start } else { Anchor::End },
        },
        Out::P2 { path } => PropOutcome::P2 { path },
        Out::P3 { emb } => {
            let embedding = Embedding::new(emb);
            let gap = embedding.gap(g.n());
            PropOutcome::P3 { embedding, gap }
        }
    };
    Ok((outcome, peeler.stats))
}

/// Upper bounds on the number of calls and on the recursion depth for a
/// host of `n` vertices, read off the shape of the pattern: a successor
/// chain has at most `n/2 + 1` steps because each successor loses at least
/// two vertices.
pub fn structural_bound(n: usize, h: &OrderedGraph) -> Result<(u128, usize)> {
    let forest = decompose_star_forest(h).ok_or(CoreError::NotConstellation)?;
    fn go(pat: &Pat, n: usize) -> Result<(u128, usize)> {
        if pat.t() == 1 {
            return Ok((1, 1));
        }
        let chain = (n / 2 + 1) as u128;
        Ok(match pat.shape()? {
            Shape::Concat(a, b) => {
                let (ca, da) = go(&a, n)?;
                let (cb, db) = go(&b, n)?;
                (1u128.saturating_add(ca).saturating_add(cb), 1 + da.max(db))
            }
            Shape::Right(i) | Shape::Left(i) => {
                let (c, d) = go(&pat.without(i), n)?;
                (chain.saturating_mul(c.saturating_add(1)), n / 2 + 1 + d)
            }
        })
    }
    go(&Pat { n: h.n(), stars: forest.stars }, n)
}

/// Certificate check: paths must be increasing induced paths with the stated
/// anchoring; an occurrence must be monotone, map every edge of `h` to an
/// edge of `G - E(P)`, have the reported gap, and that gap must be at least
/// `claimed_gap`.
pub fn validate_outcome(g: &TracedGraph, h: &OrderedGraph, outcome: &PropOutcome, claimed_gap: usize) -> bool {
    match outcome {
        PropOutcome::P1 { path, anchored } => {
            validate_increasing_induced_path(g, path)
                && match anchored {
                    Anchor::Start => path[0] == 1,
                    Anchor::End => *path.last().unwrap() == g.n(),
                }
        }
        PropOutcome::P2 { path } => validate_increasing_induced_path(g, path),
        PropOutcome::P3 { embedding, gap } => {
            let pos = &embedding.positions;
            pos.len() == h.n()
                && pos.iter().all(|&v| 1 <= v && v <= g.n())
                && pos.windows(2).all(|w| w[0] < w[1])
                && h.edges().all(|(u, v)| g.has_pattern_edge(pos[u - 1], pos[v - 1]))
                && embedding.gap(g.n()) >= *gap
                && *gap >= claimed_gap
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordered::gen_halfgraph;

    fn toy(r: usize) -> PeelConfig {
        PeelConfig::toy(r, ToyThresholds::standard()).unwrap()
    }

    fn g(n: usize, e: &[(usize, usize)]) -> OrderedGraph {
        OrderedGraph::from_edges(n, e.iter().copied()).unwrap()
    }

    #[test]
    fn stretch_examples() {
        let path = TracedGraph::path(10);
        assert_eq!(stretch(&path).unwrap(), Stretch { value: 8, successor: (2, 9) });
        let half = gen_halfgraph(8).unwrap();
        assert_eq!(stretch(&half).unwrap(), Stretch { value: 2, successor: (2, 3) });
        let full = TracedGraph::from_pattern_edges(5, [(1, 3), (1, 4), (1, 5)]).unwrap();
        let st = stretch(&full).unwrap();
        assert_eq!(st.value, 1);
        assert_eq!(st.successor, (1, 1));
        assert!(stretch(&TracedGraph::path(1)).is_err());
    }

    #[test]
    fn stretch_path_on_plain_path() {
        let sp = stretch_path(&TracedGraph::path(64), 2, 32).unwrap();
        assert!(sp.path.len() >= 5);
        assert_eq!(sp.path[..5], [1, 2, 3, 4, 5]);
        // Windows of three vertices have stretch 1 < 3/2.
        assert!(!sp.stretch_held);
        let sp = stretch_path(&TracedGraph::path(64), 2, 8).unwrap();
        assert!(sp.stretch_held);
        assert!(sp.path.len() >= 3);
        // With m = 1 the whole graph still has at least n/m vertices, so one
        // successor is taken.
        assert_eq!(stretch_path(&TracedGraph::path(64), 2, 1).unwrap().path, vec![1, 2]);
        assert_eq!(stretch_path(&TracedGraph::path(1), 2, 1).unwrap().path, vec![1]);
    }

    #[test]
    fn views_map_back_and_forth() {
        let v = View { lo: 3, hi: 9, rev: true };
        assert_eq!(v.global(1), 9);
        assert_eq!(v.local(9), 1);
        let s = v.sub(2, 4);
        assert_eq!((s.lo, s.hi), (6, 8));
        assert_eq!(s.global(1), 8);
    }

    #[test]
    fn one_star_on_plain_path_gives_start_path() {
        let host = TracedGraph::path(10);
        let h = g(2, &[(1, 2)]);
        let out = peel(&host, &h, &toy(1), 0).unwrap();
        match &out {
            PropOutcome::P1 { path, anchored } => {
                assert_eq!(*anchored, Anchor::Start);
                assert_eq!(path[..2], [1, 2]);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(validate_outcome(&host, &h, &out, 1));
    }

    #[test]
    fn matching_in_halfgraph_is_certified() {
        let host = gen_halfgraph(1024).unwrap();
        let h = g(4, &[(1, 3), (2, 4)]);
        let out = peel(&host, &h, &toy(1), 0).unwrap();
        assert!(validate_outcome(&host, &h, &out, 1), "{out:?}");
    }

    #[test]
    fn left_star_anchors_at_end() {
        let host = TracedGraph::path(40);
        let h = g(3, &[(1, 3), (2, 3)]);
        match peel(&host, &h, &toy(2), 0).unwrap() {
            PropOutcome::P1 { path, anchored } => {
                assert_eq!(anchored, Anchor::End);
                assert_eq!(*path.last().unwrap(), 40);
                assert!(validate_increasing_induced_path(&host, &path));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn compliant_thresholds_settle_at_once() {
        let cfg = PeelConfig::compliant(1, indpath_bounds::default_params(128).unwrap()).unwrap();
        let host = gen_halfgraph(200).unwrap();
        let h = g(2, &[(1, 2)]);
        let out = peel(&host, &h, &cfg, 0).unwrap();
        assert_eq!(out, PropOutcome::P1 { path: vec![1, 2], anchored: Anchor::Start });
        assert!(cfg.meets_targets(200, 1, 0, &out).unwrap());
    }

    #[test]
    fn preconditions() {
        let host = TracedGraph::path(20);
        let bad = g(6, &[(2, 4), (2, 6), (1, 5), (3, 5)]);
        assert!(matches!(peel(&host, &bad, &toy(2), 0), Err(CoreError::NotConstellation)));
        let mixed = g(5, &[(1, 2), (3, 4), (3, 5)]);
        assert!(matches!(peel(&host, &mixed, &toy(1), 0), Err(CoreError::MixedArity(_))));
        let isolated = g(3, &[(1, 2)]);
        assert!(peel(&host, &isolated, &toy(1), 0).is_err());
        assert!(peel(&host, &g(2, &[(1, 2)]), &toy(2), 0).is_err());
    }

    #[test]
    fn validator_rejects_path_edge_in_occurrence() {
        let host = TracedGraph::from_pattern_edges(6, [(1, 4)]).unwrap();
        let h = g(2, &[(1, 2)]);
        let ok = PropOutcome::P3 { embedding: Embedding::new(vec![1, 4]), gap: 3 };
        assert!(validate_outcome(&host, &h, &ok, 3));
        assert!(!validate_outcome(&host, &h, &ok, 4));
        let on_path = PropOutcome::P3 { embedding: Embedding::new(vec![2, 3]), gap: 1 };
        assert!(!validate_outcome(&host, &h, &on_path, 1));
        let overstated = PropOutcome::P3 { embedding: Embedding::new(vec![1, 4]), gap: 5 };
        assert!(!validate_outcome(&host, &h, &overstated, 1));
    }

    #[test]
    fn single_vertex_path_is_a_valid_p1() {
        let host = TracedGraph::path(3);
        let h = g(2, &[(1, 2)]);
        let out = PropOutcome::P1 { path: vec![1], anchored: Anchor::Start };
        assert!(validate_outcome(&host, &h, &out, 1));
        let wrong = PropOutcome::P1 { path: vec![2], anchored: Anchor::Start };
        assert!(!validate_outcome(&host, &h, &wrong, 1));
    }
}
