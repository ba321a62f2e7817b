//! Longest induced path by dynamic programming over a tree decomposition.
//!
//! A set `S` spans an induced path iff `G[S]` is connected, acyclic and has
//! maximum degree 2. The decomposition comes from a greedy minimum-degree
//! elimination ordering: the bag of `v` is `v` plus its later neighbours in
//! the filled graph, and its parent is the first of those to be eliminated.
//!
//! A partial solution is summarised on the separator (the later neighbours)
//! by, for every separator vertex, whether it is selected, its degree in
//! `G[S]` so far, and which component of `G[S]` it belongs to; plus a flag
//! for "a complete path has already been closed off". Every edge is added
//! exactly once, in the bag of its earlier endpoint, so degrees and cycles
//! are tracked exactly. Witnesses are rebuilt top-down by recomputing each
//! bag with back-pointers.

use std::collections::{BTreeSet, HashMap};

use rustc_hash::FxHashMap;

use crate::error::{CoreError, Result};
use crate::oracle::InducedPathResult;
use crate::ordered::OrderedGraph;

/// Largest separator the state encoding supports.
pub const MAX_SEPARATOR: usize = 14;

const CLOSED_BYTE: usize = 15;

/// Per key: 0 = not selected, [`SAT`] = selected with two neighbours
/// already (no further edge may touch it, so its component is irrelevant),
/// else `1 + 16 * degree + label` with degree 0 or 1.
type State = u128;

const SAT: u8 = 0xff;

fn byte(s: State, i: usize) -> u8 {
    (s >> (8 * i)) as u8
}

fn with_byte(s: State, i: usize, b: u8) -> State {
    (s & !(0xffu128 << (8 * i))) | ((b as u128) << (8 * i))
}

fn closed(s: State) -> bool {
    byte(s, CLOSED_BYTE) != 0
}

fn is_open(b: u8) -> bool {
    b != 0 && b != SAT
}

fn cell(deg: u8, label: u8) -> u8 {
    if deg >= 2 {
        SAT
    } else {
        1 + 16 * deg + label
    }
}

fn deg_of(b: u8) -> u8 {
    if b == SAT {
        2
    } else {
        (b - 1) / 16
    }
}

fn label_of(b: u8) -> u8 {
    (b - 1) % 16
}

/// Packs `(degree, raw label)` cells, renumbering labels by first
/// appearance. `None` is an unselected key.
fn pack(cells: &[Option<(u8, u8)>], closed: bool) -> State {
    let mut map = [u8::MAX; 32];
    let mut next = 0u8;
    let mut s: State = if closed { (1 as State) << (8 * CLOSED_BYTE) } else { 0 };
    for (i, c) in cells.iter().enumerate() {
        let Some((deg, raw)) = *c else { continue };
        let b = if deg >= 2 {
            SAT
        } else {
            if map[raw as usize] == u8::MAX {
                map[raw as usize] = next;
                next += 1;
            }
            cell(deg, map[raw as usize])
        };
        s = with_byte(s, i, b);
    }
    s
}

fn unpack(s: State, k: usize) -> Vec<Option<(u8, u8)>> {
    (0..k)
        .map(|i| match byte(s, i) {
            0 => None,
            SAT => Some((2, u8::MAX)),
            b => Some((deg_of(b), label_of(b))),
        })
        .collect()
}

/// Settles components that lost their last open vertex: exactly one may
/// finish, and only when nothing else is selected and no path was finished
/// before. `before` is the set of raw labels that were open, as a bit mask.
/// Returns the new closed flag, or `None` when the state is infeasible.
fn settle(cells: &[Option<(u8, u8)>], before: u32, was_closed: bool) -> Option<bool> {
    let mut open = 0u32;
    for &(d, l) in cells.iter().flatten() {
        if d < 2 {
            open |= 1 << l;
        }
    }
    match (before & !open).count_ones() {
        0 => Some(was_closed),
        1 if !was_closed && open == 0 => Some(true),
        _ => None,
    }
}

#[derive(Clone, Debug)]
struct Table {
    keys: Vec<u32>,
    /// Sorted by state.
    entries: Vec<(State, u32)>,
}

/// Back-pointer of an entry into the input tables of the step that made it.
type Back = (u32, u32);

struct Builder {
    best: FxHashMap<State, (u32, Back)>,
}

impl Builder {
    fn new() -> Self {
        Builder { best: FxHashMap::default() }
    }

    fn offer(&mut self, s: State, v: u32, back: Back) {
        let e = self.best.entry(s).or_insert((v, back));
        if v > e.0 || (v == e.0 && back < e.1) {
            *e = (v, back);
        }
    }

    fn finish(self, keys: Vec<u32>) -> (Table, Vec<Back>) {
        let mut all: Vec<(State, (u32, Back))> = self.best.into_iter().collect();
        all.sort_unstable_by_key(|e| e.0);
        let backs = all.iter().map(|e| e.1 .1).collect();
        let entries = all.into_iter().map(|(s, (v, _))| (s, v)).collect();
        (Table { keys, entries }, backs)
    }
}

struct Uf {
    p: [u8; 32],
}

impl Uf {
    fn new() -> Self {
        let mut p = [0u8; 32];
        for (i, x) in p.iter_mut().enumerate() {
            *x = i as u8;
        }
        Uf { p }
    }

    fn find(&mut self, mut x: u8) -> u8 {
        while self.p[x as usize] != x {
            let up = self.p[self.p[x as usize] as usize];
            self.p[x as usize] = up;
            x = up;
        }
        x
    }

    /// False when `a` and `b` were already joined.
    fn union(&mut self, a: u8, b: u8) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.p[ra.max(rb) as usize] = ra.min(rb);
        true
    }
}

fn merge(a: &Table, b: &Table) -> (Table, Vec<Back>) {
    let keys: Vec<u32> = a.keys.iter().chain(&b.keys).copied().collect::<BTreeSet<_>>().into_iter().collect();
    let pos_a: Vec<Option<usize>> = keys.iter().map(|k| a.keys.iter().position(|x| x == k)).collect();
    let pos_b: Vec<Option<usize>> = keys.iter().map(|k| b.keys.iter().position(|x| x == k)).collect();
    let common: Vec<(usize, usize)> = pos_a
        .iter()
        .zip(&pos_b)
        .filter_map(|(x, y)| Some(((*x)?, (*y)?)))
        .collect();
    let mask = |s: State, pick: &dyn Fn(&(usize, usize)) -> usize| {
        common
            .iter()
            .enumerate()
            .fold(0u16, |m, (j, c)| m | (((byte(s, pick(c)) != 0) as u16) << j))
    };
    let mut groups: FxHashMap<u16, Vec<u32>> = FxHashMap::default();
    for (ib, &(s, _)) in b.entries.iter().enumerate() {
        groups.entry(mask(s, &|c| c.1)).or_default().push(ib as u32);
    }
    let mut out = Builder::new();
    let mut cells = vec![None; keys.len()];
    for (ia, &(sa, va)) in a.entries.iter().enumerate() {
        let Some(group) = groups.get(&mask(sa, &|c| c.0)) else { continue };
        let shared = common.iter().filter(|c| byte(sa, c.0) != 0).count() as u32;
        for &ib in group {
            let (sb, vb) = b.entries[ib as usize];
            // After a path is finished, the other side may only hold the
            // shared (saturated) vertices, untouched.
            if (closed(sa) && vb > shared) || (closed(sb) && va > shared) {
                continue;
            }
            let mut uf = Uf::new();
            let mut ok = true;
            for &(i, j) in &common {
                let (x, y) = (byte(sa, i), byte(sb, j));
                if x == 0 {
                    continue;
                }
                if deg_of(x) + deg_of(y) > 2 {
                    ok = false;
                    break;
                }
                if is_open(x) && is_open(y) && !uf.union(label_of(x), 16 + label_of(y)) {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            let mut before = 0u32;
            for (u, (pa, pb)) in pos_a.iter().zip(&pos_b).enumerate() {
                let x = pa.map_or(0, |i| byte(sa, i));
                let y = pb.map_or(0, |i| byte(sb, i));
                // A singleton absorbed by a saturated vertex joins a
                // component that is still running.
                if is_open(x) && y != SAT {
                    before |= 1 << uf.find(label_of(x));
                }
                if is_open(y) && x != SAT {
                    before |= 1 << uf.find(16 + label_of(y));
                }
                let d = |b: u8| if b == 0 { 0 } else { deg_of(b) };
                cells[u] = match (x, y) {
                    (0, 0) => None,
                    _ if x == SAT || y == SAT || d(x) + d(y) >= 2 => Some((2, u8::MAX)),
                    (x, 0) => Some((deg_of(x), uf.find(label_of(x)))),
                    (0, y) => Some((deg_of(y), uf.find(16 + label_of(y)))),
                    (x, y) => Some((deg_of(x) + deg_of(y), uf.find(label_of(x)))),
                };
            }
            let Some(now_closed) = settle(&cells, before, closed(sa) || closed(sb)) else { continue };
            out.offer(pack(&cells, now_closed), va + vb - shared, (ia as u32, ib));
        }
    }
    out.finish(keys)
}

fn single(v: u32) -> Table {
    Table {
        keys: vec![v],
        entries: vec![(0, 0), (cell(0, 0) as State, 1)],
    }
}

fn add_edge(t: &Table, u: u32, w: u32) -> (Table, Vec<Back>) {
    let iu = t.keys.iter().position(|&x| x == u).unwrap();
    let iw = t.keys.iter().position(|&x| x == w).unwrap();
    let k = t.keys.len();
    let mut out = Builder::new();
    for (i, &(s, v)) in t.entries.iter().enumerate() {
        let (x, y) = (byte(s, iu), byte(s, iw));
        if x == 0 || y == 0 {
            out.offer(s, v, (i as u32, 0));
            continue;
        }
        if !is_open(x) || !is_open(y) || label_of(x) == label_of(y) {
            continue;
        }
        let (lx, ly) = (label_of(x), label_of(y));
        let mut cells = unpack(s, k);
        cells[iu] = Some((deg_of(x) + 1, lx));
        cells[iw] = Some((deg_of(y) + 1, lx));
        for c in cells.iter_mut().flatten() {
            if c.0 < 2 && c.1 == ly {
                c.1 = lx;
            }
        }
        let Some(now_closed) = settle(&cells, 1 << lx, closed(s)) else { continue };
        out.offer(pack(&cells, now_closed), v, (i as u32, 0));
    }
    out.finish(t.keys.clone())
}

fn forget(t: &Table, x: u32) -> (Table, Vec<Back>) {
    let ix = t.keys.iter().position(|&y| y == x).unwrap();
    let k = t.keys.len();
    let keys: Vec<u32> = t.keys.iter().copied().filter(|&y| y != x).collect();
    let mut out = Builder::new();
    for (i, &(s, v)) in t.entries.iter().enumerate() {
        let b = byte(s, ix);
        let mut cells = unpack(s, k);
        cells.remove(ix);
        let now_closed = if is_open(b) {
            let Some(c) = settle(&cells, 1 << label_of(b), closed(s)) else { continue };
            c
        } else {
            closed(s)
        };
        out.offer(pack(&cells, now_closed), v, (i as u32, 0));
    }
    out.finish(keys)
}

struct Elimination {
    order: Vec<u32>,
    /// Later neighbours of each vertex in the filled graph, sorted.
    later: Vec<Vec<u32>>,
    parent: Vec<Option<u32>>,
}

fn fill_in(adj: &[BTreeSet<u32>], v: usize) -> usize {
    let nb: Vec<u32> = adj[v].iter().copied().collect();
    let mut missing = 0;
    for (i, &a) in nb.iter().enumerate() {
        for &b in &nb[i + 1..] {
            if !adj[a as usize].contains(&b) {
                missing += 1;
            }
        }
    }
    missing
}

/// Greedy minimum fill-in ordering, ties broken by degree then label.
fn eliminate(g: &OrderedGraph) -> Elimination {
    let n = g.n();
    let mut adj: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); n + 1];
    for (u, v) in g.edges() {
        adj[u].insert(v as u32);
        adj[v].insert(u as u32);
    }
    let key = |adj: &[BTreeSet<u32>], v: usize| (fill_in(adj, v), adj[v].len(), v as u32);
    let mut current: Vec<(usize, usize, u32)> = (0..=n).map(|v| key(&adj, v)).collect();
    let mut heap: BTreeSet<(usize, usize, u32)> = (1..=n).map(|v| current[v]).collect();
    let mut order = Vec::with_capacity(n);
    let mut later = vec![Vec::new(); n + 1];
    while let Some((_, _, v)) = heap.pop_first() {
        let vu = v as usize;
        order.push(v);
        let nb: Vec<u32> = adj[vu].iter().copied().collect();
        for &a in &nb {
            adj[a as usize].remove(&v);
        }
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                adj[a as usize].insert(b);
                adj[b as usize].insert(a);
            }
        }
        let mut touched: BTreeSet<u32> = nb.iter().copied().collect();
        for &a in &nb {
            touched.extend(adj[a as usize].iter().copied());
        }
        for &a in &touched {
            let a = a as usize;
            if heap.remove(&current[a]) {
                current[a] = key(&adj, a);
                heap.insert(current[a]);
            }
        }
        adj[vu].clear();
        later[vu] = nb;
    }
    let mut rank = vec![0usize; n + 1];
    for (i, &v) in order.iter().enumerate() {
        rank[v as usize] = i;
    }
    let parent = (0..=n)
        .map(|v| later[v].iter().copied().min_by_key(|&u| rank[u as usize]))
        .collect();
    Elimination { order, later, parent }
}

/// One step of the computation at a bag; `child` is set for the merge of
/// that child's table.
struct Step {
    table: Table,
    backs: Vec<Back>,
    child: Option<usize>,
}

/// Runs the computation at bag `v`. Edges are added as soon as both ends
/// are present, which saturates vertices early and keeps tables small.
fn run_bag(g: &OrderedGraph, v: u32, children: &[u32], tables: &HashMap<u32, Table>, later: &[u32]) -> Vec<Step> {
    let mut steps: Vec<Step> = Vec::new();
    let mut cur = single(v);
    let mut pending: Vec<u32> = later.iter().copied().filter(|&w| g.has_edge(v as usize, w as usize)).collect();
    let mut sources: Vec<(Option<usize>, u32)> = children.iter().enumerate().map(|(i, &c)| (Some(i), c)).collect();
    // Separator vertices that nothing here touches are left out; they are
    // introduced wherever they are next needed.
    sources.extend(pending.iter().map(|&w| (None, w)));
    for (child, u) in sources {
        let (table, backs) = match child {
            Some(_) => merge(&cur, &tables[&u]),
            None if !cur.keys.contains(&u) => merge(&cur, &single(u)),
            None => continue,
        };
        cur = table.clone();
        steps.push(Step { table, backs, child });
        let (ready, rest): (Vec<u32>, Vec<u32>) = pending.iter().partition(|w| cur.keys.contains(w));
        pending = rest;
        for w in ready {
            let (table, backs) = add_edge(&cur, v, w);
            cur = table.clone();
            steps.push(Step { table, backs, child: None });
        }
    }
    let (table, backs) = forget(&cur, v);
    steps.push(Step { table, backs, child: None });
    steps
}

/// Exact order of a longest induced path, with a witness. Fails when the
/// elimination ordering has a separator larger than [`MAX_SEPARATOR`].
pub fn longest_induced_path_decomposed(g: &OrderedGraph) -> Result<InducedPathResult> {
    let n = g.n();
    if n == 0 {
        return Ok(InducedPathResult { length: 0, witness: Vec::new(), capped: false });
    }
    let el = eliminate(g);
    if let Some(w) = el.later.iter().map(Vec::len).max().filter(|&w| w > MAX_SEPARATOR) {
        return Err(CoreError::Precondition(format!(
            "elimination ordering has a separator of {w} vertices, at most {MAX_SEPARATOR} supported"
        )));
    }
    let mut children: Vec<Vec<u32>> = vec![Vec::new(); n + 1];
    let mut roots = Vec::new();
    for &v in &el.order {
        match el.parent[v as usize] {
            Some(p) => children[p as usize].push(v),
            None => roots.push(v),
        }
    }
    let mut tables: HashMap<u32, Table> = HashMap::new();
    for &v in &el.order {
        let run = run_bag(g, v, &children[v as usize], &tables, &el.later[v as usize]);
        tables.insert(v, run.into_iter().last().unwrap().table);
    }

    // Combine the roots (one per connected component).
    let mut acc = Table { keys: Vec::new(), entries: vec![(0, 0)] };
    let mut root_steps = Vec::new();
    for &r in &roots {
        let (t, b) = merge(&acc, &tables[&r]);
        acc = t.clone();
        root_steps.push((t, b));
    }
    let (best_idx, &(_, best)) = acc
        .entries
        .iter()
        .enumerate()
        .max_by_key(|(i, e)| (e.1, std::cmp::Reverse(*i)))
        .unwrap();

    // Walk back through the roots.
    let mut want: Vec<(u32, u32)> = Vec::new();
    let mut idx = best_idx as u32;
    for (i, &r) in roots.iter().enumerate().rev() {
        let (ia, ib) = root_steps[i].1[idx as usize];
        want.push((r, ib));
        idx = ia;
    }

    let mut selected = Vec::new();
    while let Some((v, entry)) = want.pop() {
        let kids = &children[v as usize];
        let run = run_bag(g, v, kids, &tables, &el.later[v as usize]);
        let mut idx = entry;
        let mut child_entries = vec![0u32; kids.len()];
        for step in run.iter().rev() {
            let (ia, ib) = step.backs[idx as usize];
            if let Some(ci) = step.child {
                child_entries[ci] = ib;
            }
            idx = ia;
        }
        // `idx` now indexes the table of `v` alone: 0 = out, 1 = in.
        if idx == 1 {
            selected.push(v as usize);
        }
        for (c, e) in kids.iter().zip(child_entries) {
            want.push((*c, e));
        }
    }
    if selected.len() != best as usize {
        return Err(CoreError::Certificate("witness reconstruction lost vertices".into()));
    }
    let witness = order_path(g, &selected)?;
    Ok(InducedPathResult { length: witness.len(), witness, capped: false })
}

/// Lists the vertices of an induced path from its smaller endpoint.
fn order_path(g: &OrderedGraph, set: &[usize]) -> Result<Vec<usize>> {
    if set.len() <= 1 {
        return Ok(set.to_vec());
    }
    let inside: BTreeSet<usize> = set.iter().copied().collect();
    let nb = |v: usize| -> Vec<usize> {
        g.neighbors(v)
            .iter()
            .map(|&w| w as usize)
            .filter(|w| inside.contains(w))
            .collect()
    };
    let start = *inside
        .iter()
        .find(|&&v| nb(v).len() == 1)
        .ok_or_else(|| CoreError::Certificate("selected set has no path endpoint".into()))?;
    let mut path = vec![start];
    let mut prev = 0;
    let mut cur = start;
    loop {
        let next: Vec<usize> = nb(cur).into_iter().filter(|&w| w != prev).collect();
        match next.as_slice() {
            [] => break,
            [w] => {
                prev = cur;
                cur = *w;
                path.push(cur);
            }
            _ => return Err(CoreError::Certificate("selected set branches".into())),
        }
    }
    if path.len() != set.len() {
        return Err(CoreError::Certificate("selected set is not a single path".into()));
    }
    Ok(path)
}
