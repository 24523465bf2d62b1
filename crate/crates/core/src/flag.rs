//! Directed flag complex: simplex counting, edge neighbourhoods and the
//! local count update for backbone-preserving edge changes.
//!
//! A d-simplex is an ordered vertex chain `v0, …, vd` with an edge `vi → vj`
//! for every `i < j`. Counting extends chains through the intersection of
//! out-neighbourhoods, one bit row per level.

use alloc::vec;
use alloc::vec::Vec;
use core::mem;

use hashbrown::HashMap;
use serde::{Deserialize, Serialize};

use crate::bitset::{and_into, BitMatrix, Ones};
use crate::error::Result;
use crate::graph::{normalize, DirectedGraph, Edge, UndirectedGraph, Vertex};
use crate::moves::Transition;

/// Per-dimension simplex counts `[s0, s1, …, sD]`, without trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SimplexCounts(Vec<u64>);

impl SimplexCounts {
    pub fn new(mut counts: Vec<u64>) -> Self {
        while counts.last() == Some(&0) {
            counts.pop();
        }
        SimplexCounts(counts)
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    /// Count in dimension `d`; zero past the top dimension.
    #[inline]
    pub fn get(&self, d: usize) -> u64 {
        self.0.get(d).copied().unwrap_or(0)
    }

    /// Number of stored dimensions (top dimension + 1).
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<u64> {
        self.0
    }

    /// `self + delta`. Panics if a count would go negative, which can only
    /// follow from a delta computed against a different graph.
    pub fn apply(&self, delta: &CountDelta) -> SimplexCounts {
        let len = self.0.len().max(delta.0.len());
        let v = (0..len)
            .map(|d| {
                let x = self.get(d) as i64 + delta.get(d);
                u64::try_from(x).expect("simplex count underflow")
            })
            .collect();
        SimplexCounts::new(v)
    }
}

/// Signed per-dimension change of simplex counts.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CountDelta(Vec<i64>);

impl CountDelta {
    pub fn between(before: &[u64], after: &[u64]) -> Self {
        let len = before.len().max(after.len());
        let g = |s: &[u64], d: usize| s.get(d).copied().unwrap_or(0) as i64;
        CountDelta((0..len).map(|d| g(after, d) - g(before, d)).collect())
    }

    #[inline]
    pub fn get(&self, d: usize) -> i64 {
        self.0.get(d).copied().unwrap_or(0)
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
}

/// Reusable scratch space for simplex enumeration on a bit matrix.
#[derive(Default, Clone)]
pub struct SimplexCounter {
    bufs: Vec<Vec<u64>>,
    counts: Vec<u64>,
}

impl SimplexCounter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Counts the simplices of the digraph whose adjacency is `m`, up to
    /// dimension `max_dim` inclusive.
    pub fn count(&mut self, m: &BitMatrix, max_dim: usize) -> &[u64] {
        self.counts.clear();
        let n = m.size();
        if n == 0 {
            return &self.counts;
        }
        self.counts.push(n as u64);
        if max_dim >= 1 {
            for v in 0..n {
                self.extend(m, 1, m.row(v), max_dim);
            }
        }
        while self.counts.last() == Some(&0) {
            self.counts.pop();
        }
        &self.counts
    }

    fn extend(&mut self, m: &BitMatrix, depth: usize, cand: &[u64], max_dim: usize) {
        if self.counts.len() <= depth {
            self.counts.resize(depth + 1, 0);
        }
        if depth == max_dim {
            self.counts[depth] += crate::bitset::count_ones(cand) as u64;
            return;
        }
        if self.bufs.len() <= depth {
            self.bufs.resize_with(depth + 1, Vec::new);
        }
        let mut buf = mem::take(&mut self.bufs[depth]);
        buf.resize(m.stride(), 0);
        for w in Ones::new(cand) {
            self.counts[depth] += 1;
            and_into(&mut buf, cand, m.row(w));
            if buf.iter().any(|&x| x != 0) {
                self.extend(m, depth + 1, &buf, max_dim);
            }
        }
        self.bufs[depth] = buf;
    }
}

/// Simplex counts of the directed flag complex of `g`.
pub fn count_simplices(g: &DirectedGraph) -> SimplexCounts {
    count_simplices_capped(g, usize::MAX)
}

/// Like [`count_simplices`] but ignores dimensions above `max_dim`.
pub fn count_simplices_capped(g: &DirectedGraph, max_dim: usize) -> SimplexCounts {
    let mut c = SimplexCounter::new();
    SimplexCounts::new(c.count(g.adjacency(), max_dim).to_vec())
}

/// Sorted vertex set of an edge neighbourhood.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Neighbourhood(pub Vec<Vertex>);

/// `{i, j}` plus every common neighbour of `i` and `j` in either direction,
/// united over `edges`. Edges need not be present in `g`.
pub fn edge_neighbourhood(g: &DirectedGraph, edges: &[Edge]) -> Neighbourhood {
    let adj = g.adjacency();
    let n = g.n_vertices() as usize;
    let touches = |a: usize, k: usize| adj.get(a, k) || adj.get(k, a);
    let mut out = Vec::new();
    for &(i, j) in edges {
        out.push(i);
        out.push(j);
        let (i, j) = (i as usize, j as usize);
        for k in 0..n {
            if k != i && k != j && touches(i, k) && touches(j, k) {
                out.push(k as Vertex);
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    Neighbourhood(out)
}

/// Precomputed neighbourhood of every backbone edge.
///
/// Backbone-preserving moves never change undirected adjacency, so one cache
/// serves the whole chain.
#[derive(Clone, Debug)]
pub struct NeighbourhoodCache {
    map: HashMap<Edge, Vec<Vertex>>,
}

impl NeighbourhoodCache {
    pub fn new(backbone: &UndirectedGraph) -> Self {
        let adj = backbone.adjacency();
        let mut buf = vec![0u64; adj.stride()];
        let mut map = HashMap::with_capacity(backbone.n_edges());
        for &(a, b) in backbone.edges() {
            and_into(&mut buf, adj.row(a as usize), adj.row(b as usize));
            let mut v: Vec<Vertex> = Ones::new(&buf).map(|x| x as Vertex).collect();
            v.push(a);
            v.push(b);
            v.sort_unstable();
            map.insert((a, b), v);
        }
        NeighbourhoodCache { map }
    }

    /// Neighbourhood of one backbone pair, in either orientation.
    pub fn get(&self, e: Edge) -> Option<&[Vertex]> {
        self.map.get(&normalize(e)).map(Vec::as_slice)
    }

    /// Union of the neighbourhoods of `edges`, written sorted into `out`.
    /// Falls back to `{i, j}` for pairs outside the backbone.
    pub fn union_into(&self, edges: impl Iterator<Item = Edge>, out: &mut Vec<Vertex>) {
        out.clear();
        for e in edges {
            match self.get(e) {
                Some(v) => out.extend_from_slice(v),
                None => {
                    out.push(e.0);
                    out.push(e.1);
                }
            }
        }
        out.sort_unstable();
        out.dedup();
    }
}

/// Computes the count change of a transition by counting only on the
/// subgraph induced by the neighbourhood of the changed edges, before and
/// after the change. Never mutates the global graph.
#[derive(Default, Clone)]
pub struct LocalCounter {
    verts: Vec<Vertex>,
    counter: SimplexCounter,
    before: Vec<u64>,
}

impl LocalCounter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Count delta of applying `t` to `g`. Uses `cache` when given,
    /// otherwise derives neighbourhoods from `g` directly.
    pub fn delta(
        &mut self,
        g: &DirectedGraph,
        t: &Transition,
        cache: Option<&NeighbourhoodCache>,
    ) -> Result<CountDelta> {
        t.check_applicable(g)?;
        Ok(self.delta_unchecked(g, t, cache))
    }

    /// [`LocalCounter::delta`] for a transition known to be applicable,
    /// such as one produced by the move generators for `g`.
    pub fn delta_unchecked(
        &mut self,
        g: &DirectedGraph,
        t: &Transition,
        cache: Option<&NeighbourhoodCache>,
    ) -> CountDelta {
        if t.is_empty() {
            return CountDelta::default();
        }
        let changed = t.deletions.iter().chain(&t.insertions).copied();
        match cache {
            Some(c) => c.union_into(changed, &mut self.verts),
            None => {
                let all: Vec<Edge> = changed.collect();
                self.verts = edge_neighbourhood(g, &all).0;
            }
        }
        let k = self.verts.len();
        let mut local = BitMatrix::new(k);
        for (i, &a) in self.verts.iter().enumerate() {
            for (j, &b) in self.verts.iter().enumerate() {
                if i != j && g.has_edge(a, b) {
                    local.set(i, j);
                }
            }
        }
        self.before.clear();
        self.before
            .extend_from_slice(self.counter.count(&local, usize::MAX));
        let pos = |verts: &[Vertex], v: Vertex| verts.binary_search(&v).expect("endpoint in nbhd");
        for &(a, b) in &t.deletions {
            local.clear(pos(&self.verts, a), pos(&self.verts, b));
        }
        for &(a, b) in &t.insertions {
            local.set(pos(&self.verts, a), pos(&self.verts, b));
        }
        let after = self.counter.count(&local, usize::MAX);
        CountDelta::between(&self.before, after)
    }
}

/// One-shot form of [`LocalCounter::delta`].
pub fn delta_count(
    g: &DirectedGraph,
    t: &Transition,
    cache: Option<&NeighbourhoodCache>,
) -> Result<CountDelta> {
    LocalCounter::new().delta(g, t, cache)
}
