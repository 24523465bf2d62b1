//! Directed and undirected simple graphs.
//!
//! [`DirectedGraph`] keeps a dense adjacency matrix for O(1) membership and
//! two [`IndexedSet`]s (single edges, double edges) for O(1) uniform draws.
//! The directed edge set is `singles ∪ {(a,b), (b,a) : {a,b} ∈ doubles}`.

use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bitset::{BitMatrix, Ones};
use crate::error::{Error, Result};
use crate::indexset::IndexedSet;

pub type Vertex = u32;

/// Directed edge `(source, target)`. For undirected pairs the convention is
/// `(lo, hi)` with `lo < hi`.
pub type Edge = (Vertex, Vertex);

#[inline]
pub fn normalize(e: Edge) -> Edge {
    if e.0 < e.1 {
        e
    } else {
        (e.1, e.0)
    }
}

/// Simple undirected graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UndirectedGraph {
    adj: BitMatrix,
    edges: Vec<Edge>,
}

impl UndirectedGraph {
    pub fn new(n: u32) -> Self {
        UndirectedGraph {
            adj: BitMatrix::new(n as usize),
            edges: Vec::new(),
        }
    }

    pub fn from_edges<I: IntoIterator<Item = Edge>>(n: u32, edges: I) -> Result<Self> {
        let mut g = UndirectedGraph::new(n);
        for (a, b) in edges {
            g.add_edge(a, b)?;
        }
        g.edges.sort_unstable();
        Ok(g)
    }

    fn add_edge(&mut self, a: Vertex, b: Vertex) -> Result<bool> {
        check_pair(self.n_vertices(), a, b)?;
        if self.adj.get(a as usize, b as usize) {
            return Ok(false);
        }
        self.adj.set(a as usize, b as usize);
        self.adj.set(b as usize, a as usize);
        self.edges.push(normalize((a, b)));
        Ok(true)
    }

    #[inline]
    pub fn n_vertices(&self) -> u32 {
        self.adj.size() as u32
    }

    #[inline]
    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    /// Sorted `(lo, hi)` pairs.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    #[inline]
    pub fn has_edge(&self, a: Vertex, b: Vertex) -> bool {
        self.adj.get(a as usize, b as usize)
    }

    /// Symmetric adjacency matrix.
    pub fn adjacency(&self) -> &BitMatrix {
        &self.adj
    }

    pub fn neighbours(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        Ones::new(self.adj.row(v as usize)).map(|x| x as Vertex)
    }
}

fn check_pair(n: u32, a: Vertex, b: Vertex) -> Result<()> {
    for v in [a, b] {
        if v >= n {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
    }
    if a == b {
        return Err(Error::SelfLoop(a));
    }
    Ok(())
}

/// One primitive mutation, recorded so it can be undone exactly.
#[derive(Clone, Copy, Debug)]
pub(crate) enum LogOp {
    SetBit(Edge),
    ClearBit(Edge),
    InsSingle(Edge),
    RemSingle(Edge, usize),
    InsDouble(Edge),
    RemDouble(Edge, usize),
}

/// Simple directed graph with a maintained double-edge set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "GraphRepr", try_from = "GraphRepr")]
pub struct DirectedGraph {
    adj: BitMatrix,
    singles: IndexedSet<Edge>,
    doubles: IndexedSet<Edge>,
}

/// Serialized form; keeps the internal set order so that a restored graph
/// samples exactly like the original.
#[derive(Serialize, Deserialize)]
struct GraphRepr {
    n_vertices: u32,
    singles: Vec<Edge>,
    doubles: Vec<Edge>,
}

impl From<DirectedGraph> for GraphRepr {
    fn from(g: DirectedGraph) -> Self {
        GraphRepr {
            n_vertices: g.n_vertices(),
            singles: g.singles.into(),
            doubles: g.doubles.into(),
        }
    }
}

impl TryFrom<GraphRepr> for DirectedGraph {
    type Error = Error;

    fn try_from(r: GraphRepr) -> Result<Self> {
        let mut g = DirectedGraph::new(r.n_vertices);
        for &(a, b) in &r.singles {
            check_pair(r.n_vertices, a, b)?;
            if g.adj.get(a as usize, b as usize) || g.adj.get(b as usize, a as usize) {
                return Err(Error::EdgePresent((a, b)));
            }
            g.adj.set(a as usize, b as usize);
            g.singles.insert((a, b));
        }
        for &(a, b) in &r.doubles {
            check_pair(r.n_vertices, a, b)?;
            if g.adj.get(a as usize, b as usize) || g.adj.get(b as usize, a as usize) {
                return Err(Error::EdgePresent((a, b)));
            }
            g.adj.set(a as usize, b as usize);
            g.adj.set(b as usize, a as usize);
            g.doubles.insert(normalize((a, b)));
        }
        Ok(g)
    }
}

impl DirectedGraph {
    pub fn new(n: u32) -> Self {
        DirectedGraph {
            adj: BitMatrix::new(n as usize),
            singles: IndexedSet::new(),
            doubles: IndexedSet::new(),
        }
    }

    /// Builds a graph from a list of directed edges; duplicates collapse.
    pub fn from_edges<I: IntoIterator<Item = Edge>>(n: u32, edges: I) -> Result<Self> {
        let mut g = DirectedGraph::new(n);
        for (a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    #[inline]
    pub fn n_vertices(&self) -> u32 {
        self.adj.size() as u32
    }

    #[inline]
    pub fn n_edges(&self) -> usize {
        self.singles.len() + 2 * self.doubles.len()
    }

    #[inline]
    pub fn n_singles(&self) -> usize {
        self.singles.len()
    }

    #[inline]
    pub fn n_doubles(&self) -> usize {
        self.doubles.len()
    }

    pub fn singles(&self) -> &IndexedSet<Edge> {
        &self.singles
    }

    /// Double edges as `(lo, hi)` pairs.
    pub fn doubles(&self) -> &IndexedSet<Edge> {
        &self.doubles
    }

    #[inline]
    pub fn has_edge(&self, a: Vertex, b: Vertex) -> bool {
        self.adj.get(a as usize, b as usize)
    }

    /// Dense adjacency; row `i` holds `Out(i)`.
    #[inline]
    pub fn adjacency(&self) -> &BitMatrix {
        &self.adj
    }

    /// All directed edges, sorted.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::with_capacity(self.n_edges());
        out.extend(self.singles.iter().copied());
        for &(a, b) in self.doubles.iter() {
            out.push((a, b));
            out.push((b, a));
        }
        out.sort_unstable();
        out
    }

    pub fn out_neighbours(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        Ones::new(self.adj.row(v as usize)).map(|x| x as Vertex)
    }

    pub fn in_neighbours(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.n_vertices()).filter(move |&u| self.has_edge(u, v))
    }

    /// Adds `(a, b)`; returns `false` if it was already present.
    pub fn add_edge(&mut self, a: Vertex, b: Vertex) -> Result<bool> {
        check_pair(self.n_vertices(), a, b)?;
        if self.has_edge(a, b) {
            return Ok(false);
        }
        self.insert_unchecked((a, b), &mut None);
        Ok(true)
    }

    /// Removes `(a, b)`; returns `false` if it was absent.
    pub fn remove_edge(&mut self, a: Vertex, b: Vertex) -> Result<bool> {
        check_pair(self.n_vertices(), a, b)?;
        if !self.has_edge(a, b) {
            return Ok(false);
        }
        self.remove_unchecked((a, b), &mut None);
        Ok(true)
    }

    pub(crate) fn insert_unchecked(&mut self, (a, b): Edge, log: &mut Option<&mut Vec<LogOp>>) {
        self.adj.set(a as usize, b as usize);
        let mut ops = [None, None, None];
        ops[0] = Some(LogOp::SetBit((a, b)));
        if self.has_edge(b, a) {
            let i = self
                .singles
                .remove(&(b, a))
                .expect("reverse edge is single");
            ops[1] = Some(LogOp::RemSingle((b, a), i));
            self.doubles.insert(normalize((a, b)));
            ops[2] = Some(LogOp::InsDouble(normalize((a, b))));
        } else {
            self.singles.insert((a, b));
            ops[1] = Some(LogOp::InsSingle((a, b)));
        }
        if let Some(log) = log {
            log.extend(ops.into_iter().flatten());
        }
    }

    pub(crate) fn remove_unchecked(&mut self, (a, b): Edge, log: &mut Option<&mut Vec<LogOp>>) {
        self.adj.clear(a as usize, b as usize);
        let mut ops = [None, None, None];
        ops[0] = Some(LogOp::ClearBit((a, b)));
        if self.has_edge(b, a) {
            let d = normalize((a, b));
            let i = self.doubles.remove(&d).expect("pair is double");
            ops[1] = Some(LogOp::RemDouble(d, i));
            self.singles.insert((b, a));
            ops[2] = Some(LogOp::InsSingle((b, a)));
        } else {
            let i = self.singles.remove(&(a, b)).expect("edge is single");
            ops[1] = Some(LogOp::RemSingle((a, b), i));
        }
        if let Some(log) = log {
            log.extend(ops.into_iter().flatten());
        }
    }

    pub(crate) fn undo(&mut self, ops: &[LogOp]) {
        for op in ops.iter().rev() {
            match *op {
                LogOp::SetBit((a, b)) => self.adj.clear(a as usize, b as usize),
                LogOp::ClearBit((a, b)) => self.adj.set(a as usize, b as usize),
                LogOp::InsSingle(e) => self.singles.undo_insert(e),
                LogOp::RemSingle(e, i) => self.singles.undo_remove(e, i),
                LogOp::InsDouble(e) => self.doubles.undo_insert(e),
                LogOp::RemDouble(e, i) => self.doubles.undo_remove(e, i),
            }
        }
    }

    /// Underlying undirected graph.
    pub fn project(&self) -> UndirectedGraph {
        let pairs = self
            .singles
            .iter()
            .map(|&e| normalize(e))
            .chain(self.doubles.iter().copied());
        UndirectedGraph::from_edges(self.n_vertices(), pairs).expect("edges are valid")
    }

    /// Edge membership equality, ignoring internal set order.
    pub fn same_edges(&self, other: &DirectedGraph) -> bool {
        self.adj == other.adj
    }

    /// Size of the symmetric difference of the two edge sets.
    pub fn hamming_distance(&self, other: &DirectedGraph) -> Result<usize> {
        if self.n_vertices() != other.n_vertices() {
            return Err(Error::VertexCountMismatch {
                left: self.n_vertices(),
                right: other.n_vertices(),
            });
        }
        Ok(self.adj.xor_count(&other.adj))
    }

    pub fn is_oriented(&self) -> bool {
        self.doubles.is_empty()
    }

    /// Subgraph induced on `vertices` (sorted, distinct), relabelled to
    /// `0..vertices.len()` in the given order.
    pub fn induced_subgraph(&self, vertices: &[Vertex]) -> DirectedGraph {
        let k = vertices.len() as u32;
        let mut g = DirectedGraph::new(k);
        for (i, &a) in vertices.iter().enumerate() {
            for (j, &b) in vertices.iter().enumerate() {
                if i != j && self.has_edge(a, b) {
                    g.insert_unchecked((i as Vertex, j as Vertex), &mut None);
                }
            }
        }
        g
    }
}

/// Draws a graph with backbone `b` and exactly `n_double` double edges,
/// uniformly among all such graphs: the double pairs form a uniform subset
/// and every other pair gets an independent fair orientation.
pub fn randomize_directions<R: Rng + ?Sized>(
    b: &UndirectedGraph,
    n_double: usize,
    rng: &mut R,
) -> Result<DirectedGraph> {
    let m = b.n_edges();
    if n_double > m {
        return Err(Error::TooManyDoubles {
            requested: n_double,
            available: m,
        });
    }
    let mut idx: Vec<usize> = (0..m).collect();
    for i in 0..n_double {
        let j = rng.gen_range(i..m);
        idx.swap(i, j);
    }
    let mut is_double = alloc::vec![false; m];
    for &i in &idx[..n_double] {
        is_double[i] = true;
    }
    let mut g = DirectedGraph::new(b.n_vertices());
    for (i, &(lo, hi)) in b.edges().iter().enumerate() {
        if is_double[i] {
            g.insert_unchecked((lo, hi), &mut None);
            g.insert_unchecked((hi, lo), &mut None);
        } else if rng.gen::<bool>() {
            g.insert_unchecked((lo, hi), &mut None);
        } else {
            g.insert_unchecked((hi, lo), &mut None);
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_xoshiro::Xoshiro256StarStar;

    #[test]
    fn projection_of_single_and_double() {
        let g = DirectedGraph::from_edges(2, [(0, 1)]).unwrap();
        assert_eq!(g.project().edges(), &[(0, 1)]);
        let g = DirectedGraph::from_edges(2, [(0, 1), (1, 0)]).unwrap();
        assert_eq!(g.project().edges(), &[(0, 1)]);
        assert_eq!(g.n_doubles(), 1);
        assert_eq!(g.n_singles(), 0);
        assert_eq!(g.project().n_edges(), g.n_edges() - g.n_doubles());
    }

    #[test]
    fn rejects_self_loops_and_out_of_range() {
        assert_eq!(
            DirectedGraph::from_edges(6, [(5, 5)]).unwrap_err(),
            Error::SelfLoop(5)
        );
        assert!(matches!(
            DirectedGraph::from_edges(2, [(0, 2)]),
            Err(Error::VertexOutOfRange { vertex: 2, n: 2 })
        ));
    }

    #[test]
    fn double_edge_bookkeeping() {
        let mut g = DirectedGraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        g.add_edge(1, 0).unwrap();
        assert_eq!(g.doubles().as_slice(), &[(0, 1)]);
        assert_eq!(g.singles().as_slice(), &[(1, 2)]);
        g.remove_edge(0, 1).unwrap();
        assert_eq!(g.n_doubles(), 0);
        assert_eq!(g.singles().as_slice(), &[(1, 2), (1, 0)]);
        assert_eq!(g.edges(), vec![(1, 0), (1, 2)]);
    }

    #[test]
    fn hamming_examples() {
        let g = DirectedGraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(g.hamming_distance(&g).unwrap(), 0);
        let h = DirectedGraph::from_edges(3, [(1, 0), (1, 2)]).unwrap();
        assert_eq!(g.hamming_distance(&h).unwrap(), 2);
        let other = DirectedGraph::new(4);
        assert!(g.hamming_distance(&other).is_err());
    }

    #[test]
    fn randomize_all_double_is_unique() {
        let b = UndirectedGraph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let mut rng = Xoshiro256StarStar::seed_from_u64(1);
        let g = randomize_directions(&b, 3, &mut rng).unwrap();
        assert_eq!(g.n_edges(), 6);
        assert_eq!(g.n_singles(), 0);
        assert!(randomize_directions(&b, 4, &mut rng).is_err());
    }

    #[test]
    fn serde_keeps_internal_order() {
        let mut g = DirectedGraph::from_edges(4, [(0, 1), (2, 3), (3, 2), (1, 2), (0, 3)]).unwrap();
        g.remove_edge(0, 1).unwrap();
        let json = serde_json_like(&g);
        assert_eq!(json, g);
    }

    // Round trip through the serialized representation without pulling a
    // serializer into the core crate.
    fn serde_json_like(g: &DirectedGraph) -> DirectedGraph {
        let r: GraphRepr = g.clone().into();
        DirectedGraph::try_from(r).unwrap()
    }

    fn arb_graph() -> impl Strategy<Value = DirectedGraph> {
        (2u32..9).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n), 0..30).prop_map(move |es| {
                DirectedGraph::from_edges(n, es.into_iter().filter(|(a, b)| a != b)).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn hamming_is_a_metric(a in arb_graph(), seed in any::<u64>()) {
            let n = a.n_vertices();
            let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
            let mut rand_graph = || {
                let mut g = DirectedGraph::new(n);
                for i in 0..n { for j in 0..n {
                    if i != j && rng.gen_bool(0.3) { g.add_edge(i, j).unwrap(); }
                }}
                g
            };
            let b = rand_graph();
            let c = rand_graph();
            let ab = a.hamming_distance(&b).unwrap();
            prop_assert_eq!(ab, b.hamming_distance(&a).unwrap());
            prop_assert_eq!(a.hamming_distance(&a).unwrap(), 0);
            prop_assert_eq!(ab == 0, a.same_edges(&b));
            prop_assert!(a.hamming_distance(&c).unwrap() <= ab + b.hamming_distance(&c).unwrap());
        }

        #[test]
        fn double_set_matches_reciprocated_pairs(g in arb_graph()) {
            let n = g.n_vertices();
            let mut expected = std::vec::Vec::new();
            for i in 0..n { for j in i + 1..n {
                if g.has_edge(i, j) && g.has_edge(j, i) { expected.push((i, j)); }
            }}
            let mut got: std::vec::Vec<Edge> = g.doubles().iter().copied().collect();
            got.sort_unstable();
            prop_assert_eq!(got, expected);
            prop_assert_eq!(g.edges().len(), g.adjacency().count());
        }

        #[test]
        fn randomize_preserves_counts(g in arb_graph(), seed in any::<u64>()) {
            let b = g.project();
            let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
            let k = (seed as usize) % (b.n_edges() + 1);
            let h = randomize_directions(&b, k, &mut rng).unwrap();
            prop_assert_eq!(h.project(), b.clone());
            prop_assert_eq!(h.n_edges(), b.n_edges() + k);
        }
    }
}
