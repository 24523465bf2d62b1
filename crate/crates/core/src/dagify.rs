//! Removing directed 3-cycles from oriented graphs by single edge flips.
//!
//! [`dagify_tournament`] turns a tournament into a DAG by repeatedly making
//! a vertex of minimal indegree a source. Every flip strictly lowers the
//! number of 3-cycles and each edge is flipped at most once.
//! [`a4_search`] looks for such a sequence on general oriented graphs where
//! no flip may raise the 3-cycle count.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bitset::{
    and_count, clear_bit, count_ones, set_bit, test_bit, words_for, BitMatrix, Ones,
};
use crate::error::{Error, Result};
use crate::graph::{normalize, DirectedGraph, Edge, Vertex};

/// Directed graph without double edges, with both adjacency directions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedGraph {
    out: BitMatrix,
    inn: BitMatrix,
    n_edges: usize,
}

impl OrientedGraph {
    pub fn new(n: u32) -> Self {
        OrientedGraph {
            out: BitMatrix::new(n as usize),
            inn: BitMatrix::new(n as usize),
            n_edges: 0,
        }
    }

    pub fn from_edges<I: IntoIterator<Item = Edge>>(n: u32, edges: I) -> Result<Self> {
        Self::from_directed(&DirectedGraph::from_edges(n, edges)?)
    }

    pub fn from_directed(g: &DirectedGraph) -> Result<Self> {
        if let Some(&e) = g.doubles().iter().next() {
            return Err(Error::NotOriented(e));
        }
        let mut o = OrientedGraph::new(g.n_vertices());
        for (a, b) in g.edges() {
            o.insert(a, b);
        }
        Ok(o)
    }

    pub fn to_directed(&self) -> DirectedGraph {
        DirectedGraph::from_edges(self.n_vertices(), self.edges()).expect("valid edges")
    }

    fn insert(&mut self, a: Vertex, b: Vertex) {
        self.out.set(a as usize, b as usize);
        self.inn.set(b as usize, a as usize);
        self.n_edges += 1;
    }

    pub fn n_vertices(&self) -> u32 {
        self.out.size() as u32
    }

    pub fn n_edges(&self) -> usize {
        self.n_edges
    }

    pub fn has_edge(&self, a: Vertex, b: Vertex) -> bool {
        self.out.get(a as usize, b as usize)
    }

    /// Sorted edge list.
    pub fn edges(&self) -> Vec<Edge> {
        let n = self.out.size();
        let mut v = Vec::with_capacity(self.n_edges);
        for a in 0..n {
            for b in Ones::new(self.out.row(a)) {
                v.push((a as Vertex, b as Vertex));
            }
        }
        v
    }

    pub fn indegree(&self, v: Vertex) -> usize {
        count_ones(self.inn.row(v as usize))
    }

    pub fn outdegree(&self, v: Vertex) -> usize {
        count_ones(self.out.row(v as usize))
    }

    /// Reverses the existing edge `(a, b)`.
    pub fn flip(&mut self, (a, b): Edge) -> Result<()> {
        if !self.has_edge(a, b) {
            return Err(Error::EdgeMissing((a, b)));
        }
        let (a, b) = (a as usize, b as usize);
        self.out.clear(a, b);
        self.inn.clear(b, a);
        self.out.set(b, a);
        self.inn.set(a, b);
        Ok(())
    }

    /// Change in the number of 3-cycles if `(a, b)` were reversed:
    /// cycles `b → a → c → b` gained minus cycles `a → b → c → a` lost.
    pub fn flip_delta(&self, (a, b): Edge) -> i64 {
        let (a, b) = (a as usize, b as usize);
        let gained = and_count(self.out.row(a), self.inn.row(b));
        let lost = and_count(self.out.row(b), self.inn.row(a));
        gained as i64 - lost as i64
    }

    /// Number of directed 3-cycles.
    pub fn count_3cycles(&self) -> u64 {
        let mut total = 0u64;
        for a in 0..self.out.size() {
            for b in Ones::new(self.out.row(a)) {
                total += and_count(self.out.row(b), self.inn.row(a)) as u64;
            }
        }
        total / 3
    }

    /// True if a topological order exists.
    pub fn is_acyclic(&self) -> bool {
        let n = self.out.size();
        let mut indeg: Vec<usize> = (0..n).map(|v| count_ones(self.inn.row(v))).collect();
        let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for w in Ones::new(self.out.row(v)) {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    stack.push(w);
                }
            }
        }
        seen == n
    }

    /// Fails unless every vertex pair is joined by exactly one edge.
    pub fn check_tournament(&self) -> Result<()> {
        let n = self.n_vertices();
        for a in 0..n {
            for b in a + 1..n {
                if !self.has_edge(a, b) && !self.has_edge(b, a) {
                    return Err(Error::NotATournament((a, b)));
                }
            }
        }
        Ok(())
    }
}

/// Edges in the order they were reversed (as they were before the flip),
/// with the 3-cycle count before the first flip and after each flip.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlipSequence {
    pub flips: Vec<Edge>,
    pub initial_cycles: u64,
    pub cycles: Vec<u64>,
}

impl FlipSequence {
    pub fn len(&self) -> usize {
        self.flips.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flips.is_empty()
    }
}

/// Result of replaying a [`FlipSequence`] on its input graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Replay {
    pub strictly_decreasing: bool,
    pub non_increasing: bool,
    pub counts_match: bool,
    pub distinct_edges: bool,
    pub final_cycles: u64,
    pub acyclic: bool,
}

/// Replays `seq` on a copy of `g`. Every flip must reverse an existing
/// edge.
pub fn replay(g: &OrientedGraph, seq: &FlipSequence) -> Result<Replay> {
    let mut h = g.clone();
    let mut c = h.count_3cycles() as i64;
    let mut r = Replay {
        strictly_decreasing: true,
        non_increasing: true,
        counts_match: c as u64 == seq.initial_cycles && seq.cycles.len() == seq.flips.len(),
        distinct_edges: true,
        final_cycles: 0,
        acyclic: false,
    };
    let mut touched: Vec<Edge> = seq.flips.iter().map(|&e| normalize(e)).collect();
    touched.sort_unstable();
    r.distinct_edges = touched.windows(2).all(|w| w[0] != w[1]);
    for (i, &e) in seq.flips.iter().enumerate() {
        let d = h.flip_delta(e);
        h.flip(e)?;
        c += d;
        r.strictly_decreasing &= d < 0;
        r.non_increasing &= d <= 0;
        r.counts_match &= seq.cycles.get(i) == Some(&(c as u64));
    }
    r.final_cycles = h.count_3cycles();
    r.counts_match &= r.final_cycles == c as u64;
    r.acyclic = h.is_acyclic();
    Ok(r)
}

/// Flips every incoming edge of a minimal-indegree vertex (lowest index on
/// ties, sources in ascending order), drops that vertex and repeats.
pub fn dagify_tournament(g: &OrientedGraph) -> Result<FlipSequence> {
    g.check_tournament()?;
    let n = g.n_vertices() as usize;
    let mut h = g.clone();
    let mut remaining = vec![0u64; words_for(n)];
    for v in 0..n {
        set_bit(&mut remaining, v);
    }
    let mut seq = FlipSequence {
        initial_cycles: h.count_3cycles(),
        ..Default::default()
    };
    let mut c = seq.initial_cycles as i64;
    for _ in 0..n {
        let b = Ones::new(&remaining)
            .min_by_key(|&v| and_count(h.inn.row(v), &remaining))
            .expect("nonempty");
        let sources: Vec<usize> = Ones::new(h.inn.row(b))
            .filter(|&x| test_bit(&remaining, x))
            .collect();
        for x in sources {
            let e = (x as Vertex, b as Vertex);
            c += h.flip_delta(e);
            h.flip(e)?;
            seq.flips.push(e);
            seq.cycles.push(c as u64);
        }
        clear_bit(&mut remaining, b);
    }
    Ok(seq)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchOutcome {
    Found(FlipSequence),
    /// The search gave up; this proves nothing about the graph.
    NotFound,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchResult {
    pub outcome: SearchOutcome,
    pub nodes: u64,
}

/// Depth-first search for a flip sequence to a DAG in which no flip raises
/// the 3-cycle count and no edge is flipped twice.
///
/// Vertices that are sources or sinks of the remaining subgraph are peeled
/// off for free. Otherwise a vertex is turned into a source (flipping its
/// remaining incoming edges) or a sink, cheapest first; its edges are
/// flipped greedily by smallest 3-cycle change and the attempt fails as
/// soon as the best change is positive. Each attempt costs one node of
/// `budget`.
pub fn a4_search(g: &OrientedGraph, budget: u64) -> SearchResult {
    let n = g.n_vertices() as usize;
    let mut s = Search {
        h: g.clone(),
        flipped: BitMatrix::new(n),
        seq: FlipSequence {
            initial_cycles: g.count_3cycles(),
            ..Default::default()
        },
        cycles: 0,
        nodes: 0,
        budget,
    };
    s.cycles = s.seq.initial_cycles as i64;
    let mut remaining = vec![0u64; words_for(n)];
    for v in 0..n {
        set_bit(&mut remaining, v);
    }
    let found = s.descend(&mut remaining);
    SearchResult {
        outcome: if found {
            SearchOutcome::Found(s.seq)
        } else {
            SearchOutcome::NotFound
        },
        nodes: s.nodes,
    }
}

struct Search {
    h: OrientedGraph,
    flipped: BitMatrix,
    seq: FlipSequence,
    cycles: i64,
    nodes: u64,
    budget: u64,
}

impl Search {
    fn descend(&mut self, remaining: &mut [u64]) -> bool {
        let mut peeled = Vec::new();
        loop {
            let free = Ones::new(remaining).find(|&v| {
                and_count(self.h.inn.row(v), remaining) == 0
                    || and_count(self.h.out.row(v), remaining) == 0
            });
            match free {
                Some(v) => {
                    clear_bit(remaining, v);
                    peeled.push(v);
                }
                None => break,
            }
        }
        if count_ones(remaining) == 0 {
            return true;
        }
        let mut cands: Vec<(usize, usize, bool)> = Vec::new();
        for v in Ones::new(remaining) {
            cands.push((and_count(self.h.inn.row(v), remaining), v, true));
            cands.push((and_count(self.h.out.row(v), remaining), v, false));
        }
        cands.sort_unstable_by_key(|&(cost, v, to_source)| (cost, v, !to_source));
        for (_, v, to_source) in cands {
            if self.nodes >= self.budget {
                break;
            }
            self.nodes += 1;
            let mark = self.seq.flips.len();
            if self.make_extremal(v, to_source, remaining) {
                clear_bit(remaining, v);
                if self.descend(remaining) {
                    return true;
                }
                set_bit(remaining, v);
            }
            self.undo_to(mark);
        }
        for v in peeled {
            set_bit(remaining, v);
        }
        false
    }

    fn make_extremal(&mut self, v: usize, to_source: bool, remaining: &[u64]) -> bool {
        let row = if to_source {
            self.h.inn.row(v)
        } else {
            self.h.out.row(v)
        };
        let mut todo: Vec<Edge> = Ones::new(row)
            .filter(|&w| test_bit(remaining, w))
            .map(|w| {
                if to_source {
                    (w as Vertex, v as Vertex)
                } else {
                    (v as Vertex, w as Vertex)
                }
            })
            .collect();
        if todo
            .iter()
            .any(|&(a, b)| self.flipped.get(a as usize, b as usize))
        {
            return false;
        }
        while !todo.is_empty() {
            let (i, d) = todo
                .iter()
                .enumerate()
                .map(|(i, &e)| (i, self.h.flip_delta(e)))
                .min_by_key(|&(i, d)| (d, todo[i]))
                .expect("nonempty");
            if d > 0 {
                return false;
            }
            let e = todo.swap_remove(i);
            self.apply(e, d);
        }
        true
    }

    fn apply(&mut self, e: Edge, d: i64) {
        self.h.flip(e).expect("edge present");
        let (a, b) = (e.0 as usize, e.1 as usize);
        self.flipped.set(a, b);
        self.flipped.set(b, a);
        self.cycles += d;
        self.seq.flips.push(e);
        self.seq.cycles.push(self.cycles as u64);
    }

    fn undo_to(&mut self, mark: usize) {
        while self.seq.flips.len() > mark {
            let (a, b) = self.seq.flips.pop().expect("nonempty");
            self.seq.cycles.pop();
            self.h.flip((b, a)).expect("edge present");
            self.flipped.clear(a as usize, b as usize);
            self.flipped.clear(b as usize, a as usize);
        }
        self.cycles = self
            .seq
            .cycles
            .last()
            .map_or(self.seq.initial_cycles, |&c| c) as i64;
    }
}

/// Oriented Erdős–Rényi graph: each pair joined with probability `p`,
/// direction by a fair coin.
pub fn random_oriented<R: Rng + ?Sized>(n: u32, p: f64, rng: &mut R) -> OrientedGraph {
    let mut g = OrientedGraph::new(n);
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                if rng.gen::<bool>() {
                    g.insert(a, b);
                } else {
                    g.insert(b, a);
                }
            }
        }
    }
    g
}

/// Uniformly random tournament.
pub fn random_tournament<R: Rng + ?Sized>(n: u32, rng: &mut R) -> OrientedGraph {
    random_oriented(n, 1.0, rng)
}

/// An instance the search gave up on, with everything needed to rerun it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub index: u64,
    pub seed: u64,
    pub n_vertices: u32,
    pub edges: Vec<Edge>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub n_vertices: u32,
    pub p: f64,
    pub n_graphs: u64,
    pub seed: u64,
    pub budget: u64,
    pub successes: u64,
    /// Successful sequences that failed their own replay check.
    pub invalid: u64,
    pub failures: Vec<Failure>,
    pub total_nodes: u64,
    pub max_flips: usize,
    pub total_flips: u64,
    pub total_edges: u64,
}

/// Outcome for one campaign graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceResult {
    pub index: u64,
    pub seed: u64,
    pub graph: OrientedGraph,
    pub search: SearchResult,
    pub valid: bool,
}

/// Graph `index` of a campaign uses seed `seed + index`.
pub fn a4_instance<R: Rng + rand::SeedableRng>(
    n: u32,
    p: f64,
    seed: u64,
    index: u64,
    budget: u64,
) -> InstanceResult {
    let s = seed.wrapping_add(index);
    let mut rng = R::seed_from_u64(s);
    let graph = random_oriented(n, p, &mut rng);
    let search = a4_search(&graph, budget);
    let valid = match &search.outcome {
        SearchOutcome::Found(seq) => replay(&graph, seq).is_ok_and(|r| {
            r.non_increasing
                && r.acyclic
                && r.distinct_edges
                && r.counts_match
                && seq.len() <= graph.n_edges()
        }),
        SearchOutcome::NotFound => false,
    };
    InstanceResult {
        index,
        seed: s,
        graph,
        search,
        valid,
    }
}

impl CampaignReport {
    pub fn new(n_vertices: u32, p: f64, n_graphs: u64, seed: u64, budget: u64) -> Self {
        CampaignReport {
            n_vertices,
            p,
            n_graphs,
            seed,
            budget,
            ..Default::default()
        }
    }

    pub fn record(&mut self, r: &InstanceResult) {
        self.total_nodes += r.search.nodes;
        self.total_edges += r.graph.n_edges() as u64;
        match &r.search.outcome {
            SearchOutcome::Found(seq) => {
                if r.valid {
                    self.successes += 1;
                } else {
                    self.invalid += 1;
                }
                self.max_flips = self.max_flips.max(seq.len());
                self.total_flips += seq.len() as u64;
            }
            SearchOutcome::NotFound => self.failures.push(Failure {
                index: r.index,
                seed: r.seed,
                n_vertices: r.graph.n_vertices(),
                edges: r.graph.edges(),
            }),
        }
    }

    pub fn all_succeeded(&self) -> bool {
        self.successes == self.n_graphs
    }
}

/// Runs the search on `n_graphs` seeded oriented ER graphs in sequence.
pub fn a4_campaign<R: Rng + rand::SeedableRng>(
    n: u32,
    p: f64,
    n_graphs: u64,
    seed: u64,
    budget: u64,
) -> CampaignReport {
    let mut report = CampaignReport::new(n, p, n_graphs, seed, budget);
    for i in 0..n_graphs {
        report.record(&a4_instance::<R>(n, p, seed, i, budget));
    }
    report
}
