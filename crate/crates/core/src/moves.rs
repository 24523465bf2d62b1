//! The four backbone-preserving moves and their changesets.
//!
//! * single edge flip (SEF): reverse one single edge;
//! * double edge move (DEM): drop one direction of a double edge and
//!   reciprocate a single edge elsewhere;
//! * clique permute (CP): relabel the edges inside one maximal clique by a
//!   vertex permutation;
//! * clique swap (CS): exchange the internal edge patterns of two maximal
//!   cliques of equal size through a bijection mapping one onto the other.
//!
//! Every move is returned as a [`Transition`]: sorted deletions and
//! insertions of equal length.

use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cliques::MaximalCliques;
use crate::error::{Error, Result};
use crate::graph::{normalize, DirectedGraph, Edge, LogOp, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MoveKind {
    Sef,
    Dem,
    Cp,
    Cs,
    Noop,
}

impl MoveKind {
    pub const ACTIVE: [MoveKind; 4] = [MoveKind::Sef, MoveKind::Dem, MoveKind::Cp, MoveKind::Cs];

    pub fn name(self) -> &'static str {
        match self {
            MoveKind::Sef => "SEF",
            MoveKind::Dem => "DEM",
            MoveKind::Cp => "CP",
            MoveKind::Cs => "CS",
            MoveKind::Noop => "NOOP",
        }
    }
}

/// Edge changeset produced by one move.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Transition {
    pub kind: MoveKind,
    pub deletions: Vec<Edge>,
    pub insertions: Vec<Edge>,
}

impl Transition {
    pub fn noop() -> Self {
        Transition {
            kind: MoveKind::Noop,
            deletions: Vec::new(),
            insertions: Vec::new(),
        }
    }

    /// Builds a transition with sorted changesets.
    pub fn new(kind: MoveKind, mut deletions: Vec<Edge>, mut insertions: Vec<Edge>) -> Self {
        deletions.sort_unstable();
        insertions.sort_unstable();
        Transition {
            kind,
            deletions,
            insertions,
        }
    }

    /// True if applying it changes nothing (NOOP, or an identity
    /// permutation).
    pub fn is_empty(&self) -> bool {
        self.deletions.is_empty() && self.insertions.is_empty()
    }

    pub fn inverse(&self) -> Transition {
        Transition {
            kind: self.kind,
            deletions: self.insertions.clone(),
            insertions: self.deletions.clone(),
        }
    }

    /// Checks that deletions are present, insertions absent, and that the
    /// undirected backbone survives the change.
    pub fn check_applicable(&self, g: &DirectedGraph) -> Result<()> {
        let n = g.n_vertices();
        for &(a, b) in self.deletions.iter().chain(&self.insertions) {
            for v in [a, b] {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
            }
            if a == b {
                return Err(Error::SelfLoop(a));
            }
        }
        for &e in &self.deletions {
            if !g.has_edge(e.0, e.1) {
                return Err(Error::EdgeMissing(e));
            }
        }
        for &e in &self.insertions {
            if g.has_edge(e.0, e.1) {
                return Err(Error::EdgePresent(e));
            }
        }
        if has_duplicates(&self.deletions) || has_duplicates(&self.insertions) {
            return Err(Error::BackboneChanged);
        }
        // A pair's undirected presence after the change must equal before.
        let after = |e: Edge| -> bool {
            if self.insertions.contains(&e) {
                true
            } else if self.deletions.contains(&e) {
                false
            } else {
                g.has_edge(e.0, e.1)
            }
        };
        for &(a, b) in self.deletions.iter().chain(&self.insertions) {
            let before = g.has_edge(a, b) || g.has_edge(b, a);
            if before != (after((a, b)) || after((b, a))) {
                return Err(Error::BackboneChanged);
            }
        }
        Ok(())
    }
}

fn has_duplicates(v: &[Edge]) -> bool {
    let mut s = v.to_vec();
    s.sort_unstable();
    s.windows(2).any(|w| w[0] == w[1])
}

/// Record of an applied transition, consumed by
/// [`DirectedGraph::revert`] to restore the graph bit for bit.
#[derive(Debug)]
#[must_use]
pub struct Applied {
    ops: Vec<LogOp>,
}

impl DirectedGraph {
    /// Applies `t` in place after checking its preconditions.
    pub fn apply(&mut self, t: &Transition) -> Result<Applied> {
        t.check_applicable(self)?;
        Ok(self.apply_unchecked(t))
    }

    /// Applies a transition already known to be applicable.
    pub fn apply_unchecked(&mut self, t: &Transition) -> Applied {
        let mut ops = Vec::with_capacity(3 * (t.deletions.len() + t.insertions.len()));
        {
            let mut log = Some(&mut ops);
            for &e in &t.deletions {
                self.remove_unchecked(e, &mut log);
            }
            for &e in &t.insertions {
                self.insert_unchecked(e, &mut log);
            }
        }
        Applied { ops }
    }

    /// Undoes an [`Applied`] record, including the internal order of the
    /// edge sets.
    pub fn revert(&mut self, applied: Applied) {
        self.undo(&applied.ops);
    }
}

/// Probabilities of the four move kinds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MoveMix {
    pub sef: f64,
    pub dem: f64,
    pub cp: f64,
    pub cs: f64,
}

impl Default for MoveMix {
    fn default() -> Self {
        MoveMix {
            sef: 0.1,
            dem: 0.1,
            cp: 0.6,
            cs: 0.2,
        }
    }
}

impl MoveMix {
    pub fn new(sef: f64, dem: f64, cp: f64, cs: f64) -> Result<Self> {
        let m = MoveMix { sef, dem, cp, cs };
        m.validate()?;
        Ok(m)
    }

    pub fn simple_only() -> Self {
        MoveMix {
            sef: 0.5,
            dem: 0.5,
            cp: 0.0,
            cs: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let p = self.as_array();
        let ok = p.iter().all(|x| x.is_finite() && *x >= 0.0)
            && libm::fabs(p.iter().sum::<f64>() - 1.0) < 1e-9;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidMoveMix)
        }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.sef, self.dem, self.cp, self.cs]
    }

    pub fn prob(&self, kind: MoveKind) -> f64 {
        match kind {
            MoveKind::Sef => self.sef,
            MoveKind::Dem => self.dem,
            MoveKind::Cp => self.cp,
            MoveKind::Cs => self.cs,
            MoveKind::Noop => 0.0,
        }
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> MoveKind {
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        let mut last = MoveKind::Sef;
        for k in MoveKind::ACTIVE {
            let p = self.prob(k);
            if p > 0.0 {
                acc += p;
                last = k;
                if u < acc {
                    return k;
                }
            }
        }
        last
    }
}

/// Draws clique sizes with weight `(number of maximal cliques of that
/// size)^(1/5)`, over sizes >= 2 that occur.
#[derive(Clone, Debug)]
pub struct CliqueSizeSampler {
    sizes: Vec<usize>,
    weights: Vec<f64>,
    total: f64,
}

impl CliqueSizeSampler {
    pub fn new(cliques: &MaximalCliques) -> Self {
        let (sizes, weights): (Vec<usize>, Vec<f64>) = cliques
            .size_counts()
            .filter(|&(s, _)| s >= 2)
            .map(|(s, c)| (s, libm::pow(c as f64, 0.2)))
            .unzip();
        let total = weights.iter().sum();
        CliqueSizeSampler {
            sizes,
            weights,
            total,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    /// `(size, probability)` pairs.
    pub fn probabilities(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.sizes
            .iter()
            .zip(&self.weights)
            .map(move |(&s, &w)| (s, w / self.total))
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<usize> {
        if self.sizes.is_empty() {
            return None;
        }
        let u = rng.gen::<f64>() * self.total;
        let mut acc = 0.0;
        for (&s, &w) in self.sizes.iter().zip(&self.weights) {
            acc += w;
            if u < acc {
                return Some(s);
            }
        }
        self.sizes.last().copied()
    }
}

/// Immutable per-backbone data needed to propose moves.
#[derive(Clone, Debug)]
pub struct Proposer {
    pub cliques: MaximalCliques,
    pub sizes: CliqueSizeSampler,
    pub mix: MoveMix,
}

impl Proposer {
    pub fn new(cliques: MaximalCliques, mix: MoveMix) -> Self {
        let sizes = CliqueSizeSampler::new(&cliques);
        Proposer {
            cliques,
            sizes,
            mix,
        }
    }

    pub fn propose<R: Rng + ?Sized>(&self, g: &DirectedGraph, rng: &mut R) -> Transition {
        match self.mix.draw(rng) {
            MoveKind::Sef => gen_sef(g, rng),
            MoveKind::Dem => gen_dem(g, rng),
            MoveKind::Cp => gen_cp(g, &self.cliques, &self.sizes, rng),
            MoveKind::Cs => gen_cs(g, &self.cliques, &self.sizes, rng),
            MoveKind::Noop => Transition::noop(),
        }
    }
}

/// Flips a uniformly chosen single edge.
pub fn gen_sef<R: Rng + ?Sized>(g: &DirectedGraph, rng: &mut R) -> Transition {
    match g.singles().sample(rng) {
        Some((i, j)) => Transition::new(MoveKind::Sef, alloc::vec![(i, j)], alloc::vec![(j, i)]),
        None => Transition::noop(),
    }
}

/// Uniform single edge `(i, j)`, uniform double edge `{k, l}` and a fair
/// bit choosing which direction of the double edge is removed; `(j, i)` is
/// inserted.
pub fn gen_dem<R: Rng + ?Sized>(g: &DirectedGraph, rng: &mut R) -> Transition {
    if g.n_singles() == 0 || g.n_doubles() == 0 {
        return Transition::noop();
    }
    let (i, j) = g.singles().sample(rng).expect("nonempty");
    let (k, l) = g.doubles().sample(rng).expect("nonempty");
    dem_transition((i, j), (k, l), rng.gen::<bool>())
}

/// DEM changeset; `flip` selects deletion of `(l, k)` instead of `(k, l)`.
pub fn dem_transition((i, j): Edge, (k, l): Edge, flip: bool) -> Transition {
    let del = if flip { (l, k) } else { (k, l) };
    Transition::new(MoveKind::Dem, alloc::vec![del], alloc::vec![(j, i)])
}

fn shuffle<T, R: Rng + ?Sized>(v: &mut [T], rng: &mut R) {
    for i in (1..v.len()).rev() {
        let j = rng.gen_range(0..=i);
        v.swap(i, j);
    }
}

/// Clique permute: size by [`CliqueSizeSampler`], clique uniform within the
/// size, permutation uniform.
pub fn gen_cp<R: Rng + ?Sized>(
    g: &DirectedGraph,
    cliques: &MaximalCliques,
    sizes: &CliqueSizeSampler,
    rng: &mut R,
) -> Transition {
    let Some(s) = sizes.draw(rng) else {
        return Transition::noop();
    };
    let list = cliques.of_size(s);
    let clique = &list[rng.gen_range(0..list.len())];
    let mut image = clique.clone();
    shuffle(&mut image, rng);
    let map: Vec<(Vertex, Vertex)> = clique.iter().copied().zip(image).collect();
    clique_changeset(g, MoveKind::Cp, clique, clique, &map)
}

/// Clique swap: one size, two cliques of that size drawn independently
/// (possibly equal), and a bijection built from uniform permutations of
/// `A ∩ B`, `A \ B → B \ A` and `B \ A → A \ B`.
pub fn gen_cs<R: Rng + ?Sized>(
    g: &DirectedGraph,
    cliques: &MaximalCliques,
    sizes: &CliqueSizeSampler,
    rng: &mut R,
) -> Transition {
    let Some(s) = sizes.draw(rng) else {
        return Transition::noop();
    };
    let list = cliques.of_size(s);
    let a = &list[rng.gen_range(0..list.len())];
    let b = &list[rng.gen_range(0..list.len())];
    let (inter, a_only, b_only) = split_cliques(a, b);
    let mut inter_img = inter.clone();
    let mut a_img = b_only.clone();
    let mut b_img = a_only.clone();
    shuffle(&mut inter_img, rng);
    shuffle(&mut a_img, rng);
    shuffle(&mut b_img, rng);
    let map = swap_bijection(&inter, &a_only, &b_only, &inter_img, &a_img, &b_img);
    clique_changeset(g, MoveKind::Cs, a, b, &map)
}

/// `(A ∩ B, A \ B, B \ A)` of two sorted vertex lists.
pub fn split_cliques(a: &[Vertex], b: &[Vertex]) -> (Vec<Vertex>, Vec<Vertex>, Vec<Vertex>) {
    let inter = a
        .iter()
        .copied()
        .filter(|v| b.binary_search(v).is_ok())
        .collect();
    let a_only = a
        .iter()
        .copied()
        .filter(|v| b.binary_search(v).is_err())
        .collect();
    let b_only = b
        .iter()
        .copied()
        .filter(|v| a.binary_search(v).is_err())
        .collect();
    (inter, a_only, b_only)
}

/// Sorted `(v, π(v))` pairs of the clique swap bijection.
pub fn swap_bijection(
    inter: &[Vertex],
    a_only: &[Vertex],
    b_only: &[Vertex],
    inter_img: &[Vertex],
    a_img: &[Vertex],
    b_img: &[Vertex],
) -> Vec<(Vertex, Vertex)> {
    let mut map: Vec<(Vertex, Vertex)> = inter
        .iter()
        .copied()
        .zip(inter_img.iter().copied())
        .chain(a_only.iter().copied().zip(a_img.iter().copied()))
        .chain(b_only.iter().copied().zip(b_img.iter().copied()))
        .collect();
    map.sort_unstable();
    map
}

/// Changeset of remapping every edge internal to `a` or to `b` through the
/// bijection `map` (sorted by source vertex).
pub fn clique_changeset(
    g: &DirectedGraph,
    kind: MoveKind,
    a: &[Vertex],
    b: &[Vertex],
    map: &[(Vertex, Vertex)],
) -> Transition {
    let pi = |v: Vertex| -> Vertex {
        let i = map
            .binary_search_by_key(&v, |&(x, _)| x)
            .expect("vertex in bijection domain");
        map[i].1
    };
    let mut internal: Vec<Edge> = Vec::new();
    for c in [a, b] {
        for &u in c {
            for &v in c {
                if u != v && g.has_edge(u, v) {
                    internal.push((u, v));
                }
            }
        }
    }
    internal.sort_unstable();
    internal.dedup();
    let mut image: Vec<Edge> = internal.iter().map(|&(u, v)| (pi(u), pi(v))).collect();
    image.sort_unstable();
    let deletions = internal
        .iter()
        .copied()
        .filter(|e| image.binary_search(e).is_err())
        .collect();
    let insertions = image
        .iter()
        .copied()
        .filter(|e| internal.binary_search(e).is_err())
        .collect();
    Transition::new(kind, deletions, insertions)
}

/// Unordered pairs touched by a transition; used by backbone checks.
pub fn touched_pairs(t: &Transition) -> Vec<Edge> {
    let mut v: Vec<Edge> = t
        .deletions
        .iter()
        .chain(&t.insertions)
        .map(|&e| normalize(e))
        .collect();
    v.sort_unstable();
    v.dedup();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flag::count_simplices;
    use crate::graph::UndirectedGraph;
    use alloc::vec;
    use rand::SeedableRng;
    use rand_xoshiro::Xoshiro256StarStar;

    fn rng(seed: u64) -> Xoshiro256StarStar {
        Xoshiro256StarStar::seed_from_u64(seed)
    }

    #[test]
    fn sef_on_single_edge() {
        let g = DirectedGraph::from_edges(2, [(0, 1)]).unwrap();
        let t = gen_sef(&g, &mut rng(0));
        assert_eq!(
            t,
            Transition::new(MoveKind::Sef, vec![(0, 1)], vec![(1, 0)])
        );
        let all_double = DirectedGraph::from_edges(2, [(0, 1), (1, 0)]).unwrap();
        assert_eq!(gen_sef(&all_double, &mut rng(0)).kind, MoveKind::Noop);
    }

    #[test]
    fn dem_example() {
        let mut g = DirectedGraph::from_edges(4, [(0, 1), (2, 3), (3, 2)]).unwrap();
        let t = gen_dem(&g, &mut rng(3));
        assert_eq!(t.kind, MoveKind::Dem);
        assert_eq!(t.insertions, vec![(1, 0)]);
        let _ = g.apply(&t).unwrap();
        assert_eq!(g.doubles().as_slice(), &[(0, 1)]);
        assert_eq!(g.n_singles(), 1);
        let s = g.singles().as_slice()[0];
        assert_eq!(normalize(s), (2, 3));
        let oriented = DirectedGraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(gen_dem(&oriented, &mut rng(0)).kind, MoveKind::Noop);
    }

    #[test]
    fn identity_permutation_is_empty() {
        let g = DirectedGraph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let map = vec![(0, 0), (1, 1), (2, 2)];
        let t = clique_changeset(&g, MoveKind::Cp, &[0, 1, 2], &[0, 1, 2], &map);
        assert!(t.is_empty());
    }

    fn two_simplex_graph() -> DirectedGraph {
        // Two 4-simplices [0,1,2,3,4] and [0,1,3,2,4]: all forward edges
        // plus the reciprocated pair {2,3}.
        let mut es = vec![];
        for i in 0..5u32 {
            for j in i + 1..5 {
                es.push((i, j));
            }
        }
        es.push((3, 2));
        DirectedGraph::from_edges(5, es).unwrap()
    }

    fn simplices_of_dim(g: &DirectedGraph, d: usize) -> std::vec::Vec<std::vec::Vec<u32>> {
        let n = g.n_vertices();
        let mut out = std::vec::Vec::new();
        fn go(
            g: &DirectedGraph,
            c: &mut std::vec::Vec<u32>,
            d: usize,
            out: &mut std::vec::Vec<std::vec::Vec<u32>>,
        ) {
            if c.len() == d + 1 {
                out.push(c.clone());
                return;
            }
            for v in 0..g.n_vertices() {
                if c.iter().all(|&u| u != v && g.has_edge(u, v)) {
                    c.push(v);
                    go(g, c, d, out);
                    c.pop();
                }
            }
        }
        for v in 0..n {
            go(g, &mut vec![v], d, &mut out);
        }
        out.sort();
        out
    }

    #[test]
    fn clique_permute_relabels_simplices() {
        let mut g = two_simplex_graph();
        assert_eq!(
            simplices_of_dim(&g, 4),
            vec![vec![0, 1, 2, 3, 4], vec![0, 1, 3, 2, 4]]
        );
        // One-line notation: vertex v goes to p[v].
        let p = [2u32, 4, 0, 3, 1];
        let map: std::vec::Vec<(u32, u32)> = (0..5).map(|v| (v, p[v as usize])).collect();
        let t = clique_changeset(&g, MoveKind::Cp, &[0, 1, 2, 3, 4], &[0, 1, 2, 3, 4], &map);
        let _ = g.apply(&t).unwrap();
        let after = simplices_of_dim(&g, 4);
        assert_eq!(after, vec![vec![2, 4, 0, 3, 1], vec![2, 4, 3, 0, 1]]);
        // Same pair of simplices under the labelling v -> v - 1 (mod 5).
        let mut relabelled: std::vec::Vec<std::vec::Vec<u32>> = after
            .iter()
            .map(|s| s.iter().map(|&v| (v + 4) % 5).collect())
            .collect();
        relabelled.sort();
        assert_eq!(relabelled, vec![vec![1, 3, 2, 4, 0], vec![1, 3, 4, 2, 0]]);
    }

    #[test]
    fn clique_swap_exchanges_patterns() {
        // Two disjoint 5-cliques: {0..4} all double, {5..9} transitive.
        let mut es = vec![];
        for i in 0..5u32 {
            for j in 0..5 {
                if i != j {
                    es.push((i, j));
                }
            }
        }
        for i in 5..10u32 {
            for j in i + 1..10 {
                es.push((i, j));
            }
        }
        let mut g = DirectedGraph::from_edges(10, es).unwrap();
        let before = count_simplices(&g);
        // 0,1,2,3,4 -> D,C,B,E,A with A..E = 5..9.
        let a_img = [8, 7, 6, 9, 5];
        let map = swap_bijection(
            &[],
            &[0, 1, 2, 3, 4],
            &[5, 6, 7, 8, 9],
            &[],
            &a_img,
            &[4, 2, 1, 0, 3],
        );
        let t = clique_changeset(&g, MoveKind::Cs, &[0, 1, 2, 3, 4], &[5, 6, 7, 8, 9], &map);
        let backbone = g.project();
        let _ = g.apply(&t).unwrap();
        assert_eq!(g.project(), backbone);
        let doubles_in = |g: &DirectedGraph, lo: u32| {
            g.doubles()
                .iter()
                .filter(|&&(a, _)| (lo..lo + 5).contains(&a))
                .count()
        };
        assert_eq!(doubles_in(&g, 0), 0);
        assert_eq!(doubles_in(&g, 5), 10);
        assert_eq!(count_simplices(&g), before);
    }

    #[test]
    fn cs_with_equal_cliques_is_cp() {
        let g = two_simplex_graph();
        let cl = [0u32, 1, 2, 3, 4];
        let img = [2u32, 4, 0, 3, 1];
        let (inter, a_only, b_only) = split_cliques(&cl, &cl);
        assert!(a_only.is_empty() && b_only.is_empty());
        let map = swap_bijection(&inter, &a_only, &b_only, &img, &[], &[]);
        let cs = clique_changeset(&g, MoveKind::Cs, &cl, &cl, &map);
        let cp = clique_changeset(&g, MoveKind::Cp, &cl, &cl, &map);
        assert_eq!(cs.deletions, cp.deletions);
        assert_eq!(cs.insertions, cp.insertions);
    }

    #[test]
    fn apply_rejects_bad_preconditions() {
        let mut g = DirectedGraph::from_edges(3, [(0, 1)]).unwrap();
        let t = Transition::new(MoveKind::Sef, vec![(1, 2)], vec![(2, 1)]);
        assert_eq!(g.apply(&t).unwrap_err(), Error::EdgeMissing((1, 2)));
        let t = Transition::new(MoveKind::Sef, vec![(0, 1)], vec![(1, 2)]);
        assert_eq!(g.apply(&t).unwrap_err(), Error::BackboneChanged);
        let t = Transition::new(MoveKind::Sef, vec![(0, 1)], vec![(0, 1)]);
        assert_eq!(g.apply(&t).unwrap_err(), Error::EdgePresent((0, 1)));
    }

    #[test]
    fn mix_validation() {
        assert!(MoveMix::new(0.1, 0.1, 0.6, 0.2).is_ok());
        assert!(MoveMix::new(0.5, 0.5, 0.5, 0.0).is_err());
        assert!(MoveMix::new(-0.1, 0.6, 0.5, 0.0).is_err());
        let m = MoveMix::new(1.0, 0.0, 0.0, 0.0).unwrap();
        let mut r = rng(9);
        for _ in 0..100 {
            assert_eq!(m.draw(&mut r), MoveKind::Sef);
        }
    }

    #[test]
    fn size_weights_use_fifth_root() {
        // Triangle plus 32 pendant edges: 1 clique of size 3, 32 of size 2.
        let mut es = vec![(0, 1), (1, 2), (0, 2)];
        for v in 3..35u32 {
            es.push((0, v));
        }
        let b = UndirectedGraph::from_edges(35, es).unwrap();
        let s = CliqueSizeSampler::new(&MaximalCliques::new(&b));
        let p: std::vec::Vec<_> = s.probabilities().collect();
        assert_eq!(p[0].0, 2);
        assert!((p[0].1 - 2.0 / 3.0).abs() < 1e-12);
        assert!((p[1].1 - 1.0 / 3.0).abs() < 1e-12);
    }
}
