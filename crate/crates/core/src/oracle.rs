//! Exhaustive ground truth on tiny backbones: every state, the exact
//! transition matrix of the proposal mechanism, its components, and a
//! goodness-of-fit test against the uniform distribution.

use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;
use serde::{Deserialize, Serialize};

use crate::bounds::SimplexBounds;
use crate::error::{Error, Result};
use crate::flag::count_simplices;
use crate::graph::{normalize, DirectedGraph, Edge, UndirectedGraph, Vertex};
use crate::moves::{
    clique_changeset, dem_transition, split_cliques, swap_bijection, MoveKind, Proposer, Transition,
};
use crate::stats::{chi2_quantile, chi2_sf};

pub const MAX_ORACLE_EDGES: usize = 16;
pub const MAX_DENSE_STATES: usize = 6000;

/// All directed graphs with a given backbone and edge count. State `code`
/// stores one base-3 digit per backbone edge `(lo, hi)` in sorted order:
/// 0 for `lo → hi`, 1 for `hi → lo`, 2 for both.
#[derive(Clone, Debug)]
pub struct StateSpace {
    backbone: UndirectedGraph,
    n_edges: usize,
    codes: Vec<u32>,
    index: HashMap<u32, usize>,
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// `C(m, E - m) · 2^(2m - E)`.
pub fn state_count(m: usize, n_edges: usize) -> u64 {
    if n_edges < m || n_edges > 2 * m {
        return 0;
    }
    binomial(m as u64, (n_edges - m) as u64) << (2 * m - n_edges)
}

pub fn enumerate_states(b: &UndirectedGraph, n_edges: usize) -> Result<StateSpace> {
    let m = b.n_edges();
    if m > MAX_ORACLE_EDGES {
        return Err(Error::BackboneTooLarge(m));
    }
    if n_edges < m || n_edges > 2 * m {
        return Err(Error::InfeasibleEdgeCount { n_edges, m });
    }
    let n_double = n_edges - m;
    let total = 3u32.pow(m as u32);
    let mut codes = Vec::new();
    for code in 0..total {
        let mut c = code;
        let mut d = 0;
        for _ in 0..m {
            d += usize::from(c % 3 == 2);
            c /= 3;
        }
        if d == n_double {
            codes.push(code);
        }
    }
    let index = codes.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    Ok(StateSpace {
        backbone: b.clone(),
        n_edges,
        codes,
        index,
    })
}

impl StateSpace {
    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn backbone(&self) -> &UndirectedGraph {
        &self.backbone
    }

    pub fn n_edges(&self) -> usize {
        self.n_edges
    }

    pub fn graph(&self, i: usize) -> DirectedGraph {
        let mut c = self.codes[i];
        let mut edges = Vec::with_capacity(self.n_edges);
        for &(lo, hi) in self.backbone.edges() {
            match c % 3 {
                0 => edges.push((lo, hi)),
                1 => edges.push((hi, lo)),
                _ => {
                    edges.push((lo, hi));
                    edges.push((hi, lo));
                }
            }
            c /= 3;
        }
        DirectedGraph::from_edges(self.backbone.n_vertices(), edges).expect("valid state")
    }

    pub fn index_of(&self, g: &DirectedGraph) -> Result<usize> {
        if g.n_vertices() != self.backbone.n_vertices() || g.n_edges() != self.n_edges {
            return Err(Error::UnknownState);
        }
        let mut code = 0u32;
        let mut place = 1u32;
        for &(lo, hi) in self.backbone.edges() {
            let digit = match (g.has_edge(lo, hi), g.has_edge(hi, lo)) {
                (true, false) => 0,
                (false, true) => 1,
                (true, true) => 2,
                (false, false) => return Err(Error::UnknownState),
            };
            code += digit * place;
            place *= 3;
        }
        self.index.get(&code).copied().ok_or(Error::UnknownState)
    }

    /// Indices whose counts lie inside the target bounds.
    pub fn target_set(&self, bounds: &SimplexBounds) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| bounds.within_target(count_simplices(&self.graph(i)).as_slice()))
            .collect()
    }
}

/// Dense transition matrix on the allowed states of a space.
#[derive(Clone, Debug)]
pub struct TransitionMatrix {
    /// Space indices of the allowed states, in row order.
    pub states: Vec<usize>,
    pub p: Vec<f64>,
}

impl TransitionMatrix {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.p[i * self.len() + j]
    }

    /// Row of space index `s`, if allowed.
    pub fn row_of(&self, s: usize) -> Option<usize> {
        self.states.binary_search(&s).ok()
    }

    pub fn max_asymmetry(&self) -> f64 {
        let n = self.len();
        let mut m = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                m = m.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        m
    }

    /// Largest deviation of any row sum from 1.
    pub fn max_row_error(&self) -> f64 {
        let n = self.len();
        (0..n)
            .map(|i| ((0..n).map(|j| self.get(i, j)).sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_col_error(&self) -> f64 {
        let n = self.len();
        (0..n)
            .map(|j| ((0..n).map(|i| self.get(i, j)).sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

fn permutations(items: &[Vertex]) -> Vec<Vec<Vertex>> {
    let mut out = Vec::new();
    let mut cur = items.to_vec();
    cur.sort_unstable();
    loop {
        out.push(cur.clone());
        // Next lexicographic permutation.
        let Some(i) = (1..cur.len()).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..cur.len())
            .rev()
            .find(|&j| cur[j] > cur[i - 1])
            .expect("exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|x| x as f64).product()
}

/// Every outcome of [`Proposer::propose`] on `g` with its exact
/// probability. Outcomes are not merged; empty transitions stand for
/// NOOPs.
pub fn enumerate_proposals(g: &DirectedGraph, proposer: &Proposer) -> Vec<(f64, Transition)> {
    let mut out = Vec::new();
    let mix = proposer.mix;
    if mix.sef > 0.0 {
        let s = g.singles().as_slice();
        if s.is_empty() {
            out.push((mix.sef, Transition::noop()));
        }
        for &(i, j) in s {
            out.push((
                mix.sef / s.len() as f64,
                Transition::new(MoveKind::Sef, vec![(i, j)], vec![(j, i)]),
            ));
        }
    }
    if mix.dem > 0.0 {
        let (s, d) = (g.singles().as_slice(), g.doubles().as_slice());
        if s.is_empty() || d.is_empty() {
            out.push((mix.dem, Transition::noop()));
        } else {
            let p = mix.dem / (s.len() * d.len() * 2) as f64;
            for &e in s {
                for &f in d {
                    for flip in [false, true] {
                        out.push((p, dem_transition(e, f, flip)));
                    }
                }
            }
        }
    }
    for (kind, pk) in [(MoveKind::Cp, mix.cp), (MoveKind::Cs, mix.cs)] {
        if pk <= 0.0 {
            continue;
        }
        if proposer.sizes.is_empty() {
            out.push((pk, Transition::noop()));
            continue;
        }
        for (size, ps) in proposer.sizes.probabilities() {
            let list = proposer.cliques.of_size(size);
            let pc = pk * ps / list.len() as f64;
            for a in list {
                if kind == MoveKind::Cp {
                    let perms = permutations(a);
                    let pp = pc / perms.len() as f64;
                    for img in perms {
                        let map: Vec<(Vertex, Vertex)> = a.iter().copied().zip(img).collect();
                        out.push((pp, clique_changeset(g, kind, a, a, &map)));
                    }
                    continue;
                }
                for b in list {
                    let (inter, a_only, b_only) = split_cliques(a, b);
                    let pp = pc
                        / list.len() as f64
                        / (factorial(inter.len())
                            * factorial(a_only.len())
                            * factorial(b_only.len()));
                    for ii in permutations(&inter) {
                        for aa in permutations(&b_only) {
                            for bb in permutations(&a_only) {
                                let map = swap_bijection(&inter, &a_only, &b_only, &ii, &aa, &bb);
                                out.push((pp, clique_changeset(g, kind, a, b, &map)));
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// Exact one-step matrix. With `bounds`, only states inside the connecting
/// bounds are kept and proposals leaving them stay put.
pub fn build_matrix(
    space: &StateSpace,
    proposer: &Proposer,
    bounds: Option<&SimplexBounds>,
) -> Result<TransitionMatrix> {
    if space.len() > MAX_DENSE_STATES {
        return Err(Error::StateSpaceTooLarge(space.len()));
    }
    let allowed =
        |g: &DirectedGraph| bounds.is_none_or(|b| b.within_relaxed(count_simplices(g).as_slice()));
    let states: Vec<usize> = (0..space.len())
        .filter(|&i| allowed(&space.graph(i)))
        .collect();
    let n = states.len();
    let mut p = vec![0.0; n * n];
    for (r, &s) in states.iter().enumerate() {
        let g = space.graph(s);
        for (q, t) in enumerate_proposals(&g, proposer) {
            let mut h = g.clone();
            let _ = h.apply(&t)?;
            let c = match states.binary_search(&space.index_of(&h)?) {
                Ok(c) => c,
                Err(_) => r,
            };
            p[r * n + c] += q;
        }
    }
    Ok(TransitionMatrix { states, p })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reachability {
    /// Strongly connected components as lists of matrix rows.
    pub components: Vec<Vec<usize>>,
    pub component_of: Vec<usize>,
    /// Longest shortest path inside the component of the start row.
    pub diameter: usize,
}

impl Reachability {
    pub fn n_components(&self) -> usize {
        self.components.len()
    }

    pub fn same_component(&self, rows: &[usize]) -> bool {
        rows.windows(2)
            .all(|w| self.component_of[w[0]] == self.component_of[w[1]])
    }
}

fn bfs(adj: &[Vec<usize>], from: usize, allowed: &[bool]) -> Vec<Option<usize>> {
    let mut dist = vec![None; adj.len()];
    dist[from] = Some(0);
    let mut queue = alloc::collections::VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].expect("visited");
        for &v in &adj[u] {
            if allowed[v] && dist[v].is_none() {
                dist[v] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Components of the positive-probability graph and the diameter of the
/// component containing `start`.
pub fn reachability(m: &TransitionMatrix, start: usize) -> Reachability {
    let n = m.len();
    let mut adj = vec![Vec::new(); n];
    let mut radj = vec![Vec::new(); n];
    for (i, row) in adj.iter_mut().enumerate() {
        for j in 0..n {
            if i != j && m.get(i, j) > 0.0 {
                row.push(j);
                radj[j].push(i);
            }
        }
    }
    // Kosaraju: finishing order on adj, then sweep radj.
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut stack = vec![(s, 0usize)];
        while let Some(&mut (u, ref mut k)) = stack.last_mut() {
            if let Some(&v) = adj[u].get(*k) {
                *k += 1;
                if !seen[v] {
                    seen[v] = true;
                    stack.push((v, 0));
                }
            } else {
                order.push(u);
                stack.pop();
            }
        }
    }
    let mut component_of = vec![usize::MAX; n];
    let mut components: Vec<Vec<usize>> = Vec::new();
    for &s in order.iter().rev() {
        if component_of[s] != usize::MAX {
            continue;
        }
        let c = components.len();
        let mut members = vec![s];
        component_of[s] = c;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &v in &radj[u] {
                if component_of[v] == usize::MAX {
                    component_of[v] = c;
                    members.push(v);
                    stack.push(v);
                }
            }
        }
        members.sort_unstable();
        components.push(members);
    }
    let mut diameter = 0;
    if start < n {
        let inside: Vec<bool> = (0..n)
            .map(|v| component_of[v] == component_of[start])
            .collect();
        for &u in &components[component_of[start]] {
            let d = bfs(&adj, u, &inside);
            diameter = diameter.max(d.iter().flatten().copied().max().unwrap_or(0));
        }
    }
    Reachability {
        components,
        component_of,
        diameter,
    }
}

/// SEF/DEM sequence taking `g` to its standard form under the vertex order
/// `order` (a permutation of all vertices): every single edge points from
/// the earlier to the later vertex, and the double edges occupy the first
/// backbone pairs when pairs are sorted by their endpoints' positions.
pub fn canonicalize(g: &DirectedGraph, order: &[Vertex]) -> Result<Vec<Transition>> {
    let n = g.n_vertices() as usize;
    let mut rank = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        rank[v as usize] = i;
    }
    let oriented = |(a, b): Edge| {
        if rank[a as usize] < rank[b as usize] {
            (a, b)
        } else {
            (b, a)
        }
    };
    let mut pairs: Vec<Edge> = g.project().edges().iter().map(|&e| oriented(e)).collect();
    pairs.sort_unstable_by_key(|&(a, b)| (rank[a as usize], rank[b as usize]));
    let k = g.n_doubles();
    let (front, back) = pairs.split_at(k);
    let mut h = g.clone();
    let mut seq = Vec::new();
    let is_double = |h: &DirectedGraph, (a, b): Edge| h.has_edge(a, b) && h.has_edge(b, a);
    let mut misplaced: Vec<Edge> = back.iter().copied().filter(|&e| is_double(&h, e)).collect();
    let missing: Vec<Edge> = front
        .iter()
        .copied()
        .filter(|&e| !is_double(&h, e))
        .collect();
    for (&(a, b), (c, d)) in missing.iter().zip(misplaced.drain(..)) {
        // (c, d) points forward; dropping (d, c) leaves it canonical.
        let single = if h.has_edge(a, b) { (a, b) } else { (b, a) };
        let t = Transition::new(MoveKind::Dem, vec![(d, c)], vec![(single.1, single.0)]);
        let _ = h.apply(&t)?;
        seq.push(t);
    }
    for &(a, b) in back {
        if h.has_edge(b, a) && !h.has_edge(a, b) {
            let t = Transition::new(MoveKind::Sef, vec![(b, a)], vec![(a, b)]);
            let _ = h.apply(&t)?;
            seq.push(t);
        }
    }
    Ok(seq)
}

/// True if `t` is an SEF or DEM applicable to `g`.
pub fn is_simple_move(g: &DirectedGraph, t: &Transition) -> bool {
    if t.check_applicable(g).is_err() || t.deletions.len() != 1 || t.insertions.len() != 1 {
        return false;
    }
    let (del, ins) = (t.deletions[0], t.insertions[0]);
    let single = |(a, b): Edge| g.has_edge(a, b) && !g.has_edge(b, a);
    match t.kind {
        MoveKind::Sef => single(del) && ins == (del.1, del.0),
        MoveKind::Dem => {
            g.doubles().contains(&normalize(del))
                && single((ins.1, ins.0))
                && normalize(del) != normalize(ins)
        }
        _ => false,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GofResult {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    pub threshold: f64,
    pub reject: bool,
}

/// Pearson goodness of fit of `observed` against the uniform distribution
/// on its cells. Needs at least 5 expected draws per cell.
pub fn uniformity_gof(observed: &[u64], alpha: f64) -> Result<GofResult> {
    let k = observed.len();
    let total: u64 = observed.iter().sum();
    let needed = 5 * k as u64;
    if k < 2 || total < needed {
        return Err(Error::UndersizedSample {
            got: total,
            needed: needed.max(10),
        });
    }
    let e = total as f64 / k as f64;
    let statistic: f64 = observed
        .iter()
        .map(|&o| (o as f64 - e) * (o as f64 - e) / e)
        .sum();
    let dof = k - 1;
    let threshold = chi2_quantile(1.0 - alpha, dof as f64);
    Ok(GofResult {
        statistic,
        dof,
        p_value: chi2_sf(statistic, dof as f64),
        threshold,
        reject: statistic > threshold,
    })
}

/// Tallies `samples` over the target rows of `space`; samples outside the
/// target set are an error.
pub fn tally(space: &StateSpace, target: &[usize], samples: &[DirectedGraph]) -> Result<Vec<u64>> {
    let mut counts = vec![0u64; target.len()];
    for g in samples {
        let i = space.index_of(g)?;
        let pos = target.binary_search(&i).map_err(|_| Error::UnknownState)?;
        counts[pos] += 1;
    }
    Ok(counts)
}
