//! Maximal clique enumeration (Bron–Kerbosch with Tomita pivoting) on the
//! undirected backbone.

use alloc::vec;
use alloc::vec::Vec;

use crate::bitset::{and_count, and_into, count_ones, words_for, Ones};
use crate::graph::{UndirectedGraph, Vertex};

/// Maximal cliques of a backbone, grouped by size. Each clique is a sorted
/// vertex list; lists of equal size are sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaximalCliques {
    by_size: Vec<Vec<Vec<Vertex>>>,
}

impl MaximalCliques {
    pub fn new(b: &UndirectedGraph) -> Self {
        let n = b.n_vertices() as usize;
        let w = words_for(n);
        let mut p = vec![0u64; w];
        for v in 0..n {
            p[v / 64] |= 1 << (v % 64);
        }
        let x = vec![0u64; w];
        let mut found = Vec::new();
        let mut r = Vec::new();
        bron_kerbosch(b, &mut r, p, x, &mut found);

        let mut by_size: Vec<Vec<Vec<Vertex>>> = Vec::new();
        for mut c in found {
            c.sort_unstable();
            if by_size.len() <= c.len() {
                by_size.resize_with(c.len() + 1, Vec::new);
            }
            by_size[c.len()].push(c);
        }
        for list in &mut by_size {
            list.sort_unstable();
        }
        MaximalCliques { by_size }
    }

    /// Size of the largest clique, 0 for the empty graph.
    pub fn max_size(&self) -> usize {
        self.by_size.len().saturating_sub(1)
    }

    pub fn of_size(&self, s: usize) -> &[Vec<Vertex>] {
        self.by_size.get(s).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn count_of_size(&self, s: usize) -> usize {
        self.of_size(s).len()
    }

    pub fn len(&self) -> usize {
        self.by_size.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `(size, count)` for every size with at least one maximal clique.
    pub fn size_counts(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.by_size
            .iter()
            .enumerate()
            .filter(|(_, l)| !l.is_empty())
            .map(|(s, l)| (s, l.len()))
    }

    pub fn iter(&self) -> impl Iterator<Item = &[Vertex]> + '_ {
        self.by_size.iter().flatten().map(Vec::as_slice)
    }
}

fn bron_kerbosch(
    g: &UndirectedGraph,
    r: &mut Vec<Vertex>,
    mut p: Vec<u64>,
    mut x: Vec<u64>,
    out: &mut Vec<Vec<Vertex>>,
) {
    if count_ones(&p) == 0 {
        if count_ones(&x) == 0 && !r.is_empty() {
            out.push(r.clone());
        }
        return;
    }
    let adj = g.adjacency();
    let pivot = Ones::new(&p)
        .chain(Ones::new(&x))
        .max_by_key(|&u| (and_count(&p, adj.row(u)), core::cmp::Reverse(u)))
        .expect("P nonempty");
    let candidates: Vec<usize> = Ones::new(&p).filter(|&v| !adj.get(pivot, v)).collect();
    let w = p.len();
    for v in candidates {
        let mut np = vec![0u64; w];
        let mut nx = vec![0u64; w];
        and_into(&mut np, &p, adj.row(v));
        and_into(&mut nx, &x, adj.row(v));
        r.push(v as Vertex);
        bron_kerbosch(g, r, np, nx, out);
        r.pop();
        p[v / 64] &= !(1 << (v % 64));
        x[v / 64] |= 1 << (v % 64);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn complete_graph_single_clique() {
        let mut es = std::vec::Vec::new();
        for i in 0..4 {
            for j in i + 1..4 {
                es.push((i, j));
            }
        }
        let k4 = UndirectedGraph::from_edges(4, es).unwrap();
        let c = MaximalCliques::new(&k4);
        assert_eq!(c.len(), 1);
        assert_eq!(c.of_size(4), &[std::vec![0, 1, 2, 3]]);
        assert_eq!(c.max_size(), 4);
    }

    #[test]
    fn triangle_plus_pendant() {
        let g = UndirectedGraph::from_edges(4, [(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap();
        let c = MaximalCliques::new(&g);
        assert_eq!(c.of_size(3), &[std::vec![0, 1, 2]]);
        assert_eq!(c.of_size(2), &[std::vec![2, 3]]);
        assert_eq!(c.len(), 2);
        let sizes: std::vec::Vec<_> = c.size_counts().collect();
        assert_eq!(sizes, std::vec![(2, 1), (3, 1)]);
    }

    #[test]
    fn isolated_vertices_and_empty_graph() {
        let g = UndirectedGraph::from_edges(3, [(0, 1)]).unwrap();
        let c = MaximalCliques::new(&g);
        assert_eq!(c.of_size(1), &[std::vec![2]]);
        assert!(MaximalCliques::new(&UndirectedGraph::new(0)).is_empty());
    }

    fn is_clique(g: &UndirectedGraph, c: &[u32]) -> bool {
        c.iter()
            .enumerate()
            .all(|(i, &a)| c[i + 1..].iter().all(|&b| g.has_edge(a, b)))
    }

    proptest! {
        #[test]
        fn matches_subset_enumeration(
            n in 1u32..10,
            es in proptest::collection::vec((0u32..10, 0u32..10), 0..30),
        ) {
            let es = es.into_iter().filter(|&(a, b)| a < n && b < n && a != b);
            let g = UndirectedGraph::from_edges(n, es).unwrap();
            let mut expected = std::vec::Vec::new();
            for mask in 1u32..(1 << n) {
                let c: std::vec::Vec<u32> = (0..n).filter(|v| mask >> v & 1 == 1).collect();
                if !is_clique(&g, &c) { continue; }
                let maximal = (0..n).all(|v| mask >> v & 1 == 1 || !c.iter().all(|&u| g.has_edge(u, v)));
                if maximal { expected.push(c); }
            }
            expected.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
            let got: std::vec::Vec<std::vec::Vec<u32>> = MaximalCliques::new(&g).iter().map(|c| c.to_vec()).collect();
            prop_assert_eq!(got, expected);
        }
    }
}
