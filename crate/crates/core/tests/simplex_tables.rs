use flagmc_core::bounds::max_simplex_table;
use flagmc_core::flag::count_simplices;
use flagmc_core::graph::DirectedGraph;

// Independent oracle: for every placement of doubles and orientation of the
// rest, count vertex orders whose forward pairs are all edges.
fn table_by_orders(n: usize) -> Vec<(u64, u64)> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let k_max = pairs.len();
    let mut row = vec![(u64::MAX, 0); k_max + 1];
    let mut perms = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    heap(&mut p, n, &mut perms);
    for code in 0..3u64.pow(k_max as u32) {
        let mut adj = vec![vec![false; n]; n];
        let mut c = code;
        let mut k = 0;
        for &(i, j) in &pairs {
            match c % 3 {
                0 => adj[i][j] = true,
                1 => adj[j][i] = true,
                _ => {
                    adj[i][j] = true;
                    adj[j][i] = true;
                    k += 1;
                }
            }
            c /= 3;
        }
        let count = perms
            .iter()
            .filter(|o| (0..n).all(|a| (a + 1..n).all(|b| adj[o[a]][o[b]])))
            .count() as u64;
        row[k].0 = row[k].0.min(count);
        row[k].1 = row[k].1.max(count);
    }
    row
}

fn heap(p: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(p.clone());
        return;
    }
    for i in 0..k {
        heap(p, k - 1, out);
        if k.is_multiple_of(2) {
            p.swap(i, k - 1);
        } else {
            p.swap(0, k - 1);
        }
    }
}

#[test]
fn table_matches_order_enumeration() {
    let t = max_simplex_table(5).unwrap();
    for n in 1..=5 {
        assert_eq!(t.row(n).unwrap(), table_by_orders(n).as_slice(), "n={n}");
    }
}

#[test]
fn full_and_almost_full_double_cliques() {
    let t = max_simplex_table(5).unwrap();
    for n in 3..=5usize {
        let fact: u64 = (1..=n as u64).product();
        let k = n * (n - 1) / 2;
        assert_eq!(t.get(n, k), Some((fact, fact)));
        assert_eq!(t.get(n, k - 1), Some((fact / 2, fact / 2)));
    }
    let max_row = |n: usize| -> Vec<u64> { t.row(n).unwrap().iter().map(|e| e.1).collect() };
    assert_eq!(max_row(4), [1, 2, 4, 6, 8, 12, 24]);
    assert_eq!(max_row(5)[3..=6], [6, 12, 14, 24]);
}

#[test]
fn two_missing_doubles() {
    // Two single edges sharing a vertex leave n!/6 orders, disjoint ones
    // n!/4; the maximum is n!/3.
    let t = max_simplex_table(5).unwrap();
    for n in 3..=5usize {
        let fact: u64 = (1..=n as u64).product();
        let k = n * (n - 1) / 2;
        assert_eq!(t.get(n, k - 2), Some((fact / 6, fact / 3)), "n={n}");
    }
}

#[test]
fn full_double_eight_clique() {
    let mut es = vec![];
    for a in 0..8u32 {
        for b in 0..8 {
            if a != b {
                es.push((a, b));
            }
        }
    }
    let g = DirectedGraph::from_edges(8, es).unwrap();
    assert_eq!(g.n_doubles(), 28);
    assert_eq!(count_simplices(&g).get(7), 40320);
}
