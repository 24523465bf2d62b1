//! Target bounds `s⁻ ≤ s ≤ s⁺` and the wider connecting bounds `s⁻⁻, s⁺⁺`
//! that the restricted chain is allowed to wander in.

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest clique size accepted by [`max_simplex_table`]. The enumeration
/// visits `3^(n(n-1)/2)` configurations.
pub const MAX_TABLE_CLIQUE: usize = 6;

/// Target window around a reference count vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetBounds {
    pub lower: Vec<u64>,
    pub upper: Vec<u64>,
}

/// Target and connecting bounds per dimension. `None` in `relaxed_upper`
/// means unbounded. Dimensions past the stored length have all bounds 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplexBounds {
    pub lower: Vec<u64>,
    pub upper: Vec<u64>,
    pub relaxed_lower: Vec<u64>,
    pub relaxed_upper: Vec<Option<u64>>,
}

const PPB: u128 = 1_000_000_000;

/// `lower = floor((1 - rel) s)`, `upper = round-half-up((1 + rel) s)` for
/// `d ≥ 2`; dimensions 0 and 1 are pinned. `rel` is resolved to parts per
/// billion and the rest is exact integer arithmetic.
pub fn target_bounds(s: &[u64], rel: f64) -> Result<TargetBounds> {
    if !(rel.is_finite() && (0.0..=1.0).contains(&rel)) {
        return Err(Error::InvalidRelaxation(rel));
    }
    let r = libm::round(rel * PPB as f64) as u128;
    let mut lower = Vec::with_capacity(s.len());
    let mut upper = Vec::with_capacity(s.len());
    for (d, &x) in s.iter().enumerate() {
        if d < 2 {
            lower.push(x);
            upper.push(x);
            continue;
        }
        let x = x as u128;
        lower.push((x * (PPB - r) / PPB) as u64);
        upper.push(((x * (PPB + r) + PPB / 2) / PPB) as u64);
    }
    Ok(TargetBounds { lower, upper })
}

impl TargetBounds {
    pub fn len(&self) -> usize {
        self.lower.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.is_empty()
    }

    fn padded(&self, dims: usize) -> (Vec<u64>, Vec<u64>) {
        let n = dims.max(self.len());
        let mut lo = self.lower.clone();
        let mut hi = self.upper.clone();
        lo.resize(n, 0);
        hi.resize(n, 0);
        (lo, hi)
    }
}

impl SimplexBounds {
    /// Connecting bounds equal to the target bounds.
    pub fn exact(t: &TargetBounds) -> Self {
        SimplexBounds {
            lower: t.lower.clone(),
            upper: t.upper.clone(),
            relaxed_lower: t.lower.clone(),
            relaxed_upper: t.upper.iter().map(|&x| Some(x)).collect(),
        }
    }

    /// Bounds that accept every count vector of at most `dims` dimensions
    /// whose first two entries match `s`.
    pub fn unbounded(s: &[u64], dims: usize) -> Self {
        let n = dims.max(s.len());
        let mut lower = vec![0; n];
        let mut upper = vec![u64::MAX; n];
        let mut relaxed_upper = vec![None; n];
        for d in 0..s.len().min(2) {
            lower[d] = s[d];
            upper[d] = s[d];
            relaxed_upper[d] = Some(s[d]);
        }
        SimplexBounds {
            relaxed_lower: lower.clone(),
            lower,
            upper,
            relaxed_upper,
        }
    }

    pub fn len(&self) -> usize {
        self.lower.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.is_empty()
    }

    fn dim_target(&self, d: usize) -> (u64, u64) {
        (
            self.lower.get(d).copied().unwrap_or(0),
            self.upper.get(d).copied().unwrap_or(0),
        )
    }

    fn dim_relaxed(&self, d: usize) -> (u64, Option<u64>) {
        match self.relaxed_lower.get(d) {
            Some(&lo) => (lo, self.relaxed_upper[d]),
            None => (0, Some(0)),
        }
    }

    pub fn within_target(&self, counts: &[u64]) -> bool {
        let n = counts.len().max(self.len());
        (0..n).all(|d| {
            let x = counts.get(d).copied().unwrap_or(0);
            let (lo, hi) = self.dim_target(d);
            lo <= x && x <= hi
        })
    }

    /// First dimension whose count leaves the connecting bounds.
    pub fn relaxed_violation(&self, counts: &[u64]) -> Option<usize> {
        let n = counts.len().max(self.len());
        (0..n).find(|&d| {
            let x = counts.get(d).copied().unwrap_or(0);
            let (lo, hi) = self.dim_relaxed(d);
            x < lo || hi.is_some_and(|h| x > h)
        })
    }

    pub fn within_relaxed(&self, counts: &[u64]) -> bool {
        self.relaxed_violation(counts).is_none()
    }

    /// Replaces `s⁺⁺` in selected dimensions. Overrides below `s⁺` are
    /// rejected.
    pub fn with_overrides(mut self, overrides: &[(usize, Option<u64>)]) -> Result<Self> {
        for &(d, v) in overrides {
            if d >= self.len() {
                let n = d + 1;
                self.lower.resize(n, 0);
                self.upper.resize(n, 0);
                self.relaxed_lower.resize(n, 0);
                self.relaxed_upper.resize(n, Some(0));
            }
            if v.is_some_and(|x| x < self.upper[d]) {
                return Err(Error::InvalidOverride { dim: d });
            }
            self.relaxed_upper[d] = v;
        }
        Ok(self)
    }
}

/// `s⁻⁻ = s⁻` and `s⁺⁺ = ∞` for `d ≥ 2`, padded to `dims` dimensions.
/// Meant for graphs without double edges.
pub fn relaxed_bounds_single_edge(t: &TargetBounds, dims: usize) -> SimplexBounds {
    let (lower, upper) = t.padded(dims);
    let relaxed_upper = upper
        .iter()
        .enumerate()
        .map(|(d, &x)| if d < 2 { Some(x) } else { None })
        .collect();
    SimplexBounds {
        relaxed_lower: lower.clone(),
        lower,
        upper,
        relaxed_upper,
    }
}

/// Min and max number of `(n-1)`-simplices spanned by an `n`-clique with
/// exactly `k` double edges, over all placements and orientations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaxSimplexTable {
    rows: Vec<Vec<(u64, u64)>>,
}

impl MaxSimplexTable {
    /// Largest clique size covered.
    pub fn n_max(&self) -> usize {
        self.rows.len().saturating_sub(1)
    }

    pub fn get(&self, n: usize, k: usize) -> Option<(u64, u64)> {
        self.rows.get(n)?.get(k).copied()
    }

    /// Row for clique size `n`, indexed by `k = 0..=n(n-1)/2`.
    pub fn row(&self, n: usize) -> Option<&[(u64, u64)]> {
        self.rows
            .get(n)
            .filter(|r| !r.is_empty())
            .map(|r| r.as_slice())
    }
}

/// Exhaustive table for clique sizes `1..=n_max`.
pub fn max_simplex_table(n_max: usize) -> Result<MaxSimplexTable> {
    if n_max > MAX_TABLE_CLIQUE {
        return Err(Error::TableTooLarge {
            requested: n_max,
            max: MAX_TABLE_CLIQUE,
        });
    }
    let mut rows = vec![Vec::new()];
    for n in 1..=n_max {
        rows.push(clique_row(n));
    }
    Ok(MaxSimplexTable { rows })
}

fn clique_row(n: usize) -> Vec<(u64, u64)> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let mut row = vec![(u64::MAX, 0u64); pairs.len() + 1];
    let mut in_mask = vec![0u32; n];
    let mut f = vec![0u64; 1 << n];
    fill(&pairs, 0, 0, &mut in_mask, &mut f, &mut row);
    row
}

// Assigns each pair one of i→j, j→i, both; counts total orders at leaves.
fn fill(
    pairs: &[(usize, usize)],
    idx: usize,
    k: usize,
    in_mask: &mut [u32],
    f: &mut [u64],
    row: &mut [(u64, u64)],
) {
    if idx == pairs.len() {
        let c = count_orders(in_mask, f);
        let e = &mut row[k];
        e.0 = e.0.min(c);
        e.1 = e.1.max(c);
        return;
    }
    let (i, j) = pairs[idx];
    for choice in 0..3 {
        let (a, b) = (in_mask[i], in_mask[j]);
        if choice != 1 {
            in_mask[j] |= 1 << i;
        }
        if choice != 0 {
            in_mask[i] |= 1 << j;
        }
        fill(
            pairs,
            idx + 1,
            k + usize::from(choice == 2),
            in_mask,
            f,
            row,
        );
        in_mask[i] = a;
        in_mask[j] = b;
    }
}

// Number of orders v0..v(n-1) with every edge vi → vj present for i < j.
fn count_orders(in_mask: &[u32], f: &mut [u64]) -> u64 {
    let n = in_mask.len();
    f.fill(0);
    f[0] = 1;
    for s in 0..(1usize << n) {
        let c = f[s];
        if c == 0 {
            continue;
        }
        for (v, &m) in in_mask.iter().enumerate() {
            if s & (1 << v) == 0 && (m as usize) & s == s {
                f[s | (1 << v)] += c;
            }
        }
    }
    f[(1 << n) - 1]
}

fn binom(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * u128::from(n - i) / u128::from(i + 1);
    }
    r
}

/// `Δ¹_d = (d+1)!/2`, saturating.
pub fn delta1(d: usize) -> u64 {
    let mut f: u128 = 1;
    for i in 2..=(d as u128 + 1) {
        f = f.saturating_mul(i);
    }
    u64::try_from(f / 2).unwrap_or(u64::MAX)
}

/// Largest jump of the table maximum between consecutive double-edge counts
/// `k ≤ k′` for `(d+1)`-cliques, where `k′` is the largest `k` whose maximum
/// still fits below `upper` (at least 1). `None` if the table has no row.
pub fn delta2(table: &MaxSimplexTable, d: usize, upper: u64) -> Option<u64> {
    let row = table.row(d + 1)?;
    if row.len() < 2 {
        return Some(0);
    }
    let kp = (1..row.len())
        .rev()
        .find(|&k| row[k].1 <= upper)
        .unwrap_or(1);
    (1..=kp)
        .map(|k| row[k].1.saturating_sub(row[k - 1].1))
        .max()
}

/// Number of `(d+1)`-cliques sharing a fixed edge inside a clique of size
/// `max_clique`.
pub fn clustering_factor(max_clique: usize, d: usize) -> u128 {
    if max_clique < 2 || d == 0 {
        return 0;
    }
    binom(max_clique as u64 - 2, d as u64 - 1)
}

/// `Δ_d = binom(D-2, d-1) · min(Δ¹_d, Δ²_d)` with `D` the largest clique
/// size and `s⁺⁺_d = max(s⁻_d + Δ_d, s⁺_d)`. Overrides replace `s⁺⁺`
/// afterwards.
pub fn relaxed_bounds_double_edge(
    t: &TargetBounds,
    max_clique: usize,
    table: &MaxSimplexTable,
    overrides: &[(usize, Option<u64>)],
) -> Result<SimplexBounds> {
    let (lower, upper) = t.padded(max_clique);
    let mut relaxed_upper = Vec::with_capacity(lower.len());
    for d in 0..lower.len() {
        if d < 2 {
            relaxed_upper.push(Some(upper[d]));
            continue;
        }
        let d1 = delta1(d);
        let dd = delta2(table, d, upper[d]).map_or(d1, |d2| d1.min(d2));
        let delta = clustering_factor(max_clique, d).saturating_mul(u128::from(dd));
        let delta = u64::try_from(delta).unwrap_or(u64::MAX);
        relaxed_upper.push(Some(lower[d].saturating_add(delta).max(upper[d])));
    }
    SimplexBounds {
        relaxed_lower: lower.clone(),
        lower,
        upper,
        relaxed_upper,
    }
    .with_overrides(overrides)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_relaxation_is_identity() {
        let s = [5, 7, 3, 1];
        let t = target_bounds(&s, 0.0).unwrap();
        assert_eq!(t.lower, s);
        assert_eq!(t.upper, s);
        assert!(target_bounds(&s, 1.01).is_err());
        let wide = target_bounds(&s, 1.0).unwrap();
        assert_eq!(wide.lower, [5, 7, 0, 0]);
        assert_eq!(wide.upper, [5, 7, 6, 2]);
        assert!(target_bounds(&s, -0.1).is_err());
        assert!(target_bounds(&s, f64::NAN).is_err());
    }

    #[test]
    fn rounding_rule() {
        let t = target_bounds(&[0, 0, 50, 150, 155], 0.01).unwrap();
        // 49.5 -> 49, 50.5 -> 51; 148.5 -> 148, 151.5 -> 152.
        assert_eq!(t.lower[2..], [49, 148, 153]);
        assert_eq!(t.upper[2..], [51, 152, 157]);
    }

    #[test]
    fn single_edge_relaxation() {
        let t = target_bounds(&[4, 5, 2], 0.5).unwrap();
        let b = relaxed_bounds_single_edge(&t, 4);
        assert_eq!(b.relaxed_lower, b.lower);
        assert_eq!(b.relaxed_upper, [Some(4), Some(5), None, None]);
        assert!(b.within_relaxed(&[4, 5, 100, 7]));
        assert_eq!(b.relaxed_violation(&[4, 5, 0]), Some(2));
        assert_eq!(b.relaxed_violation(&[4, 6, 2]), Some(1));
    }

    #[test]
    fn small_tables() {
        let t = max_simplex_table(4).unwrap();
        assert_eq!(t.row(2).unwrap(), &[(1, 1), (2, 2)]);
        assert_eq!(t.row(3).unwrap(), &[(0, 1), (1, 2), (3, 3), (6, 6)]);
        assert_eq!(t.get(4, 6), Some((24, 24)));
        assert_eq!(t.get(4, 5), Some((12, 12)));
        assert!(max_simplex_table(MAX_TABLE_CLIQUE + 1).is_err());
    }

    #[test]
    fn delta_helpers() {
        assert_eq!(delta1(7), 20160);
        assert_eq!(delta1(2), 3);
        assert_eq!(clustering_factor(2, 1), 1);
        assert_eq!(clustering_factor(2, 2), 0);
        assert_eq!(clustering_factor(9, 2), 7);
        let t = max_simplex_table(4).unwrap();
        // Triangle: maxima 1, 2, 3, 6 give jumps 1, 1, 3.
        assert_eq!(delta2(&t, 2, 2), Some(1));
        assert_eq!(delta2(&t, 2, 6), Some(3));
        assert_eq!(delta2(&t, 2, 0), Some(1));
        assert_eq!(delta2(&t, 5, 10), None);
    }

    #[test]
    fn double_edge_relaxation_with_max_clique_two() {
        let t = target_bounds(&[3, 4, 2], 0.0).unwrap();
        let table = max_simplex_table(3).unwrap();
        let b = relaxed_bounds_double_edge(&t, 2, &table, &[]).unwrap();
        assert_eq!(b.relaxed_upper, [Some(3), Some(4), Some(2)]);
        let b = relaxed_bounds_double_edge(&t, 3, &table, &[(2, None)]).unwrap();
        assert_eq!(b.relaxed_upper[2], None);
        assert!(relaxed_bounds_double_edge(&t, 3, &table, &[(2, Some(1))]).is_err());
    }

    #[test]
    fn overrides_extend_dimensions() {
        let t = target_bounds(&[3, 3, 1], 0.0).unwrap();
        let b = SimplexBounds::exact(&t)
            .with_overrides(&[(4, Some(10))])
            .unwrap();
        assert_eq!(b.len(), 5);
        assert_eq!(b.relaxed_upper[3], Some(0));
        assert_eq!(b.relaxed_upper[4], Some(10));
    }
}
