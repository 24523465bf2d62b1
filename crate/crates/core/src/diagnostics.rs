//! Mixing diagnostics: Hamming distance over time and the paired χ²
//! independence test on median-binarised simplex counts.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::DirectedGraph;
use crate::mcmc::subsample_indices;
use crate::stats::chi2_quantile_1;

/// `t ↦ d_H(G_{t0}, G_{t0+t})` for `t = 0..=max_lag` and several offsets
/// `t0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceSeries {
    pub offsets: Vec<usize>,
    /// `series[o][t]` for offset index `o` and lag `t`.
    pub series: Vec<Vec<usize>>,
    pub min: Vec<usize>,
    pub mean: Vec<f64>,
    pub max: Vec<usize>,
}

impl DistanceSeries {
    /// Number of positive lags `1..=T`; lag 0 is always distance 0.
    pub fn n_lags(&self) -> usize {
        self.mean.len().saturating_sub(1)
    }

    /// Mean of the offset-averaged distance over the last tenth of the lags
    /// (at least one lag).
    pub fn limit(&self) -> f64 {
        let n = self.mean.len();
        if n == 0 {
            return 0.0;
        }
        let tail = (n / 10).max(1);
        self.mean[n - tail..].iter().sum::<f64>() / tail as f64
    }
}

/// Offsets `0, T, 2T, …` that leave room for `T` further states.
pub fn default_offsets(chain_len: usize, max_lag: usize) -> Vec<usize> {
    if max_lag == 0 {
        return if chain_len > 0 {
            alloc::vec![0]
        } else {
            Vec::new()
        };
    }
    (0..chain_len)
        .step_by(max_lag)
        .take_while(|&o| o + max_lag < chain_len)
        .collect()
}

pub fn hamming_experiment(
    chain: &[DirectedGraph],
    max_lag: usize,
    offsets: &[usize],
) -> Result<DistanceSeries> {
    let needed = offsets.iter().max().map_or(0, |&o| o + max_lag + 1);
    if chain.len() < needed {
        return Err(Error::ChainTooShort {
            len: chain.len(),
            needed,
        });
    }
    let mut series = Vec::with_capacity(offsets.len());
    for &o in offsets {
        let row = (0..=max_lag)
            .map(|t| chain[o].hamming_distance(&chain[o + t]))
            .collect::<Result<Vec<_>>>()?;
        series.push(row);
    }
    let lags = if offsets.is_empty() { 0 } else { max_lag + 1 };
    let mut min = Vec::with_capacity(lags);
    let mut mean = Vec::with_capacity(lags);
    let mut max = Vec::with_capacity(lags);
    for t in 0..lags {
        let col = series.iter().map(|r| r[t]);
        min.push(col.clone().min().unwrap_or(0));
        max.push(col.clone().max().unwrap_or(0));
        mean.push(col.sum::<usize>() as f64 / offsets.len() as f64);
    }
    Ok(DistanceSeries {
        offsets: offsets.to_vec(),
        series,
        min,
        mean,
        max,
    })
}

/// Bit is 1 iff the value lies strictly above the median.
pub fn median_binarize(values: &[u64]) -> Vec<bool> {
    if values.is_empty() {
        return Vec::new();
    }
    let mut s = values.to_vec();
    s.sort_unstable();
    let n = s.len();
    // Compare 2v against twice the median to stay in integers.
    let twice_median = if n % 2 == 1 {
        2 * u128::from(s[n / 2])
    } else {
        u128::from(s[n / 2 - 1]) + u128::from(s[n / 2])
    };
    values
        .iter()
        .map(|&v| 2 * u128::from(v) > twice_median)
        .collect()
}

/// Counts of the non-overlapping pairs `(B_2n, B_2n+1)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContingencyCounts {
    pub n00: u64,
    pub n01: u64,
    pub n10: u64,
    pub n11: u64,
}

impl ContingencyCounts {
    pub fn from_bits(bits: &[bool]) -> Self {
        let mut c = ContingencyCounts::default();
        for p in bits.chunks_exact(2) {
            match (p[0], p[1]) {
                (false, false) => c.n00 += 1,
                (false, true) => c.n01 += 1,
                (true, false) => c.n10 += 1,
                (true, true) => c.n11 += 1,
            }
        }
        c
    }

    pub fn total(&self) -> u64 {
        self.n00 + self.n01 + self.n10 + self.n11
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Decision {
    Accept,
    Reject,
    NotApplicable,
}

impl Decision {
    pub fn name(self) -> &'static str {
        match self {
            Decision::Accept => "accept",
            Decision::Reject => "reject",
            Decision::NotApplicable => "n/a",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Chi2Result {
    pub counts: ContingencyCounts,
    pub statistic: f64,
    pub threshold: f64,
    pub decision: Decision,
    /// Some expected cell count is below 5.
    pub low_count: bool,
}

/// Pearson χ² test of independence on the 2×2 pair table, one degree of
/// freedom, no continuity correction. Reject iff the statistic exceeds
/// `χ²_{1-α,1}`. Fewer than two pairs or a constant marginal give
/// [`Decision::NotApplicable`].
pub fn chi2_from_counts(c: ContingencyCounts, alpha: f64) -> Chi2Result {
    let threshold = chi2_quantile_1(1.0 - alpha);
    let n = c.total() as f64;
    let rows = [(c.n00 + c.n01) as f64, (c.n10 + c.n11) as f64];
    let cols = [(c.n00 + c.n10) as f64, (c.n01 + c.n11) as f64];
    let not_applicable = Chi2Result {
        counts: c,
        statistic: f64::NAN,
        threshold,
        decision: Decision::NotApplicable,
        low_count: true,
    };
    if c.total() < 2 || rows.contains(&0.0) || cols.contains(&0.0) {
        return not_applicable;
    }
    let obs = [[c.n00 as f64, c.n01 as f64], [c.n10 as f64, c.n11 as f64]];
    let mut stat = 0.0;
    let mut low = false;
    for i in 0..2 {
        for j in 0..2 {
            let e = rows[i] * cols[j] / n;
            low |= e < 5.0;
            stat += (obs[i][j] - e) * (obs[i][j] - e) / e;
        }
    }
    Chi2Result {
        counts: c,
        statistic: stat,
        threshold,
        decision: if stat > threshold {
            Decision::Reject
        } else {
            Decision::Accept
        },
        low_count: low,
    }
}

pub fn chi2_pair_test(bits: &[bool], alpha: f64) -> Chi2Result {
    chi2_from_counts(ContingencyCounts::from_bits(bits), alpha)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridCell {
    pub dim: usize,
    pub k: usize,
    pub n_bits: usize,
    pub result: Chi2Result,
}

/// χ² test for every `(d, k)`: the per-step count series of dimension `d`
/// is subsampled at distance `k`, split at its median and paired.
/// `counts[t][d]` is `s_d` of the chain state after `t` steps.
pub fn chi2_grid(counts: &[Vec<u64>], dims: &[usize], ks: &[usize], alpha: f64) -> Vec<GridCell> {
    let mut out = Vec::with_capacity(dims.len() * ks.len());
    for &d in dims {
        for &k in ks {
            let values: Vec<u64> = subsample_indices(counts.len(), k)
                .into_iter()
                .map(|i| counts[i].get(d).copied().unwrap_or(0))
                .collect();
            let bits = median_binarize(&values);
            out.push(GridCell {
                dim: d,
                k,
                n_bits: bits.len(),
                result: chi2_pair_test(&bits, alpha),
            });
        }
    }
    out
}
