//! Tab-separated plot data for the mixing diagnostics.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use flagmc_core::diagnostics::{DistanceSeries, GridCell};

pub const HAMMING_HEADER: &str = "lag\tmin\tmean\tmax";
pub const CHI2_HEADER: &str =
    "dim\tk\tn_bits\tn00\tn01\tn10\tn11\tstatistic\tthreshold\tdecision\tlow_count";

/// One row per positive lag.
pub fn hamming_tsv(s: &DistanceSeries) -> String {
    let mut out = String::from(HAMMING_HEADER);
    out.push('\n');
    for t in 1..s.mean.len() {
        let _ = writeln!(out, "{t}\t{}\t{:.6}\t{}", s.min[t], s.mean[t], s.max[t]);
    }
    out
}

/// One row per `(d, k)` cell.
pub fn chi2_tsv(cells: &[GridCell]) -> String {
    let mut out = String::from(CHI2_HEADER);
    out.push('\n');
    for c in cells {
        let r = &c.result;
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{:.6}\t{:.6}\t{}\t{}",
            c.dim,
            c.k,
            c.n_bits,
            r.counts.n00,
            r.counts.n01,
            r.counts.n10,
            r.counts.n11,
            r.statistic,
            r.threshold,
            r.decision.name(),
            r.low_count
        );
    }
    out
}

pub fn write_hamming(path: &Path, s: &DistanceSeries) -> io::Result<()> {
    fs::write(path, hamming_tsv(s))
}

pub fn write_chi2(path: &Path, cells: &[GridCell]) -> io::Result<()> {
    fs::write(path, chi2_tsv(cells))
}
