//! Edge-list sample files, JSON documents and digests.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use flagmc_core::graph::DirectedGraph;
use serde::Serialize;
use sha2::{Digest, Sha256};

/// Sorted `source target` lines.
pub fn edge_list(g: &DirectedGraph) -> String {
    let mut s = String::new();
    for (a, b) in g.edges() {
        s.push_str(&format!("{a} {b}\n"));
    }
    s
}

pub fn write_edge_list(path: &Path, g: &DirectedGraph) -> io::Result<()> {
    fs::write(path, edge_list(g))
}

pub fn read_edge_list(path: &Path, n_vertices: u32) -> anyhow::Result<DirectedGraph> {
    let text = fs::read_to_string(path)?;
    let mut edges = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let mut it = line.split_whitespace().map(str::parse::<u32>);
        match (it.next(), it.next(), it.next()) {
            (Some(Ok(a)), Some(Ok(b)), None) => edges.push((a, b)),
            _ => anyhow::bail!("{}:{}: expected \"source target\"", path.display(), i + 1),
        }
    }
    Ok(DirectedGraph::from_edges(n_vertices, edges)?)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Pretty JSON with a trailing newline, written through a temporary file
/// and renamed into place.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> io::Result<()> {
    let mut text = serde_json::to_vec_pretty(value)?;
    text.push(b'\n');
    let tmp = path.with_extension("tmp");
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(&text)?;
        f.sync_all()?;
    }
    fs::rename(tmp, path)
}
