// Shared helpers for the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

pub fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_flagmc"));
    c.env("RUST_LOG", "warn");
    c
}

pub fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn flagmc")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

pub fn write_flag(dir: &Path, name: &str, n: u32, edges: &[(u32, u32)]) -> PathBuf {
    let mut text = format!("dim 0\n{}\ndim 1\n", vec!["1"; n as usize].join(" "));
    for (a, b) in edges {
        text.push_str(&format!("{a} {b}\n"));
    }
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

/// Random directed graph with some reciprocated pairs.
pub fn random_edges(n: u32, p: f64, seed: u64) -> Vec<(u32, u32)> {
    let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a != b && rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    edges
}

/// Relative path to file contents for every file below `dir`.
pub fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                let rel = p.strip_prefix(dir).unwrap().to_string_lossy().into_owned();
                out.insert(rel, fs::read(&p).unwrap());
            }
        }
    }
    out
}
