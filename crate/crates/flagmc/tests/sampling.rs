mod common;

use std::fs;

use common::random_edges;
use flagmc::output::{read_edge_list, write_edge_list};
use flagmc::sampling::{
    load_checkpoint, run_sampling, Checkpoint, RunPlan, RunStatus, CHECKPOINT_VERSION,
};
use flagmc_core::bounds::{relaxed_bounds_single_edge, target_bounds};
use flagmc_core::mcmc::{run, SamplerConfig};
use flagmc_core::{count_simplices, DirectedGraph, MoveMix};

fn plan(g: DirectedGraph, out: &std::path::Path, seed: u64, chains: u32) -> RunPlan {
    let s = count_simplices(&g);
    let bounds =
        relaxed_bounds_single_edge(&target_bounds(s.as_slice(), 0.05).unwrap(), s.len() + 1);
    RunPlan {
        input: g,
        config: SamplerConfig {
            bounds,
            mix: MoveMix::default(),
            sampling_distance: 40,
            n_samples: 5,
            seed,
            recount_interval: 50,
        },
        n_chains: chains,
        out_dir: out.to_path_buf(),
        checkpoint: None,
        checkpoint_every: 0,
        stop_after: None,
    }
}

fn oriented(n: u32, seed: u64) -> DirectedGraph {
    let all = random_edges(n, 0.35, seed);
    let edges = all
        .iter()
        .copied()
        .filter(|&(a, b)| a < b || !all.contains(&(b, a)));
    DirectedGraph::from_edges(n, edges).unwrap()
}

#[test]
fn single_edge_sample_file() {
    let dir = tempfile::tempdir().unwrap();
    let g = DirectedGraph::from_edges(2, [(0, 1)]).unwrap();
    let p = dir.path().join("x.edges");
    write_edge_list(&p, &g).unwrap();
    assert_eq!(fs::read_to_string(&p).unwrap(), "0 1\n");
    assert_eq!(read_edge_list(&p, 2).unwrap(), g);
}

#[test]
fn chain_zero_matches_the_core_runner() {
    let dir = tempfile::tempdir().unwrap();
    let g = oriented(14, 3);
    let sp = plan(g.clone(), dir.path(), 21, 2);
    let RunStatus::Completed(m) = run_sampling(&sp).unwrap() else {
        panic!("stopped")
    };
    let (samples, stats) = run(&sp.config, &g).unwrap();
    assert_eq!(m.chains[0].stats, stats);
    for (rec, s) in m.samples.iter().filter(|r| r.chain == 0).zip(&samples) {
        let read = read_edge_list(&dir.path().join("samples").join(&rec.file), 14).unwrap();
        assert!(read.same_edges(s));
        assert_eq!(rec.counts, count_simplices(s).into_vec());
        assert_eq!(rec.in_target, sp.config.bounds.within_target(&rec.counts));
    }
    // Chain 1 runs on seed + 1.
    assert_eq!(m.chains[1].seed, 22);
    let mut cfg1 = sp.config.clone();
    cfg1.seed = 22;
    assert_eq!(m.chains[1].stats, run(&cfg1, &g).unwrap().1);
    assert_eq!(m.stats.proposed, 2 * 200);
    let filtered: Vec<_> = m
        .samples
        .iter()
        .filter(|s| s.in_target)
        .map(|s| s.file.clone())
        .collect();
    assert_eq!(m.filtered, filtered);
}

#[test]
fn checkpoint_round_trips_rng_state() {
    let dir = tempfile::tempdir().unwrap();
    let mut sp = plan(oriented(12, 5), &dir.path().join("out"), 8, 2);
    let cp = dir.path().join("cp.json");
    sp.checkpoint = Some(cp.clone());
    sp.stop_after = Some(123);
    assert!(matches!(
        run_sampling(&sp).unwrap(),
        RunStatus::Stopped { step: 123 }
    ));
    let loaded = load_checkpoint(&cp).unwrap();
    let again: Checkpoint = serde_json::from_str(&serde_json::to_string(&loaded).unwrap()).unwrap();
    assert_eq!(loaded, again);
    assert!(loaded
        .chains
        .iter()
        .all(|c| c.state.step == 123 && c.state.counts_consistent()));
    assert_ne!(loaded.chains[0].state.rng, loaded.chains[1].state.rng);
}

#[test]
fn checkpoint_errors() {
    let dir = tempfile::tempdir().unwrap();
    assert!(load_checkpoint(&dir.path().join("missing.json")).is_err());

    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{ not json").unwrap();
    assert!(load_checkpoint(&bad).is_err());

    let mut sp = plan(oriented(10, 1), &dir.path().join("out"), 1, 1);
    let cp = dir.path().join("cp.json");
    sp.checkpoint = Some(cp.clone());
    sp.stop_after = Some(10);
    run_sampling(&sp).unwrap();
    let mut doc: serde_json::Value = serde_json::from_slice(&fs::read(&cp).unwrap()).unwrap();
    doc["version"] = serde_json::json!(CHECKPOINT_VERSION + 1);
    fs::write(&cp, serde_json::to_vec(&doc).unwrap()).unwrap();
    let err = load_checkpoint(&cp).unwrap_err();
    assert!(err.to_string().contains("version"));
    assert!(run_sampling(&sp).is_err());
}

#[test]
fn resume_at_every_boundary_matches() {
    let dir = tempfile::tempdir().unwrap();
    let g = oriented(10, 9);
    let straight = dir.path().join("straight");
    run_sampling(&plan(g.clone(), &straight, 4, 2)).unwrap();
    let want = common::snapshot(&straight);
    for stop in [1, 39, 40, 41, 199] {
        let out = dir.path().join(format!("r{stop}"));
        let cp = dir.path().join(format!("cp{stop}.json"));
        let mut sp = plan(g.clone(), &out, 4, 2);
        sp.checkpoint = Some(cp);
        sp.checkpoint_every = 17;
        sp.stop_after = Some(stop);
        assert!(matches!(
            run_sampling(&sp).unwrap(),
            RunStatus::Stopped { .. }
        ));
        sp.stop_after = None;
        assert!(matches!(
            run_sampling(&sp).unwrap(),
            RunStatus::Completed(_)
        ));
        assert_eq!(common::snapshot(&out), want, "stop at {stop}");
    }
}
