//! Multi-chain sampling runs with sample files, a manifest and
//! checkpoint/resume.
//!
//! Chain `c` is seeded with `seed + c`. Chains advance in parallel in
//! segments; between segments a checkpoint holding every chain state, its
//! statistics and the samples written so far can be saved. A resumed run
//! produces the same output directory as an uninterrupted one.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use flagmc_core::bounds::SimplexBounds;
use flagmc_core::flag::count_simplices;
use flagmc_core::graph::DirectedGraph;
use flagmc_core::mcmc::{ChainState, RunStats, Sampler, SamplerConfig};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::output::{edge_list, sha256_hex, write_edge_list, write_json};

pub const CHECKPOINT_VERSION: u32 = 1;
pub const MANIFEST_VERSION: u32 = 1;
pub const LOG_EVERY: u64 = 100_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub chain: u32,
    pub index: u64,
    pub step: u64,
    pub file: String,
    pub counts: Vec<u64>,
    pub in_target: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainRecord {
    pub chain: u32,
    pub seed: u64,
    pub state: ChainState,
    pub stats: RunStats,
    pub samples: Vec<SampleRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub version: u32,
    pub fingerprint: String,
    pub chains: Vec<ChainRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputInfo {
    pub sha256: String,
    pub n_vertices: u32,
    pub n_edges: usize,
    pub n_doubles: usize,
    pub counts: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainSummary {
    pub chain: u32,
    pub seed: u64,
    pub stats: RunStats,
    pub acceptance_rate: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub version: u32,
    pub fingerprint: String,
    pub input: InputInfo,
    pub seed: u64,
    pub n_chains: u32,
    pub bounds: SimplexBounds,
    pub mix: flagmc_core::MoveMix,
    pub sampling_distance: u64,
    pub samples_per_chain: u64,
    pub stats: RunStats,
    pub acceptance_rate: f64,
    pub chains: Vec<ChainSummary>,
    pub samples: Vec<SampleRecord>,
    /// Files of the samples inside the target bounds.
    pub filtered: Vec<String>,
}

pub struct RunPlan {
    pub input: DirectedGraph,
    pub config: SamplerConfig,
    pub n_chains: u32,
    pub out_dir: PathBuf,
    pub checkpoint: Option<PathBuf>,
    /// Checkpoint interval in steps per chain; 0 saves only when stopping
    /// or finishing.
    pub checkpoint_every: u64,
    /// Stop once every chain reaches this step (simulated interruption).
    pub stop_after: Option<u64>,
}

#[derive(Debug)]
pub enum RunStatus {
    Completed(Box<Manifest>),
    Stopped { step: u64 },
}

pub fn input_info(g: &DirectedGraph) -> InputInfo {
    InputInfo {
        sha256: sha256_hex(edge_list(g).as_bytes()),
        n_vertices: g.n_vertices(),
        n_edges: g.n_edges(),
        n_doubles: g.n_doubles(),
        counts: count_simplices(g).into_vec(),
    }
}

fn fingerprint(info: &InputInfo, cfg: &SamplerConfig, n_chains: u32) -> anyhow::Result<String> {
    let doc = serde_json::to_vec(&(info, cfg, n_chains))?;
    Ok(sha256_hex(&doc))
}

pub fn sample_file_name(chain: u32, index: u64) -> String {
    format!("c{chain:03}_s{index:06}.edges")
}

pub fn load_checkpoint(path: &Path) -> anyhow::Result<Checkpoint> {
    let text = fs::read(path).with_context(|| format!("reading checkpoint {}", path.display()))?;
    let cp: Checkpoint = serde_json::from_slice(&text)
        .with_context(|| format!("corrupt checkpoint {}", path.display()))?;
    if cp.version != CHECKPOINT_VERSION {
        bail!(
            "checkpoint version {} unsupported (expected {CHECKPOINT_VERSION})",
            cp.version
        );
    }
    Ok(cp)
}

pub fn run_sampling(plan: &RunPlan) -> anyhow::Result<RunStatus> {
    let cfg = &plan.config;
    let info = input_info(&plan.input);
    let fp = fingerprint(&info, cfg, plan.n_chains)?;
    let sample_dir = plan.out_dir.join("samples");
    fs::create_dir_all(&plan.out_dir)?;

    let mut chains = match &plan.checkpoint {
        Some(path) if path.exists() => {
            let cp = load_checkpoint(path)?;
            if cp.fingerprint != fp {
                bail!(
                    "checkpoint {} belongs to a different input or configuration",
                    path.display()
                );
            }
            log::info!(
                "resuming from {} at step {}",
                path.display(),
                cp.chains.first().map_or(0, |c| c.state.step)
            );
            cp.chains
        }
        _ => (0..plan.n_chains)
            .map(|c| {
                let seed = cfg.seed.wrapping_add(u64::from(c));
                ChainRecord {
                    chain: c,
                    seed,
                    state: ChainState::new(plan.input.clone(), seed),
                    stats: RunStats::default(),
                    samples: Vec::new(),
                }
            })
            .collect(),
    };

    let sampler = Sampler::new(&plan.input, cfg)?;
    sampler.check_start(&ChainState::new(plan.input.clone(), 0))?;
    let total = cfg.total_steps();
    if total > 0 {
        fs::create_dir_all(&sample_dir)?;
    }

    loop {
        let at = chains.iter().map(|c| c.state.step).min().unwrap_or(total);
        if at >= total {
            break;
        }
        let mut next = total;
        if plan.checkpoint.is_some() && plan.checkpoint_every > 0 {
            next = next.min((at / plan.checkpoint_every + 1) * plan.checkpoint_every);
        }
        if let Some(stop) = plan.stop_after {
            if stop <= at {
                return Ok(RunStatus::Stopped { step: at });
            }
            next = next.min(stop);
        }
        chains
            .par_iter_mut()
            .map(|rec| advance(rec, sampler.clone(), next, cfg, &sample_dir))
            .collect::<anyhow::Result<Vec<()>>>()?;
        if let Some(path) = &plan.checkpoint {
            save_checkpoint(path, &fp, &chains)?;
        }
        if plan.stop_after == Some(next) && next < total {
            return Ok(RunStatus::Stopped { step: next });
        }
    }

    let manifest = build_manifest(&info, fp, cfg, plan.n_chains, &chains);
    write_json(&plan.out_dir.join("manifest.json"), &manifest)?;
    Ok(RunStatus::Completed(Box::new(manifest)))
}

fn save_checkpoint(path: &Path, fp: &str, chains: &[ChainRecord]) -> anyhow::Result<()> {
    let cp = Checkpoint {
        version: CHECKPOINT_VERSION,
        fingerprint: fp.to_string(),
        chains: chains.to_vec(),
    };
    write_json(path, &cp).with_context(|| format!("writing checkpoint {}", path.display()))
}

fn advance(
    rec: &mut ChainRecord,
    mut sampler: Sampler,
    until: u64,
    cfg: &SamplerConfig,
    sample_dir: &Path,
) -> anyhow::Result<()> {
    while rec.state.step < until {
        let chunk_end = until.min((rec.state.step / LOG_EVERY + 1) * LOG_EVERY);
        let mut err: Option<anyhow::Error> = None;
        let chain = rec.chain;
        let samples = &mut rec.samples;
        sampler.run_until(&mut rec.state, &mut rec.stats, chunk_end, |s| {
            if err.is_some() {
                return;
            }
            let index = samples.len() as u64;
            let file = sample_file_name(chain, index);
            let recount = count_simplices(&s.graph);
            if recount != s.counts {
                err = Some(anyhow::anyhow!(
                    "chain {chain}: incremental counts drifted at step {}",
                    s.step
                ));
                return;
            }
            if let Err(e) = write_edge_list(&sample_dir.join(&file), &s.graph) {
                err = Some(e.into());
                return;
            }
            samples.push(SampleRecord {
                chain,
                index,
                step: s.step,
                file,
                in_target: cfg.bounds.within_target(recount.as_slice()),
                counts: recount.into_vec(),
            });
        })?;
        if let Some(e) = err {
            return Err(e);
        }
        if rec.state.step.is_multiple_of(LOG_EVERY) {
            log::info!(
                "chain {} step {} acceptance {:.1}% counts {:?}",
                rec.chain,
                rec.state.step,
                100.0 * rec.stats.acceptance_rate(),
                rec.state.counts.as_slice()
            );
        }
    }
    Ok(())
}

fn build_manifest(
    info: &InputInfo,
    fingerprint: String,
    cfg: &SamplerConfig,
    n_chains: u32,
    chains: &[ChainRecord],
) -> Manifest {
    let mut stats = RunStats::default();
    for c in chains {
        stats.merge(&c.stats);
    }
    let samples: Vec<SampleRecord> = chains
        .iter()
        .flat_map(|c| c.samples.iter().cloned())
        .collect();
    Manifest {
        version: MANIFEST_VERSION,
        fingerprint,
        input: info.clone(),
        seed: cfg.seed,
        n_chains,
        bounds: cfg.bounds.clone(),
        mix: cfg.mix,
        sampling_distance: cfg.sampling_distance,
        samples_per_chain: cfg.n_samples,
        acceptance_rate: stats.acceptance_rate(),
        stats,
        chains: chains
            .iter()
            .map(|c| ChainSummary {
                chain: c.chain,
                seed: c.seed,
                acceptance_rate: c.stats.acceptance_rate(),
                stats: c.stats.clone(),
            })
            .collect(),
        filtered: samples
            .iter()
            .filter(|s| s.in_target)
            .map(|s| s.file.clone())
            .collect(),
        samples,
    }
}

pub fn load_manifest(dir: &Path) -> anyhow::Result<Manifest> {
    let path = dir.join("manifest.json");
    let text = fs::read(&path).with_context(|| format!("reading {}", path.display()))?;
    Ok(serde_json::from_slice(&text)?)
}
