//! Restricted random walk with resampling.
//!
//! Each step proposes a move, computes its count delta locally and commits
//! it only if the new counts stay inside the connecting bounds. A rejected
//! or empty proposal keeps the current graph; the step counter advances in
//! every case. Samples are the states after steps `k, 2k, 3k, …`.

use alloc::vec;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_xoshiro::Xoshiro256StarStar;
use serde::{Deserialize, Serialize};

use crate::bounds::SimplexBounds;
use crate::cliques::MaximalCliques;
use crate::error::{Error, Result};
use crate::flag::{count_simplices, LocalCounter, NeighbourhoodCache, SimplexCounts};
use crate::graph::DirectedGraph;
use crate::moves::{MoveKind, MoveMix, Proposer};

pub type ChainRng = Xoshiro256StarStar;

/// Everything needed to continue a chain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainState {
    pub graph: DirectedGraph,
    pub counts: SimplexCounts,
    pub step: u64,
    pub rng: ChainRng,
}

impl ChainState {
    pub fn new(graph: DirectedGraph, seed: u64) -> Self {
        let counts = count_simplices(&graph);
        ChainState {
            graph,
            counts,
            step: 0,
            rng: ChainRng::seed_from_u64(seed),
        }
    }

    /// True if the stored counts equal a full recount.
    pub fn counts_consistent(&self) -> bool {
        count_simplices(&self.graph) == self.counts
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub bounds: SimplexBounds,
    pub mix: MoveMix,
    pub sampling_distance: u64,
    pub n_samples: u64,
    pub seed: u64,
    /// Full recount check interval in steps; 0 disables it.
    pub recount_interval: u64,
}

impl SamplerConfig {
    pub fn total_steps(&self) -> u64 {
        self.sampling_distance.saturating_mul(self.n_samples)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct KindStats {
    pub proposed: u64,
    pub accepted: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunStats {
    pub proposed: u64,
    pub accepted: u64,
    pub rejected: u64,
    pub noop: u64,
    /// Rejections by the first dimension that left the connecting bounds.
    pub violations: Vec<u64>,
    /// Indexed SEF, DEM, CP, CS.
    pub by_kind: [KindStats; 4],
}

impl RunStats {
    pub fn acceptance_rate(&self) -> f64 {
        if self.proposed == 0 {
            0.0
        } else {
            self.accepted as f64 / self.proposed as f64
        }
    }

    pub fn merge(&mut self, other: &RunStats) {
        self.proposed += other.proposed;
        self.accepted += other.accepted;
        self.rejected += other.rejected;
        self.noop += other.noop;
        if self.violations.len() < other.violations.len() {
            self.violations.resize(other.violations.len(), 0);
        }
        for (a, b) in self.violations.iter_mut().zip(&other.violations) {
            *a += b;
        }
        for (a, b) in self.by_kind.iter_mut().zip(&other.by_kind) {
            a.proposed += b.proposed;
            a.accepted += b.accepted;
        }
    }
}

fn kind_index(k: MoveKind) -> Option<usize> {
    match k {
        MoveKind::Sef => Some(0),
        MoveKind::Dem => Some(1),
        MoveKind::Cp => Some(2),
        MoveKind::Cs => Some(3),
        MoveKind::Noop => None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepOutcome {
    Accepted(MoveKind),
    /// Carries the first violated dimension.
    Rejected(MoveKind, usize),
    Noop,
}

/// Per-backbone sampler data: cliques, neighbourhood cache and bounds.
/// Shareable across chains by cloning.
#[derive(Clone)]
pub struct Sampler {
    proposer: Proposer,
    cache: NeighbourhoodCache,
    local: LocalCounter,
    bounds: SimplexBounds,
    sampling_distance: u64,
    recount_interval: u64,
}

impl Sampler {
    pub fn new(g0: &DirectedGraph, cfg: &SamplerConfig) -> Result<Self> {
        cfg.mix.validate()?;
        if cfg.sampling_distance == 0 {
            return Err(Error::ZeroSamplingDistance);
        }
        let backbone = g0.project();
        Ok(Sampler {
            proposer: Proposer::new(MaximalCliques::new(&backbone), cfg.mix),
            cache: NeighbourhoodCache::new(&backbone),
            local: LocalCounter::new(),
            bounds: cfg.bounds.clone(),
            sampling_distance: cfg.sampling_distance,
            recount_interval: cfg.recount_interval,
        })
    }

    pub fn proposer(&self) -> &Proposer {
        &self.proposer
    }

    pub fn bounds(&self) -> &SimplexBounds {
        &self.bounds
    }

    /// Fails if the state's counts leave the connecting bounds.
    pub fn check_start(&self, state: &ChainState) -> Result<()> {
        match self.bounds.relaxed_violation(state.counts.as_slice()) {
            Some(d) => Err(Error::StartOutsideBounds(d)),
            None => Ok(()),
        }
    }

    /// One step of the restricted chain.
    pub fn step(&mut self, state: &mut ChainState, stats: &mut RunStats) -> Result<StepOutcome> {
        let t = self.proposer.propose(&state.graph, &mut state.rng);
        stats.proposed += 1;
        let ki = kind_index(t.kind);
        if let Some(i) = ki {
            stats.by_kind[i].proposed += 1;
        }
        let outcome = if t.is_empty() {
            stats.noop += 1;
            StepOutcome::Noop
        } else {
            let delta = self
                .local
                .delta_unchecked(&state.graph, &t, Some(&self.cache));
            let next = state.counts.apply(&delta);
            match self.bounds.relaxed_violation(next.as_slice()) {
                Some(d) => {
                    stats.rejected += 1;
                    if stats.violations.len() <= d {
                        stats.violations.resize(d + 1, 0);
                    }
                    stats.violations[d] += 1;
                    StepOutcome::Rejected(t.kind, d)
                }
                None => {
                    let _ = state.graph.apply_unchecked(&t);
                    state.counts = next;
                    stats.accepted += 1;
                    if let Some(i) = ki {
                        stats.by_kind[i].accepted += 1;
                    }
                    StepOutcome::Accepted(t.kind)
                }
            }
        };
        state.step += 1;
        if self.recount_interval > 0
            && state.step.is_multiple_of(self.recount_interval)
            && !state.counts_consistent()
        {
            return Err(Error::CountDrift { step: state.step });
        }
        Ok(outcome)
    }

    /// Steps until `state.step == until`, calling `on_sample` after every
    /// step whose index is a multiple of the sampling distance.
    pub fn run_until<F: FnMut(&ChainState)>(
        &mut self,
        state: &mut ChainState,
        stats: &mut RunStats,
        until: u64,
        mut on_sample: F,
    ) -> Result<()> {
        while state.step < until {
            self.step(state, stats)?;
            if state.step.is_multiple_of(self.sampling_distance) {
                on_sample(state);
            }
        }
        Ok(())
    }
}

/// Runs one chain from `g0` for `n_samples · k` steps and returns the raw
/// samples.
pub fn run(cfg: &SamplerConfig, g0: &DirectedGraph) -> Result<(Vec<DirectedGraph>, RunStats)> {
    let mut sampler = Sampler::new(g0, cfg)?;
    let mut state = ChainState::new(g0.clone(), cfg.seed);
    sampler.check_start(&state)?;
    let mut stats = RunStats::default();
    let mut samples = Vec::new();
    sampler.run_until(&mut state, &mut stats, cfg.total_steps(), |s| {
        samples.push(s.graph.clone())
    })?;
    Ok((samples, stats))
}

/// Keeps the samples whose full recount lies inside the target bounds.
pub fn filter_samples(samples: Vec<DirectedGraph>, bounds: &SimplexBounds) -> Vec<DirectedGraph> {
    samples
        .into_iter()
        .filter(|g| bounds.within_target(count_simplices(g).as_slice()))
        .collect()
}

/// `⌈2 s₁ log₂ s₁⌉`.
pub fn default_sampling_distance(s1: u64) -> Result<u64> {
    if s1 < 2 {
        return Err(Error::TooFewEdges(s1));
    }
    let x = s1 as f64;
    Ok(libm::ceil(2.0 * x * libm::log2(x)) as u64)
}

/// Indices `0, k, 2k, …` below `len`: the states seen at sampling
/// distance `k` in a chain recorded at every step.
pub fn subsample_indices(len: usize, k: usize) -> Vec<usize> {
    if k == 0 {
        return vec![];
    }
    (0..len).step_by(k).collect()
}
