use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use flagmc::output::{read_edge_list, write_json};
use flagmc::plot::{write_chi2, write_hamming};
use flagmc::read_flag_file;
use flagmc::report::{
    build_bounds, named_backbone, oracle_report, parse_mix, parse_override, reference_graph,
    BoundsMode, BoundsParams, OracleParams,
};
use flagmc::sampling::{load_manifest, run_sampling, RunPlan, RunStatus};
use flagmc_core::dagify::{
    a4_instance, dagify_tournament, random_tournament, replay, CampaignReport,
};
use flagmc_core::diagnostics::{chi2_grid, default_offsets, hamming_experiment};
use flagmc_core::mcmc::{
    default_sampling_distance, ChainRng, ChainState, RunStats, Sampler, SamplerConfig,
};
use flagmc_core::{count_simplices, DirectedGraph, MoveMix};
use rand::SeedableRng;
use rayon::prelude::*;

#[derive(Parser)]
#[command(
    name = "flagmc",
    version,
    about = "Sample directed graphs with prescribed flag complex simplex counts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the simplex counts of a `.flag` graph.
    Count { input: PathBuf },
    /// Run the restricted chain and write samples plus a manifest.
    Sample(SampleArgs),
    /// Hamming-distance and χ² mixing diagnostics.
    Diagnose(DiagnoseArgs),
    /// Remove all 3-cycles of random tournaments by edge flips.
    Dagify {
        #[arg(long, default_value_t = 30)]
        n: u32,
        #[arg(long)]
        seed: u64,
        /// Number of tournaments, seeded `seed`, `seed + 1`, ...
        #[arg(long, default_value_t = 1)]
        count: u64,
    },
    /// Search flip sequences that make random oriented graphs acyclic
    /// without ever creating a 3-cycle.
    A4 {
        #[arg(long, default_value_t = 30)]
        n: u32,
        #[arg(long, default_value_t = 0.8)]
        p: f64,
        #[arg(long, default_value_t = 100)]
        graphs: u64,
        #[arg(long)]
        seed: u64,
        /// Search nodes per graph.
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        /// Write the campaign report as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Exact transition matrix checks on a tiny state space.
    Oracle(OracleArgs),
}

#[derive(Args)]
struct BoundsArgs {
    /// Relative deviation allowed around the input counts.
    #[arg(long, default_value_t = 0.01)]
    rel: f64,
    /// Upper connecting bound override, `d=value` or `d=inf`; repeatable.
    #[arg(long = "override", value_parser = parse_override)]
    overrides: Vec<(usize, Option<u64>)>,
    #[arg(long, value_enum, default_value_t = BoundsMode::Auto)]
    bounds_mode: BoundsMode,
    /// Largest clique size for the double-edge simplex table.
    #[arg(long, default_value_t = 5)]
    table_max: usize,
    /// Move probabilities `sef,dem,cp,cs`.
    #[arg(long, value_parser = parse_mix, default_value = "0.1,0.1,0.6,0.2")]
    mix: MoveMix,
}

impl BoundsArgs {
    fn params(&self) -> BoundsParams<'_> {
        BoundsParams {
            rel: self.rel,
            mode: self.bounds_mode,
            overrides: &self.overrides,
            table_max: self.table_max,
        }
    }
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    seed: u64,
    #[command(flatten)]
    bounds: BoundsArgs,
    /// Steps between samples; defaults to ⌈2 s₁ log₂ s₁⌉.
    #[arg(long)]
    distance: Option<u64>,
    /// Samples per chain.
    #[arg(long, default_value_t = 10)]
    samples: u64,
    #[arg(long, default_value_t = 1)]
    chains: u32,
    /// Resume from and save to this checkpoint file.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Checkpoint interval in steps per chain.
    #[arg(long, default_value_t = 1_000_000)]
    checkpoint_every: u64,
    /// Save a checkpoint and stop once every chain reaches this step.
    #[arg(long)]
    stop_after_steps: Option<u64>,
    /// Full recount check interval in steps, 0 to disable.
    #[arg(long, default_value_t = 1_000_000)]
    recount_every: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DiagMode {
    Hamming,
    Chi2,
    Both,
}

#[derive(Args)]
struct DiagnoseArgs {
    /// Output directory of `flagmc sample`.
    #[arg(long, conflicts_with = "input")]
    samples: Option<PathBuf>,
    /// Chain of the sample directory to analyse.
    #[arg(long, default_value_t = 0)]
    chain: u32,
    /// Run a fresh chain from this `.flag` graph and record every step.
    #[arg(long, requires_all = ["steps", "seed"])]
    input: Option<PathBuf>,
    #[arg(long)]
    steps: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    bounds: BoundsArgs,
    #[arg(long, value_enum, default_value_t = DiagMode::Both)]
    mode: DiagMode,
    /// Largest Hamming lag; defaults to the chain length minus one.
    #[arg(long)]
    max_lag: Option<usize>,
    /// Dimensions for the χ² grid; defaults to 2 and up.
    #[arg(long, value_delimiter = ',')]
    dims: Vec<usize>,
    /// Subsampling distances for the χ² grid; defaults to powers of two.
    #[arg(long, value_delimiter = ',')]
    ks: Vec<usize>,
    #[arg(long, default_value_t = 0.01)]
    alpha: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct OracleArgs {
    /// Named backbone: edge, path, triangle, triangle-pendant, k4.
    #[arg(long, conflicts_with = "input", default_value = "triangle")]
    backbone: String,
    /// Use the backbone and edge count of a tiny `.flag` graph instead.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Double edges in the reference graph of a named backbone.
    #[arg(long, default_value_t = 0)]
    doubles: usize,
    #[arg(long, value_parser = parse_mix, default_value = "0.1,0.1,0.6,0.2")]
    mix: MoveMix,
    #[arg(long, default_value_t = 0.01)]
    rel: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 0.01)]
    alpha: f64,
    /// Skip the sampled uniformity test above this many restricted states.
    #[arg(long, default_value_t = 64)]
    gof_max_states: usize,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

/// `Ok(false)` means the work ran but a verification failed.
fn dispatch(cmd: Command) -> anyhow::Result<bool> {
    match cmd {
        Command::Count { input } => {
            let g = read_flag_file(&input)?;
            let counts: Vec<String> = count_simplices(&g)
                .as_slice()
                .iter()
                .map(u64::to_string)
                .collect();
            println!("{}", counts.join(" "));
            Ok(true)
        }
        Command::Sample(a) => cmd_sample(a),
        Command::Diagnose(a) => cmd_diagnose(a),
        Command::Dagify { n, seed, count } => cmd_dagify(n, seed, count),
        Command::A4 {
            n,
            p,
            graphs,
            seed,
            budget,
            report,
        } => cmd_a4(n, p, graphs, seed, budget, report.as_deref()),
        Command::Oracle(a) => cmd_oracle(a),
    }
}

fn cmd_sample(a: SampleArgs) -> anyhow::Result<bool> {
    let g = read_flag_file(&a.input)?;
    let bounds = build_bounds(&g, &a.bounds.params())?;
    let distance = match a.distance {
        Some(k) => k,
        None => default_sampling_distance(g.n_edges() as u64)?,
    };
    let plan = RunPlan {
        input: g,
        config: SamplerConfig {
            bounds,
            mix: a.bounds.mix,
            sampling_distance: distance,
            n_samples: a.samples,
            seed: a.seed,
            recount_interval: a.recount_every,
        },
        n_chains: a.chains,
        out_dir: a.out,
        checkpoint: a.checkpoint,
        checkpoint_every: a.checkpoint_every,
        stop_after: a.stop_after_steps,
    };
    match run_sampling(&plan)? {
        RunStatus::Completed(m) => {
            println!(
                "samples: {} ({} within target), acceptance: {:.2}%",
                m.samples.len(),
                m.filtered.len(),
                100.0 * m.acceptance_rate
            );
        }
        RunStatus::Stopped { step } => println!("stopped at step {step}"),
    }
    Ok(true)
}

struct Recorded {
    graphs: Vec<DirectedGraph>,
    counts: Vec<Vec<u64>>,
}

fn record_chain(a: &DiagnoseArgs, input: &Path) -> anyhow::Result<Recorded> {
    let g = read_flag_file(input)?;
    let steps = a.steps.context("--steps required")?;
    let cfg = SamplerConfig {
        bounds: build_bounds(&g, &a.bounds.params())?,
        mix: a.bounds.mix,
        sampling_distance: 1,
        n_samples: steps,
        seed: a.seed.context("--seed required")?,
        recount_interval: 0,
    };
    let mut sampler = Sampler::new(&g, &cfg)?;
    let mut state = ChainState::new(g.clone(), cfg.seed);
    sampler.check_start(&state)?;
    let mut rec = Recorded {
        counts: vec![state.counts.as_slice().to_vec()],
        graphs: vec![g],
    };
    let mut stats = RunStats::default();
    sampler.run_until(&mut state, &mut stats, steps, |s| {
        rec.graphs.push(s.graph.clone());
        rec.counts.push(s.counts.as_slice().to_vec());
    })?;
    Ok(rec)
}

fn load_chain(dir: &Path, chain: u32) -> anyhow::Result<Recorded> {
    let m = load_manifest(dir)?;
    let mut samples: Vec<_> = m.samples.iter().filter(|s| s.chain == chain).collect();
    samples.sort_by_key(|s| s.index);
    let graphs = samples
        .iter()
        .map(|s| read_edge_list(&dir.join("samples").join(&s.file), m.input.n_vertices))
        .collect::<anyhow::Result<Vec<_>>>()?;
    Ok(Recorded {
        graphs,
        counts: samples.iter().map(|s| s.counts.clone()).collect(),
    })
}

fn cmd_diagnose(a: DiagnoseArgs) -> anyhow::Result<bool> {
    let rec = match (&a.samples, &a.input) {
        (Some(dir), None) => load_chain(dir, a.chain)?,
        (None, Some(input)) => record_chain(&a, input)?,
        _ => bail!("give either --samples or --input"),
    };
    fs::create_dir_all(&a.out)?;
    let len = rec.graphs.len();
    if matches!(a.mode, DiagMode::Hamming | DiagMode::Both) {
        if len < 2 {
            bail!("hamming diagnostic needs at least 2 states, got {len}");
        }
        let t = a.max_lag.unwrap_or(len - 1);
        let series = hamming_experiment(&rec.graphs, t, &default_offsets(len, t))?;
        write_hamming(&a.out.join("hamming.tsv"), &series)?;
        println!(
            "hamming: {} lags, limit {:.3}",
            series.n_lags(),
            series.limit()
        );
    }
    if matches!(a.mode, DiagMode::Chi2 | DiagMode::Both) {
        if len < 4 {
            bail!("χ² diagnostic needs at least 4 states, got {len}");
        }
        let dims = if a.dims.is_empty() {
            let top = rec.counts.iter().map(Vec::len).max().unwrap_or(0);
            (2..top).collect()
        } else {
            a.dims.clone()
        };
        let ks = if a.ks.is_empty() {
            std::iter::successors(Some(1usize), |k| Some(k * 2))
                .take_while(|&k| k == 1 || 4 * k <= len)
                .collect()
        } else {
            a.ks.clone()
        };
        let cells = chi2_grid(&rec.counts, &dims, &ks, a.alpha);
        write_chi2(&a.out.join("chi2.tsv"), &cells)?;
        let rejected = cells
            .iter()
            .filter(|c| c.result.decision == flagmc_core::diagnostics::Decision::Reject)
            .count();
        println!("chi2: {} cells, {} rejected", cells.len(), rejected);
    }
    Ok(true)
}

fn cmd_dagify(n: u32, seed: u64, count: u64) -> anyhow::Result<bool> {
    let bound = (u64::from(n) * u64::from(n) - u64::from(n)) / 4;
    let mut ok = true;
    for i in 0..count {
        let s = seed.wrapping_add(i);
        let g = random_tournament(n, &mut ChainRng::seed_from_u64(s));
        let seq = dagify_tournament(&g)?;
        let r = replay(&g, &seq)?;
        let valid = r.acyclic
            && r.strictly_decreasing
            && r.distinct_edges
            && r.counts_match
            && seq.len() as u64 <= bound;
        ok &= valid;
        println!(
            "seed {s}: 3-cycles {} -> {}, flips {} (bound {bound}), {}",
            seq.initial_cycles,
            r.final_cycles,
            seq.len(),
            if valid { "ok" } else { "FAILED" }
        );
    }
    Ok(ok)
}

fn cmd_a4(
    n: u32,
    p: f64,
    graphs: u64,
    seed: u64,
    budget: u64,
    report: Option<&Path>,
) -> anyhow::Result<bool> {
    if !(0.0..=1.0).contains(&p) {
        bail!("edge probability {p} outside [0, 1]");
    }
    let results: Vec<_> = (0..graphs)
        .into_par_iter()
        .map(|i| a4_instance::<ChainRng>(n, p, seed, i, budget))
        .collect();
    let mut r = CampaignReport::new(n, p, graphs, seed, budget);
    for x in &results {
        r.record(x);
    }
    println!(
        "successes: {}/{}, invalid: {}, not found: {}, max flips: {}, mean nodes: {:.1}",
        r.successes,
        graphs,
        r.invalid,
        r.failures.len(),
        r.max_flips,
        r.total_nodes as f64 / graphs.max(1) as f64
    );
    for f in &r.failures {
        println!("not found: graph {} seed {}", f.index, f.seed);
    }
    if let Some(path) = report {
        write_json(path, &r)?;
    }
    Ok(r.all_succeeded())
}

fn cmd_oracle(a: OracleArgs) -> anyhow::Result<bool> {
    let g = match &a.input {
        Some(path) => read_flag_file(path)?,
        None => reference_graph(&named_backbone(&a.backbone)?, a.doubles)?,
    };
    let r = oracle_report(
        &g,
        &OracleParams {
            mix: a.mix,
            rel: a.rel,
            seed: a.seed,
            gof_max_states: a.gof_max_states,
            alpha: a.alpha,
        },
    )?;
    print!("{r}");
    Ok(r.passed())
}
