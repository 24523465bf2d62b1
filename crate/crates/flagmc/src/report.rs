//! Bounds construction for the CLI and the oracle verification report.

use std::fmt;

use anyhow::{bail, Context};
use flagmc_core::bounds::{
    max_simplex_table, relaxed_bounds_double_edge, relaxed_bounds_single_edge, target_bounds,
    SimplexBounds,
};
use flagmc_core::cliques::MaximalCliques;
use flagmc_core::graph::{normalize, DirectedGraph, UndirectedGraph};
use flagmc_core::mcmc::{filter_samples, run, SamplerConfig};
use flagmc_core::oracle::{
    build_matrix, enumerate_states, reachability, tally, uniformity_gof, GofResult,
};
use flagmc_core::{count_simplices, MoveMix, Proposer};

/// Matrix sums and symmetry are exact up to this float error.
pub const ORACLE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum BoundsMode {
    /// `s⁻⁻ = s⁻`, `s⁺⁺ = ∞` above dimension 1.
    Single,
    /// Widen `s⁺⁺` by the double-edge clustering bound.
    Double,
    /// `single` without double edges, `double` otherwise.
    Auto,
}

pub struct BoundsParams<'a> {
    pub rel: f64,
    pub mode: BoundsMode,
    pub overrides: &'a [(usize, Option<u64>)],
    pub table_max: usize,
}

pub fn build_bounds(g: &DirectedGraph, params: &BoundsParams) -> anyhow::Result<SimplexBounds> {
    let counts = count_simplices(g);
    let t = target_bounds(counts.as_slice(), params.rel)?;
    let max_clique = MaximalCliques::new(&g.project()).max_size();
    let dims = max_clique.max(counts.len());
    let double = match params.mode {
        BoundsMode::Single => false,
        BoundsMode::Double => true,
        BoundsMode::Auto => g.n_doubles() > 0,
    };
    if !double {
        return Ok(relaxed_bounds_single_edge(&t, dims).with_overrides(params.overrides)?);
    }
    let table = max_simplex_table(params.table_max.min(max_clique.max(2)))?;
    Ok(relaxed_bounds_double_edge(
        &t,
        dims,
        &table,
        params.overrides,
    )?)
}

/// Parses `d=v` or `d=inf`.
pub fn parse_override(s: &str) -> Result<(usize, Option<u64>), String> {
    let (d, v) = s
        .split_once('=')
        .ok_or_else(|| format!("expected d=value, got {s:?}"))?;
    let d = d
        .trim()
        .parse::<usize>()
        .map_err(|e| format!("dimension {d:?}: {e}"))?;
    let v = v.trim();
    if v.eq_ignore_ascii_case("inf") {
        return Ok((d, None));
    }
    let v = v.parse::<u64>().map_err(|e| format!("value {v:?}: {e}"))?;
    Ok((d, Some(v)))
}

pub fn parse_mix(s: &str) -> Result<MoveMix, String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    let [sef, dem, cp, cs] = parts[..] else {
        return Err(format!(
            "expected 4 comma-separated weights, got {}",
            parts.len()
        ));
    };
    MoveMix::new(sef, dem, cp, cs).map_err(|e| e.to_string())
}

/// Tiny backbones by name.
pub fn named_backbone(name: &str) -> anyhow::Result<UndirectedGraph> {
    let (n, edges): (u32, &[(u32, u32)]) = match name {
        "edge" => (2, &[(0, 1)]),
        "path" => (3, &[(0, 1), (1, 2)]),
        "triangle" => (3, &[(0, 1), (0, 2), (1, 2)]),
        "triangle-pendant" => (4, &[(0, 1), (0, 2), (1, 2), (2, 3)]),
        "k4" => (4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]),
        _ => bail!("unknown backbone {name:?} (edge, path, triangle, triangle-pendant, k4)"),
    };
    Ok(UndirectedGraph::from_edges(n, edges.iter().copied())?)
}

/// Every backbone edge oriented low to high, the first `doubles` of them
/// doubled.
pub fn reference_graph(b: &UndirectedGraph, doubles: usize) -> anyhow::Result<DirectedGraph> {
    if doubles > b.n_edges() {
        bail!(
            "{doubles} double edges requested, backbone has {}",
            b.n_edges()
        );
    }
    let mut g = DirectedGraph::new(b.n_vertices());
    for (i, &e) in b.edges().iter().enumerate() {
        let (lo, hi) = normalize(e);
        g.add_edge(lo, hi)?;
        if i < doubles {
            g.add_edge(hi, lo)?;
        }
    }
    Ok(g)
}

pub struct OracleParams {
    pub mix: MoveMix,
    pub rel: f64,
    pub seed: u64,
    /// Largest restricted space the uniformity check is run on.
    pub gof_max_states: usize,
    pub alpha: f64,
}

#[derive(Clone, Debug)]
pub struct OracleReport {
    pub n_states: usize,
    pub n_restricted: usize,
    pub n_target: usize,
    pub backbone_edges: usize,
    pub asymmetry: f64,
    pub unrestricted_error: f64,
    pub restricted_error: f64,
    pub components: usize,
    pub restricted_components: usize,
    pub target_connected: bool,
    pub diameter: usize,
    pub gof: Option<GofResult>,
}

impl OracleReport {
    pub fn symmetric(&self) -> bool {
        self.asymmetry <= ORACLE_TOL
    }

    pub fn doubly_stochastic(&self) -> bool {
        self.unrestricted_error <= ORACLE_TOL && self.restricted_error <= ORACLE_TOL
    }

    pub fn diameter_ok(&self) -> bool {
        self.diameter <= 2 * self.backbone_edges
    }

    pub fn passed(&self) -> bool {
        self.symmetric()
            && self.doubly_stochastic()
            && self.target_connected
            && self.diameter_ok()
            && !self.gof.is_some_and(|g| g.reject)
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "symmetric: {}, doubly stochastic: {}, components: {}",
            yes(self.symmetric()),
            yes(self.doubly_stochastic()),
            self.components
        )?;
        writeln!(
            f,
            "states: {} (restricted {}, target {})",
            self.n_states, self.n_restricted, self.n_target
        )?;
        writeln!(
            f,
            "max asymmetry: {:.3e}, max sum error: {:.3e} unrestricted, {:.3e} restricted",
            self.asymmetry, self.unrestricted_error, self.restricted_error
        )?;
        writeln!(
            f,
            "restricted components: {}, target connected: {}",
            self.restricted_components,
            yes(self.target_connected)
        )?;
        writeln!(
            f,
            "diameter: {} (bound {})",
            self.diameter,
            2 * self.backbone_edges
        )?;
        match &self.gof {
            Some(g) => writeln!(
                f,
                "gof: statistic {:.4}, dof {}, p-value {:.4}, {}",
                g.statistic,
                g.dof,
                g.p_value,
                if g.reject { "reject" } else { "accept" }
            ),
            None => writeln!(f, "gof: skipped"),
        }
    }
}

/// Exact matrices for the space of `g0`'s backbone and edge count, checked
/// for symmetry, double stochasticity and connectivity of the target set
/// under the single-edge relaxation, plus a sampled uniformity test.
pub fn oracle_report(g0: &DirectedGraph, p: &OracleParams) -> anyhow::Result<OracleReport> {
    let backbone = g0.project();
    let space = enumerate_states(&backbone, g0.n_edges())?;
    let proposer = Proposer::new(MaximalCliques::new(&backbone), p.mix);
    let full = build_matrix(&space, &proposer, None)?;
    let start = space.index_of(g0)?;
    let full_reach = reachability(&full, full.row_of(start).context("start state missing")?);

    let counts = count_simplices(g0);
    let dims = MaximalCliques::new(&backbone).max_size().max(counts.len());
    let bounds = relaxed_bounds_single_edge(&target_bounds(counts.as_slice(), p.rel)?, dims);
    let restricted = build_matrix(&space, &proposer, Some(&bounds))?;
    let start_row = restricted
        .row_of(start)
        .context("start state outside its own bounds")?;
    let reach = reachability(&restricted, start_row);
    let target = space.target_set(&bounds);
    let target_rows: Vec<usize> = target
        .iter()
        .filter_map(|&s| restricted.row_of(s))
        .collect();

    let gof = if restricted.len() <= p.gof_max_states && target.len() >= 2 {
        let cfg = SamplerConfig {
            bounds: bounds.clone(),
            mix: p.mix,
            sampling_distance: 10 * restricted.len() as u64,
            n_samples: 100 * target.len() as u64,
            seed: p.seed,
            recount_interval: 0,
        };
        let (samples, _) = run(&cfg, g0)?;
        let kept = filter_samples(samples, &bounds);
        Some(uniformity_gof(&tally(&space, &target, &kept)?, p.alpha)?)
    } else {
        None
    };

    Ok(OracleReport {
        n_states: space.len(),
        n_restricted: restricted.len(),
        n_target: target.len(),
        backbone_edges: backbone.n_edges(),
        asymmetry: full.max_asymmetry(),
        unrestricted_error: full.max_row_error().max(full.max_col_error()),
        restricted_error: restricted.max_row_error().max(restricted.max_col_error()),
        components: full_reach.n_components(),
        restricted_components: reach.n_components(),
        target_connected: target_rows.len() == target.len() && reach.same_component(&target_rows),
        diameter: reach.diameter,
        gof,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_parse() {
        assert_eq!(parse_override("5=910"), Ok((5, Some(910))));
        assert_eq!(parse_override("7=inf"), Ok((7, None)));
        assert!(parse_override("7").is_err());
        assert!(parse_override("x=1").is_err());
    }

    #[test]
    fn mix_parse() {
        assert_eq!(parse_mix("0.1,0.1,0.6,0.2"), Ok(MoveMix::default()));
        assert!(parse_mix("1,0").is_err());
        assert!(parse_mix("0.5,0.5,0.5,0.5").is_err());
    }

    #[test]
    fn reference_graph_doubles() {
        let b = named_backbone("triangle").unwrap();
        let g = reference_graph(&b, 1).unwrap();
        assert_eq!(g.n_edges(), 4);
        assert_eq!(g.n_doubles(), 1);
        assert!(reference_graph(&b, 4).is_err());
    }

    #[test]
    fn triangle_report() {
        let g = reference_graph(&named_backbone("triangle").unwrap(), 0).unwrap();
        let params = OracleParams {
            mix: MoveMix::default(),
            rel: 0.01,
            seed: 7,
            gof_max_states: 64,
            alpha: 0.01,
        };
        let r = oracle_report(&g, &params).unwrap();
        assert!(r.passed(), "{r}");
        assert!(r
            .to_string()
            .starts_with("symmetric: yes, doubly stochastic: yes, components: 1\n"));
    }

    #[test]
    fn single_mode_bounds_are_open_above() {
        let g = reference_graph(&named_backbone("k4").unwrap(), 0).unwrap();
        let params = BoundsParams {
            rel: 0.01,
            mode: BoundsMode::Auto,
            overrides: &[],
            table_max: 5,
        };
        let b = build_bounds(&g, &params).unwrap();
        assert_eq!(b.relaxed_upper[2], None);
        assert!(b.within_target(count_simplices(&g).as_slice()));
    }
}
