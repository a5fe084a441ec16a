//! Phase-transition sweeps over separation and node count, and randomized
//! campaigns checking the separation-based lower bound on `σ_min`.

mod campaign;
mod output;
mod plot;

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::minorant::{prop_bound, MinorantModel};
use crate::moments::{
    block_jacobian, index_set, proxy_from_singular_values, singular_values, FrequencyIndexSet,
    WeightVector,
};
use crate::torus::{gen_cubic_patch, gen_hex_lattice, gen_random_at_separation, NodeSet};

pub use campaign::{run_bound_campaign, BandlimitSummary, CampaignReport, Violation};
pub use output::{emit_csv, parse_csv, read_csv, to_csv_string, CSV_HEADER};
pub use plot::{emit_plot, render_svg};

/// Node-set family used for the sweep cells.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Generator {
    /// Hexagonal lattice patch (`d = 2` only).
    Hex,
    /// Cubic lattice patch `s·ℤ^d`.
    Grid,
    /// Random points with separation exactly `s`.
    Random,
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Generator::Hex => "hex",
            Generator::Grid => "grid",
            Generator::Random => "random",
        })
    }
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hex" => Ok(Generator::Hex),
            "grid" => Ok(Generator::Grid),
            "random" => Ok(Generator::Random),
            _ => Err(Error::Config(format!("unknown generator {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub dim: usize,
    pub bandlimit: f64,
    /// Values of `sep·n`.
    pub separation_grid: Vec<f64>,
    pub count_grid: Vec<usize>,
    pub generator: Generator,
    pub seeds: Vec<u64>,
    pub tau: f64,
    pub output_path: PathBuf,
    /// Fill `runtime_ms`; off by default so output is reproducible.
    #[serde(default)]
    pub record_timing: bool,
}

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("sweep config: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("configs serialize")
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Config(m));
        if !(1..=3).contains(&self.dim) {
            return fail(format!("dim must be 1, 2 or 3, got {}", self.dim));
        }
        if !(self.bandlimit > 0.0 && self.bandlimit.is_finite()) {
            return fail(format!("bandlimit must be positive, got {}", self.bandlimit));
        }
        if self.separation_grid.is_empty() || self.count_grid.is_empty() || self.seeds.is_empty() {
            return fail("separation_grid, count_grid and seeds must be nonempty".into());
        }
        if let Some(s) = self.separation_grid.iter().find(|s| !(**s > 0.0 && s.is_finite())) {
            return fail(format!("separation values must be positive, got {s}"));
        }
        if self.count_grid.contains(&0) {
            return fail("node counts must be positive".into());
        }
        if !(self.tau >= 0.0 && self.tau.is_finite()) {
            return fail(format!("tau must be nonnegative, got {}", self.tau));
        }
        if self.generator == Generator::Hex && self.dim != 2 {
            return fail("the hex generator needs dim = 2".into());
        }
        let rows = index_set(self.dim, self.bandlimit)?.len();
        let max_count = *self.count_grid.iter().max().expect("nonempty");
        if rows < (self.dim + 1) * max_count {
            return fail(format!(
                "{rows} frequencies cannot resolve {max_count} nodes in d={} (need {})",
                self.dim,
                (self.dim + 1) * max_count
            ));
        }
        Ok(())
    }
}

/// Outcome of one sweep cell.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Computed {
        sigma_min: f64,
        /// `n / σ_min`, infinite for a rank-deficient block Jacobian.
        proxy: f64,
    },
    Skipped(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub nominal_sep_n: f64,
    /// Measured separation (not scaled by `n`); absent for single nodes and
    /// skipped cells.
    pub measured_sep: Option<f64>,
    pub count: usize,
    pub cell: Cell,
    /// `B(n)` when `τ > 0` and the measured separation is at least `q_τ/n`.
    pub bound: Option<f64>,
    pub runtime_ms: u64,
}

impl SweepRow {
    pub fn proxy(&self) -> Option<f64> {
        match self.cell {
            Cell::Computed { proxy, .. } => Some(proxy),
            Cell::Skipped(_) => None,
        }
    }

    pub fn sigma_min(&self) -> Option<f64> {
        match self.cell {
            Cell::Computed { sigma_min, .. } => Some(sigma_min),
            Cell::Skipped(_) => None,
        }
    }

    pub fn is_skipped(&self) -> bool {
        matches!(self.cell, Cell::Skipped(_))
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

/// Node set for one cell at separation `sep`.
pub fn generate_nodes(
    generator: Generator,
    dim: usize,
    sep: f64,
    count: usize,
    seed: u64,
) -> Result<NodeSet> {
    match generator {
        Generator::Random => gen_random_at_separation(dim, sep, count, seed),
        Generator::Hex | Generator::Grid => {
            let base = if generator == Generator::Hex {
                gen_hex_lattice(sep, count)?
            } else {
                gen_cubic_patch(dim, sep, count)?
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let shift: Vec<f64> = (0..dim).map(|_| rng.random::<f64>()).collect();
            base.translated(&shift)
        }
    }
}

struct Context {
    dim: usize,
    bandlimit: f64,
    indices: FrequencyIndexSet,
    /// `(q_τ/n, B(n))`.
    bound: Option<(f64, f64)>,
}

fn run_cell(ctx: &Context, config: &SweepConfig, sep_n: f64, count: usize, seed: u64) -> SweepRow {
    let start = Instant::now();
    let sep = sep_n / ctx.bandlimit;
    let computed = generate_nodes(config.generator, ctx.dim, sep, count, seed).and_then(|nodes| {
        let measured = if nodes.len() >= 2 {
            Some(nodes.separation()?)
        } else {
            None
        };
        let g = block_jacobian(&nodes, &WeightVector::ones(nodes.len()), &ctx.indices)?;
        let sv = singular_values(g.matrix())?;
        Ok((measured, sv[0], proxy_from_singular_values(ctx.bandlimit, &sv)))
    });
    let runtime_ms = if config.record_timing {
        start.elapsed().as_millis() as u64
    } else {
        0
    };
    match computed {
        Ok((measured_sep, sigma_min, proxy)) => SweepRow {
            nominal_sep_n: sep_n,
            measured_sep,
            count,
            cell: Cell::Computed { sigma_min, proxy },
            bound: ctx.bound.and_then(|(min_sep, b)| match measured_sep {
                Some(s) if s >= min_sep * (1.0 - 1e-12) => Some(b),
                _ => None,
            }),
            runtime_ms,
        },
        Err(e) => SweepRow {
            nominal_sep_n: sep_n,
            measured_sep: None,
            count,
            cell: Cell::Skipped(e.to_string()),
            bound: None,
            runtime_ms,
        },
    }
}

/// Evaluate every `(separation, count, seed)` cell, in that nesting order.
/// Cells run in parallel; the rows come back in grid order and failures
/// to generate a node set are recorded as skipped rows.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepResult> {
    config.validate()?;
    let bound = if config.tau > 0.0 {
        let model = MinorantModel::new(config.dim, config.tau)?;
        let report = prop_bound(&model, config.bandlimit)?;
        Some((report.min_separation, report.bound))
    } else {
        None
    };
    let ctx = Context {
        dim: config.dim,
        bandlimit: config.bandlimit,
        indices: index_set(config.dim, config.bandlimit)?,
        bound,
    };
    let cells: Vec<(f64, usize, u64)> = config
        .separation_grid
        .iter()
        .flat_map(|&s| {
            config
                .count_grid
                .iter()
                .flat_map(move |&c| config.seeds.iter().map(move |&seed| (s, c, seed)))
        })
        .collect();
    let rows = cells
        .into_par_iter()
        .map(|(s, c, seed)| run_cell(&ctx, config, s, c, seed))
        .collect();
    Ok(SweepResult { rows })
}
