use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::minorant::{prop_bound, MinorantModel};
use crate::moments::{block_jacobian, index_set, WeightVector};
use crate::torus::{gen_random_at_separation, packing_density, NodeSet};

/// Largest node count drawn per trial.
const MAX_COUNT: usize = 24;

/// Packing density up to which rejection sampling is attempted.
const MAX_DENSITY: f64 = 0.5;

/// Instance with `σ_min²(G) < B(n)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub bandlimit: f64,
    pub trial: usize,
    pub seed: u64,
    pub nodes: NodeSet,
    pub sigma_min_sq: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BandlimitSummary {
    pub bandlimit: f64,
    pub bound: f64,
    pub trials: usize,
    pub passed: usize,
    /// Minimum over trials of `σ_min²(G) / B(n)`.
    pub min_ratio: f64,
    /// Minimum over trials of `σ_min²(G) / n^d`.
    pub min_normalized: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub dim: usize,
    pub tau: f64,
    pub support_radius: f64,
    pub seed: u64,
    pub per_bandlimit: Vec<BandlimitSummary>,
    /// Minimum of `σ_min²/n^d` over all trials and bandlimits.
    pub normalized_envelope: f64,
    pub total: usize,
    pub passed: usize,
    pub violations: Vec<Violation>,
}

impl CampaignReport {
    /// Every instance satisfied the bound and the normalized envelope is
    /// positive.
    pub fn all_passed(&self) -> bool {
        self.violations.is_empty() && self.normalized_envelope > 0.0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

struct Trial {
    slot: usize,
    bandlimit: f64,
    index: usize,
    seed: u64,
    count: usize,
}

/// Random node sets at separation exactly `q_τ/n`, checked against the
/// bound `B(n)`, for every `n` in `n_grid`.
pub fn run_bound_campaign(
    dim: usize,
    tau: f64,
    n_grid: &[f64],
    trials: usize,
    seed: u64,
) -> Result<CampaignReport> {
    if n_grid.is_empty() || trials == 0 {
        return Err(Error::Config("campaign needs a nonempty n grid and trials > 0".into()));
    }
    let model = MinorantModel::new(dim, tau)?;
    if tau <= 0.0 {
        return Err(Error::Precondition("the bound campaign needs tau > 0".into()));
    }
    let q = model.support_radius();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut plan = Vec::with_capacity(n_grid.len() * trials);
    let mut bounds = Vec::with_capacity(n_grid.len());
    let mut index_sets = Vec::with_capacity(n_grid.len());
    for (slot, &n) in n_grid.iter().enumerate() {
        let bound = prop_bound(&model, n)?.bound;
        let indices = index_set(dim, n)?;
        let sep = q / n;
        let mut cap = MAX_COUNT.min(indices.len() / (dim + 1));
        while cap > 2 && packing_density(dim, sep, cap) > MAX_DENSITY {
            cap -= 1;
        }
        if cap < 2 {
            return Err(Error::Config(format!(
                "n = {n} admits fewer than two nodes at separation q_tau/n"
            )));
        }
        for index in 0..trials {
            plan.push(Trial {
                slot,
                bandlimit: n,
                index,
                seed: rng.random(),
                count: rng.random_range(2..=cap),
            });
        }
        bounds.push(bound);
        index_sets.push(indices);
    }

    let outcomes: Vec<(NodeSet, f64)> = plan
        .par_iter()
        .map(|t| {
            let mut count = t.count;
            let nodes = loop {
                match gen_random_at_separation(dim, q / t.bandlimit, count, t.seed) {
                    Ok(nodes) => break nodes,
                    Err(Error::Infeasible(_)) if count > 2 => count -= 1,
                    Err(e) => return Err(e),
                }
            };
            let g = block_jacobian(&nodes, &WeightVector::ones(nodes.len()), &index_sets[t.slot])?;
            let s = g.sigma_min()?;
            Ok((nodes, s * s))
        })
        .collect::<Result<_>>()?;

    let mut per_bandlimit = Vec::new();
    let mut violations = Vec::new();
    for (slot, &n) in n_grid.iter().enumerate() {
        let bound = bounds[slot];
        let volume = n.powi(dim as i32);
        let mut summary = BandlimitSummary {
            bandlimit: n,
            bound,
            trials,
            passed: 0,
            min_ratio: f64::INFINITY,
            min_normalized: f64::INFINITY,
        };
        for (t, (nodes, sq)) in plan.iter().zip(&outcomes).filter(|(t, _)| t.slot == slot) {
            summary.min_ratio = summary.min_ratio.min(sq / bound);
            summary.min_normalized = summary.min_normalized.min(sq / volume);
            if *sq >= bound {
                summary.passed += 1;
            } else {
                violations.push(Violation {
                    bandlimit: n,
                    trial: t.index,
                    seed: t.seed,
                    nodes: nodes.clone(),
                    sigma_min_sq: *sq,
                    bound,
                });
            }
        }
        per_bandlimit.push(summary);
    }
    let normalized_envelope = per_bandlimit
        .iter()
        .map(|s| s.min_normalized)
        .fold(f64::INFINITY, f64::min);
    let passed = per_bandlimit.iter().map(|s| s.passed).sum();
    Ok(CampaignReport {
        dim,
        tau,
        support_radius: q,
        seed,
        per_bandlimit,
        normalized_envelope,
        total: plan.len(),
        passed,
        violations,
    })
}
