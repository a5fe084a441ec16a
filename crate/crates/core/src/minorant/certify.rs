use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::MinorantModel;
use crate::error::{Error, Result};

/// Upper end of the sampled frequency range for the sign check.
pub const SIGN_CHECK_LIMIT: f64 = 30.0;

const SUPPORT_TOLERANCE: f64 = 1e-8;
const SIGN_TOLERANCE: f64 = 1e-10;
const GAP_TOLERANCE: f64 = 1e-6;

/// Outcome of one admissibility clause.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClauseReport {
    pub name: String,
    pub passed: bool,
    /// Grid point where the clause is closest to failing.
    pub worst_point: f64,
    pub worst_value: f64,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub dim: usize,
    pub tau: f64,
    pub grid_resolution: usize,
    pub support_radius: f64,
    pub psi0: f64,
    pub psi_hat0: f64,
    /// Largest grid radius with `ψ_τ > 0`.
    pub measured_edge: f64,
    /// `min(grid minimum of (ψ_τ(0) − ψ_τ(r))/r², −½ ∂²ψ_τ(0))`.
    pub gap_constant: f64,
    pub grid_gap_min: f64,
    /// `−½ (∂²ψ_τ/∂x_s²)(0)`, the limit of the gap quotient at the origin.
    pub origin_gap: f64,
    /// `τ (1+τ)^{−d/2−1}`.
    pub reference_shape: f64,
    /// `gap_constant / reference_shape`, an empirical value of `c_d`.
    pub fitted_cd: Option<f64>,
    /// `E` with `|ψ̂_τ(v)| ≤ E v^{−d−3}` for `v ≥ 2`.
    pub hat_envelope: f64,
    /// `E · 30^{−d−3}`, the largest `|ψ̂_τ|` beyond the sampled range.
    pub hat_tail_bound: f64,
    pub support: ClauseReport,
    pub maximum: ClauseReport,
    pub sign: ClauseReport,
    pub passed: bool,
    pub failed_clause: Option<String>,
}

impl AdmissibilityReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// Check compact support, the quadratic maximum at the origin and the sign
/// pattern of `ψ̂_τ` on radial grids with `grid_resolution` points inside
/// the support.
pub fn certify_admissibility(
    model: &MinorantModel,
    grid_resolution: usize,
) -> Result<AdmissibilityReport> {
    if grid_resolution < 10 {
        return Err(Error::Config(format!(
            "grid resolution must be at least 10, got {grid_resolution}"
        )));
    }
    let q = model.support_radius();
    let step = q / grid_resolution as f64;
    let psi0 = model.psi_tau(0.0);

    let inside: Vec<(f64, f64)> = (1..grid_resolution)
        .into_par_iter()
        .map(|i| {
            let r = i as f64 * step;
            (r, model.psi_tau(r))
        })
        .collect();
    let outside: Vec<(f64, f64)> = (0..=grid_resolution / 2)
        .into_par_iter()
        .map(|i| {
            let r = q + i as f64 * step;
            (r, model.psi_tau(r))
        })
        .collect();

    // (i) compact support.
    let (out_r, out_v) = outside
        .iter()
        .copied()
        .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .expect("nonempty grid");
    let measured_edge = inside
        .iter()
        .filter(|(_, v)| *v > 0.0)
        .map(|(r, _)| *r)
        .fold(0.0, f64::max);
    let vanishes = out_v.abs() <= SUPPORT_TOLERANCE * psi0;
    let edge_ok = q - measured_edge <= step * (1.0 + 1e-9);
    let support = ClauseReport {
        name: "support".into(),
        passed: vanishes && edge_ok,
        worst_point: if vanishes { measured_edge } else { out_r },
        worst_value: if vanishes { q - measured_edge } else { out_v },
        detail: format!(
            "max |psi| beyond q_tau = {:e} at r = {out_r}; last positive grid radius {measured_edge} vs q_tau {q}",
            out_v.abs()
        ),
    };

    // (ii) strict quadratic maximum at the origin.
    let (gap_r, grid_gap_min) = inside
        .iter()
        .map(|&(r, v)| (r, (psi0 - v) / (r * r)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("nonempty grid");
    let (max_r, max_v) = inside
        .iter()
        .copied()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("nonempty grid");
    let origin_gap = 0.5 * model.neg_second_deriv0();
    let gap_constant = grid_gap_min.min(origin_gap);
    let threshold = GAP_TOLERANCE * psi0 / (q * q);
    let is_max = max_v <= psi0;
    let d = model.dim() as f64;
    let tau = model.tau();
    let reference_shape = tau * (1.0 + tau).powf(-d / 2.0 - 1.0);
    let maximum = ClauseReport {
        name: "maximum".into(),
        passed: is_max && gap_constant > threshold,
        worst_point: if !is_max {
            max_r
        } else if origin_gap < grid_gap_min {
            0.0
        } else {
            gap_r
        },
        worst_value: if is_max { gap_constant } else { max_v - psi0 },
        detail: format!(
            "gap constant {gap_constant:e} (grid minimum {grid_gap_min:e} at r = {gap_r}, origin limit {origin_gap:e}) against threshold {threshold:e}; max off-origin psi {max_v} vs psi(0) {psi0}"
        ),
    };

    // (iii) sign pattern of the Fourier transform.
    let samples = (SIGN_CHECK_LIMIT * 100.0) as usize;
    let signed: Vec<(f64, f64)> = (0..=samples)
        .into_par_iter()
        .map(|i| {
            let v = SIGN_CHECK_LIMIT * i as f64 / samples as f64;
            model
                .psi_hat_tau(v)
                .map(|h| (v, if v <= 1.0 { h } else { -h }))
        })
        .collect::<Result<_>>()?;
    let (sign_v, sign_min) = signed
        .iter()
        .copied()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("nonempty grid");
    let psi_hat0 = model.psi_hat0();
    let hat_envelope = model.hat_envelope();
    let hat_tail_bound = hat_envelope * SIGN_CHECK_LIMIT.powi(-(model.dim() as i32) - 3);
    let sign = ClauseReport {
        name: "sign".into(),
        passed: sign_min >= -SIGN_TOLERANCE * psi_hat0,
        worst_point: sign_v,
        worst_value: sign_min,
        detail: format!(
            "min of psi_hat*sign(1-v) on [0, {SIGN_CHECK_LIMIT}] is {sign_min:e} at v = {sign_v}; beyond, (1-v^2) phi_hat^2 <= 0 and |psi_hat| <= {hat_tail_bound:e}"
        ),
    };

    let failed_clause = [&support, &maximum, &sign]
        .iter()
        .find(|c| !c.passed)
        .map(|c| c.name.clone());
    Ok(AdmissibilityReport {
        dim: model.dim(),
        tau,
        grid_resolution,
        support_radius: q,
        psi0,
        psi_hat0,
        measured_edge,
        gap_constant,
        grid_gap_min,
        origin_gap,
        reference_shape,
        fitted_cd: (tau > 0.0).then(|| gap_constant / reference_shape),
        hat_envelope,
        hat_tail_bound,
        passed: failed_clause.is_none(),
        failed_clause,
        support,
        maximum,
        sign,
    })
}

/// One tolerance check of [`radial_derivative_check`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerivativeClause {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub limit: f64,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerivativeReport {
    pub dim: usize,
    pub tau: f64,
    /// Largest difference step before extrapolation.
    pub step: f64,
    pub gradient: Vec<f64>,
    /// `∂²ψ_τ/∂x_s²(0)` per axis.
    pub pure_second: Vec<f64>,
    /// `∂²ψ_τ/∂x_s∂x_{s'}(0)` for `s < s'`.
    pub mixed_second: Vec<f64>,
    /// `Δψ_τ(0)` from the model.
    pub laplacian_reference: f64,
    pub clauses: Vec<DerivativeClause>,
    pub passed: bool,
}

impl DerivativeReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// Richardson extrapolation of `f(h), f(h/2), f(h/4), f(h/8)` removing
/// error terms in `h`, `h²` and `h³`.
fn richardson(values: [f64; 4]) -> f64 {
    let mut row = values.to_vec();
    let mut factor = 2.0;
    while row.len() > 1 {
        row = row
            .windows(2)
            .map(|w| (factor * w[1] - w[0]) / (factor - 1.0))
            .collect();
        factor *= 2.0;
    }
    row[0]
}

/// Central-difference derivatives of `ψ_τ` at the origin, treated as a
/// function of the full vector `x ∈ ℝ^d`.
pub fn radial_derivative_check(model: &MinorantModel) -> Result<DerivativeReport> {
    if model.tau() <= 0.0 {
        return Err(Error::Precondition("derivative check needs tau > 0".into()));
    }
    let d = model.dim();
    let base_step = 0.01;
    let psi = |x: &[f64]| model.psi_tau_at(x);
    let unit = |s: usize, h: f64| {
        let mut x = vec![0.0; d];
        x[s] = h;
        x
    };
    let levels = |f: &dyn Fn(f64) -> f64| {
        let v = [0, 1, 2, 3].map(|k| f(base_step / f64::from(1 << k)));
        richardson(v)
    };
    let origin = psi(&vec![0.0; d]);

    let gradient: Vec<f64> = (0..d)
        .map(|s| levels(&|h| (psi(&unit(s, h)) - psi(&unit(s, -h))) / (2.0 * h)))
        .collect();
    let pure_second: Vec<f64> = (0..d)
        .map(|s| levels(&|h| (psi(&unit(s, h)) - 2.0 * origin + psi(&unit(s, -h))) / (h * h)))
        .collect();
    let mut mixed_pairs = Vec::new();
    let mut mixed_second = Vec::new();
    for s in 0..d {
        for t in s + 1..d {
            let at = |a: f64, b: f64| {
                let mut x = vec![0.0; d];
                x[s] = a;
                x[t] = b;
                psi(&x)
            };
            mixed_pairs.push((s, t));
            mixed_second.push(levels(&|h| {
                (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4.0 * h * h)
            }));
        }
    }
    let laplacian_reference = model.laplacian0();

    let mut clauses = Vec::new();
    let grad_norm = gradient.iter().map(|g| g * g).sum::<f64>().sqrt();
    let limit = 1e-5 * origin;
    clauses.push(DerivativeClause {
        name: "gradient".into(),
        passed: grad_norm <= limit,
        value: grad_norm,
        limit,
        detail: format!("|grad psi(0)| = {grad_norm:e}"),
    });
    if d >= 2 {
        let lap = laplacian_reference.abs();
        let (worst, pair) = mixed_second
            .iter()
            .zip(&mixed_pairs)
            .map(|(m, p)| (m.abs(), *p))
            .max_by(|a, b| a.0.total_cmp(&b.0))
            .expect("d >= 2 has mixed pairs");
        clauses.push(DerivativeClause {
            name: "mixed".into(),
            passed: worst <= 1e-4 * lap,
            value: worst,
            limit: 1e-4 * lap,
            detail: format!("largest mixed partial at axes ({}, {})", pair.0, pair.1),
        });

        let scale = pure_second.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mut worst = (0.0, (0, 0));
        for s in 0..d {
            for t in s + 1..d {
                let gap = (pure_second[s] - pure_second[t]).abs();
                if gap >= worst.0 {
                    worst = (gap, (s, t));
                }
            }
        }
        clauses.push(DerivativeClause {
            name: "pure_pairwise".into(),
            passed: worst.0 <= 1e-4 * scale,
            value: worst.0,
            limit: 1e-4 * scale,
            detail: format!("largest disagreement between axes ({}, {})", worst.1 .0, worst.1 .1),
        });

        let (worst, axis) = pure_second
            .iter()
            .enumerate()
            .map(|(s, v)| ((d as f64 * v - laplacian_reference).abs(), s))
            .max_by(|a, b| a.0.total_cmp(&b.0))
            .expect("nonempty");
        clauses.push(DerivativeClause {
            name: "laplacian".into(),
            passed: worst <= 1e-4 * lap,
            value: worst,
            limit: 1e-4 * lap,
            detail: format!(
                "d * d2psi/dx{axis}^2 = {} vs laplacian {laplacian_reference}",
                d as f64 * pure_second[axis]
            ),
        });
    }
    Ok(DerivativeReport {
        dim: d,
        tau: model.tau(),
        step: base_step,
        gradient,
        pure_second,
        mixed_second,
        laplacian_reference,
        passed: clauses.iter().all(|c| c.passed),
        clauses,
    })
}
