use serde::{Deserialize, Serialize};

use super::MinorantModel;
use crate::error::{Error, Result};

/// Lower bound on `σ_min²(𝒜, 𝒜̃_1, …, 𝒜̃_d)` for node sets with
/// `sep(Y) ≥ q_τ/n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub dim: usize,
    pub tau: f64,
    pub bandlimit: f64,
    /// `q_τ`.
    pub support_radius: f64,
    /// Separation `q_τ/n` above which the bound holds.
    pub min_separation: f64,
    /// `ψ_τ(0)`.
    pub psi0: f64,
    /// `ψ̂_τ(0)`.
    pub psi_hat0: f64,
    /// `−(∂²ψ_τ/∂x_s²)(0)`.
    pub neg_second_deriv0: f64,
    /// `B(n) = min(ψ_τ(0), −(∂²ψ_τ/∂x_s²)(0) n²) / ψ̂_τ(0) · n^d`.
    pub bound: f64,
    /// `B(n) / n^d`.
    pub bound_per_volume: f64,
}

impl BoundReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

pub fn prop_bound(model: &MinorantModel, bandlimit: f64) -> Result<BoundReport> {
    if !(bandlimit > 0.0 && bandlimit.is_finite()) {
        return Err(Error::Domain(format!("bandlimit must be positive, got {bandlimit}")));
    }
    if model.tau() <= 0.0 {
        return Err(Error::Precondition("the bound needs tau > 0".into()));
    }
    if model.psi_hat0() <= 0.0 {
        return Err(Error::Numerical(format!(
            "invalid model: psi_hat(0) = {} is not positive",
            model.psi_hat0()
        )));
    }
    let d = model.dim() as i32;
    let per_volume =
        model.psi0().min(model.neg_second_deriv0() * bandlimit * bandlimit) / model.psi_hat0();
    Ok(BoundReport {
        dim: model.dim(),
        tau: model.tau(),
        bandlimit,
        support_radius: model.support_radius(),
        min_separation: model.support_radius() / bandlimit,
        psi0: model.psi0(),
        psi_hat0: model.psi_hat0(),
        neg_second_deriv0: model.neg_second_deriv0(),
        bound: per_volume * bandlimit.powi(d),
        bound_per_volume: per_volume,
    })
}
