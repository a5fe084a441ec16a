//! `ψ_τ` from the Lemma-style formula
//! `(1+τ)^{−d/2} [4π²(1+τ) h + h″ + (d−1) h′/ρ](ρ)`, `h = φ*φ`, with the radial
//! derivatives taken by central differences on a tabulated `h`.

use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;

use super::radial::Radial;
use super::MinorantModel;
use crate::error::{Error, Result};

/// Grid intervals on `[0, 2R]`.
pub const TABLE_INTERVALS: usize = 10_000;

/// Relative change (to `ψ_τ(0)`) tolerated when the step is doubled.
const STEP_TOLERANCE: f64 = 1e-6;

struct Table {
    step: f64,
    values: Vec<f64>,
}

impl Table {
    fn build(radial: &Radial) -> Self {
        let step = 2.0 * radial.radius / TABLE_INTERVALS as f64;
        let values = (0..=TABLE_INTERVALS)
            .into_par_iter()
            .map(|i| radial.autocorrelation(i as f64 * step))
            .collect();
        Self { step, values }
    }

    /// `h` at grid index `i`, mirrored through the origin and zero beyond
    /// the table.
    fn at(&self, i: i64) -> f64 {
        let i = i.unsigned_abs() as usize;
        self.values.get(i).copied().unwrap_or(0.0)
    }

    /// `4π²a h + h″ + (d−1)h′/ρ` at grid node `i` with difference stride `k`.
    fn operator_at(&self, i: i64, k: i64, a: f64, dim: usize) -> f64 {
        let h = self.step * k as f64;
        let (lo, mid, hi) = (self.at(i - k), self.at(i), self.at(i + k));
        let second = (hi - 2.0 * mid + lo) / (h * h);
        let radial_term = if i == 0 {
            // h′(ρ)/ρ → h″(0).
            (dim as f64 - 1.0) * second
        } else {
            let first = (hi - lo) / (2.0 * h);
            (dim as f64 - 1.0) * first / (i as f64 * self.step)
        };
        4.0 * PI * PI * a * mid + second + radial_term
    }

    fn operator(&self, rho: f64, k: i64, a: f64, dim: usize) -> f64 {
        let x = rho / self.step;
        let i = x.floor() as i64;
        let frac = x - i as f64;
        (1.0 - frac) * self.operator_at(i, k, a, dim) + frac * self.operator_at(i + 1, k, a, dim)
    }
}

fn table(radial: &Radial) -> Arc<Table> {
    static TABLES: [OnceLock<Arc<Table>>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    TABLES[radial.dim - 1]
        .get_or_init(|| Arc::new(Table::build(radial)))
        .clone()
}

pub(super) fn psi_tau(model: &MinorantModel, r: f64) -> Result<f64> {
    let r = r.abs();
    if r >= model.support_radius() {
        return Ok(0.0);
    }
    let a = 1.0 + model.tau();
    let rho = r / a.sqrt();
    let t = table(&model.radial);
    let dim = model.dim();
    let scale = a.powf(-(dim as f64) / 2.0);
    let fine = scale * t.operator(rho, 1, a, dim);
    let coarse = scale * t.operator(rho, 2, a, dim);
    if (fine - coarse).abs() > STEP_TOLERANCE * model.psi0() {
        return Err(Error::Numerical(format!(
            "finite-difference psi_tau at r = {r} changes by {:e} when the step is doubled",
            (fine - coarse).abs()
        )));
    }
    Ok(fine)
}
