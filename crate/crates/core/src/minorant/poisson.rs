//! Both sides of the Poisson-summation identity behind the lower bound:
//! truncated lattice sums of `ψ̂_{τ,n}(k) μ̂_s(k) conj(μ̂_{s'}(k))` against
//! the real-space closed forms.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::radial::sphere_area;
use super::MinorantModel;
use crate::error::{Error, Result};
use crate::moments::{block_jacobian, index_set, WeightVector};
use crate::torus::NodeSet;

/// Relative size of the `S₁` tail bound that aborts the computation.
pub const TAIL_LIMIT: f64 = 1e-4;

/// One of the sums `S₁ … S₄`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SumComparison {
    /// Lattice sum over `‖k‖ ≤ k_max`.
    pub truncated: f64,
    /// Limit `K → ∞` of the cumulative shell sums, fitted as
    /// `a + b/K + c/K²` over `K ∈ [k_max/2, k_max]`.
    pub extrapolated: f64,
    /// Real-space closed form.
    pub real_side: f64,
    /// Rigorous bound on `|sum over ‖k‖ > k_max|` from the decay envelope.
    pub tail_bound: f64,
}

impl SumComparison {
    /// `|extrapolated − real_side| / |real_side|`, or the absolute
    /// difference when the real side vanishes.
    pub fn relative_error(&self) -> f64 {
        let diff = (self.extrapolated - self.real_side).abs();
        if self.real_side == 0.0 {
            diff
        } else {
            diff / self.real_side.abs()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoissonReport {
    pub dim: usize,
    pub tau: f64,
    pub bandlimit: f64,
    pub k_max: f64,
    pub lattice_points: usize,
    pub s1: SumComparison,
    pub s2: SumComparison,
    pub s3: SumComparison,
    pub s4: SumComparison,
    /// `ψ̂_{τ,n}(0) ‖G u‖²` with unit weights.
    pub lhs: f64,
    /// `lhs ≥ S₁ + S₄` (real-side values).
    pub inequality_holds: bool,
}

/// Least-squares fit of `y ≈ a + b/K + c/K²`; returns `a`.
fn extrapolate(samples: &[(f64, f64)], k_ref: f64) -> Result<f64> {
    if samples.len() < 3 {
        return Err(Error::Numerical(
            "too few lattice shells to extrapolate the sums".into(),
        ));
    }
    let a = DMatrix::from_fn(samples.len(), 3, |i, j| (k_ref / samples[i].0).powi(j as i32));
    let y = DVector::from_iterator(samples.len(), samples.iter().map(|s| s.1));
    let coeffs = a
        .svd(true, true)
        .solve(&y, 1e-14)
        .map_err(|e| Error::Numerical(format!("extrapolation fit failed: {e}")))?;
    Ok(coeffs[0])
}

fn l1(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).sum()
}

fn l2_sq(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// Compare the frequency-side sums `S₁ … S₄` for the block vector
/// `u = (u_0, u_1, …, u_d)` with their real-space closed forms.
pub fn poisson_decomposition(
    model: &MinorantModel,
    nodes: &NodeSet,
    u: &[Complex64],
    bandlimit: f64,
    k_max: f64,
) -> Result<PoissonReport> {
    let d = model.dim();
    let y = nodes.len();
    if nodes.dim() != d {
        return Err(Error::Domain("node dimension does not match the model".into()));
    }
    if u.len() != y * (d + 1) {
        return Err(Error::Domain(format!(
            "coefficient vector has length {}, expected {}",
            u.len(),
            y * (d + 1)
        )));
    }
    if !(bandlimit > 0.0 && bandlimit.is_finite()) {
        return Err(Error::Domain(format!("bandlimit must be positive, got {bandlimit}")));
    }
    if k_max < 3.0 * bandlimit {
        return Err(Error::Precondition(format!(
            "k_max = {k_max} is below 3n = {}",
            3.0 * bandlimit
        )));
    }
    let min_sep = model.support_radius() / bandlimit;
    if y >= 2 && nodes.separation()? < min_sep * (1.0 - 1e-12) {
        return Err(Error::Precondition(format!(
            "separation {} is below q_tau/n = {min_sep}",
            nodes.separation()?
        )));
    }
    let blocks: Vec<&[Complex64]> = u.chunks_exact(y).collect();

    // Per-shell accumulation over m = ‖k‖².
    let m_max = (k_max * k_max).floor() as usize;
    let mut shells = vec![[0.0f64; 4]; m_max + 1];
    let mut occupied = vec![false; m_max + 1];
    let side_half = k_max.floor() as i64;
    let side = (2 * side_half + 1) as usize;
    let mut k = vec![0i64; d];
    let mut mu = vec![Complex64::new(0.0, 0.0); d + 1];
    let mut lattice_points = 0;
    for code in 0..side.pow(d as u32) {
        let mut rest = code;
        for slot in k.iter_mut().rev() {
            *slot = (rest % side) as i64 - side_half;
            rest /= side;
        }
        let m = k.iter().map(|x| x * x).sum::<i64>() as usize;
        if m > m_max {
            continue;
        }
        lattice_points += 1;
        mu.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        for (j, t) in nodes.points().enumerate() {
            let dot: f64 = t.iter().zip(&k).map(|(x, &kk)| x * kk as f64).sum();
            let e = Complex64::from_polar(1.0, -2.0 * PI * (dot - dot.round()));
            for (s, block) in blocks.iter().enumerate() {
                mu[s] += block[j] * e;
            }
        }
        for s in 1..=d {
            mu[s] *= Complex64::new(0.0, -2.0 * PI * k[s - 1] as f64);
        }
        let acc = &mut shells[m];
        occupied[m] = true;
        acc[0] += mu[0].norm_sqr();
        for s in 1..=d {
            acc[1] += 2.0 * (mu[s] * mu[0].conj()).re;
            acc[3] += mu[s].norm_sqr();
            for t in 1..s {
                acc[2] += 2.0 * (mu[s] * mu[t].conj()).re;
            }
        }
    }

    let mut cumulative = [0.0f64; 4];
    let mut samples: [Vec<(f64, f64)>; 4] = Default::default();
    for (m, acc) in shells.iter().enumerate() {
        if !occupied[m] {
            continue;
        }
        let radius = (m as f64).sqrt();
        let weight = model.psi_hat_tau(radius / bandlimit)?;
        for j in 0..4 {
            cumulative[j] += weight * acc[j];
        }
        if radius >= 0.5 * k_max {
            for j in 0..4 {
                samples[j].push((radius, cumulative[j]));
            }
        }
    }

    let n = bandlimit;
    let nd = n.powi(d as i32);
    let u0 = blocks[0];
    let rest = &blocks[1..];
    let real = [
        nd * model.psi0() * l2_sq(u0),
        0.0,
        0.0,
        nd * n * n * model.neg_second_deriv0() * rest.iter().map(|b| l2_sq(b)).sum::<f64>(),
    ];

    let k_eff = k_max - (d as f64).sqrt() / 2.0;
    let amp = sphere_area(d - 1) * model.hat_envelope() * n.powi(d as i32 + 3);
    let two_pi = 2.0 * PI;
    let tails = [
        amp * l1(u0).powi(2) / (3.0 * k_eff.powi(3)),
        amp * rest.iter().map(|b| 2.0 * two_pi * l1(b) * l1(u0)).sum::<f64>() / (2.0 * k_eff * k_eff),
        amp * (0..rest.len())
            .flat_map(|s| (0..s).map(move |t| (s, t)))
            .map(|(s, t)| 2.0 * two_pi * two_pi * l1(rest[s]) * l1(rest[t]))
            .sum::<f64>()
            / k_eff,
        amp * rest.iter().map(|b| two_pi * two_pi * l1(b).powi(2)).sum::<f64>() / k_eff,
    ];
    if tails[0] > TAIL_LIMIT * cumulative[0].abs() {
        return Err(Error::Truncation {
            tail: tails[0],
            limit: TAIL_LIMIT * cumulative[0].abs(),
        });
    }

    let mut sums = Vec::with_capacity(4);
    for j in 0..4 {
        sums.push(SumComparison {
            truncated: cumulative[j],
            extrapolated: extrapolate(&samples[j], k_max)?,
            real_side: real[j],
            tail_bound: tails[j],
        });
    }

    let indices = index_set(d, n)?;
    let g = block_jacobian(nodes, &WeightVector::ones(y), &indices)?;
    let gu = g.matrix() * DVector::from_column_slice(u);
    let lhs = model.psi_hat0() * gu.norm_squared();
    let rhs = real[0] + real[3];
    let mut sums = sums.into_iter();
    Ok(PoissonReport {
        dim: d,
        tau: model.tau(),
        bandlimit: n,
        k_max,
        lattice_points,
        s1: sums.next().expect("four sums"),
        s2: sums.next().expect("four sums"),
        s3: sums.next().expect("four sums"),
        s4: sums.next().expect("four sums"),
        lhs,
        inequality_holds: lhs >= rhs * (1.0 - 1e-9),
    })
}
