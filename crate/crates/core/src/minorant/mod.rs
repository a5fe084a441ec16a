//! The Bessel-type minorant `ψ_τ`, its Fourier transform, admissibility
//! checks and the lower bound on the smallest singular value of the block
//! Jacobian that it yields through Poisson summation.
//!
//! With `R = j_{d/2,1}/(2π)` and `ν = d/2 − 1`, the radial function
//! `φ(r) = 1 − Λ_ν(2πr)/Λ_ν(j_{d/2,1})` on `r ≤ R` (where
//! `Λ_ν(z) = z^{−ν} J_ν(z)`) solves `Δφ = 4π²(1 − φ)` on the ball and is
//! `C¹` across its boundary. Hence
//! `[4π²(1+τ) + Δ](φ*φ) = 4π²[τ(φ*φ) + φ*𝟙_B]`, which is how
//! [`MinorantModel::psi_tau`] evaluates `ψ_τ`.

mod bound;
mod certify;
mod fd;
mod poisson;
mod profile;
mod radial;

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::specfun::{first_bessel_zero, power_of_two_rule, BesselOrder};

pub use bound::{prop_bound, BoundReport};
pub use certify::{
    certify_admissibility, radial_derivative_check, AdmissibilityReport, ClauseReport,
    DerivativeClause, DerivativeReport,
};
pub use poisson::{poisson_decomposition, PoissonReport, SumComparison};
pub use profile::{write_profile_csv, Profile};

use radial::{sphere_area, Radial};

/// Upper limit of the frequency-side radial integrals.
const FREQUENCY_CUTOFF: f64 = 400.0;

/// Precomputed radial data of `φ` and `ψ_τ` for fixed `(d, τ)`.
#[derive(Clone, Debug)]
pub struct MinorantModel {
    tau: f64,
    radial: Radial,
    support: f64,
    int_phi: f64,
    int_phi_sq: f64,
    int_grad_sq: f64,
    int_lap_sq: f64,
    psi0: f64,
    psi_hat0: f64,
    neg_second_deriv0: f64,
    hat_envelope: f64,
}

impl MinorantModel {
    pub fn new(dim: usize, tau: f64) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::Config(format!("dimension must be 1, 2 or 3, got {dim}")));
        }
        if !(tau >= 0.0 && tau.is_finite()) {
            return Err(Error::Domain(format!("tau must be nonnegative and finite, got {tau}")));
        }
        let zero = first_bessel_zero(BesselOrder::rayleigh(dim)?)?;
        let radial = Radial::new(dim, zero);
        let int_phi = radial.radial_integral(|r| radial.phi(r));
        let int_phi_sq = radial.radial_integral(|r| radial.phi(r).powi(2));
        let int_grad_sq = radial.radial_integral(|r| radial.phi_prime(r).powi(2));
        let int_lap_sq = radial.radial_integral(|r| radial.phi_laplacian(r).powi(2));
        let a = 1.0 + tau;
        let d = dim as f64;
        let four_pi2 = 4.0 * PI * PI;
        // ψ_τ(0) = a^{−d/2} [4π² a h(0) + Δh(0)] with h(0) = ∫φ², Δh(0) = −∫|∇φ|².
        let psi0 = a.powf(-d / 2.0) * (four_pi2 * a * int_phi_sq - int_grad_sq);
        let psi_hat0 = four_pi2 * a * int_phi * int_phi;
        // −Δψ_τ(0) = a^{−d/2−1} [4π² a ∫|∇φ|² − ∫(Δφ)²].
        let neg_second_deriv0 = a.powf(-d / 2.0 - 1.0) * (four_pi2 * a * int_grad_sq - int_lap_sq) / d;
        let mut model = Self {
            tau,
            support: a.sqrt() * zero / PI,
            radial,
            int_phi,
            int_phi_sq,
            int_grad_sq,
            int_lap_sq,
            psi0,
            psi_hat0,
            neg_second_deriv0,
            hat_envelope: 0.0,
        };
        model.hat_envelope = model.measure_hat_envelope()?;
        Ok(model)
    }

    pub fn dim(&self) -> usize {
        self.radial.dim
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// `j_{d/2,1}`.
    pub fn bessel_zero(&self) -> f64 {
        self.radial.zero
    }

    /// Support radius of `φ`, `j_{d/2,1}/(2π)`.
    pub fn phi_radius(&self) -> f64 {
        self.radial.radius
    }

    /// Support radius of `ψ_τ`, `q_τ = √(1+τ) j_{d/2,1}/π`.
    pub fn support_radius(&self) -> f64 {
        self.support
    }

    fn dilation(&self) -> f64 {
        (1.0 + self.tau).sqrt()
    }

    pub fn phi(&self, r: f64) -> f64 {
        self.radial.phi(r)
    }

    /// `φ̂` at radius `v`.
    pub fn phi_hat(&self, v: f64) -> Result<f64> {
        self.radial.phi_hat(v)
    }

    /// `φ̂` at radius `v` by adaptive Hankel quadrature.
    pub fn phi_hat_quadrature(&self, v: f64) -> Result<f64> {
        self.radial.phi_hat_quadrature(v)
    }

    /// `(φ*φ)` at radius `r`.
    pub fn autocorrelation(&self, r: f64) -> f64 {
        self.radial.autocorrelation(r)
    }

    /// `(φ*𝟙_{B_R})` at radius `r`.
    pub fn indicator_convolution(&self, r: f64) -> f64 {
        self.radial.indicator_convolution(r)
    }

    /// `ψ_τ` at radius `r`.
    pub fn psi_tau(&self, r: f64) -> f64 {
        let r = r.abs();
        if r >= self.support {
            return 0.0;
        }
        let a = 1.0 + self.tau;
        let rho = r / self.dilation();
        let value = 4.0 * PI * PI
            * (self.tau * self.radial.autocorrelation(rho) + self.radial.indicator_convolution(rho));
        a.powf(-(self.dim() as f64) / 2.0) * value
    }

    /// `ψ_τ(x)` for a point `x ∈ ℝ^d`.
    pub fn psi_tau_at(&self, x: &[f64]) -> f64 {
        self.psi_tau(x.iter().map(|c| c * c).sum::<f64>().sqrt())
    }

    /// `ψ_τ` at radius `r` by central differences of a tabulated `φ*φ`.
    pub fn psi_tau_finite_difference(&self, r: f64) -> Result<f64> {
        fd::psi_tau(self, r)
    }

    /// `ψ̂_τ(v) = 4π²(1+τ)(1 − v²) φ̂(√(1+τ) v)²`.
    pub fn psi_hat_tau(&self, v: f64) -> Result<f64> {
        let v = v.abs();
        let f = self.radial.phi_hat(self.dilation() * v)?;
        Ok(4.0 * PI * PI * (1.0 + self.tau) * (1.0 - v * v) * f * f)
    }

    /// `ψ_τ(0)`.
    pub fn psi0(&self) -> f64 {
        self.psi0
    }

    /// `ψ̂_τ(0)`.
    pub fn psi_hat0(&self) -> f64 {
        self.psi_hat0
    }

    /// `−(∂²ψ_τ/∂x_s²)(0)`, the same for every axis `s`.
    pub fn neg_second_deriv0(&self) -> f64 {
        self.neg_second_deriv0
    }

    /// `Δψ_τ(0)`.
    pub fn laplacian0(&self) -> f64 {
        -(self.dim() as f64) * self.neg_second_deriv0
    }

    /// `∫φ`, `∫φ²`, `∫|∇φ|²` and `∫(Δφ)²`.
    pub fn phi_integrals(&self) -> [f64; 4] {
        [self.int_phi, self.int_phi_sq, self.int_grad_sq, self.int_lap_sq]
    }

    /// Constant `E` with `|ψ̂_τ(v)| ≤ E v^{−d−3}` for `v ≥ 2`, measured on a
    /// dense grid.
    pub fn hat_envelope(&self) -> f64 {
        self.hat_envelope
    }

    fn measure_hat_envelope(&self) -> Result<f64> {
        let p = self.dim() as i32 + 3;
        let mut worst: f64 = 0.0;
        let steps = 20_000;
        for i in 0..=steps {
            let v = 2.0 + 398.0 * f64::from(i) / f64::from(steps);
            worst = worst.max(self.psi_hat_tau(v)?.abs() * v.powi(p));
        }
        Ok(1.05 * worst)
    }

    /// `∫_{ℝ^d} f(‖v‖) dv` over `‖v‖ ≤ FREQUENCY_CUTOFF` by panels of width
    /// one.
    fn frequency_integral<F: Fn(f64) -> Result<f64>>(&self, f: F) -> Result<f64> {
        let d = self.dim() as i32;
        let rule = power_of_two_rule(5);
        let mut total = 0.0;
        let panels = FREQUENCY_CUTOFF as usize;
        for p in 0..panels {
            let (a, b) = (p as f64, p as f64 + 1.0);
            let mut err = None;
            let part = rule.integrate(a, b, |v| match f(v) {
                Ok(x) => x * v.powi(d - 1),
                Err(e) => {
                    err.get_or_insert(e);
                    0.0
                }
            });
            if let Some(e) = err {
                return Err(e);
            }
            total += part;
        }
        Ok(sphere_area(self.dim() - 1) * total)
    }

    /// `ψ_τ(0)` through the frequency-side identity
    /// `(1+τ)^{−d/2} 4π² ∫[(1+τ) − ‖v‖²] φ̂(v)² dv`.
    pub fn psi0_frequency_side(&self) -> Result<f64> {
        let a = 1.0 + self.tau;
        let integral = self.frequency_integral(|v| {
            let f = self.radial.phi_hat(v)?;
            Ok((a - v * v) * f * f)
        })?;
        Ok(a.powf(-(self.dim() as f64) / 2.0) * 4.0 * PI * PI * integral)
    }

    /// `∫ φ̂(v)² dv`, equal to `(φ*φ)(0)` by Parseval.
    pub fn parseval_autocorrelation0(&self) -> Result<f64> {
        self.frequency_integral(|v| Ok(self.radial.phi_hat(v)?.powi(2)))
    }
}
