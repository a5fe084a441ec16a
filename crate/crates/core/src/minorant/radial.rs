//! Radial profiles: `φ`, its Fourier transform, and the convolutions
//! `φ*φ` and `φ*𝟙_B` evaluated by polar quadrature.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::specfun::{power_of_two_rule, reduced_twice, QuadratureRule};

/// Nodes per quadrature panel (2^6) for the convolution integrals.
const PANEL_LOG2: u32 = 6;

/// Largest Gauss–Legendre order tried by the adaptive Hankel quadrature.
const MAX_HANKEL_LOG2: u32 = 13;

/// Surface area `|S^{m}|` of the unit sphere in `ℝ^{m+1}`.
pub(crate) fn sphere_area(m: usize) -> f64 {
    match m {
        0 => 2.0,
        1 => 2.0 * PI,
        2 => 4.0 * PI,
        _ => unreachable!("dimensions above 3 are not supported"),
    }
}

/// Volume of the unit ball in `ℝ^d`.
pub(crate) fn unit_ball_volume(d: usize) -> f64 {
    sphere_area(d - 1) / d as f64
}

/// Radial data of `φ` for one dimension.
#[derive(Clone, Debug)]
pub(crate) struct Radial {
    pub dim: usize,
    /// `j_{d/2,1}`.
    pub zero: f64,
    /// `R = j_{d/2,1} / (2π)`.
    pub radius: f64,
    /// `Λ_ν(j)` with `ν = d/2 − 1`.
    pub lambda_at_zero: f64,
}

impl Radial {
    pub fn new(dim: usize, zero: f64) -> Self {
        let twice = dim as i32 - 2;
        Self {
            dim,
            zero,
            radius: zero / (2.0 * PI),
            lambda_at_zero: reduced_twice(twice, zero),
        }
    }

    fn twice_nu(&self) -> i32 {
        self.dim as i32 - 2
    }

    fn rule(&self) -> &'static QuadratureRule {
        power_of_two_rule(PANEL_LOG2)
    }

    pub fn phi(&self, r: f64) -> f64 {
        let r = r.abs();
        if r >= self.radius {
            return 0.0;
        }
        let v = 1.0 - reduced_twice(self.twice_nu(), 2.0 * PI * r) / self.lambda_at_zero;
        v.max(0.0)
    }

    /// `φ'(r) = 4π² r Λ_{ν+1}(2πr) / Λ_ν(j)` inside the ball.
    pub fn phi_prime(&self, r: f64) -> f64 {
        if r >= self.radius {
            return 0.0;
        }
        4.0 * PI * PI * r * reduced_twice(self.twice_nu() + 2, 2.0 * PI * r) / self.lambda_at_zero
    }

    /// `Δφ(r) = 4π²(1 − φ(r))` inside the ball.
    pub fn phi_laplacian(&self, r: f64) -> f64 {
        if r >= self.radius {
            return 0.0;
        }
        4.0 * PI * PI * reduced_twice(self.twice_nu(), 2.0 * PI * r) / self.lambda_at_zero
    }

    /// `∫_{ℝ^d} f(|x|) dx` for `f` supported in the ball.
    pub fn radial_integral<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        let d = self.dim;
        let rule = power_of_two_rule(7);
        let w = sphere_area(d - 1);
        w * rule.integrate(0.0, self.radius, |r| f(r) * r.powi(d as i32 - 1))
    }

    /// `φ̂(v)` from the closed form `R^{d/2} v^{−d/2} J_{d/2}(jv) / (1 − v²)`.
    ///
    /// The removable singularity at `v = 1` is bridged by quadrature.
    pub fn phi_hat(&self, v: f64) -> Result<f64> {
        let v = v.abs();
        if (1.0 - v).abs() < 1e-3 {
            return self.phi_hat_quadrature(v);
        }
        let rj = self.radius * self.zero;
        Ok(rj.powf(self.dim as f64 / 2.0) * reduced_twice(self.dim as i32, self.zero * v)
            / (1.0 - v * v))
    }

    /// `φ̂(v) = (2π)^{d/2} ∫_0^R φ(r) Λ_ν(2πrv) r^{d−1} dr` by Gauss–Legendre
    /// quadrature, doubling the order until successive values agree to
    /// `1e−10` of `φ̂(0)`.
    pub fn phi_hat_quadrature(&self, v: f64) -> Result<f64> {
        let v = v.abs();
        let d = self.dim as i32;
        let pref = (2.0 * PI).powf(self.dim as f64 / 2.0);
        let eval = |log2: u32| {
            let rule = power_of_two_rule(log2);
            pref * rule.integrate(0.0, self.radius, |r| {
                self.phi(r) * reduced_twice(self.twice_nu(), 2.0 * PI * r * v) * r.powi(d - 1)
            })
        };
        let scale = self.ball_volume();
        let start = (PI * self.radius * v + 32.0).log2().ceil().max(5.0) as u32;
        if start > MAX_HANKEL_LOG2 {
            return Err(Error::Numerical(format!(
                "Hankel quadrature at v = {v} needs more than 2^{MAX_HANKEL_LOG2} nodes"
            )));
        }
        let mut prev = eval(start);
        for log2 in start + 1..=MAX_HANKEL_LOG2 {
            let next = eval(log2);
            if (next - prev).abs() < 1e-10 * scale {
                return Ok(next);
            }
            prev = next;
        }
        Err(Error::Numerical(format!(
            "Hankel quadrature at v = {v} did not converge with 2^{MAX_HANKEL_LOG2} nodes"
        )))
    }

    pub fn ball_volume(&self) -> f64 {
        unit_ball_volume(self.dim) * self.radius.powi(self.dim as i32)
    }

    /// `(φ*φ)(r)`.
    pub fn autocorrelation(&self, r: f64) -> f64 {
        self.convolve(r, Kernel::Phi)
    }

    /// `(φ*𝟙_{B_R})(r)`.
    pub fn indicator_convolution(&self, r: f64) -> f64 {
        self.convolve(r, Kernel::Indicator)
    }

    fn convolve(&self, r: f64, kernel: Kernel) -> f64 {
        let r = r.abs();
        let big_r = self.radius;
        if r >= 2.0 * big_r {
            return 0.0;
        }
        let rule = self.rule();
        if self.dim == 1 {
            // ∫_{r−R}^{R} φ(x) g(r − x) dx; the integrand is smooth inside.
            return rule.integrate(r - big_r, big_r, |x| {
                self.phi(x)
                    * match kernel {
                        Kernel::Phi => self.phi(r - x),
                        Kernel::Indicator => 1.0,
                    }
            });
        }
        if r == 0.0 {
            return match kernel {
                Kernel::Phi => self.radial_integral(|x| self.phi(x) * self.phi(x)),
                Kernel::Indicator => self.radial_integral(|x| self.phi(x)),
            };
        }
        let d = self.dim;
        let area = sphere_area(d - 2);
        let split = (big_r - r).abs();
        let outer = |rho: f64| -> f64 {
            let cos_star = ((r * r + rho * rho - big_r * big_r) / (2.0 * r * rho)).clamp(-1.0, 1.0);
            let theta_star = cos_star.acos();
            let inner = match kernel {
                Kernel::Indicator => match d {
                    2 => theta_star,
                    _ => 1.0 - cos_star,
                },
                Kernel::Phi => rule.integrate(0.0, theta_star, |theta| {
                    let dist = (r * r + rho * rho - 2.0 * r * rho * theta.cos()).max(0.0).sqrt();
                    self.phi(dist) * theta.sin().powi(d as i32 - 2)
                }),
            };
            rho.powi(d as i32 - 1) * self.phi(rho) * inner
        };
        let mut total = 0.0;
        if r < big_r {
            total += rule.integrate(0.0, split, outer);
            total += rule.integrate_sqrt_left(split, big_r, outer);
        } else {
            total += rule.integrate_sqrt_left(split, big_r, outer);
        }
        area * total
    }
}

#[derive(Clone, Copy)]
enum Kernel {
    Phi,
    Indicator,
}
