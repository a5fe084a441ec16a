//! Bessel functions of the first kind for the small set of integer and
//! half-integer orders needed by radial Fourier analysis in one to three
//! dimensions.
//!
//! Integer orders use the power series below [`SERIES_SWITCH`] and the
//! Hankel asymptotic expansion above it. Half-integer orders reduce to
//! elementary functions, with the power series taking over near the origin
//! where the closed forms cancel.

use std::f64::consts::{FRAC_2_PI, PI};

use crate::error::{Error, Result};

/// Argument at which integer orders switch from the power series to the
/// asymptotic expansion.
pub const SERIES_SWITCH: f64 = 12.0;

const SQRT_PI: f64 = 1.772_453_850_905_516;

/// Order `ν` of a Bessel function, stored as `2ν` so that half-integer
/// orders are exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BesselOrder {
    twice: i32,
}

impl BesselOrder {
    /// Smallest supported value of `2ν`.
    pub const MIN_TWICE: i32 = -1;
    /// Largest supported value of `2ν`.
    pub const MAX_TWICE: i32 = 4;

    /// Order `ν = twice / 2`. Supported: `ν ∈ {-1/2, 0, 1/2, 1, 3/2, 2}`.
    pub fn from_twice(twice: i32) -> Result<Self> {
        if (Self::MIN_TWICE..=Self::MAX_TWICE).contains(&twice) {
            Ok(Self { twice })
        } else {
            Err(Error::Config(format!(
                "unsupported Bessel order {}; supported orders are -1/2, 0, 1/2, 1, 3/2, 2",
                f64::from(twice) / 2.0
            )))
        }
    }

    /// Integer order `n`.
    pub fn integer(n: i32) -> Result<Self> {
        Self::from_twice(2 * n)
    }

    /// The order `d/2 - 1` of the radial kernel of the `d`-dimensional
    /// Fourier transform.
    pub fn radial_kernel(dim: usize) -> Result<Self> {
        Self::from_twice(dim as i32 - 2)
    }

    /// The order `d/2` whose first zero fixes the Rayleigh limit in `d`
    /// dimensions.
    pub fn rayleigh(dim: usize) -> Result<Self> {
        Self::from_twice(dim as i32)
    }

    pub fn twice(self) -> i32 {
        self.twice
    }

    pub fn value(self) -> f64 {
        f64::from(self.twice) / 2.0
    }

    /// The order `ν + 1`.
    pub fn raised(self) -> Result<Self> {
        Self::from_twice(self.twice + 2)
    }

    pub fn all() -> impl Iterator<Item = Self> {
        (Self::MIN_TWICE..=Self::MAX_TWICE).map(|twice| Self { twice })
    }
}

/// `J_ν(x)` for `x ≥ 0`.
pub fn bessel_j(order: BesselOrder, x: f64) -> Result<f64> {
    check_argument(x)?;
    if x == 0.0 && order.twice < 0 {
        return Err(Error::Domain(format!(
            "J_{}(0) is unbounded",
            order.value()
        )));
    }
    Ok(j_twice(order.twice, x))
}

/// The reduced function `z^{-ν} J_ν(z)`, which is entire in `z²` and finite
/// at the origin for every order.
pub fn bessel_j_reduced(order: BesselOrder, z: f64) -> Result<f64> {
    check_argument(z)?;
    Ok(reduced_twice(order.twice, z))
}

fn check_argument(x: f64) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("non-finite Bessel argument {x}")));
    }
    if x < 0.0 {
        return Err(Error::Domain(format!("negative Bessel argument {x}")));
    }
    Ok(())
}

/// `Γ(ν + 1)` for `2ν ∈ [-3, 6]`.
fn gamma_order_plus_one(twice: i32) -> f64 {
    match twice {
        -3 => -2.0 * SQRT_PI,
        -1 => SQRT_PI,
        0 => 1.0,
        1 => 0.5 * SQRT_PI,
        2 => 1.0,
        3 => 0.75 * SQRT_PI,
        4 => 2.0,
        5 => 1.875 * SQRT_PI,
        6 => 6.0,
        _ => unreachable!("order 2ν = {twice} outside the internal table"),
    }
}

/// Power series of `z^{-ν} J_ν(z)`.
fn reduced_series(twice: i32, z: f64) -> f64 {
    let nu = f64::from(twice) / 2.0;
    let q = -0.25 * z * z;
    let mut term = 1.0 / (2f64.powf(nu) * gamma_order_plus_one(twice));
    let mut sum = term;
    for k in 1..200 {
        let kf = f64::from(k);
        term *= q / (kf * (kf + nu));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// Hankel asymptotic expansion of `J_n(x)` with optimal truncation.
fn integer_asymptotic(n: i32, x: f64) -> f64 {
    let mu = 4.0 * f64::from(n * n);
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..100 {
        let kf = f64::from(k);
        let odd = 2.0 * kf - 1.0;
        term *= (mu - odd * odd) / (kf * 8.0 * x);
        if term.abs() >= last || term == 0.0 {
            break;
        }
        last = term.abs();
        // a_k / x^k enters P with sign (-1)^{k/2} for even k and Q with
        // sign (-1)^{(k-1)/2} for odd k.
        match k % 4 {
            0 => p += term,
            1 => q += term,
            2 => p -= term,
            _ => q -= term,
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    let chi = x - (0.5 * f64::from(n) + 0.25) * PI;
    (FRAC_2_PI / x).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// `J_ν(x)` for half-integer `ν` from the elementary closed forms.
fn half_integer_closed(twice: i32, x: f64) -> f64 {
    let (s, c) = x.sin_cos();
    let amp = (FRAC_2_PI / x).sqrt();
    match twice {
        -3 => amp * (-c / x - s),
        -1 => amp * c,
        1 => amp * s,
        3 => amp * (s / x - c),
        5 => amp * ((3.0 / (x * x) - 1.0) * s - 3.0 * c / x),
        _ => unreachable!("order 2ν = {twice} is not a tabulated half-integer"),
    }
}

/// Below this argument half-integer orders with `|ν| ≥ 3/2` use the series.
fn half_integer_series_limit(twice: i32) -> f64 {
    if twice.abs() >= 3 {
        2.0
    } else {
        0.0
    }
}

pub(crate) fn reduced_twice(twice: i32, z: f64) -> f64 {
    if twice % 2 == 0 {
        if z < SERIES_SWITCH {
            reduced_series(twice, z)
        } else {
            integer_asymptotic(twice / 2, z) / z.powi(twice / 2)
        }
    } else if z < half_integer_series_limit(twice) || z == 0.0 {
        reduced_series(twice, z)
    } else {
        half_integer_closed(twice, z) / z.powf(f64::from(twice) / 2.0)
    }
}

/// `J_ν(x)` for `2ν ∈ [-3, 6]` and `x > 0` (or `x = 0` with `ν ≥ 0`).
pub(crate) fn j_twice(twice: i32, x: f64) -> f64 {
    if twice % 2 == 0 {
        let n = twice / 2;
        if x < SERIES_SWITCH {
            reduced_series(twice, x) * x.powi(n)
        } else {
            integer_asymptotic(n, x)
        }
    } else if x < half_integer_series_limit(twice) {
        reduced_series(twice, x) * x.powf(f64::from(twice) / 2.0)
    } else {
        half_integer_closed(twice, x)
    }
}

/// Integer-order series and asymptotic branches, exposed for cross-checks
/// across the switch point.
#[cfg(test)]
pub(crate) fn integer_branches(n: i32, x: f64) -> (f64, f64) {
    (
        reduced_series(2 * n, x) * x.powi(n),
        integer_asymptotic(n, x),
    )
}

/// First positive zero `j_{ν,1}` of `J_ν`.
///
/// The zero is bracketed in `(ν, ν + 4)` and refined by bisection to
/// machine precision.
pub fn first_bessel_zero(order: BesselOrder) -> Result<f64> {
    let nu = order.value();
    let mut lo = if nu <= 0.0 { 1e-3 } else { nu };
    let mut hi = nu + 4.0;
    let mut f_lo = j_twice(order.twice, lo);
    let f_hi = j_twice(order.twice, hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::Numerical(format!(
            "no sign change of J_{nu} on [{lo}, {hi}]"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = j_twice(order.twice, mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(twice: i32) -> BesselOrder {
        BesselOrder::from_twice(twice).unwrap()
    }

    // (2ν, x, J_ν(x)) from mpmath at 30 digits; see tests/data/oracles.py.
    const REFERENCE: &[(i32, f64, f64)] = &[
        (-1, 0.001, 25.231312604540041687),
        (-1, 0.5, 0.99024588024340488002),
        (-1, 2.5, -0.40427830223905687344),
        (-1, 12.5, 0.22517895823777251511),
        (-1, 99.0, 0.0031932529475604240458),
        (0, 0.001, 0.999999750000015625),
        (0, 1.0, 0.76519768655796655145),
        (0, 3.8317059702, -0.4027593957025529721),
        (0, 7.3, 0.28821694763501438437),
        (0, 11.5, -0.067653948111665228432),
        (0, 12.5, 0.14688405470042110231),
        (0, 20.0, 0.16702466434058315473),
        (0, 37.7, 0.091659826640263970258),
        (0, 99.0, -0.05447423527049907344),
        (1, 0.5, 0.54097378993452809133),
        (1, 3.8317059702, -0.25949403050248581691),
        (1, 37.7, 0.00011541414388328885238),
        (1, 0.001, 0.02523132101498094071),
        (1, 11.5, -0.205979294915792),
        (1, 12.5, -0.0149672494586684),
        (1, 20.0, 0.16288076385503),
        (2, 0.001, 0.00049999993750000260417),
        (1, 2.5, 0.30200490606236568126),
        (2, 2.5, 0.49709410246427403801),
        (2, 11.5, -0.22837862066532347461),
        (2, 12.5, -0.16548380461475971846),
        (2, 20.0, 0.066833124175850045579),
        (2, 99.0, -0.059122942553074067037),
        (3, 0.001, 8.4104408990230561914e-6),
        (3, 1.0, 0.2402978391234270109),
        (3, 7.3, -0.12095301097363056126),
        (3, 99.0, -0.0040026146777181530625),
        (4, 0.001, 1.2499998958333365885e-7),
        (4, 0.5, 0.030604023458682641307),
        (4, 7.3, -0.26559491188343688293),
        (4, 11.5, 0.027935927126391580673),
        (4, 12.5, -0.17336146343878265726),
        (4, 37.7, -0.096482020363478655289),
    ];

    #[test]
    fn matches_reference_values() {
        for &(twice, x, expected) in REFERENCE {
            let got = bessel_j(order(twice), x).unwrap();
            // Absolute accuracy just above the switch point is limited by
            // the optimally truncated asymptotic series.
            let tol = if (SERIES_SWITCH..16.0).contains(&x) {
                5e-11
            } else {
                1e-12 * expected.abs().max(1.0)
            };
            assert!(
                (got - expected).abs() <= tol,
                "J_{}({x}) = {got}, expected {expected}",
                f64::from(twice) / 2.0
            );
        }
    }

    #[test]
    fn trivial_values() {
        assert_eq!(bessel_j(order(0), 0.0).unwrap(), 1.0);
        assert!(bessel_j(order(1), PI).unwrap().abs() < 1e-15);
        assert_eq!(bessel_j(order(2), 0.0).unwrap(), 0.0);
    }

    #[test]
    fn power_series_oracle_at_first_zero_of_j1() {
        // Direct summation of sum_k (-1)^k (x/2)^{2k} / (k!)^2.
        let x: f64 = 3.8317059702;
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..60 {
            term *= -(x / 2.0).powi(2) / f64::from(k * k);
            sum += term;
        }
        let got = bessel_j(order(0), x).unwrap();
        assert!((got - sum).abs() < 1e-14);
        assert!((got + 0.402759).abs() < 1e-6);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(BesselOrder::from_twice(5), Err(Error::Config(_))));
        assert!(matches!(BesselOrder::from_twice(-2), Err(Error::Config(_))));
        assert!(matches!(bessel_j(order(0), -1.0), Err(Error::Domain(_))));
        assert!(matches!(bessel_j(order(0), f64::NAN), Err(Error::Domain(_))));
        assert!(matches!(bessel_j(order(-1), 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn series_and_asymptotic_agree_on_overlap() {
        for n in 0..=2 {
            for i in 0..=40 {
                let x = 12.0 + 4.0 * f64::from(i) / 40.0;
                let (series, asym) = integer_branches(n, x);
                assert!((series - asym).abs() < 1e-9, "n={n} x={x}: {series} vs {asym}");
            }
        }
    }

    #[test]
    fn recurrence_residual_is_small() {
        // J_{ν-1} + J_{ν+1} = (2ν/x) J_ν for every supported ν.
        for nu in BesselOrder::all() {
            let t = nu.twice();
            for i in 1..=500 {
                let x = 50.0 * f64::from(i) / 500.0;
                let lower = if t == 0 { -j_twice(2, x) } else { j_twice(t - 2, x) };
                let upper = j_twice(t + 2, x);
                let mid = j_twice(t, x);
                let residual = lower + upper - nu.value() * 2.0 / x * mid;
                assert!(
                    residual.abs() <= 1e-10 * (1.0 + mid.abs()),
                    "nu={} x={x} residual={residual}",
                    nu.value()
                );
            }
        }
    }

    #[test]
    fn reduced_matches_definition() {
        for nu in BesselOrder::all() {
            for &z in &[0.3, 1.7, 4.0, 11.0, 13.0, 40.0] {
                let direct = bessel_j(nu, z).unwrap() / z.powf(nu.value());
                let reduced = bessel_j_reduced(nu, z).unwrap();
                assert!((direct - reduced).abs() <= 1e-13 * (1.0 + direct.abs()));
            }
        }
        // z^{1/2} J_{-1/2}(z) -> sqrt(2/pi) at the origin.
        let limit = bessel_j_reduced(order(-1), 0.0).unwrap();
        assert!((limit - FRAC_2_PI.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn first_zeros() {
        let expected = [
            (-1, 1.570796326794896619),
            (0, 2.404825557695772769),
            (1, PI),
            (2, 3.831705970207512316),
            (3, 4.493409457909064175),
            (4, 5.135622301840682556),
        ];
        for (twice, zero) in expected {
            let got = first_bessel_zero(order(twice)).unwrap();
            assert!((got - zero).abs() < 1e-12, "2ν={twice}: {got} vs {zero}");
            assert!(j_twice(twice, got).abs() <= 1e-11);
        }
    }
}
