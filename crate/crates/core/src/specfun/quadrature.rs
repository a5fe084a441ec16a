use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Largest supported number of Gauss–Legendre nodes.
pub const MAX_NODES: usize = 10_000;

/// A quadrature rule on `[-1, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Integral of `f` over `[a, b]` by the affine image of the rule.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut sum = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            sum += w * f(mid + half * x);
        }
        half * sum
    }

    /// Integral over `[a, b]` with the substitution `x = a + (b - a) s²`,
    /// which absorbs a square-root type singularity at `a`.
    pub fn integrate_sqrt_left<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let len = b - a;
        self.integrate(0.0, 1.0, |s| 2.0 * s * len * f(a + len * s * s))
    }
}

/// `P_m(x)` and `P_m'(x)` by the three-term recurrence.
fn legendre_with_derivative(m: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=m {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let mf = m as f64;
    let dp = mf * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// The `m`-point Gauss–Legendre rule on `[-1, 1]`, nodes increasing.
pub fn gauss_legendre(m: usize) -> Result<QuadratureRule> {
    if m == 0 || m > MAX_NODES {
        return Err(Error::Config(format!(
            "Gauss-Legendre order must lie in 1..={MAX_NODES}, got {m}"
        )));
    }
    if m == 1 {
        return Ok(QuadratureRule {
            nodes: vec![0.0],
            weights: vec![2.0],
        });
    }
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    let mf = m as f64;
    // Roots come in ± pairs; solve for the positive half.
    for i in 0..m / 2 {
        let mut x = (PI * (i as f64 + 0.75) / (mf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(m, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1e-3) {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(m, x);
        dp = if d.is_finite() { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[m - 1 - i] = x;
        nodes[i] = -x;
        weights[m - 1 - i] = w;
        weights[i] = w;
    }
    if m % 2 == 1 {
        let (_, d) = legendre_with_derivative(m, 0.0);
        nodes[m / 2] = 0.0;
        weights[m / 2] = 2.0 / (d * d);
    }
    Ok(QuadratureRule { nodes, weights })
}

const CACHED_POWERS: usize = 14;

/// Shared Gauss–Legendre rule with `2^k` nodes, `3 ≤ k ≤ 13`.
pub fn power_of_two_rule(k: u32) -> &'static QuadratureRule {
    static RULES: [OnceLock<QuadratureRule>; CACHED_POWERS] = [const { OnceLock::new() }; CACHED_POWERS];
    assert!((3..CACHED_POWERS as u32).contains(&k), "rule 2^{k} not cached");
    RULES[k as usize].get_or_init(|| gauss_legendre(1 << k).expect("cached order is in range"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn midpoint_rule() {
        let rule = gauss_legendre(1).unwrap();
        assert_eq!(rule.nodes(), &[0.0]);
        assert_eq!(rule.weights(), &[2.0]);
    }

    #[test]
    fn five_points_integrate_quartic() {
        let rule = gauss_legendre(5).unwrap();
        let v = rule.integrate(-1.0, 1.0, |x| x.powi(4));
        assert!((v - 0.4).abs() < 1e-15);
    }

    #[test]
    fn fifty_points_integrate_cosine_period() {
        let rule = gauss_legendre(50).unwrap();
        let v = rule.integrate(-0.5, 0.5, |x| (2.0 * PI * x).cos());
        assert!(v.abs() < 1e-14);
    }

    #[test]
    fn rule_invariants() {
        for m in [2, 3, 7, 16, 33, 100, 257, 1000] {
            let rule = gauss_legendre(m).unwrap();
            let total: f64 = rule.weights().iter().sum();
            assert!((total - 2.0).abs() < 1e-12, "m={m} weight sum {total}");
            assert!(rule.weights().iter().all(|&w| w > 0.0));
            assert!(rule.nodes().windows(2).all(|p| p[0] < p[1]));
            assert!(rule.nodes().iter().all(|x| x.abs() < 1.0));
        }
    }

    #[test]
    fn exact_for_degree_two_m_minus_one() {
        for m in 1..=100 {
            let rule = gauss_legendre(m).unwrap();
            for deg in 0..=(2 * m - 1) {
                let got = rule.integrate(-1.0, 1.0, |x| x.powi(deg as i32));
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!(
                    (got - exact).abs() <= 1e-10 * exact.abs().max(1e-3),
                    "m={m} deg={deg}: {got} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn large_orders() {
        let rule = gauss_legendre(MAX_NODES).unwrap();
        let total: f64 = rule.weights().iter().sum();
        assert!((total - 2.0).abs() < 1e-12);
        assert!(gauss_legendre(MAX_NODES + 1).is_err());
        assert!(gauss_legendre(0).is_err());
    }

    #[test]
    fn sqrt_substitution_absorbs_endpoint_singularity() {
        let rule = gauss_legendre(20).unwrap();
        let v = rule.integrate_sqrt_left(1.0, 2.0, |x| (x - 1.0).sqrt());
        assert!((v - 2.0 / 3.0).abs() < 1e-14);
    }
}
