//! Composite Gauss–Legendre quadrature.

use crate::error::{Error, Result};
use crate::function::Interval;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureRule {
    panels: usize,
    nodes_per_panel: usize,
}

impl Default for QuadratureRule {
    /// 32 panels × 16 nodes, the rule behind every oracle integral.
    fn default() -> Self {
        Self {
            panels: 32,
            nodes_per_panel: 16,
        }
    }
}

impl QuadratureRule {
    pub fn new(panels: usize, nodes_per_panel: usize) -> Result<Self> {
        if panels == 0 {
            return Err(Error::InvalidArgument("quadrature needs at least one panel".into()));
        }
        if !(2..=64).contains(&nodes_per_panel) {
            return Err(Error::InvalidArgument(format!(
                "nodes per panel must lie in [2, 64], got {nodes_per_panel}"
            )));
        }
        Ok(Self {
            panels,
            nodes_per_panel,
        })
    }

    pub fn panels(&self) -> usize {
        self.panels
    }

    pub fn nodes_per_panel(&self) -> usize {
        self.nodes_per_panel
    }

    /// Same rule with twice as many panels.
    pub fn refined(&self) -> Self {
        Self {
            panels: self.panels * 2,
            nodes_per_panel: self.nodes_per_panel,
        }
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, ascending.
///
/// Newton iteration on `P_n` from the Chebyshev-like initial guesses, in
/// `f64`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// Composite Gauss–Legendre estimate of `∫ f` over `interval`.
pub fn integrate<T: Scalar>(
    f: impl Fn(T) -> T,
    interval: Interval<T>,
    rule: QuadratureRule,
) -> Result<T> {
    let (nodes, weights) = gauss_legendre(rule.nodes_per_panel);
    let nodes: Vec<T> = nodes.into_iter().map(T::lit).collect();
    let weights: Vec<T> = weights.into_iter().map(T::lit).collect();
    let width = interval.length() / T::from_usize_lossy(rule.panels);
    let half = width / T::lit(2.0);
    let mut panel_sums = Vec::with_capacity(rule.panels);
    for p in 0..rule.panels {
        let lo = interval.a() + T::from_usize_lossy(p) * width;
        let mid = lo + half;
        let mut s = T::zero();
        for (z, w) in nodes.iter().zip(&weights) {
            let x = mid + half * *z;
            let y = f(x);
            if !y.is_finite() {
                return Err(Error::NonFinite(x.to_f64().unwrap_or(f64::NAN)));
            }
            s += *w * y;
        }
        panel_sums.push(s * half);
    }
    Ok(crate::scalar::pairwise_sum(&panel_sums))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn constant_integrand() {
        let v = integrate(|_| 1.0f64, Interval::unit(), QuadratureRule::default()).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
    }

    #[test]
    fn sine_over_unit_interval() {
        let v = integrate(|t: f64| (PI * t).sin(), Interval::unit(), QuadratureRule::default())
            .unwrap();
        assert!((v - 2.0 / PI).abs() < 1e-12);
    }

    #[test]
    fn beta_two_two_denominator() {
        let v = integrate(|t: f64| t * (1.0 - t), Interval::unit(), QuadratureRule::default())
            .unwrap();
        assert!((v - 1.0 / 6.0).abs() < 1e-14);
    }

    #[test]
    fn exact_for_degree_two_n_minus_one() {
        let unit = Interval::new(-0.5, 1.5).unwrap();
        for n in [2usize, 3, 5, 8, 16, 33, 64] {
            let rule = QuadratureRule::new(1, n).unwrap();
            let deg = (2 * n - 1).min(40) as i32;
            let v = integrate(|t: f64| t.powi(deg), unit, rule).unwrap();
            let exact = (1.5f64.powi(deg + 1) - (-0.5f64).powi(deg + 1)) / (deg + 1) as f64;
            assert!(
                ((v - exact) / exact.abs().max(1.0)).abs() < 1e-13,
                "n={n} deg={deg}: {v} vs {exact}"
            );
        }
    }

    #[test]
    fn weights_sum_to_two() {
        for n in 2..=64 {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13, "n={n}");
            assert!(x.windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn rejects_bad_rules_and_non_finite_samples() {
        assert!(QuadratureRule::new(0, 4).is_err());
        assert!(QuadratureRule::new(4, 1).is_err());
        assert!(QuadratureRule::new(4, 65).is_err());
        let r = integrate(|t: f64| 1.0 / (t - 0.5), Interval::unit(), QuadratureRule::new(1, 3).unwrap());
        assert!(matches!(r, Err(Error::NonFinite(_))));
    }
}
