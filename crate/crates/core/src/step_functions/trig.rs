//! Trigonometric step functions
//!
//! ```text
//! T_m(x) = 1/2 - 1/(2 a_m) Σ_{j=0}^{m} a_{m,j} cos((2j+1)πx)
//! a_{m,j} = (-1)^{m-j} C(2m+1, m-j) / (2j+1),   a_m = Σ_j a_{m,j}
//! ```
//!
//! `T_m` is the normalized antiderivative of `sin^{2m+1}(πx)` and solves
//! `Π_j (D² + (2j+1)²π²) y = c_m` with `c_m = (1·3⋯(2m+1) π^{m+1})² / 2`.
//!
//! Phases are handled in units of π and reduced exactly, so at dyadic
//! points such as 0, 1/2 and 1 every odd/even derivative pattern comes out
//! exactly.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::function::{Interval, SmoothFunction, StepOrders};
use crate::jets::Jet;
use crate::numerics::rational::{binomial, Rational};
use crate::scalar::Scalar;
use crate::step_functions::beta::beta_value;

/// Largest supported `m`. `C(61, 30) ≈ 2.3e17` is the biggest weight; beyond
/// this the cosine sum loses everything to cancellation in `f64`.
pub const MAX_TRIG_M: u32 = 30;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrigCoefficients {
    pub m: u32,
    pub a_mj: Vec<Rational>,
    pub a_m: Rational,
}

impl TrigCoefficients {
    /// Integer weights `(-1)^{m-j} C(2m+1, m-j) = (2j+1) a_{m,j}`.
    pub fn integer_weights(&self) -> Vec<BigInt> {
        let m = self.m;
        (0..=m)
            .map(|j| {
                let c = binomial(2 * m + 1, m - j);
                if (m - j).is_multiple_of(2) {
                    c
                } else {
                    -c
                }
            })
            .collect()
    }

    /// Cosine weights `w_j = a_{m,j} / (2 a_m)`; they sum to 1/2.
    pub fn cosine_weights(&self) -> Vec<Rational> {
        let two_am = Rational::from_integer(2) * self.a_m.clone();
        self.a_mj.iter().map(|a| a.clone() / two_am.clone()).collect()
    }

    /// Normalized integral `∫₀¹ sin^{2m+1}(πt) dt · π = (-1)^m 2 a_m / 4^m`.
    pub fn sine_power_integral_times_pi(&self) -> Rational {
        let sign = if self.m.is_multiple_of(2) { 1 } else { -1 };
        Rational::from_integer(2 * sign) * self.a_m.clone()
            / Rational::from_integer(BigInt::from(4).pow(self.m))
    }
}

/// Exact coefficients for `T_m`; the moment identities
/// `Σ_j (2j+1)^{2k} a_{m,j} = 0`, `k = 1..=m`, are checked before returning.
pub fn trig_coefficients(m: u32) -> Result<TrigCoefficients> {
    if m > MAX_TRIG_M {
        return Err(Error::InvalidArgument(format!(
            "trigonometric order m = {m} exceeds {MAX_TRIG_M}"
        )));
    }
    let a_mj: Vec<Rational> = (0..=m)
        .map(|j| {
            let c = binomial(2 * m + 1, m - j);
            let c = if (m - j).is_multiple_of(2) { c } else { -c };
            Rational::new(c, BigInt::from(2 * j + 1))
        })
        .collect();
    for k in 1..=m {
        let s: Rational = a_mj
            .iter()
            .enumerate()
            .map(|(j, a)| a.clone() * Rational::from_integer(2 * j as i64 + 1).pow(2 * k as i32))
            .sum();
        if !s.is_zero() {
            return Err(Error::IdentityFailure { m, k });
        }
    }
    let a_m = a_mj.iter().cloned().sum();
    Ok(TrigCoefficients { m, a_mj, a_m })
}

/// `cos(πt)`, exact at multiples of 1/2.
pub(crate) fn cospi<T: Scalar>(t: T) -> T {
    let two = T::lit(2.0);
    let r = t - two * (t / two).floor();
    let q = (two * r).round();
    let f = r - q / two;
    let pf = T::PI() * f;
    match q.to_i32().unwrap_or(0) {
        1 => -pf.sin(),
        2 => -pf.cos(),
        3 => pf.sin(),
        _ => pf.cos(),
    }
}

fn sinpi<T: Scalar>(t: T) -> T {
    cospi(t - T::lit(0.5))
}

/// Below this value the cosine expansion loses relative accuracy to
/// cancellation and the closed incomplete-beta form takes over.
const NEAR_END: f64 = 1.0 / 1024.0;

/// Precomputed floating weights for fast evaluation.
#[derive(Debug, Clone)]
struct TrigEvaluator<T> {
    m: u32,
    /// `a_{m,j} / (2 a_m)`
    w: Vec<T>,
    /// `(2j+1) a_{m,j} / (2 a_m) = b_j / (2 a_m)`
    v: Vec<T>,
    /// `π / ∫₀^π sin^{2m+1}`
    norm: T,
}

impl<T: Scalar> TrigEvaluator<T> {
    fn new(c: &TrigCoefficients) -> Self {
        let to_t = |r: &Rational| T::lit(r.to_f64());
        let two_am = Rational::from_integer(2) * c.a_m.clone();
        let w = c.cosine_weights().iter().map(to_t).collect();
        let v = c
            .integer_weights()
            .into_iter()
            .map(|b| to_t(&(Rational::from_integer(b) / two_am.clone())))
            .collect();
        let norm = T::PI() / to_t(&c.sine_power_integral_times_pi());
        Self { m: c.m, w, v, norm }
    }

    /// `Σ w_j · 2 sin²((2j+1)πx/2)`, accurate near the left end.
    fn left_value(&self, x: T) -> T {
        let two = T::lit(2.0);
        self.w
            .iter()
            .enumerate()
            .map(|(j, &w)| {
                let s = sinpi(T::from_usize_lossy(2 * j + 1) * x / two);
                w * two * s * s
            })
            .sum()
    }

    /// Same function as `left_value`, as `B_{m,m}(sin²(πx/2))`: positive
    /// terms only, so relative accuracy survives where the expansion cancels.
    fn left_value_near_end(&self, x: T) -> T {
        let s = sinpi(x / T::lit(2.0));
        beta_value(self.m, self.m, s * s)
    }

    fn value(&self, x: T) -> T {
        let (s, flip) = if x <= T::lit(0.5) { (x, false) } else { (T::one() - x, true) };
        let mut v = self.left_value(s);
        if v < T::lit(NEAR_END) {
            v = self.left_value_near_end(s);
        }
        if flip {
            T::one() - v
        } else {
            v
        }
    }

    fn near_end(&self, x: T) -> bool {
        let s = x.min(T::one() - x);
        self.left_value(s) < T::lit(NEAR_END)
    }

    /// Jet from `T′ = c·sin^{2m+1}(πx)`, the sine jet taken with exact phase
    /// reduction, integrated once.
    fn sine_power_jet(&self, x: T, order: usize) -> Jet<T> {
        let mut coeffs = vec![self.value(x)];
        if order > 0 {
            let sd: Vec<T> = (0..order)
                .map(|k| T::PI().powi(k as i32) * sinpi(x + T::from_usize_lossy(k) / T::lit(2.0)))
                .collect();
            let p = Jet::from_derivatives(x, &sd)
                .powi(2 * self.m as i32 + 1)
                .scale(self.norm);
            coeffs.extend(
                p.coeffs()
                    .iter()
                    .enumerate()
                    .map(|(k, &c)| c / T::from_usize_lossy(k + 1)),
            );
        }
        Jet::from_coeffs(x, coeffs)
    }

    /// `T^(n)(x)` for `n ≥ 1`:
    /// `-π^n Σ (b_j/(2a_m)) (2j+1)^{n-1} cos((2j+1)πx + nπ/2)`.
    fn derivative(&self, x: T, n: usize) -> T {
        if n == 0 {
            return self.value(x);
        }
        let half_n = T::from_usize_lossy(n) / T::lit(2.0);
        let terms: Vec<T> = self
            .v
            .iter()
            .enumerate()
            .map(|(j, &v)| {
                let f = T::from_usize_lossy(2 * j + 1);
                v * f.powi(n as i32 - 1) * cospi(f * x + half_n)
            })
            .collect();
        -T::PI().powi(n as i32) * crate::scalar::pairwise_sum(&terms)
    }

    fn jet(&self, x: T, order: usize) -> Jet<T> {
        if self.near_end(x) {
            return self.sine_power_jet(x, order);
        }
        let d: Vec<T> = (0..=order).map(|n| self.derivative(x, n)).collect();
        Jet::from_derivatives(x, &d)
    }
}

/// `T_m` on `[0, 1]` with flat orders `(2m+1, 2m+1)`.
pub fn trig_step<T: Scalar>(m: u32) -> Result<SmoothFunction<T>> {
    let c = trig_coefficients(m)?;
    let ev = std::sync::Arc::new(TrigEvaluator::<T>::new(&c));
    let ev2 = ev.clone();
    let order = 2 * m + 1;
    Ok(SmoothFunction::new(
        Interval::unit(),
        StepOrders::finite(order, order),
        format!("T_{}", ev.m),
        move |x, k| ev.jet(x, k),
    )
    .with_value_fn(move |x| ev2.value(x)))
}

/// `c_m = (1·3⋯(2m+1) · π^{m+1})² / 2`.
pub fn ode_constant<T: Scalar>(m: u32) -> T {
    let odd: T = (0..=m).map(|j| T::from_usize_lossy(2 * j as usize + 1)).fold(T::one(), |a, b| a * b);
    let p = odd * T::PI().powi(m as i32 + 1);
    p * p / T::lit(2.0)
}

/// Applies `Π_{j=0}^{m} (D² + (2j+1)²π²)` to raw derivatives `d[0..=2m+2]`.
pub fn apply_ode_operator<T: Scalar>(m: u32, derivatives: &[T]) -> T {
    let mut d = derivatives.to_vec();
    for j in 0..=m {
        let w = T::from_usize_lossy(2 * j as usize + 1) * T::PI();
        let w2 = w * w;
        d = (0..d.len() - 2).map(|i| d[i + 2] + w2 * d[i]).collect();
    }
    d[0]
}

/// `max |L_m[T_m](x) - c_m|` over the samples.
pub fn ode_residual<T: Scalar>(m: u32, x_samples: &[T]) -> Result<T> {
    let t = trig_step::<T>(m)?;
    let c = ode_constant::<T>(m);
    let k = 2 * m as usize + 2;
    let mut worst = T::zero();
    for &x in x_samples {
        let d = t.jet(x, k)?.derivatives();
        worst = worst.max((apply_ode_operator(m, &d) - c).abs());
    }
    Ok(worst)
}

/// Exact check of the linear system for `α_j = -a_{m,j} / (2 a_m)`:
/// `Σ α_j = -1/2` and `Σ (2j+1)^{2k} α_j = 0` for `k = 1..=m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OlofsenReport {
    pub m: u32,
    pub alpha: Vec<Rational>,
    pub sum: Rational,
    pub moments: Vec<(u32, Rational)>,
}

impl OlofsenReport {
    pub fn passed(&self) -> bool {
        self.sum == Rational::new(-1, 2) && self.moments.iter().all(|(_, s)| s.is_zero())
    }
}

pub fn olofsen_check(m: u32) -> Result<OlofsenReport> {
    let c = trig_coefficients(m)?;
    let alpha: Vec<Rational> = c.cosine_weights().into_iter().map(|w| -w).collect();
    let sum = alpha.iter().cloned().sum();
    let moments = (1..=m)
        .map(|k| {
            let s = alpha
                .iter()
                .enumerate()
                .map(|(j, a)| a.clone() * Rational::from_integer(2 * j as i64 + 1).pow(2 * k as i32))
                .sum();
            (k, s)
        })
        .collect();
    Ok(OlofsenReport { m, alpha, sum, moments })
}

/// Convenience: the weights `b_j` as `f64`, mostly for reporting.
pub fn integer_weights_f64(m: u32) -> Result<Vec<f64>> {
    Ok(trig_coefficients(m)?
        .integer_weights()
        .iter()
        .map(|b| b.to_f64().unwrap_or(f64::NAN))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{integrate, QuadratureRule};

    #[test]
    fn m0_and_m1_coefficients() {
        let c = trig_coefficients(0).unwrap();
        assert_eq!(c.a_mj, vec![Rational::one()]);
        assert_eq!(c.a_m, Rational::one());
        let c = trig_coefficients(1).unwrap();
        assert_eq!(c.a_mj, vec![Rational::from_integer(-3), Rational::new(1, 3)]);
        assert_eq!(c.a_m, Rational::new(-8, 3));
    }

    #[test]
    fn m1_expansion_matches_sine_cube_integral() {
        // sin³θ = (3 sinθ - sin3θ)/4 ⇒ ∫₀ˣ sin³(πt) dt
        //   = (1/π)[(2/3) - (3/4)cos πx + (1/12)cos 3πx]
        let x = 0.37f64;
        let pi = std::f64::consts::PI;
        let closed = (2.0 / 3.0 - 0.75 * (pi * x).cos() + (3.0 * pi * x).cos() / 12.0) / pi;
        let d = Interval::new(0.0, x).unwrap();
        let quad = integrate(|t: f64| (pi * t).sin().powi(3), d, QuadratureRule::default()).unwrap();
        assert!((closed - quad).abs() < 1e-14);
        let total = 4.0 / (3.0 * pi);
        let t1 = trig_step::<f64>(1).unwrap();
        assert!((t1.value(x) - quad / total).abs() < 1e-13);
    }

    #[test]
    fn too_large_m_rejected() {
        assert!(trig_coefficients(MAX_TRIG_M + 1).is_err());
        assert!(trig_coefficients(MAX_TRIG_M).is_ok());
    }

    #[test]
    fn cospi_exact_at_half_integers() {
        assert_eq!(cospi(0.5f64), 0.0);
        assert_eq!(cospi(1.0f64), -1.0);
        assert_eq!(cospi(1.5f64), 0.0);
        assert_eq!(cospi(7.0f64), -1.0);
        assert_eq!(cospi(-0.5f64), 0.0);
        assert!((cospi(0.3f64) - (0.3 * std::f64::consts::PI).cos()).abs() < 1e-15);
    }

    #[test]
    fn quarter_value() {
        let pi = std::f64::consts::PI;
        let d = Interval::new(0.0, 0.25).unwrap();
        let s = integrate(|t: f64| (pi * t).sin().powi(3), d, QuadratureRule::default()).unwrap();
        let oracle = s / (4.0 / (3.0 * pi));
        assert!((oracle - 0.0580583).abs() < 1e-7);
        let t1 = trig_step::<f64>(1).unwrap();
        assert!((t1.value(0.25) - oracle).abs() < 1e-13);
    }

    #[test]
    fn derivative_is_normalized_sine_power() {
        let pi = std::f64::consts::PI;
        for m in 0..=6u32 {
            let c = trig_coefficients(m).unwrap();
            let norm = c.sine_power_integral_times_pi().to_f64() / pi;
            let t = trig_step::<f64>(m).unwrap();
            for &x in &[0.1, 0.33, 0.5, 0.81] {
                let expect = (pi * x).sin().powi(2 * m as i32 + 1) / norm;
                let got = t.jet(x, 1).unwrap().derivative(1);
                assert!((got - expect).abs() < 1e-11 * expect.abs().max(1.0), "m={m} x={x}");
            }
        }
    }

    #[test]
    fn ode_holds() {
        let xs = [0.1, 0.25, 0.5, 0.7, 0.93];
        assert!(ode_residual::<f64>(0, &xs).unwrap() < 1e-9);
        let c1: f64 = ode_constant(1);
        assert!((c1 - 4.5 * std::f64::consts::PI.powi(4)).abs() < 1e-10);
        assert!(ode_residual::<f64>(1, &xs).unwrap() < 1e-7);
    }

    #[test]
    fn boundary_data() {
        for m in 0..=5u32 {
            let t = trig_step::<f64>(m).unwrap();
            assert_eq!(t.value(0.0), 0.0);
            assert_eq!(t.value(1.0), 1.0);
            let d = t.jet(1.0, 2 * m as usize + 1).unwrap().derivatives();
            for v in &d[1..] {
                assert!(v.abs() < 1e-8, "m={m}: {d:?}");
            }
        }
    }

    #[test]
    fn routes_agree_in_the_overlap() {
        for m in 0..=8u32 {
            let ev = TrigEvaluator::<f64>::new(&trig_coefficients(m).unwrap());
            for i in 1..50 {
                let x = 0.5 * i as f64 / 50.0;
                let a = ev.left_value(x);
                let b = ev.left_value_near_end(x);
                assert!((a - b).abs() < 1e-14, "m={m} x={x}: {a} vs {b}");
                let ja = ev.sine_power_jet(x, 5).derivatives();
                let d: Vec<f64> = (0..=5).map(|n| ev.derivative(x, n)).collect();
                for n in 0..=5 {
                    assert!((ja[n] - d[n]).abs() < 1e-10 * (1.0 + d[n].abs()) * 10f64.powi(n as i32), "m={m} x={x} n={n}");
                }
            }
        }
    }

    #[test]
    fn relative_accuracy_near_zero() {
        // T_m(x) ~ c x^{2m+2} with c = π^{2m+2} / ((2m+2)·∫₀^π sin^{2m+1})
        let pi = std::f64::consts::PI;
        for m in 0..=4u32 {
            let n = 2 * m as i32 + 1;
            let total = trig_coefficients(m).unwrap().sine_power_integral_times_pi().to_f64();
            let t = trig_step::<f64>(m).unwrap();
            let x = 1e-5f64;
            let lead = pi.powi(n + 1) * x.powi(n + 1) / ((n + 1) as f64 * total);
            assert!((t.value(x) / lead - 1.0).abs() < 1e-8, "m={m}");
            assert!(t.value(1.0 - x) < 1.0 || lead < 1e-16);
        }
    }

    #[test]
    fn olofsen_system() {
        for m in 0..=10 {
            assert!(olofsen_check(m).unwrap().passed());
        }
    }
}
