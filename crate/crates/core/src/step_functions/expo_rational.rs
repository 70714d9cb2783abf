//! Logistic expo-rational B-function
//! `E(x) = 1 / (1 + exp(1/x - 1/(1-x)))` on `(0, 1)`, `E(0) = 0`, `E(1) = 1`.
//!
//! Written as the logistic of `w(x) = 1/(1-x) - 1/x`. Once `|w|` passes
//! `ln(max finite)` the function is saturated below representable
//! resolution and the jet is returned exactly flat.

use crate::function::{Interval, SmoothFunction, StepOrders};
use crate::jets::Jet;
use crate::scalar::Scalar;

fn saturation<T: Scalar>() -> T {
    T::max_value().ln()
}

fn exponent<T: Scalar>(x: T) -> T {
    T::one() / (T::one() - x) - T::one() / x
}

pub fn expo_rational_value<T: Scalar>(x: T) -> T {
    if x <= T::zero() {
        return T::zero();
    }
    if x >= T::one() {
        return T::one();
    }
    let w = exponent(x);
    if w < -saturation::<T>() {
        T::zero()
    } else if w > saturation::<T>() {
        T::one()
    } else if w >= T::zero() {
        T::one() / (T::one() + (-w).exp())
    } else {
        let e = w.exp();
        e / (T::one() + e)
    }
}

pub fn expo_rational_jet<T: Scalar>(x: T, order: usize) -> Jet<T> {
    if x <= T::zero() {
        return Jet::zero(x, order);
    }
    if x >= T::one() {
        return Jet::constant(x, T::one(), order);
    }
    let w0 = exponent(x);
    if w0 < -saturation::<T>() {
        return Jet::zero(x, order);
    }
    if w0 > saturation::<T>() {
        return Jet::constant(x, T::one(), order);
    }
    let v = Jet::variable(x, order);
    let one = Jet::constant(x, T::one(), order);
    let w = &(&one / &(&one - &v)) - &(&one / &v);
    w.logistic()
}

pub fn expo_rational_step<T: Scalar>() -> SmoothFunction<T> {
    SmoothFunction::new(
        Interval::unit(),
        StepOrders::UNBOUNDED,
        "E",
        expo_rational_jet,
    )
    .with_value_fn(expo_rational_value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn midpoint_and_endpoints() {
        assert_eq!(expo_rational_value(0.5f64), 0.5);
        assert_eq!(expo_rational_value(0.0f64), 0.0);
        assert_eq!(expo_rational_value(1.0f64), 1.0);
    }

    #[test]
    fn quarter_point() {
        // 1 / (1 + e^{8/3}) to 30 digits: 0.0649691691286640621275428099673
        let reference = 0.064_969_169_128_664_06_f64;
        let direct = 1.0 / (1.0 + (4.0f64 - 4.0 / 3.0).exp());
        assert!((direct - reference).abs() < 1e-16);
        assert!((expo_rational_value(0.25f64) - reference).abs() < 1e-16);
    }

    #[test]
    fn saturated_jets_are_flat_and_finite() {
        for &x in &[1e-5, 1e-3, 1.0 - 1e-3, 1.0 - 1e-5] {
            let j = expo_rational_jet(x, 8);
            assert!(j.is_finite(), "x={x}");
        }
        let j = expo_rational_jet(1e-5f64, 5);
        assert_eq!(j.coeffs(), &[0.0; 6]);
        let j = expo_rational_jet(1.0f64, 5);
        assert_eq!(j.coeffs(), &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn f32_guard() {
        let v = expo_rational_value(0.005f32);
        assert!(v.is_finite() && v >= 0.0);
        assert!(expo_rational_jet(0.005f32, 4).is_finite());
    }
}
