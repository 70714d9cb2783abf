//! Regularized incomplete Beta function `B_{ℓ,r}` in closed polynomial form
//! `x^{ℓ+1} Σ_{i=0}^{r} C(ℓ+i, i) (1-x)^i`.

use crate::error::Result;
use crate::function::{Interval, SmoothFunction, StepOrders};
use crate::jets::Jet;
use crate::scalar::{pairwise_sum, Scalar};

/// At or above this `ℓ + r` the sum is accumulated pairwise.
const PAIRWISE_THRESHOLD: u32 = 12;

/// `C(ℓ+i, i)` for `i = 0..=r`.
fn sum_weights<T: Scalar>(l: u32, r: u32) -> Vec<T> {
    let mut w = Vec::with_capacity(r as usize + 1);
    let mut c = 1.0f64;
    w.push(T::one());
    for i in 1..=r {
        c = c * f64::from(l + i) / f64::from(i);
        w.push(T::lit(c.round()));
    }
    w
}

fn accumulate<T: Scalar>(terms: &[T], l: u32, r: u32) -> T {
    if l + r >= PAIRWISE_THRESHOLD {
        pairwise_sum(terms)
    } else {
        terms.iter().copied().sum()
    }
}

/// `B_{ℓ,r}(x)`. Past the midpoint it is evaluated as `1 - B_{r,ℓ}(1-x)`
/// (`1-x` is exact there), so the approach to 1 is as accurate as the
/// departure from 0.
pub fn beta_value<T: Scalar>(l: u32, r: u32, x: T) -> T {
    if x > T::lit(0.5) {
        T::one() - beta_forward(r, l, T::one() - x)
    } else {
        beta_forward(l, r, x)
    }
}

fn beta_forward<T: Scalar>(l: u32, r: u32, x: T) -> T {
    let w = sum_weights::<T>(l, r);
    let y = T::one() - x;
    let mut p = T::one();
    let terms: Vec<T> = w
        .iter()
        .map(|&c| {
            let t = c * p;
            p *= y;
            t
        })
        .collect();
    x.powi(l as i32 + 1) * accumulate(&terms, l, r)
}

/// Jet of `B_{ℓ,r} ∘ u`.
pub fn beta_jet<T: Scalar>(l: u32, r: u32, u: &Jet<T>) -> Jet<T> {
    let k = u.order();
    let w = sum_weights::<T>(l, r);
    let y = (-u).add_scalar(T::one());
    let mut p = Jet::constant(u.base(), T::one(), k);
    let mut terms: Vec<Jet<T>> = Vec::with_capacity(w.len());
    for &c in &w {
        terms.push(p.scale(c));
        p = &p * &y;
    }
    // Coefficientwise accumulation so pairwise summation applies per entry.
    let sum: Vec<T> = (0..=k)
        .map(|i| {
            let col: Vec<T> = terms.iter().map(|t| t.coeffs()[i]).collect();
            accumulate(&col, l, r)
        })
        .collect();
    let sum = Jet::from_coeffs(u.base(), sum);
    &u.powi(l as i32 + 1) * &sum
}

/// `B_{ℓ,r}` as a step function on `[0, 1]` with flat orders `(ℓ, r)`.
pub fn beta_step<T: Scalar>(orders: StepOrders) -> Result<SmoothFunction<T>> {
    let (l, r) = orders.require_finite("the Beta step needs finite orders")?;
    Ok(beta_step_lr(l, r))
}

pub fn beta_step_lr<T: Scalar>(l: u32, r: u32) -> SmoothFunction<T> {
    SmoothFunction::new(
        Interval::unit(),
        StepOrders::finite(l, r),
        format!("B_{{{l},{r}}}"),
        move |x, k| beta_jet(l, r, &Jet::variable(x, k)),
    )
    .with_value_fn(move |x| beta_value(l, r, x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::Order;

    #[test]
    fn identity_for_zero_orders() {
        assert_eq!(beta_value(0, 0, 0.7), 0.7);
    }

    #[test]
    fn symmetric_midpoint() {
        assert!((beta_value(1, 1, 0.5) - 0.5f64).abs() < 1e-16);
    }

    #[test]
    fn two_one_at_half() {
        // quadrature oracle: ∫₀^½ t²(1-t) / ∫₀¹ t²(1-t) = (1/24 - 1/64) / (1/12)
        let oracle = (1.0 / 24.0 - 1.0 / 64.0) * 12.0;
        assert!((oracle - 0.3125f64).abs() < 1e-15);
        assert!((beta_value(2, 1, 0.5) - 0.3125f64).abs() < 1e-15);
    }

    #[test]
    fn infinite_order_rejected() {
        let r = beta_step::<f64>(StepOrders::new(Order::Unbounded, 1));
        assert!(r.is_err());
    }

    #[test]
    fn three_x_squared_minus_two_x_cubed() {
        for &x in &[0.0f64, 0.2, 0.5, 0.9, 1.0] {
            let expect = 3.0 * x * x - 2.0 * x * x * x;
            assert!((beta_value(1, 1, x) - expect).abs() < 1e-15);
            let j = beta_jet(1, 1, &Jet::variable(x, 4));
            let d = j.derivatives();
            assert!((d[1] - (6.0 * x - 6.0 * x * x)).abs() < 1e-13);
            assert!((d[2] - (6.0 - 12.0 * x)).abs() < 1e-13);
            assert!((d[3] + 12.0).abs() < 1e-12);
            assert!(d[4].abs() < 1e-12);
        }
    }

    #[test]
    fn endpoint_derivatives_vanish_exactly_at_zero() {
        let j = beta_jet(4, 3, &Jet::variable(0.0, 6));
        for i in 0..=4 {
            assert_eq!(j.coeffs()[i], 0.0);
        }
        assert!(j.coeffs()[5] != 0.0);
    }

    #[test]
    fn high_order_path_stays_accurate() {
        // ℓ + r >= 12 goes through pairwise summation
        let f = beta_step_lr::<f64>(7, 8);
        assert!((f.value(1.0) - 1.0).abs() < 1e-12);
        assert_eq!(f.value(0.0), 0.0);
        let v = f.value(0.3);
        let j = f.jet(0.3, 0).unwrap().value();
        assert!((v - j).abs() < 1e-14);
    }
}
