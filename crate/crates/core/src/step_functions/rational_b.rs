//! Rational B-function `R_{ℓ,r}(x) = x^{ℓ+1} / (x^{ℓ+1} + (1-x)^{r+1})`.

use crate::error::Result;
use crate::function::{Interval, SmoothFunction, StepOrders};
use crate::jets::Jet;
use crate::scalar::Scalar;

/// `p / (p + q)` with `p = x^{ℓ+1}`, `q = (1-x)^{r+1}`, evaluated as
/// `1 / (1 + q/p)` or `1 - 1 / (1 + p/q)`: every step is monotone under
/// rounding and the smaller of `R`, `1 - R` keeps full relative accuracy.
pub fn rational_value<T: Scalar>(l: u32, r: u32, x: T) -> T {
    let p = x.powi(l as i32 + 1);
    let q = (T::one() - x).powi(r as i32 + 1);
    if p <= q {
        if p == T::zero() {
            return T::zero();
        }
        T::one() / (T::one() + q / p)
    } else {
        if q == T::zero() {
            return T::one();
        }
        T::one() - T::one() / (T::one() + p / q)
    }
}

/// Jet of `R_{ℓ,r} ∘ u`; the denominator is positive for `u ∈ [0, 1]`.
pub fn rational_jet<T: Scalar>(l: u32, r: u32, u: &Jet<T>) -> Jet<T> {
    let p = u.powi(l as i32 + 1);
    let q = (-u).add_scalar(T::one()).powi(r as i32 + 1);
    &p / &(&p + &q)
}

pub fn rational_step<T: Scalar>(orders: StepOrders) -> Result<SmoothFunction<T>> {
    let (l, r) = orders.require_finite("the rational step needs finite orders")?;
    Ok(rational_step_lr(l, r))
}

pub fn rational_step_lr<T: Scalar>(l: u32, r: u32) -> SmoothFunction<T> {
    SmoothFunction::new(
        Interval::unit(),
        StepOrders::finite(l, r),
        format!("R_{{{l},{r}}}"),
        move |x, k| rational_jet(l, r, &Jet::variable(x, k)),
    )
    .with_value_fn(move |x| rational_value(l, r, x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Rational;

    #[test]
    fn half_for_zero_orders() {
        assert_eq!(rational_value(0, 0, 0.5), 0.5);
    }

    #[test]
    fn endpoints() {
        assert_eq!(rational_value(4, 2, 0.0), 0.0);
        assert_eq!(rational_value(4, 2, 1.0), 1.0);
    }

    #[test]
    fn four_two_at_half() {
        // exact: (1/32) / (1/32 + 1/8)
        let p = Rational::new(1, 32);
        let exact = p.clone() / (p + Rational::new(1, 8));
        assert_eq!(exact, Rational::new(1, 5));
        assert!((rational_value(4, 2, 0.5) - 0.2f64).abs() < 1e-16);
    }

    #[test]
    fn flat_at_both_ends() {
        let f = rational_step_lr::<f64>(4, 2);
        let left = f.jet(0.0, 6).unwrap();
        for i in 1..=4 {
            assert_eq!(left.coeffs()[i], 0.0);
        }
        assert!(left.coeffs()[5] != 0.0);
        let right = f.jet(1.0, 4).unwrap().derivatives();
        for d in &right[1..=2] {
            assert!(d.abs() < 1e-12);
        }
        assert!(right[3].abs() > 1e-3);
    }
}
