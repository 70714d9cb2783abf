//! Fabius function by Picard iteration of its self-similar integral
//! equation
//!
//! ```text
//! T(x) = ∫₀^{2x} T                   0 ≤ x ≤ 1/2
//! T(x) = ∫_{2x-1}^{1} T + 2x - 1     1/2 < x ≤ 1
//! ```
//!
//! on a uniform dyadic grid. Both integration limits land on grid nodes, so
//! one cumulative trapezoid sum per sweep updates the whole table. Values
//! between nodes use monotone (Fritsch–Carlson) cubic interpolation;
//! derivatives use `T'(x) = 2T(2x)` on `[0, 1/2]` and `T'(x) = 2 - 2T(2x-1)`
//! on `(1/2, 1]`, recursively.

use crate::error::{Error, Result};
use crate::function::{Interval, SmoothFunction, StepOrders};
use crate::jets::Jet;
use crate::scalar::Scalar;

/// Sweep cap; the iteration contracts by roughly 4× per sweep.
pub const MAX_SWEEPS: usize = 500;

#[derive(Debug, Clone)]
pub struct Fabius<T> {
    values: Vec<T>,
    slopes: Vec<T>,
    sweeps: usize,
    last_change: T,
}

impl<T: Scalar> Fabius<T> {
    /// Iterates from the identity until the sup-norm change drops below
    /// `tolerance`. `grid_size` is the number of cells, a power of two ≥ 2.
    pub fn build(tolerance: T, grid_size: usize) -> Result<Self> {
        Self::build_with_cap(tolerance, grid_size, MAX_SWEEPS)
    }

    /// As [`Fabius::build`] with an explicit sweep cap.
    pub fn build_with_cap(tolerance: T, grid_size: usize, max_sweeps: usize) -> Result<Self> {
        if !(tolerance > T::zero()) {
            return Err(Error::InvalidArgument("tolerance must be positive".into()));
        }
        if grid_size < 2 || !grid_size.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "grid size must be a power of two >= 2, got {grid_size}"
            )));
        }
        let n = grid_size;
        let h = T::one() / T::from_usize_lossy(n);
        let half_h = h / T::lit(2.0);
        let xs: Vec<T> = (0..=n).map(|i| T::from_usize_lossy(i) * h).collect();
        let mut t = xs.clone();
        let mut cumulative = vec![T::zero(); n + 1];
        let mut change = T::infinity();
        let mut sweeps = 0;
        while sweeps < max_sweeps {
            sweeps += 1;
            for i in 1..=n {
                cumulative[i] = cumulative[i - 1] + half_h * (t[i - 1] + t[i]);
            }
            let total = cumulative[n];
            let mut next = vec![T::zero(); n + 1];
            for i in 0..=n {
                next[i] = if 2 * i <= n {
                    cumulative[2 * i]
                } else {
                    total - cumulative[2 * i - n] + (T::lit(2.0) * xs[i] - T::one())
                };
            }
            change = next
                .iter()
                .zip(&t)
                .map(|(a, b)| (*a - *b).abs())
                .fold(T::zero(), T::max);
            t = next;
            if change < tolerance {
                break;
            }
        }
        if !(change < tolerance) {
            return Err(Error::NonConvergence {
                iterations: sweeps,
                last_change: change.to_f64().unwrap_or(f64::NAN),
            });
        }
        let slopes = pchip_slopes(&t, h);
        Ok(Self {
            values: t,
            slopes,
            sweeps,
            last_change: change,
        })
    }

    pub fn grid_size(&self) -> usize {
        self.values.len() - 1
    }

    /// Node values `T(i / N)`, `i = 0..=N`.
    pub fn table(&self) -> &[T] {
        &self.values
    }

    pub fn sweeps(&self) -> usize {
        self.sweeps
    }

    pub fn last_change(&self) -> T {
        self.last_change
    }

    pub fn value(&self, x: T) -> T {
        let x = x.max(T::zero()).min(T::one());
        let n = self.grid_size();
        let nf = T::from_usize_lossy(n);
        let pos = x * nf;
        let i = pos.floor().to_usize().unwrap_or(0).min(n - 1);
        let s = pos - T::from_usize_lossy(i);
        let h = T::one() / nf;
        hermite_cubic(
            self.values[i],
            self.values[i + 1],
            self.slopes[i] * h,
            self.slopes[i + 1] * h,
            s,
        )
    }

    /// `T^(k)(x)` through the functional equation.
    pub fn derivative(&self, x: T, k: usize) -> T {
        let two = T::lit(2.0);
        if k == 0 {
            return self.value(x);
        }
        let half = T::lit(0.5);
        if x <= half {
            two.powi(k as i32) * self.derivative(two * x, k - 1)
        } else if k == 1 {
            two - two * self.value(two * x - T::one())
        } else {
            -two.powi(k as i32) * self.derivative(two * x - T::one(), k - 1)
        }
    }

    pub fn jet(&self, x: T, order: usize) -> Jet<T> {
        let d: Vec<T> = (0..=order).map(|k| self.derivative(x, k)).collect();
        Jet::from_derivatives(x, &d)
    }

    pub fn into_function(self) -> SmoothFunction<T> {
        let shared = std::sync::Arc::new(self);
        let for_values = shared.clone();
        SmoothFunction::new(Interval::unit(), StepOrders::UNBOUNDED, "Fabius", move |x, k| {
            shared.jet(x, k)
        })
        .with_value_fn(move |x| for_values.value(x))
    }
}

/// Converged Fabius function as a step handle with unbounded flat orders.
pub fn fabius<T: Scalar>(tolerance: T, grid_size: usize) -> Result<SmoothFunction<T>> {
    Ok(Fabius::build(tolerance, grid_size)?.into_function())
}

fn hermite_cubic<T: Scalar>(y0: T, y1: T, m0: T, m1: T, s: T) -> T {
    let two = T::lit(2.0);
    let three = T::lit(3.0);
    let s2 = s * s;
    let s3 = s2 * s;
    let h00 = two * s3 - three * s2 + T::one();
    let h10 = s3 - two * s2 + s;
    let h01 = -two * s3 + three * s2;
    let h11 = s3 - s2;
    h00 * y0 + h10 * m0 + h01 * y1 + h11 * m1
}

/// Fritsch–Carlson slopes on a uniform grid.
fn pchip_slopes<T: Scalar>(y: &[T], h: T) -> Vec<T> {
    let n = y.len();
    let delta: Vec<T> = y.windows(2).map(|w| (w[1] - w[0]) / h).collect();
    let mut d = vec![T::zero(); n];
    for i in 1..n - 1 {
        let (a, b) = (delta[i - 1], delta[i]);
        if a * b > T::zero() {
            d[i] = T::lit(2.0) / (T::one() / a + T::one() / b);
        }
    }
    let end = |d0: T, d1: T| {
        let s = (T::lit(3.0) * d0 - d1) / T::lit(2.0);
        if s * d0 <= T::zero() {
            T::zero()
        } else if d0 * d1 <= T::zero() && s.abs() > (T::lit(3.0) * d0).abs() {
            T::lit(3.0) * d0
        } else {
            s
        }
    };
    if n >= 3 {
        d[0] = end(delta[0], delta[1]);
        d[n - 1] = end(delta[n - 2], delta[n - 3]);
    } else {
        d[0] = delta[0];
        d[n - 1] = delta[0];
    }
    d
}
