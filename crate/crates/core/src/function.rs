//! Closed intervals, flatness orders and the [`SmoothFunction`] handle.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::jets::Jet;
use crate::scalar::Scalar;

/// A flatness or blending order: a non-negative integer or unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Order {
    Finite(u32),
    Unbounded,
}

impl Order {
    pub fn finite(self) -> Option<u32> {
        match self {
            Order::Finite(n) => Some(n),
            Order::Unbounded => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Order::Finite(_))
    }

    /// True when derivatives `1..=k` are covered by this order.
    pub fn covers(self, k: u32) -> bool {
        match self {
            Order::Finite(n) => k <= n,
            Order::Unbounded => true,
        }
    }

    /// Finite value, or `cap` for unbounded orders.
    pub fn capped(self, cap: u32) -> u32 {
        match self {
            Order::Finite(n) => n.min(cap),
            Order::Unbounded => cap,
        }
    }
}

impl PartialOrd for Order {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Order {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Order::Finite(a), Order::Finite(b)) => a.cmp(b),
            (Order::Finite(_), Order::Unbounded) => Ordering::Less,
            (Order::Unbounded, Order::Finite(_)) => Ordering::Greater,
            (Order::Unbounded, Order::Unbounded) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Unbounded => write!(f, "inf"),
        }
    }
}

impl From<u32> for Order {
    fn from(n: u32) -> Self {
        Order::Finite(n)
    }
}

/// Left and right orders `(ℓ, r)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StepOrders {
    pub left: Order,
    pub right: Order,
}

impl StepOrders {
    pub const NONE: StepOrders = StepOrders {
        left: Order::Finite(0),
        right: Order::Finite(0),
    };

    pub const UNBOUNDED: StepOrders = StepOrders {
        left: Order::Unbounded,
        right: Order::Unbounded,
    };

    pub fn new(left: impl Into<Order>, right: impl Into<Order>) -> Self {
        Self {
            left: left.into(),
            right: right.into(),
        }
    }

    pub fn finite(left: u32, right: u32) -> Self {
        Self::new(left, right)
    }

    /// Both orders as integers; errors on an unbounded side.
    pub fn require_finite(self, what: &'static str) -> Result<(u32, u32)> {
        match (self.left, self.right) {
            (Order::Finite(l), Order::Finite(r)) => Ok((l, r)),
            _ => Err(Error::InfiniteOrder(what)),
        }
    }

    pub fn min(self, other: Self) -> Self {
        Self {
            left: self.left.min(other.left),
            right: self.right.min(other.right),
        }
    }

    pub fn swapped(self) -> Self {
        Self {
            left: self.right,
            right: self.left,
        }
    }

    pub fn min_order(self) -> Order {
        self.left.min(self.right)
    }

    /// True when each side of `self` is at least the matching side of `other`.
    pub fn dominates(self, other: Self) -> bool {
        self.left >= other.left && self.right >= other.right
    }
}

impl fmt::Display for StepOrders {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.left, self.right)
    }
}

/// Closed interval `[a, b]` with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval<T> {
    a: T,
    b: T,
}

impl<T: Scalar> Interval<T> {
    pub fn new(a: T, b: T) -> Result<Self> {
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidInterval {
                a: a.to_f64().unwrap_or(f64::NAN),
                b: b.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self { a, b })
    }

    pub fn unit() -> Self {
        Self {
            a: T::zero(),
            b: T::one(),
        }
    }

    #[inline]
    pub fn a(&self) -> T {
        self.a
    }

    #[inline]
    pub fn b(&self) -> T {
        self.b
    }

    #[inline]
    pub fn length(&self) -> T {
        self.b - self.a
    }

    pub fn midpoint(&self) -> T {
        (self.a + self.b) / T::lit(2.0)
    }

    pub fn contains(&self, x: T) -> bool {
        x >= self.a && x <= self.b
    }

    /// `λ(x) = (x - a) / (b - a)`.
    #[inline]
    pub fn to_unit(&self, x: T) -> T {
        (x - self.a) / self.length()
    }

    #[inline]
    pub fn from_unit(&self, u: T) -> T {
        self.a + u * self.length()
    }

    /// Jet of `λ` at `x`.
    pub fn unit_jet(&self, x: T, order: usize) -> Jet<T> {
        let s = T::one() / self.length();
        Jet::affine(x, s, -self.a * s, order)
    }

    /// `n` equally spaced points from `a` to `b` inclusive (`n >= 2`).
    pub fn grid(&self, n: usize) -> Vec<T> {
        assert!(n >= 2, "a grid needs at least two points");
        let last = T::from_usize_lossy(n - 1);
        (0..n)
            .map(|i| {
                if i == n - 1 {
                    self.b
                } else {
                    self.from_unit(T::from_usize_lossy(i) / last)
                }
            })
            .collect()
    }

    /// Equality up to a relative tolerance scaled by the interval size.
    pub fn approx_eq(&self, other: &Self) -> bool {
        let scale = T::one() + self.a.abs().max(self.b.abs());
        let tol = T::lit(1e-12) * scale;
        (self.a - other.a).abs() <= tol && (self.b - other.b).abs() <= tol
    }

    pub fn require_same(&self, other: &Self) -> Result<()> {
        if self.approx_eq(other) {
            Ok(())
        } else {
            Err(self.mismatch(other))
        }
    }

    pub(crate) fn mismatch(&self, other: &Self) -> Error {
        Error::DomainMismatch {
            a1: self.a.to_f64().unwrap_or(f64::NAN),
            b1: self.b.to_f64().unwrap_or(f64::NAN),
            a2: other.a.to_f64().unwrap_or(f64::NAN),
            b2: other.b.to_f64().unwrap_or(f64::NAN),
        }
    }
}

impl<T: Scalar> fmt::Display for Interval<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.a, self.b)
    }
}

type JetFn<T> = dyn Fn(T, usize) -> Jet<T> + Send + Sync;
type ValueFn<T> = dyn Fn(T) -> T + Send + Sync;

/// A differentiable function on a closed interval with declared flatness
/// orders at its two ends.
///
/// Cloning is cheap; the evaluators are shared. Evaluation does not check
/// the domain, so callers that probe outside it (one-sided stencils,
/// extended branches) get whatever the underlying formula yields.
#[derive(Clone)]
pub struct SmoothFunction<T> {
    domain: Interval<T>,
    flat: StepOrders,
    label: Arc<str>,
    max_order: Option<usize>,
    jet_fn: Arc<JetFn<T>>,
    value_fn: Option<Arc<ValueFn<T>>>,
}

impl<T: Scalar> fmt::Debug for SmoothFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SmoothFunction")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .field("flat", &self.flat)
            .field("max_order", &self.max_order)
            .finish()
    }
}

impl<T: Scalar> SmoothFunction<T> {
    pub fn new(
        domain: Interval<T>,
        flat: StepOrders,
        label: impl Into<String>,
        jet_fn: impl Fn(T, usize) -> Jet<T> + Send + Sync + 'static,
    ) -> Self {
        let label: String = label.into();
        Self {
            domain,
            flat,
            label: label.into(),
            max_order: None,
            jet_fn: Arc::new(jet_fn),
            value_fn: None,
        }
    }

    /// Installs a dedicated value evaluator. It must agree with the order-0
    /// jet.
    pub fn with_value_fn(mut self, f: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        self.value_fn = Some(Arc::new(f));
        self
    }

    /// Caps the jet order this handle can deliver.
    pub fn with_max_order(mut self, k: usize) -> Self {
        self.max_order = Some(k);
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        let label: String = label.into();
        self.label = label.into();
        self
    }

    pub fn with_flat_orders(mut self, flat: StepOrders) -> Self {
        self.flat = flat;
        self
    }

    pub fn domain(&self) -> Interval<T> {
        self.domain
    }

    pub fn flat_orders(&self) -> StepOrders {
        self.flat
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn max_order(&self) -> Option<usize> {
        self.max_order
    }

    pub fn value(&self, x: T) -> T {
        match &self.value_fn {
            Some(f) => f(x),
            None => (self.jet_fn)(x, 0).value(),
        }
    }

    pub fn jet(&self, x: T, order: usize) -> Result<Jet<T>> {
        if let Some(max) = self.max_order {
            if order > max {
                return Err(Error::InsufficientOrder {
                    label: self.label.to_string(),
                    requested: order,
                    supported: max,
                });
            }
        }
        Ok(self.jet_unchecked(x, order))
    }

    /// Jet without the order cap check.
    pub(crate) fn jet_unchecked(&self, x: T, order: usize) -> Jet<T> {
        (self.jet_fn)(x, order).with_base(x)
    }

    /// Raw derivatives `f(x), f'(x), ..., f^(order)(x)`.
    pub fn derivatives(&self, x: T, order: usize) -> Result<Vec<T>> {
        Ok(self.jet(x, order)?.derivatives())
    }

    /// Same evaluators on a different (usually smaller) domain.
    pub fn restrict(&self, domain: Interval<T>) -> Self {
        let mut out = self.clone();
        out.domain = domain;
        out
    }

    /// True when both handles share the same evaluator.
    pub fn same_evaluator(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.jet_fn, &other.jet_fn)
    }

    pub fn constant(domain: Interval<T>, c: T) -> Self {
        Self::new(domain, StepOrders::UNBOUNDED, format!("const({c})"), move |x, k| {
            Jet::constant(x, c, k)
        })
        .with_value_fn(move |_| c)
    }

    pub fn zero(domain: Interval<T>) -> Self {
        Self::constant(domain, T::zero()).with_label("zero")
    }

    pub fn identity(domain: Interval<T>) -> Self {
        Self::new(domain, StepOrders::NONE, "x", |x, k| Jet::variable(x, k))
            .with_value_fn(|x| x)
    }

    /// `Σ coeffs[i] x^i`.
    pub fn polynomial(domain: Interval<T>, coeffs: Vec<T>) -> Self {
        let label = format!("poly{:?}", coeffs);
        let c2 = coeffs.clone();
        Self::new(domain, StepOrders::NONE, label, move |x, k| {
            let v = Jet::variable(x, k);
            let mut acc = Jet::constant(x, T::zero(), k);
            for &c in coeffs.iter().rev() {
                acc = (&acc * &v).add_scalar(c);
            }
            acc
        })
        .with_value_fn(move |x| c2.iter().rev().fold(T::zero(), |acc, &c| acc * x + c))
    }

    /// `amplitude * sin(frequency * x + phase)`.
    pub fn sine(domain: Interval<T>, amplitude: T, frequency: T, phase: T) -> Self {
        Self::new(
            domain,
            StepOrders::NONE,
            format!("{amplitude}*sin({frequency}x+{phase})"),
            move |x, k| Jet::affine(x, frequency, phase, k).sin().scale(amplitude),
        )
        .with_value_fn(move |x| amplitude * (frequency * x + phase).sin())
    }

    /// `amplitude * cos(frequency * x + phase)`.
    pub fn cosine(domain: Interval<T>, amplitude: T, frequency: T, phase: T) -> Self {
        Self::new(
            domain,
            StepOrders::NONE,
            format!("{amplitude}*cos({frequency}x+{phase})"),
            move |x, k| Jet::affine(x, frequency, phase, k).cos().scale(amplitude),
        )
        .with_value_fn(move |x| amplitude * (frequency * x + phase).cos())
    }

    /// `amplitude * exp(rate * x)`.
    pub fn exponential(domain: Interval<T>, amplitude: T, rate: T) -> Self {
        Self::new(
            domain,
            StepOrders::NONE,
            format!("{amplitude}*exp({rate}x)"),
            move |x, k| Jet::affine(x, rate, T::zero(), k).exp().scale(amplitude),
        )
        .with_value_fn(move |x| amplitude * (rate * x).exp())
    }

    /// `f(x) = 2 + (5 - x) cos²(3π(5 - x))`, the function flattened by the
    /// multiplicative blend example on `[2, 4]`.
    pub fn blend_demo(domain: Interval<T>) -> Self {
        let three_pi = T::lit(3.0) * T::PI();
        let five = T::lit(5.0);
        Self::new(domain, StepOrders::NONE, "2+(5-x)cos^2(3pi(5-x))", move |x, k| {
            let u = Jet::affine(x, -T::one(), five, k);
            let c = u.scale(three_pi).cos();
            (&u * &(&c * &c)).add_scalar(T::lit(2.0))
        })
        .with_value_fn(move |x| {
            let u = five - x;
            let c = (three_pi * u).cos();
            T::lit(2.0) + u * c * c
        })
    }
}
