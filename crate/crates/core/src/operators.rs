//! Blend-to-zero operators on `[a₀, b₀]`.
//!
//! A *leftward* operator `𝓑_L` zeroes its input's value and first `ℓ`
//! derivatives at `a₀` while reproducing the first `r` derivatives at `b₀`;
//! a *rightward* operator `𝓑_R` does the mirror image. Three kinds:
//!
//! * Hermite: `𝓑_L(g)(x) = Σ_{k≤r} g^(k)(b₀)/k! (x-b₀)^k B_{ℓ,r-k}(ξ)` and
//!   `𝓑_R(f)(x) = Σ_{j≤ℓ} f^(j)(a₀)/j! (x-a₀)^j B_{r,ℓ-j}(1-ξ)`;
//! * multiplicative: `carrier · f`, with a carrier rising from 0 to 1
//!   (leftward) or falling from 1 to 0 (rightward) with flat ends;
//! * complement: `I - 𝓑`, which reverses the direction.

use std::fmt;

use crate::error::{Error, Result};
use crate::flat_ends::{lincomb, product, to_staircase};
use crate::function::{Interval, Order, SmoothFunction, StepOrders};
use crate::hermite::{hermite_interpolant, EndpointJet, HermiteSpec};
use crate::numerics::finite_diff::{finite_difference_jet, FdContext};
use crate::numerics::fd_tolerance;
use crate::scalar::Scalar;

/// Carrier endpoint tolerance.
pub const CARRIER_TOL: f64 = 1e-12;
/// Base tolerance of the jet-based endpoint checks in [`verify_blend`].
pub const JET_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Zero at `a₀`, reproduce at `b₀`.
    Leftward,
    /// Reproduce at `a₀`, zero at `b₀`.
    Rightward,
}

impl Direction {
    pub fn reversed(self) -> Self {
        match self {
            Direction::Leftward => Direction::Rightward,
            Direction::Rightward => Direction::Leftward,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Leftward => "leftward",
            Direction::Rightward => "rightward",
        })
    }
}

#[derive(Debug, Clone)]
pub enum BlendKind<T: Scalar> {
    Hermite,
    Multiplicative { carrier: SmoothFunction<T> },
    Complement(Box<BlendOperator<T>>),
}

#[derive(Debug, Clone)]
pub struct BlendOperator<T: Scalar> {
    direction: Direction,
    orders: StepOrders,
    interval: Interval<T>,
    kind: BlendKind<T>,
}

impl<T: Scalar> BlendOperator<T> {
    /// Hermite operator; both orders must be finite.
    pub fn hermite(direction: Direction, orders: StepOrders, interval: Interval<T>) -> Result<Self> {
        orders.require_finite("Hermite blend operators need finite orders")?;
        Ok(Self {
            direction,
            orders,
            interval,
            kind: BlendKind::Hermite,
        })
    }

    /// Multiplicative operator with an explicit carrier on `interval`.
    pub fn multiplicative(
        direction: Direction,
        orders: StepOrders,
        carrier: SmoothFunction<T>,
    ) -> Result<Self> {
        let interval = carrier.domain();
        let tol = T::lit(CARRIER_TOL);
        let (ca, cb) = (carrier.value(interval.a()), carrier.value(interval.b()));
        let (want_a, want_b) = match direction {
            Direction::Leftward => (T::zero(), T::one()),
            Direction::Rightward => (T::one(), T::zero()),
        };
        if !((ca - want_a).abs() <= tol && (cb - want_b).abs() <= tol) {
            return Err(Error::OperatorMismatch(format!(
                "{direction} carrier must run from {want_a} to {want_b}, got {ca} and {cb}"
            )));
        }
        if !carrier.flat_orders().dominates(orders) {
            return Err(Error::OperatorMismatch(format!(
                "carrier flat orders {} do not cover operator orders {orders}",
                carrier.flat_orders()
            )));
        }
        Ok(Self {
            direction,
            orders,
            interval,
            kind: BlendKind::Multiplicative { carrier },
        })
    }

    /// Multiplicative operator from a step `σ` on `[0, 1]`: carrier `σ∘λ`
    /// (leftward) or `(1 - σ)∘λ` (rightward), with `σ`'s flat orders.
    pub fn from_step(direction: Direction, sigma: &SmoothFunction<T>, interval: Interval<T>) -> Result<Self> {
        let rising = to_staircase(sigma, interval, Interval::unit())?;
        let carrier = match direction {
            Direction::Leftward => rising,
            Direction::Rightward => {
                let one = SmoothFunction::constant(interval, T::one());
                lincomb(&[(T::one(), one), (-T::one(), rising)])?
                    .with_flat_orders(sigma.flat_orders())
                    .with_label(format!("1-{}", sigma.label()))
            }
        };
        Self::multiplicative(direction, sigma.flat_orders(), carrier)
    }

    /// Same operator declared at `orders`; a multiplicative carrier must
    /// still cover them.
    pub fn with_orders(self, orders: StepOrders) -> Result<Self> {
        match self.kind {
            BlendKind::Hermite => Self::hermite(self.direction, orders, self.interval),
            BlendKind::Multiplicative { carrier } => Self::multiplicative(self.direction, orders, carrier),
            BlendKind::Complement(inner) => Ok(complement(&inner.with_orders(orders)?)),
        }
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn orders(&self) -> StepOrders {
        self.orders
    }

    pub fn interval(&self) -> Interval<T> {
        self.interval
    }

    pub fn kind(&self) -> &BlendKind<T> {
        &self.kind
    }

    /// Short description for reports, e.g. `complement(multiplicative[R_{4,2}])`.
    pub fn kind_name(&self) -> String {
        match &self.kind {
            BlendKind::Hermite => "hermite".to_string(),
            BlendKind::Multiplicative { carrier } => format!("multiplicative[{}]", carrier.label()),
            BlendKind::Complement(inner) => format!("complement({})", inner.kind_name()),
        }
    }

    /// Tolerance column for finite-difference checks: carriers flat to
    /// every order get the relaxed expo-rational column.
    pub fn fd_context(&self) -> FdContext {
        match &self.kind {
            BlendKind::Hermite => FdContext::OneSided,
            BlendKind::Multiplicative { carrier } => {
                if carrier.flat_orders().min_order() == Order::Unbounded {
                    FdContext::ExpoRational
                } else {
                    FdContext::OneSided
                }
            }
            BlendKind::Complement(inner) => inner.fd_context(),
        }
    }

    /// `(zeroed end, reproduced end)` and the order demanded at each.
    fn ends(&self) -> ((T, Order), (T, Order)) {
        let (a, b) = (self.interval.a(), self.interval.b());
        match self.direction {
            Direction::Leftward => ((a, self.orders.left), (b, self.orders.right)),
            Direction::Rightward => ((b, self.orders.right), (a, self.orders.left)),
        }
    }
}

fn covers<T: Scalar>(outer: Interval<T>, inner: Interval<T>) -> Result<()> {
    let tol = T::lit(1e-12) * (T::one() + inner.a().abs().max(inner.b().abs()));
    if outer.a() <= inner.a() + tol && outer.b() >= inner.b() - tol {
        Ok(())
    } else {
        Err(outer.mismatch(&inner))
    }
}

/// The blended function on the operator's interval.
pub fn apply<T: Scalar>(op: &BlendOperator<T>, f: &SmoothFunction<T>) -> Result<SmoothFunction<T>> {
    covers(f.domain(), op.interval)?;
    let f = f.restrict(op.interval);
    match &op.kind {
        BlendKind::Hermite => {
            let (l, r) = op.orders.require_finite("Hermite blend operators need finite orders")?;
            let (a, b) = (op.interval.a(), op.interval.b());
            let spec = match op.direction {
                Direction::Leftward => HermiteSpec::new(
                    EndpointJet::new(a, vec![T::zero(); l as usize + 1]),
                    EndpointJet::of(&f, b, r as usize)?,
                )?,
                Direction::Rightward => HermiteSpec::new(
                    EndpointJet::of(&f, a, l as usize)?,
                    EndpointJet::new(b, vec![T::zero(); r as usize + 1]),
                )?,
            };
            Ok(hermite_interpolant(&spec).with_label(format!("B_{}({})", op.direction, f.label())))
        }
        BlendKind::Multiplicative { carrier } => product(carrier, &f),
        BlendKind::Complement(inner) => {
            let blended = apply(inner, &f)?;
            lincomb(&[(T::one(), f), (-T::one(), blended)])
        }
    }
}

/// `I - 𝓑`, with the direction reversed. Complementing a complement
/// returns the original operator.
pub fn complement<T: Scalar>(op: &BlendOperator<T>) -> BlendOperator<T> {
    if let BlendKind::Complement(inner) = &op.kind {
        return (**inner).clone();
    }
    BlendOperator {
        direction: op.direction.reversed(),
        orders: op.orders,
        interval: op.interval,
        kind: BlendKind::Complement(Box::new(op.clone())),
    }
}

/// `max |𝓑(αf + βg) - α𝓑f - β𝓑g|` on a uniform grid over the operator's
/// interval.
pub fn linearity_check<T: Scalar>(
    op: &BlendOperator<T>,
    f: &SmoothFunction<T>,
    g: &SmoothFunction<T>,
    alpha: T,
    beta: T,
    grid: usize,
) -> Result<T> {
    let (f, g) = (f.restrict(op.interval), g.restrict(op.interval));
    let combined = lincomb(&[(alpha, f.clone()), (beta, g.clone())])?;
    let lhs = apply(op, &combined)?;
    let (bf, bg) = (apply(op, &f)?, apply(op, &g)?);
    Ok(op
        .interval
        .grid(grid.max(2))
        .into_iter()
        .map(|x| (lhs.value(x) - alpha * bf.value(x) - beta * bg.value(x)).abs())
        .fold(T::zero(), T::max))
}

/// Endpoint pattern of `𝓑(f)`: derivatives `0..=k` vanish at the zeroed end
/// and match `f`'s at the reproduced end. Deviations are measured twice —
/// from jets, and from one-sided finite differences of the values.
#[derive(Debug, Clone, PartialEq)]
pub struct BlendReport<T> {
    pub operator: String,
    pub direction: Direction,
    pub check_order: usize,
    pub zero_end: T,
    pub keep_end: T,
    /// Raw derivatives of `𝓑(f)` at the zeroed end.
    pub zero_jet: Vec<T>,
    /// Raw derivatives of `𝓑(f)` and of `f` at the reproduced end.
    pub keep_jet: Vec<T>,
    pub target_jet: Vec<T>,
    pub jet_tolerance: Vec<f64>,
    /// `|FD(𝓑f)|` at the zeroed end.
    pub fd_zero: Vec<T>,
    /// `|FD(𝓑f - f)|` at the reproduced end.
    pub fd_keep: Vec<T>,
    pub fd_tolerance: Vec<f64>,
}

impl<T: Scalar> BlendReport<T> {
    pub fn jet_deviation(&self) -> (Vec<T>, Vec<T>) {
        let zero = self.zero_jet.iter().map(|v| v.abs()).collect();
        let keep = self
            .keep_jet
            .iter()
            .zip(&self.target_jet)
            .map(|(a, b)| (*a - *b).abs())
            .collect();
        (zero, keep)
    }

    pub fn jet_passed(&self) -> bool {
        let (z, k) = self.jet_deviation();
        within(&z, &self.jet_tolerance) && within(&k, &self.jet_tolerance)
    }

    pub fn fd_passed(&self) -> bool {
        within(&self.fd_zero, &self.fd_tolerance) && within(&self.fd_keep, &self.fd_tolerance)
    }

    pub fn passed(&self) -> bool {
        self.jet_passed() && self.fd_passed()
    }
}

fn within<T: Scalar>(v: &[T], tol: &[f64]) -> bool {
    v.iter()
        .zip(tol)
        .all(|(d, &t)| d.to_f64().is_some_and(|d| d.abs() <= t))
}

/// Checks the endpoint pattern of `apply(op, f)` up to `check_order`.
///
/// Tolerances scale with the size of the data: order `j` uses
/// `base · M · max(1, L⁻ʲ) · 2ʲ`, where `M` bounds `|f^(i)|` (`i ≤ j`) at
/// both ends and `L` is the interval length; `base` is [`JET_TOL`] for jets
/// and the finite-difference schedule for differences.
pub fn verify_blend<T: Scalar>(
    op: &BlendOperator<T>,
    f: &SmoothFunction<T>,
    check_order: usize,
) -> Result<BlendReport<T>> {
    let ((zero_end, zero_order), (keep_end, keep_order)) = op.ends();
    for (o, which) in [(zero_order, "zeroed"), (keep_order, "reproduced")] {
        if !o.covers(check_order as u32) {
            return Err(Error::InvalidArgument(format!(
                "check order {check_order} exceeds the operator's {which}-end order {o}"
            )));
        }
    }
    let blended = apply(op, f)?;
    let k = check_order;
    let zero_jet = blended.derivatives(zero_end, k)?;
    let keep_jet = blended.derivatives(keep_end, k)?;
    let target_jet = f.derivatives(keep_end, k)?;
    let f_zero = f.derivatives(zero_end, k)?;

    let len = op.interval.length().to_f64().unwrap_or(1.0);
    let mut magnitude = 1.0f64;
    let scale: Vec<f64> = (0..=k)
        .map(|j| {
            let here = target_jet[j].abs().max(f_zero[j].abs()).to_f64().unwrap_or(f64::INFINITY);
            magnitude = magnitude.max(here);
            magnitude * len.powi(-(j as i32)).max(1.0) * 2f64.powi(j as i32)
        })
        .collect();
    let jet_tolerance = scale.iter().map(|s| JET_TOL * s).collect();

    let ctx = op.fd_context();
    let fd_tolerance_v = scale
        .iter()
        .enumerate()
        .map(|(j, s)| fd_tolerance(j, ctx) * s)
        .collect();
    let h_scale = op.interval.length();
    let b = blended.clone();
    let value = move |x: T| b.value(x);
    let (fd_z, _) = finite_difference_jet(&value, op.interval, zero_end, k, h_scale)?;
    let (b2, f2) = (blended.clone(), f.clone());
    let diff = move |x: T| b2.value(x) - f2.value(x);
    let (fd_k, _) = finite_difference_jet(&diff, op.interval, keep_end, k, h_scale)?;

    Ok(BlendReport {
        operator: op.kind_name(),
        direction: op.direction,
        check_order,
        zero_end,
        keep_end,
        zero_jet,
        keep_jet,
        target_jet,
        jet_tolerance,
        fd_zero: fd_z.into_iter().map(|v| v.abs()).collect(),
        fd_keep: fd_k.into_iter().map(|v| v.abs()).collect(),
        fd_tolerance: fd_tolerance_v,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::step_functions::{beta_step_lr, rational_step_lr, trig_step};

    fn unit() -> Interval<f64> {
        Interval::unit()
    }

    #[test]
    fn hermite_leftward_zero_orders_on_one() {
        let op = BlendOperator::hermite(Direction::Leftward, StepOrders::finite(0, 0), unit()).unwrap();
        let out = apply(&op, &SmoothFunction::constant(unit(), 1.0)).unwrap();
        for &x in &[0.0, 0.25, 0.8, 1.0] {
            assert!((out.value(x) - x).abs() < 1e-15);
        }
    }

    #[test]
    fn hermite_leftward_first_order_on_identity() {
        let op = BlendOperator::hermite(Direction::Leftward, StepOrders::finite(1, 1), unit()).unwrap();
        let out = apply(&op, &SmoothFunction::identity(unit())).unwrap();
        // g(1) B_{1,1}(x) + g'(1)(x-1) B_{1,0}(x) = 3x²-2x³ + (x-1)x² = 2x² - x³
        for &x in &[0.1, 0.5, 0.9] {
            assert!((out.value(x) - (2.0 * x * x - x * x * x)).abs() < 1e-15);
        }
        assert!((out.value(0.5) - 0.375).abs() < 1e-15);
    }

    #[test]
    fn multiplicative_flattens_demo_function() {
        let d = Interval::new(2.0f64, 4.0).unwrap();
        let op = BlendOperator::from_step(Direction::Leftward, &rational_step_lr(4, 2), d).unwrap();
        let f = SmoothFunction::blend_demo(d);
        let out = apply(&op, &f).unwrap();
        assert_eq!(out.value(2.0), 0.0);
        assert!((out.value(4.0) - f.value(4.0)).abs() < 1e-15f64);
        assert!(verify_blend(&op, &f, 2).unwrap().passed());
    }

    #[test]
    fn complement_cases() {
        let op = BlendOperator::hermite(Direction::Leftward, StepOrders::finite(0, 0), unit()).unwrap();
        let c = complement(&op);
        assert_eq!(c.direction(), Direction::Rightward);
        let out = apply(&c, &SmoothFunction::constant(unit(), 1.0)).unwrap();
        assert!((out.value(0.3) - 0.7).abs() < 1e-15);

        let f = SmoothFunction::sine(unit(), 1.0, 3.0, 0.0);
        let cc = complement(&c);
        let (a, b) = (apply(&cc, &f).unwrap(), apply(&op, &f).unwrap());
        for x in unit().grid(33) {
            assert!((a.value(x) - b.value(x)).abs() < 1e-14);
        }

        let t = trig_step::<f64>(1).unwrap();
        let left = BlendOperator::from_step(Direction::Leftward, &t, unit()).unwrap();
        let right = BlendOperator::from_step(Direction::Rightward, &t, unit()).unwrap();
        let (p, q) = (apply(&complement(&left), &f).unwrap(), apply(&right, &f).unwrap());
        for x in unit().grid(101) {
            assert!((p.value(x) - q.value(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn linearity() {
        let f = SmoothFunction::polynomial(unit(), vec![0.3, -1.0, 2.0, 0.5]);
        let g = SmoothFunction::polynomial(unit(), vec![-0.2, 0.4, 0.0, -1.5, 0.7]);
        let op = BlendOperator::hermite(Direction::Leftward, StepOrders::finite(2, 2), unit()).unwrap();
        assert_eq!(linearity_check(&op, &f, &g, 1.0, 0.0, 64).unwrap(), 0.0);
        assert!(linearity_check(&op, &f, &g, 2.0, -3.0, 64).unwrap() < 1e-11);

        let op = BlendOperator::from_step(Direction::Leftward, &trig_step(2).unwrap(), unit()).unwrap();
        let s = SmoothFunction::sine(unit(), 1.0, 1.0, 0.0);
        let e = SmoothFunction::exponential(unit(), 1.0, 1.0);
        assert!(linearity_check(&op, &s, &e, 2.0, -3.0, 64).unwrap() < 1e-12);
    }

    #[test]
    fn zero_in_zero_out() {
        let op = BlendOperator::hermite(Direction::Rightward, StepOrders::finite(2, 3), unit()).unwrap();
        let r = verify_blend(&op, &SmoothFunction::zero(unit()), 2).unwrap();
        assert!(r.zero_jet.iter().chain(&r.keep_jet).all(|v| *v == 0.0));
        assert!(r.passed());
    }

    #[test]
    fn bad_carriers_rejected() {
        let b = beta_step_lr::<f64>(1, 1);
        assert!(BlendOperator::multiplicative(Direction::Rightward, StepOrders::finite(1, 1), b.clone()).is_err());
        assert!(BlendOperator::multiplicative(Direction::Leftward, StepOrders::finite(2, 1), b.clone()).is_err());
        assert!(BlendOperator::multiplicative(Direction::Leftward, StepOrders::finite(1, 1), b).is_ok());
        assert!(BlendOperator::<f64>::hermite(Direction::Leftward, StepOrders::UNBOUNDED, unit()).is_err());
    }

    #[test]
    fn check_order_above_declared_is_rejected() {
        let op = BlendOperator::hermite(Direction::Leftward, StepOrders::finite(1, 3), unit()).unwrap();
        assert!(verify_blend(&op, &SmoothFunction::identity(unit()), 2).is_err());
    }
}
