//! Smooth transitions
//!
//! ```text
//!        ⎧ f(x)    a  ≤ x < a₀
//! h(x) = ⎨ h₀(x)   a₀ ≤ x ≤ b₀
//!        ⎩ g(x)    b₀ < x ≤ b
//! ```
//!
//! with the core `h₀` matching `f` to order `ℓ` at `a₀` and `g` to order `r`
//! at `b₀`. The core comes from a pair of blend operators
//! (`h₀ = 𝓑_R f + 𝓑_L g`), a single operator and its complement, or the
//! two-point Hermite interpolant.

use std::fmt;

use crate::error::{Error, Result};
use crate::flat_ends::lincomb;
use crate::function::{Interval, SmoothFunction, StepOrders};
use crate::hermite::{hermite_interpolant, EndpointJet, HermiteSpec};
use crate::jets::Jet;
use crate::numerics::finite_diff::{finite_difference_jet, modelled_truncation, FdContext, MAX_FD_ORDER};
use crate::numerics::fd_tolerance;
use crate::operators::{apply, complement, BlendOperator, Direction};
use crate::scalar::Scalar;

/// How the core was built, for reports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    Blends { leftward: String, rightward: String },
    Single { operator: String },
    Hermite,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Blends { leftward, rightward } => {
                write!(f, "blends(L = {leftward}, R = {rightward})")
            }
            Provenance::Single { operator } => write!(f, "single({operator})"),
            Provenance::Hermite => f.write_str("hermite"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct PiecewiseTransition<T: Scalar> {
    outer: Interval<T>,
    inner: Interval<T>,
    left_branch: SmoothFunction<T>,
    core: SmoothFunction<T>,
    right_branch: SmoothFunction<T>,
    orders: StepOrders,
    provenance: Provenance,
}

impl<T: Scalar> PiecewiseTransition<T> {
    pub fn outer(&self) -> Interval<T> {
        self.outer
    }

    pub fn inner(&self) -> Interval<T> {
        self.inner
    }

    pub fn left_branch(&self) -> &SmoothFunction<T> {
        &self.left_branch
    }

    pub fn core(&self) -> &SmoothFunction<T> {
        &self.core
    }

    pub fn right_branch(&self) -> &SmoothFunction<T> {
        &self.right_branch
    }

    pub fn orders(&self) -> StepOrders {
        self.orders
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// The branch owning `x`; the seams belong to the core.
    pub fn branch_at(&self, x: T) -> &SmoothFunction<T> {
        if x < self.inner.a() {
            &self.left_branch
        } else if x > self.inner.b() {
            &self.right_branch
        } else {
            &self.core
        }
    }

    pub fn value(&self, x: T) -> T {
        self.branch_at(x).value(x)
    }

    pub fn jet(&self, x: T, order: usize) -> Result<Jet<T>> {
        self.branch_at(x).jet(x, order)
    }

    /// `h` as a single handle on the outer interval.
    pub fn to_function(&self) -> SmoothFunction<T> {
        let (t1, t2) = (self.clone(), self.clone());
        SmoothFunction::new(
            self.outer,
            StepOrders::NONE,
            format!("transition[{}]", self.provenance),
            move |x, k| t1.branch_at(x).jet_unchecked(x, k),
        )
        .with_value_fn(move |x| t2.value(x))
    }
}

/// Checks `a < a₀ < b₀ < b` and that the branches cover `[a, b₀]` and
/// `[a₀, b]`; returns the outer interval.
fn layout<T: Scalar>(
    inner: Interval<T>,
    f: &SmoothFunction<T>,
    g: &SmoothFunction<T>,
) -> Result<Interval<T>> {
    let outer = Interval::new(f.domain().a(), g.domain().b())?;
    if !(outer.a() < inner.a() && inner.b() < outer.b()) {
        return Err(Error::InvalidArgument(format!(
            "need a < a₀ < b₀ < b, got outer {outer} and inner {inner}"
        )));
    }
    if f.domain().b() < inner.b() {
        return Err(Error::InvalidArgument(format!(
            "left branch on {} does not reach b₀ = {}",
            f.domain(),
            inner.b()
        )));
    }
    if g.domain().a() > inner.a() {
        return Err(Error::InvalidArgument(format!(
            "right branch on {} does not reach a₀ = {}",
            g.domain(),
            inner.a()
        )));
    }
    Ok(outer)
}

/// `h₀ = 𝓑_R(f|[a₀,b₀]) + 𝓑_L(g|[a₀,b₀])`.
pub fn transition_from_blends<T: Scalar>(
    leftward: &BlendOperator<T>,
    rightward: &BlendOperator<T>,
    f: &SmoothFunction<T>,
    g: &SmoothFunction<T>,
) -> Result<PiecewiseTransition<T>> {
    if leftward.direction() != Direction::Leftward || rightward.direction() != Direction::Rightward {
        return Err(Error::OperatorMismatch(format!(
            "expected a leftward and a rightward operator, got {} and {}",
            leftward.direction(),
            rightward.direction()
        )));
    }
    let inner = leftward.interval();
    inner
        .require_same(&rightward.interval())
        .map_err(|_| Error::OperatorMismatch("operators act on different intervals".into()))?;
    if leftward.orders() != rightward.orders() {
        return Err(Error::OperatorMismatch(format!(
            "operator orders differ: {} vs {}",
            leftward.orders(),
            rightward.orders()
        )));
    }
    let outer = layout(inner, f, g)?;
    let f0 = apply(rightward, f)?;
    let g0 = apply(leftward, g)?;
    let core = lincomb(&[(T::one(), f0), (T::one(), g0)])?.with_label("core");
    Ok(PiecewiseTransition {
        outer,
        inner,
        left_branch: f.clone(),
        core,
        right_branch: g.clone(),
        orders: leftward.orders(),
        provenance: Provenance::Blends {
            leftward: leftward.kind_name(),
            rightward: rightward.kind_name(),
        },
    })
}

/// `h₀ = (I - 𝓑)(f) + 𝓑(g)` for a leftward `𝓑`.
pub fn transition_from_single<T: Scalar>(
    leftward: &BlendOperator<T>,
    f: &SmoothFunction<T>,
    g: &SmoothFunction<T>,
) -> Result<PiecewiseTransition<T>> {
    let mut t = transition_from_blends(leftward, &complement(leftward), f, g)?;
    t.provenance = Provenance::Single {
        operator: leftward.kind_name(),
    };
    Ok(t)
}

/// Core from the Hermite interpolant of `f`'s jet at `a₀` and `g`'s at `b₀`.
pub fn transition_hermite<T: Scalar>(
    f: &SmoothFunction<T>,
    g: &SmoothFunction<T>,
    orders: StepOrders,
    inner: Interval<T>,
) -> Result<PiecewiseTransition<T>> {
    let (l, r) = orders.require_finite("Hermite transitions need finite orders")?;
    let outer = layout(inner, f, g)?;
    let spec = HermiteSpec::new(
        EndpointJet::of(f, inner.a(), l as usize)?,
        EndpointJet::of(g, inner.b(), r as usize)?,
    )?;
    Ok(PiecewiseTransition {
        outer,
        inner,
        left_branch: f.clone(),
        core: hermite_interpolant(&spec),
        right_branch: g.clone(),
        orders,
        provenance: Provenance::Hermite,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Seam {
    Left,
    Right,
}

impl fmt::Display for Seam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Seam::Left => "a0",
            Seam::Right => "b0",
        })
    }
}

/// Derivative mismatch of order `order` across one seam.
#[derive(Debug, Clone, PartialEq)]
pub struct SeamRow<T> {
    pub seam: Seam,
    pub order: usize,
    /// `|core^(j) - branch^(j)|` from the handles' jets.
    pub jet_mismatch: T,
    /// The same from one-sided finite differences on each side.
    pub fd_mismatch: T,
    /// Schedule tolerance for `fd_mismatch`, scaled by the data.
    pub fd_tolerance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeamReport<T> {
    pub check_order: usize,
    pub rows: Vec<SeamRow<T>>,
}

impl<T: Scalar> SeamReport<T> {
    pub fn max_jet_mismatch(&self) -> T {
        self.rows.iter().fold(T::zero(), |m, r| m.max(r.jet_mismatch))
    }

    pub fn fd_passed(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.fd_mismatch.to_f64().is_some_and(|v| v <= r.fd_tolerance))
    }

    /// Rows of a given order.
    pub fn at_order(&self, order: usize) -> impl Iterator<Item = &SeamRow<T>> {
        self.rows.iter().filter(move |r| r.order == order)
    }
}

/// Mismatches at `a₀` and `b₀` for derivative orders `0..=check_order`.
/// Finite differences look only at each branch's own side of the seam; their
/// tolerance is the one-sided schedule scaled by the data, plus twice the
/// modelled truncation error of both estimates.
pub fn seam_report<T: Scalar>(t: &PiecewiseTransition<T>, check_order: usize) -> Result<SeamReport<T>> {
    if check_order > MAX_FD_ORDER {
        return Err(Error::InvalidArgument(format!(
            "seam checks support orders up to {MAX_FD_ORDER}, got {check_order}"
        )));
    }
    let k = check_order;
    let (a, a0, b0, b) = (t.outer.a(), t.inner.a(), t.inner.b(), t.outer.b());
    let left_side = Interval::new(a, a0)?;
    let right_side = Interval::new(b0, b)?;
    let scale = left_side
        .length()
        .min(right_side.length())
        .min(t.inner.length());
    let mut rows = Vec::new();
    for (seam, x, branch, branch_side) in [
        (Seam::Left, a0, &t.left_branch, left_side),
        (Seam::Right, b0, &t.right_branch, right_side),
    ] {
        let core_jet = t.core.derivatives(x, k)?;
        let branch_jet = branch.derivatives(x, k)?;
        let cv = |y: T| t.core.value(y);
        let bv = |y: T| branch.value(y);
        let (core_fd, core_st) = finite_difference_jet(&cv, t.inner, x, k, scale)?;
        let (branch_fd, branch_st) = finite_difference_jet(&bv, branch_side, x, k, scale)?;
        let sc = scale.to_f64().unwrap_or(1.0);
        let mut magnitude = 1.0f64;
        for j in 0..=k {
            magnitude = magnitude.max(branch_jet[j].abs().to_f64().unwrap_or(f64::INFINITY));
            let s = sc.powi(-(j as i32)).max(1.0);
            let truncation = modelled_truncation(&t.core, x, j, core_st, sc)
                + modelled_truncation(branch, x, j, branch_st, sc);
            rows.push(SeamRow {
                seam,
                order: j,
                jet_mismatch: (core_jet[j] - branch_jet[j]).abs(),
                fd_mismatch: (core_fd[j] - branch_fd[j]).abs(),
                fd_tolerance: fd_tolerance(j, FdContext::OneSided) * magnitude * s + 2.0 * truncation,
            });
        }
    }
    Ok(SeamReport {
        check_order,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::step_functions::beta_step_lr;

    fn iv(a: f64, b: f64) -> Interval<f64> {
        Interval::new(a, b).unwrap()
    }

    #[test]
    fn zero_branches_give_zero() {
        let outer = iv(-1.0, 2.0);
        let inner = iv(0.0, 1.0);
        let op = BlendOperator::hermite(Direction::Leftward, StepOrders::finite(2, 2), inner).unwrap();
        let z = SmoothFunction::zero(outer);
        let t = transition_from_single(&op, &z, &z).unwrap();
        for x in outer.grid(31) {
            assert_eq!(t.value(x), 0.0);
        }
        let rep = seam_report(&t, 2).unwrap();
        assert!(rep.rows.iter().all(|r| r.jet_mismatch == 0.0 && r.fd_mismatch == 0.0));
    }

    #[test]
    fn shared_constant_is_preserved() {
        let outer = iv(-1.0, 2.0);
        let inner = iv(0.0, 1.0);
        let c = SmoothFunction::constant(outer, 2.5);
        let bl = BlendOperator::hermite(Direction::Leftward, StepOrders::finite(3, 1), inner).unwrap();
        let br = BlendOperator::hermite(Direction::Rightward, StepOrders::finite(3, 1), inner).unwrap();
        let t = transition_from_blends(&bl, &br, &c, &c).unwrap();
        for x in outer.grid(301) {
            assert!((t.value(x) - 2.5).abs() < 1e-12);
        }
    }

    #[test]
    fn single_matches_blends_with_complement() {
        let outer = iv(-1.0, 2.0);
        let inner = iv(0.0, 1.0);
        let f = SmoothFunction::identity(outer);
        let g = SmoothFunction::polynomial(outer, vec![2.0, -1.0]);
        let op = BlendOperator::hermite(Direction::Leftward, StepOrders::finite(1, 1), inner).unwrap();
        let t1 = transition_from_single(&op, &f, &g).unwrap();
        let t2 = transition_from_blends(&op, &complement(&op), &f, &g).unwrap();
        for x in outer.grid(301) {
            assert!((t1.value(x) - t2.value(x)).abs() < 1e-14);
        }
        let rep = seam_report(&t1, 1).unwrap();
        assert!(rep.max_jet_mismatch() < 1e-9);
        assert!(rep.fd_passed(), "{rep:?}");
    }

    #[test]
    fn step_core_from_constants() {
        let outer = iv(-1.0, 2.0);
        let inner = iv(0.0, 1.0);
        let sigma = beta_step_lr::<f64>(2, 3);
        let op = BlendOperator::from_step(Direction::Leftward, &sigma, inner).unwrap();
        let t = transition_from_single(&op, &SmoothFunction::zero(outer), &SmoothFunction::constant(outer, 1.0)).unwrap();
        for x in inner.grid(41) {
            assert!((t.value(x) - sigma.value(x)).abs() < 1e-15);
        }
        let h = transition_hermite(
            &SmoothFunction::zero(outer),
            &SmoothFunction::constant(outer, 1.0),
            StepOrders::finite(2, 3),
            inner,
        )
        .unwrap();
        for x in inner.grid(41) {
            assert!((h.value(x) - sigma.value(x)).abs() < 1e-14);
        }
    }

    #[test]
    fn branches_are_exact() {
        let outer = iv(0.0, 3.0);
        let inner = iv(1.0, 2.0);
        let f = SmoothFunction::sine(outer, 1.0, 1.0, 0.0);
        let g = SmoothFunction::cosine(outer, 1.0, 1.0, 0.0);
        let t = transition_hermite(&f, &g, StepOrders::finite(2, 2), inner).unwrap();
        for x in [0.0, 0.5, 0.999] {
            assert_eq!(t.value(x), x.sin());
        }
        for x in [2.001, 2.5, 3.0] {
            assert_eq!(t.value(x), x.cos());
        }
        let rep = seam_report(&t, 2).unwrap();
        assert!(rep.max_jet_mismatch() < 1e-12);
        assert!(rep.fd_passed());
        // one order past the declared one: generic data jump
        let sharp = seam_report(&t, 3).unwrap();
        assert!(sharp.at_order(3).all(|r| r.jet_mismatch > 1e-2));
    }

    #[test]
    fn polynomial_reproduced() {
        let outer = iv(-2.0, 2.0);
        let inner = iv(-0.5, 0.7);
        let p = SmoothFunction::polynomial(outer, vec![1.0, -2.0, 0.5, 0.25, -0.1]);
        let t = transition_hermite(&p, &p, StepOrders::finite(2, 2), inner).unwrap();
        for x in outer.grid(101) {
            assert!((t.value(x) - p.value(x)).abs() < 1e-13);
        }
    }

    #[test]
    fn layout_errors() {
        let inner = iv(0.0, 1.0);
        let short = SmoothFunction::zero(iv(0.0, 2.0));
        let ok = SmoothFunction::zero(iv(-1.0, 2.0));
        assert!(transition_hermite(&short, &ok, StepOrders::finite(1, 1), inner).is_err());
        let bl = BlendOperator::hermite(Direction::Leftward, StepOrders::finite(1, 1), inner).unwrap();
        assert!(transition_from_blends(&bl, &bl, &ok, &ok).is_err());
    }
}
