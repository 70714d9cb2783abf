//! Algebra of functions with flat ends: products, linear combinations,
//! changes of interval, affine images, staircases, extension to the real
//! line, and the symmetry / flatness / monotonicity checks used to verify
//! them.
//!
//! Flatness orders are declared metadata. The combinators propagate them
//! conservatively (componentwise minimum); the checks here measure them.

use crate::error::{Error, Result};
use crate::function::{Interval, Order, SmoothFunction, StepOrders};
use crate::jets::Jet;
use crate::numerics::finite_diff::{finite_difference_jet, modelled_truncation, FdContext, MAX_FD_ORDER};
use crate::numerics::fd_tolerance;
use crate::scalar::Scalar;

/// Grid used for the range-containment precondition of
/// [`change_of_interval`].
pub const RANGE_GRID: usize = 1024;

/// Endpoint-mapping tolerance for compositions and staircases.
pub const ENDPOINT_TOL: f64 = 1e-12;

fn min_cap(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn with_cap<T: Scalar>(f: SmoothFunction<T>, cap: Option<usize>) -> SmoothFunction<T> {
    match cap {
        Some(k) => f.with_max_order(k),
        None => f,
    }
}

fn f64_of<T: Scalar>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Pointwise product `h·f`; flat orders are the componentwise minimum.
pub fn product<T: Scalar>(h: &SmoothFunction<T>, f: &SmoothFunction<T>) -> Result<SmoothFunction<T>> {
    h.domain().require_same(&f.domain())?;
    let (h1, f1) = (h.clone(), f.clone());
    let (h2, f2) = (h.clone(), f.clone());
    let out = SmoothFunction::new(
        h.domain(),
        h.flat_orders().min(f.flat_orders()),
        format!("({})*({})", h.label(), f.label()),
        move |x, k| &h1.jet_unchecked(x, k) * &f1.jet_unchecked(x, k),
    )
    .with_value_fn(move |x| h2.value(x) * f2.value(x));
    Ok(with_cap(out, min_cap(h.max_order(), f.max_order())))
}

/// `Σ cᵢ fᵢ`. Terms sharing an evaluator are merged first, so `f - f` is the
/// zero function with unbounded flatness.
pub fn lincomb<T: Scalar>(terms: &[(T, SmoothFunction<T>)]) -> Result<SmoothFunction<T>> {
    let first = terms
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty linear combination".into()))?;
    let domain = first.1.domain();
    let mut merged: Vec<(T, SmoothFunction<T>)> = Vec::new();
    for (c, f) in terms {
        domain.require_same(&f.domain())?;
        match merged.iter_mut().find(|(_, g)| g.same_evaluator(f)) {
            Some(slot) => slot.0 += *c,
            None => merged.push((*c, f.clone())),
        }
    }
    merged.retain(|(c, _)| *c != T::zero());
    if merged.is_empty() {
        return Ok(SmoothFunction::zero(domain));
    }
    let flat = merged
        .iter()
        .map(|(_, f)| f.flat_orders())
        .fold(StepOrders::UNBOUNDED, StepOrders::min);
    let cap = merged.iter().map(|(_, f)| f.max_order()).fold(None, min_cap);
    let label = merged
        .iter()
        .map(|(c, f)| format!("{c}*{}", f.label()))
        .collect::<Vec<_>>()
        .join(" + ");
    let for_jets = merged.clone();
    let out = SmoothFunction::new(domain, flat, label, move |x, k| {
        let mut acc = Jet::zero(x, k);
        for (c, f) in &for_jets {
            acc = &acc + &f.jet_unchecked(x, k).scale(*c);
        }
        acc
    })
    .with_value_fn(move |x| merged.iter().map(|(c, f)| *c * f.value(x)).sum());
    Ok(with_cap(out, cap))
}

/// `h ∘ f` for `h` on `[c, d]` and `f : [a, b] → [c, d]` with `f(a) = c`,
/// `f(b) = d`. Flat orders come from `h`.
pub fn change_of_interval<T: Scalar>(
    h: &SmoothFunction<T>,
    f: &SmoothFunction<T>,
) -> Result<SmoothFunction<T>> {
    let cd = h.domain();
    let ab = f.domain();
    let tol = T::lit(ENDPOINT_TOL) * (T::one() + cd.a().abs().max(cd.b().abs()));
    for (x, want, end) in [(ab.a(), cd.a(), "left"), (ab.b(), cd.b(), "right")] {
        let got = f.value(x);
        if !((got - want).abs() <= tol) {
            return Err(Error::EndpointMapping(format!(
                "{end} end: f({x}) = {got}, expected {want}"
            )));
        }
    }
    for x in ab.grid(RANGE_GRID) {
        let v = f.value(x);
        if !(v >= cd.a() - tol && v <= cd.b() + tol) {
            return Err(Error::RangeEscape {
                x: f64_of(x),
                value: f64_of(v),
                lo: f64_of(cd.a()),
                hi: f64_of(cd.b()),
            });
        }
    }
    let clamp = move |v: T| v.max(cd.a()).min(cd.b());
    let (h1, f1) = (h.clone(), f.clone());
    let (h2, f2) = (h.clone(), f.clone());
    let out = SmoothFunction::new(
        ab,
        h.flat_orders(),
        format!("{}∘{}", h.label(), f.label()),
        move |x, k| {
            let inner = f1.jet_unchecked(x, k);
            let outer = h1.jet_unchecked(clamp(inner.value()), k);
            outer.compose(&inner)
        },
    )
    .with_value_fn(move |x| h2.value(clamp(f2.value(x))));
    Ok(with_cap(out, min_cap(h.max_order(), f.max_order())))
}

/// Parameters of an affine image. The horizontal part maps `x` to
/// `horizontal_scale · (±x) + horizontal_shift` (the sign from
/// `reflect_y`, a reflection over the y-axis applied first); the vertical
/// part maps `v` to `vertical_scale · (±v) + vertical_shift` (`reflect_x`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineMap<T> {
    pub vertical_scale: T,
    pub vertical_shift: T,
    pub horizontal_scale: T,
    pub horizontal_shift: T,
    pub reflect_x: bool,
    pub reflect_y: bool,
}

impl<T: Scalar> Default for AffineMap<T> {
    fn default() -> Self {
        Self {
            vertical_scale: T::one(),
            vertical_shift: T::zero(),
            horizontal_scale: T::one(),
            horizontal_shift: T::zero(),
            reflect_x: false,
            reflect_y: false,
        }
    }
}

impl<T: Scalar> AffineMap<T> {
    pub fn vertical(scale: T, shift: T) -> Self {
        Self {
            vertical_scale: scale,
            vertical_shift: shift,
            ..Self::default()
        }
    }

    pub fn horizontal(scale: T, shift: T) -> Self {
        Self {
            horizontal_scale: scale,
            horizontal_shift: shift,
            ..Self::default()
        }
    }

    pub fn reflect_y() -> Self {
        Self {
            reflect_y: true,
            ..Self::default()
        }
    }
}

/// Affine image of `h`; flat orders are swapped under a y-axis reflection.
pub fn affine_transform<T: Scalar>(h: &SmoothFunction<T>, map: AffineMap<T>) -> Result<SmoothFunction<T>> {
    if !(map.horizontal_scale > T::zero()) || !map.horizontal_scale.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "horizontal scale must be positive, got {}",
            map.horizontal_scale
        )));
    }
    let sign = if map.reflect_y { -T::one() } else { T::one() };
    let (s, t) = (map.horizontal_scale, map.horizontal_shift);
    let d = h.domain();
    let (p, q) = if map.reflect_y {
        (-d.b(), -d.a())
    } else {
        (d.a(), d.b())
    };
    let domain = Interval::new(s * p + t, s * q + t)?;
    let flat = if map.reflect_y {
        h.flat_orders().swapped()
    } else {
        h.flat_orders()
    };
    let vs = if map.reflect_x {
        -map.vertical_scale
    } else {
        map.vertical_scale
    };
    let vshift = map.vertical_shift;
    // x(y) = sign · (y - t) / s
    let slope = sign / s;
    let intercept = -sign * t / s;
    let (h1, h2) = (h.clone(), h.clone());
    let out = SmoothFunction::new(domain, flat, format!("affine({})", h.label()), move |y, k| {
        let inner = Jet::affine(y, slope, intercept, k);
        h1.jet_unchecked(inner.value(), k)
            .compose(&inner)
            .scale(vs)
            .add_scalar(vshift)
    })
    .with_value_fn(move |y| vs * h2.value(slope * y + intercept) + vshift);
    Ok(with_cap(out, h.max_order()))
}

/// `s(x) = c + (d - c) σ((x - a) / (b - a))` on `source = [a, b]`,
/// increasing from `c` to `d` with the flat orders of `σ`.
pub fn to_staircase<T: Scalar>(
    sigma: &SmoothFunction<T>,
    source: Interval<T>,
    target: Interval<T>,
) -> Result<SmoothFunction<T>> {
    let tol = T::lit(ENDPOINT_TOL);
    let (s0, s1) = (sigma.value(T::zero()), sigma.value(T::one()));
    if !((s0).abs() <= tol && (s1 - T::one()).abs() <= tol) {
        return Err(Error::NotAStep(format!(
            "{}: σ(0) = {s0}, σ(1) = {s1}",
            sigma.label()
        )));
    }
    let (c, span) = (target.a(), target.length());
    let (g1, g2) = (sigma.clone(), sigma.clone());
    let out = SmoothFunction::new(
        source,
        sigma.flat_orders(),
        format!("staircase({})", sigma.label()),
        move |x, k| {
            let u = source.unit_jet(x, k);
            g1.jet_unchecked(u.value(), k)
                .compose(&u)
                .scale(span)
                .add_scalar(c)
        },
    )
    .with_value_fn(move |x| c + span * g2.value(source.to_unit(x)));
    Ok(with_cap(out, sigma.max_order()))
}

/// `σ̃`: 0 left of the step's domain, `σ` on it, 1 to the right.
#[derive(Debug, Clone)]
pub struct LineExtension<T: Scalar> {
    sigma: SmoothFunction<T>,
}

/// Derivative jumps of `σ̃` at the two seams; entry `j` is the jump of the
/// `j`-th derivative.
#[derive(Debug, Clone, PartialEq)]
pub struct SeamJumps<T> {
    pub left: Vec<T>,
    pub right: Vec<T>,
}

impl<T: Scalar> SeamJumps<T> {
    /// Largest `k` with all jumps of orders `0..=k` below `tol` at both
    /// seams, or `None` if even the values jump.
    pub fn continuity_order(&self, tol: T) -> Option<usize> {
        let ok = |j: usize| self.left[j].abs() < tol && self.right[j].abs() < tol;
        let n = self.left.len().min(self.right.len());
        (0..n).take_while(|&j| ok(j)).last()
    }
}

impl<T: Scalar> LineExtension<T> {
    pub fn value(&self, x: T) -> T {
        let d = self.sigma.domain();
        if x < d.a() {
            T::zero()
        } else if x > d.b() {
            T::one()
        } else {
            self.sigma.value(x)
        }
    }

    pub fn jet(&self, x: T, order: usize) -> Result<Jet<T>> {
        let d = self.sigma.domain();
        if x < d.a() {
            Ok(Jet::zero(x, order))
        } else if x > d.b() {
            Ok(Jet::constant(x, T::one(), order))
        } else {
            self.sigma.jet(x, order)
        }
    }

    pub fn step(&self) -> &SmoothFunction<T> {
        &self.sigma
    }

    /// Jumps between the constant branches and the jets of `σ` at its ends.
    pub fn seam_jumps(&self, order: usize) -> Result<SeamJumps<T>> {
        let d = self.sigma.domain();
        let left = self.sigma.derivatives(d.a(), order)?;
        let mut right = self.sigma.derivatives(d.b(), order)?;
        right[0] -= T::one();
        Ok(SeamJumps { left, right })
    }
}

/// Extends a step function to all of ℝ by constants.
pub fn extend_step_to_line<T: Scalar>(sigma: &SmoothFunction<T>) -> LineExtension<T> {
    LineExtension {
        sigma: sigma.clone(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryReport<T> {
    /// `max |u(x) + u(a+b-x) - u(a) - u(b)|` over the grid.
    pub max_defect: T,
    pub grid_size: usize,
}

/// Point-symmetry defect of `u` about the midpoint of its domain.
pub fn symmetry_check<T: Scalar>(u: &SmoothFunction<T>, grid_size: usize) -> Result<SymmetryReport<T>> {
    if grid_size < 3 {
        return Err(Error::InvalidArgument(format!(
            "symmetry grid needs at least 3 points, got {grid_size}"
        )));
    }
    let d = u.domain();
    let ends = u.value(d.a()) + u.value(d.b());
    let max_defect = d
        .grid(grid_size)
        .into_iter()
        .map(|x| (u.value(x) + u.value(d.a() + d.b() - x) - ends).abs())
        .fold(T::zero(), T::max);
    Ok(SymmetryReport {
        max_defect,
        grid_size,
    })
}

/// Tolerances used by [`validate_symmetric_step`].
pub const SYMMETRY_TOL: f64 = 1e-10;
pub const FLATNESS_TOL: f64 = 1e-8;
/// Symmetry grid and interior derivative grid sizes.
pub const SYMMETRY_GRID: usize = 1001;
pub const INTERIOR_GRID: usize = 99;

/// Outcome of checking a candidate symmetric step: symmetry, left flatness
/// and positive slope, and the right flatness those imply.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricStepReport<T> {
    pub check_order: usize,
    pub symmetry_defect: T,
    /// `|σ^(j)(0)|`, `j = 1..=check_order`.
    pub left_flatness: Vec<T>,
    pub min_interior_derivative: T,
    /// `|σ^(j)(1)|`, `j = 1..=check_order`.
    pub right_flatness: Vec<T>,
}

impl<T: Scalar> SymmetricStepReport<T> {
    pub fn hypotheses_hold(&self) -> bool {
        self.symmetry_defect < T::lit(SYMMETRY_TOL)
            && self.left_flatness.iter().all(|v| *v < T::lit(FLATNESS_TOL))
            && self.min_interior_derivative > T::zero()
    }

    pub fn right_flat(&self) -> bool {
        self.right_flatness.iter().all(|v| *v < T::lit(FLATNESS_TOL))
    }

    pub fn passed(&self) -> bool {
        self.hypotheses_hold() && self.right_flat()
    }
}

pub fn validate_symmetric_step<T: Scalar>(
    sigma: &SmoothFunction<T>,
    check_order: usize,
) -> Result<SymmetricStepReport<T>> {
    let d = sigma.domain();
    let symmetry_defect = symmetry_check(sigma, SYMMETRY_GRID)?.max_defect;
    let abs_tail = |x: T| -> Result<Vec<T>> {
        Ok(sigma.derivatives(x, check_order)?[1..]
            .iter()
            .map(|v| v.abs())
            .collect())
    };
    let left_flatness = abs_tail(d.a())?;
    let right_flatness = abs_tail(d.b())?;
    let grid = d.grid(INTERIOR_GRID + 2);
    let mut min_interior_derivative = T::infinity();
    for &x in &grid[1..=INTERIOR_GRID] {
        let v = sigma.jet(x, 1)?.derivative(1);
        min_interior_derivative = min_interior_derivative.min(v);
    }
    Ok(SymmetricStepReport {
        check_order,
        symmetry_defect,
        left_flatness,
        min_interior_derivative,
        right_flatness,
    })
}

/// Derivatives `1..=ℓ` at the left end and `1..=r` at the right end.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatnessReport<T> {
    pub left: Vec<T>,
    pub right: Vec<T>,
    /// Per-order tolerance (index `j - 1` for derivative `j`).
    pub tolerance: Vec<f64>,
}

impl<T: Scalar> FlatnessReport<T> {
    pub fn passed(&self) -> bool {
        let ok = |v: &[T]| {
            v.iter()
                .zip(&self.tolerance)
                .all(|(d, &t)| d.abs().to_f64().is_some_and(|d| d <= t))
        };
        ok(&self.left) && ok(&self.right)
    }

    pub fn max_defect(&self) -> T {
        self.left
            .iter()
            .chain(&self.right)
            .fold(T::zero(), |m, v| m.max(v.abs()))
    }
}

/// Flatness from the handle's own jets, against a single tolerance.
pub fn jet_flatness<T: Scalar>(f: &SmoothFunction<T>, left: usize, right: usize, tol: f64) -> Result<FlatnessReport<T>> {
    let d = f.domain();
    let l = f.derivatives(d.a(), left)?[1..].to_vec();
    let r = f.derivatives(d.b(), right)?[1..].to_vec();
    Ok(FlatnessReport {
        left: l,
        right: r,
        tolerance: vec![tol; left.max(right)],
    })
}

/// Flatness from one-sided finite differences of the values. The tolerance
/// for order `k` is the schedule (relative to the range, scaled by the
/// interval length) plus twice the larger modelled truncation error of the
/// two end estimates.
pub fn fd_flatness<T: Scalar>(
    f: &SmoothFunction<T>,
    left: usize,
    right: usize,
    ctx: FdContext,
) -> Result<FlatnessReport<T>> {
    let top = left.max(right);
    if top > MAX_FD_ORDER {
        return Err(Error::InvalidArgument(format!(
            "finite-difference flatness supports orders up to {MAX_FD_ORDER}, got {top}"
        )));
    }
    let d = f.domain();
    let scale = d.length();
    let value = |x: T| f.value(x);
    let (l, ls) = finite_difference_jet(&value, d, d.a(), left, scale)?;
    let (r, rs) = finite_difference_jet(&value, d, d.b(), right, scale)?;
    let sc = scale.to_f64().unwrap_or(1.0);
    let truncation = |k: usize| {
        let at_a = if k <= left { modelled_truncation(f, d.a(), k, ls, sc) } else { 0.0 };
        let at_b = if k <= right { modelled_truncation(f, d.b(), k, rs, sc) } else { 0.0 };
        2.0 * at_a.max(at_b)
    };
    // Tolerances are relative to the function's range.
    let range = (f.value(d.b()) - f.value(d.a())).abs().max(T::one());
    let range = range.to_f64().unwrap_or(1.0);
    Ok(FlatnessReport {
        left: l[1..].to_vec(),
        right: r[1..].to_vec(),
        tolerance: (1..=top)
            .map(|k| fd_tolerance(k, ctx) * range * sc.powi(-(k as i32)).max(1.0) + truncation(k))
            .collect(),
    })
}

/// Whether declared flat orders cover `(left, right)`.
pub fn declares_at_least<T: Scalar>(f: &SmoothFunction<T>, left: u32, right: u32) -> bool {
    f.flat_orders()
        .dominates(StepOrders::new(Order::Finite(left), Order::Finite(right)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityReport {
    pub grid_size: usize,
    /// Grid indices `i` with `v[i+1] < v[i]`, or an unexplained tie.
    pub violations: Vec<usize>,
    /// Ties where the increment predicted by `f′` is below a few ulps of
    /// `max(|value|, span)`: the function is flat below representable resolution there.
    pub saturated_ties: usize,
}

impl MonotonicityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Strict increase on a uniform grid. A tie is tolerated only when
/// `|f′(mid)|·h` (from the jet) is below four ulps of `max(|v|, span)`, i.e.
/// the true increment is below the resolution of the evaluation.
pub fn monotonicity_check<T: Scalar>(f: &SmoothFunction<T>, grid_size: usize) -> MonotonicityReport {
    let d = f.domain();
    let xs = d.grid(grid_size.max(2));
    let v: Vec<T> = xs.iter().map(|&x| f.value(x)).collect();
    let span = (v[v.len() - 1] - v[0]).abs();
    let mut violations = Vec::new();
    let mut saturated_ties = 0;
    for i in 0..v.len() - 1 {
        if v[i + 1] > v[i] {
            continue;
        }
        let saturated = v[i + 1] == v[i] && {
            let h = xs[i + 1] - xs[i];
            let mid = xs[i] + h / T::lit(2.0);
            let slope = f
                .derivatives(mid, 1)
                .map(|dv| dv[1].abs())
                .unwrap_or_else(|_| T::infinity());
            let ulp = T::epsilon() * v[i].abs().max(span);
            slope * h <= T::lit(4.0) * ulp
        };
        if saturated {
            saturated_ties += 1;
        } else {
            violations.push(i);
        }
    }
    MonotonicityReport {
        grid_size: xs.len(),
        violations,
        saturated_ties,
    }
}
