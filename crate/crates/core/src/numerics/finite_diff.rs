//! Finite-difference derivative estimates and the tolerance schedule used to
//! judge them.
//!
//! Weights come from Fornberg's recursion, so any node set works. Interior
//! points use the second-order central stencil; endpoints use a one-sided
//! stencil of accuracy [`ONE_SIDED_ACCURACY`]. The step for derivative
//! order `k` is `h_k = scale * eps^(1/(k+2))`.

use crate::error::{Error, Result};
use crate::function::{Interval, SmoothFunction};
use crate::scalar::Scalar;

/// Accuracy order of the one-sided stencils.
pub const ONE_SIDED_ACCURACY: usize = 4;

/// Highest derivative order supported by [`finite_difference_jet`].
pub const MAX_FD_ORDER: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stencil {
    Central,
    Forward,
    Backward,
}

impl Stencil {
    pub fn is_one_sided(self) -> bool {
        !matches!(self, Stencil::Central)
    }

    /// Integer node offsets used for derivative order `k >= 1`.
    pub fn offsets(self, k: usize) -> Vec<i64> {
        match self {
            Stencil::Central => {
                let s = k.div_ceil(2) as i64;
                (-s..=s).collect()
            }
            Stencil::Forward => (0..(k + ONE_SIDED_ACCURACY) as i64).collect(),
            Stencil::Backward => (0..(k + ONE_SIDED_ACCURACY) as i64).map(|i| -i).collect(),
        }
    }
}

/// Fornberg weights: `w[d][j]` approximates the `d`-th derivative at `z`
/// from values at `nodes[j]`, for `d = 0..=max_deriv`.
pub fn fornberg_weights<T: Scalar>(z: T, nodes: &[T], max_deriv: usize) -> Vec<Vec<T>> {
    let n = nodes.len();
    let m = max_deriv;
    let mut c = vec![vec![T::zero(); n]; m + 1];
    let mut c1 = T::one();
    let mut c4 = nodes[0] - z;
    c[0][0] = T::one();
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = T::one();
        let c5 = c4;
        c4 = nodes[i] - z;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    let kk = T::from_usize_lossy(k);
                    c[k][i] = c1 * (kk * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                let kk = T::from_usize_lossy(k);
                c[k][j] = (c4 * c[k][j] - kk * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Step size for derivative order `k`.
pub fn step_size<T: Scalar>(k: usize, scale: T) -> T {
    scale * T::epsilon().powf(T::one() / T::from_usize_lossy(k + 2))
}

/// Estimates `f^(k)(x)` for `k = 0..=order` with a fixed stencil shape.
pub fn fd_derivatives<T: Scalar>(
    f: &dyn Fn(T) -> T,
    x: T,
    order: usize,
    scale: T,
    stencil: Stencil,
) -> Vec<T> {
    let mut out = Vec::with_capacity(order + 1);
    out.push(f(x));
    for k in 1..=order {
        let h = step_size(k, scale);
        let offsets = stencil.offsets(k);
        let unit_nodes: Vec<T> = offsets.iter().map(|&o| T::from_i64(o).unwrap()).collect();
        let w = fornberg_weights(T::zero(), &unit_nodes, k);
        let hk = h.powi(k as i32);
        let mut terms: Vec<T> = offsets
            .iter()
            .zip(&w[k])
            .map(|(&o, &wk)| wk * f(x + T::from_i64(o).unwrap() * h))
            .collect();
        // Summing smallest-magnitude first trims cancellation error.
        terms.sort_by(|a, b| a.abs().partial_cmp(&b.abs()).unwrap_or(std::cmp::Ordering::Equal));
        out.push(terms.into_iter().sum::<T>() / hk);
    }
    out
}

/// Chooses the stencil for `x` in `domain`: central when it fits,
/// otherwise one-sided away from the nearer end.
pub fn choose_stencil<T: Scalar>(
    domain: Interval<T>,
    x: T,
    order: usize,
    scale: T,
) -> Result<Stencil> {
    let fits = |s: Stencil| {
        (1..=order).all(|k| {
            let h = step_size(k, scale);
            s.offsets(k).iter().all(|&o| {
                let p = x + T::from_i64(o).unwrap() * h;
                domain.contains(p)
            })
        })
    };
    if order == 0 || fits(Stencil::Central) {
        return Ok(Stencil::Central);
    }
    let prefer_forward = x - domain.a() <= domain.b() - x;
    let order_pref = if prefer_forward {
        [Stencil::Forward, Stencil::Backward]
    } else {
        [Stencil::Backward, Stencil::Forward]
    };
    for s in order_pref {
        if fits(s) {
            return Ok(s);
        }
    }
    Err(Error::StencilEscape {
        x: x.to_f64().unwrap_or(f64::NAN),
        step: step_size(order, scale).to_f64().unwrap_or(f64::NAN),
    })
}

/// Raw derivative estimates `f(x), f'(x), ..., f^(order)(x)` using a
/// stencil that stays inside `domain`.
pub fn finite_difference_jet<T: Scalar>(
    f: &dyn Fn(T) -> T,
    domain: Interval<T>,
    x: T,
    order: usize,
    scale: T,
) -> Result<(Vec<T>, Stencil)> {
    if order > MAX_FD_ORDER {
        return Err(Error::InvalidArgument(format!(
            "finite differences support orders up to {MAX_FD_ORDER}, got {order}"
        )));
    }
    if !(scale > T::zero()) {
        return Err(Error::InvalidArgument("scale must be positive".into()));
    }
    let stencil = choose_stencil(domain, x, order, scale)?;
    Ok((fd_derivatives(f, x, order, scale, stencil), stencil))
}

/// Modelled truncation error of the order-`k` estimate with `stencil`: the
/// leading two Taylor terms `Σ_i h^{p+i} |Σ_j w_j o_j^{k+p+i}| / (k+p+i)! ·
/// |f^{(k+p+i)}|`, where `p` is the stencil's accuracy and `next[i]` is
/// `|f^{(k+p+i)}|` near `x`.
pub fn truncation_bound(k: usize, stencil: Stencil, scale: f64, next: &[f64]) -> f64 {
    if k == 0 {
        return 0.0;
    }
    let p = stencil_accuracy(stencil);
    let offsets = stencil.offsets(k);
    let nodes: Vec<f64> = offsets.iter().map(|&o| o as f64).collect();
    let w = fornberg_weights(0.0, &nodes, k);
    let h = step_size(k, scale);
    next.iter()
        .enumerate()
        .map(|(i, &d)| {
            let n = k + p + i;
            let fact: f64 = (1..=n).map(|j| j as f64).product();
            let moment: f64 = nodes.iter().zip(&w[k]).map(|(o, wk)| wk * o.powi(n as i32)).sum();
            h.powi((p + i) as i32) * moment.abs() / fact * d
        })
        .sum()
}

/// [`truncation_bound`] for the handle `f` at `x`, with the derivatives
/// from its jet; zero when the handle cannot supply those orders.
pub fn modelled_truncation<T: Scalar>(f: &SmoothFunction<T>, x: T, k: usize, stencil: Stencil, scale: f64) -> f64 {
    let n = k + stencil_accuracy(stencil);
    match f.derivatives(x, n + 1) {
        Ok(d) => {
            let next: Vec<f64> = d[n..].iter().map(|v| v.abs().to_f64().unwrap_or(f64::INFINITY)).collect();
            truncation_bound(k, stencil, scale, &next)
        }
        Err(_) => 0.0,
    }
}

/// Accuracy order `p` of a stencil.
pub fn stencil_accuracy(stencil: Stencil) -> usize {
    match stencil {
        Stencil::Central => 2,
        _ => ONE_SIDED_ACCURACY,
    }
}

/// Which tolerance column a check belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FdContext {
    Interior,
    OneSided,
    /// One-sided checks on the expo-rational family.
    ExpoRational,
}

/// Tolerance for an order-`k` derivative check: `10^-(8-k)`, relaxed by
/// 100 for one-sided stencils and by 1000 for the expo-rational family.
pub fn fd_tolerance(k: usize, ctx: FdContext) -> f64 {
    let base = 10f64.powi(-(8 - k.min(MAX_FD_ORDER) as i32));
    match ctx {
        FdContext::Interior => base,
        FdContext::OneSided => base * 100.0,
        FdContext::ExpoRational => base * 1000.0,
    }
}
