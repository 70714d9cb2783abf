//! Two-point Hermite interpolation written with Beta step functions:
//!
//! ```text
//! H(x) = Σ_{j≤ℓ} f^(j)(a₀)/j! (x-a₀)^j B_{r,ℓ-j}(1-ξ)
//!      + Σ_{k≤r} g^(k)(b₀)/k! (x-b₀)^k B_{ℓ,r-k}(ξ),     ξ = (x-a₀)/(b₀-a₀)
//! ```
//!
//! plus an independent solve of the confluent Vandermonde system, used to
//! cross-check the closed form.

use crate::error::{Error, Result};
use crate::function::{Interval, SmoothFunction, StepOrders};
use crate::jets::Jet;
use crate::scalar::Scalar;
use crate::step_functions::beta::beta_jet;

/// Largest `ℓ + r` the linear-system oracle accepts.
pub const ORACLE_GUARD: usize = 12;

/// Raw derivatives `f, f', …, f^(n)` at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct EndpointJet<T> {
    pub point: T,
    pub derivatives: Vec<T>,
}

impl<T: Scalar> EndpointJet<T> {
    /// Panics on an empty derivative list; see [`EndpointJet::try_new`].
    pub fn new(point: T, derivatives: Vec<T>) -> Self {
        Self::try_new(point, derivatives).expect("an endpoint jet needs at least its value")
    }

    pub fn try_new(point: T, derivatives: Vec<T>) -> Result<Self> {
        if derivatives.is_empty() {
            return Err(Error::InvalidArgument(
                "an endpoint jet needs at least its value".into(),
            ));
        }
        Ok(Self { point, derivatives })
    }

    /// Samples `f` at `point` up to `order`.
    pub fn of(f: &SmoothFunction<T>, point: T, order: usize) -> Result<Self> {
        Ok(Self::new(point, f.derivatives(point, order)?))
    }

    pub fn order(&self) -> usize {
        self.derivatives.len() - 1
    }

    pub fn derivatives(&self) -> &[T] {
        &self.derivatives
    }

    pub fn value(&self) -> T {
        self.derivatives[0]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HermiteSpec<T> {
    pub left: EndpointJet<T>,
    pub right: EndpointJet<T>,
    pub interval: Interval<T>,
}

impl<T: Scalar> HermiteSpec<T> {
    pub fn new(left: EndpointJet<T>, right: EndpointJet<T>) -> Result<Self> {
        let interval = Interval::new(left.point, right.point)?;
        Ok(Self {
            left,
            right,
            interval,
        })
    }

    /// `(ℓ, r)` from the jet lengths.
    pub fn orders(&self) -> (usize, usize) {
        (self.left.order(), self.right.order())
    }

    pub fn degree(&self) -> usize {
        self.left.order() + self.right.order() + 1
    }

    /// Normalized endpoint data in `ξ`: `f^(j) L^j / j!` and `g^(k) L^k / k!`.
    fn unit_data(&self) -> (Vec<T>, Vec<T>) {
        let len = self.interval.length();
        let scale = |d: &[T]| {
            let mut f = T::one();
            d.iter()
                .enumerate()
                .map(|(i, &v)| {
                    if i > 0 {
                        f = f * len / T::from_usize_lossy(i);
                    }
                    v * f
                })
                .collect::<Vec<T>>()
        };
        (scale(&self.left.derivatives), scale(&self.right.derivatives))
    }
}

/// `H` as a jet in whatever variable `xi` is a jet in.
fn hermite_in_xi<T: Scalar>(spec: &HermiteSpec<T>, xi: &Jet<T>) -> Jet<T> {
    let (l, r) = spec.orders();
    let (fa, gb) = spec.unit_data();
    let one_minus = (-xi).add_scalar(T::one());
    let xi_minus = xi.add_scalar(-T::one());
    let k = xi.order();
    let mut acc = Jet::zero(xi.base(), k);

    let mut p = Jet::constant(xi.base(), T::one(), k);
    for (j, &c) in fa.iter().enumerate() {
        let b = beta_jet(r as u32, (l - j) as u32, &one_minus);
        acc = &acc + &(&p * &b).scale(c);
        p = &p * xi;
    }
    let mut q = Jet::constant(xi.base(), T::one(), k);
    for (i, &c) in gb.iter().enumerate() {
        let b = beta_jet(l as u32, (r - i) as u32, xi);
        acc = &acc + &(&q * &b).scale(c);
        q = &q * &xi_minus;
    }
    acc
}

/// The Hermite interpolant of degree `ℓ + r + 1` as a smooth handle on the
/// spec interval.
pub fn hermite_interpolant<T: Scalar>(spec: &HermiteSpec<T>) -> SmoothFunction<T> {
    let s = spec.clone();
    let (l, r) = spec.orders();
    SmoothFunction::new(
        spec.interval,
        StepOrders::NONE,
        format!("H_{{{l},{r}}}"),
        move |x, k| hermite_in_xi(&s, &s.interval.unit_jet(x, k)),
    )
}

/// Monomial coefficients of `H` in `ξ`, lowest degree first.
pub fn hermite_unit_coefficients<T: Scalar>(spec: &HermiteSpec<T>) -> Vec<T> {
    let xi = Jet::variable(T::zero(), spec.degree());
    hermite_in_xi(spec, &xi).coeffs().to_vec()
}

/// Interpolating polynomial from the linear-system oracle, stored in the
/// centered variable `t = (x - mid) / half`.
#[derive(Debug, Clone, PartialEq)]
pub struct OraclePolynomial<T> {
    pub interval: Interval<T>,
    pub centered: Vec<T>,
}

impl<T: Scalar> OraclePolynomial<T> {
    pub fn value(&self, x: T) -> T {
        let half = self.interval.length() / T::lit(2.0);
        let t = (x - self.interval.midpoint()) / half;
        self.centered.iter().rev().fold(T::zero(), |acc, &c| acc * t + c)
    }

    /// Coefficients in `ξ = (t + 1) / 2`, i.e. after substituting `t = 2ξ - 1`.
    pub fn unit_coefficients(&self) -> Vec<T> {
        let n = self.centered.len();
        let mut out = vec![T::zero(); n];
        // Horner in polynomial arithmetic: out = out·(2ξ - 1) + c
        for &c in self.centered.iter().rev() {
            let mut next = vec![T::zero(); n];
            for i in 0..n {
                next[i] -= out[i];
                if i + 1 < n {
                    next[i + 1] += T::lit(2.0) * out[i];
                }
            }
            next[0] += c;
            out = next;
        }
        out
    }
}

/// Solves the confluent Vandermonde system for the interpolant.
pub fn hermite_oracle<T: Scalar>(spec: &HermiteSpec<T>) -> Result<OraclePolynomial<T>> {
    let (l, r) = spec.orders();
    if l + r > ORACLE_GUARD {
        return Err(Error::IllConditioned(l + r));
    }
    let n = l + r + 2;
    let half = spec.interval.length() / T::lit(2.0);
    let mut rows: Vec<Vec<T>> = Vec::with_capacity(n);
    let mut rhs: Vec<T> = Vec::with_capacity(n);
    for (t0, jet) in [(-T::one(), &spec.left), (T::one(), &spec.right)] {
        for (j, &d) in jet.derivatives.iter().enumerate() {
            // d^j/dt^j t^i = i!/(i-j)! t^{i-j}
            let row = (0..n)
                .map(|i| {
                    if i < j {
                        T::zero()
                    } else {
                        let falling = ((i - j + 1)..=i)
                            .fold(T::one(), |a, v| a * T::from_usize_lossy(v));
                        falling * t0.powi((i - j) as i32)
                    }
                })
                .collect();
            rows.push(row);
            rhs.push(d * half.powi(j as i32));
        }
    }
    let centered = solve(rows, rhs)?;
    Ok(OraclePolynomial {
        interval: spec.interval,
        centered,
    })
}

/// Gaussian elimination with partial pivoting.
fn solve<T: Scalar>(mut a: Vec<Vec<T>>, mut b: Vec<T>) -> Result<Vec<T>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        if a[piv][col] == T::zero() || !a[piv][col].is_finite() {
            return Err(Error::Singular);
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f == T::zero() {
                continue;
            }
            for k in col..n {
                let v = a[col][k];
                a[row][k] -= f * v;
            }
            let v = b[col];
            b[row] -= f * v;
        }
    }
    let mut x = vec![T::zero(); n];
    for row in (0..n).rev() {
        let s: T = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn spec(a: f64, fa: Vec<f64>, b: f64, gb: Vec<f64>) -> HermiteSpec<f64> {
        HermiteSpec::new(EndpointJet::new(a, fa), EndpointJet::new(b, gb)).unwrap()
    }

    #[test]
    fn linear_case() {
        let s = spec(0.0, vec![1.0], 1.0, vec![3.0]);
        let h = hermite_interpolant(&s);
        assert!((h.value(0.5) - 2.0).abs() < 1e-15);
        let o = hermite_oracle(&s).unwrap().unit_coefficients();
        assert!((o[0] - 1.0).abs() < 1e-15 && (o[1] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn reproduces_beta_step() {
        let s = spec(0.0, vec![0.0, 0.0], 1.0, vec![1.0, 0.0]);
        let o = hermite_oracle(&s).unwrap().unit_coefficients();
        let expect = [0.0, 0.0, 3.0, -2.0];
        for (a, b) in o.iter().zip(&expect) {
            assert!((a - b).abs() < 1e-14);
        }
        let c = hermite_unit_coefficients(&s);
        for (a, b) in c.iter().zip(&expect) {
            assert!((a - b).abs() < 1e-14);
        }
        let s = spec(0.0, vec![0.0, 0.0, 0.0], 1.0, vec![1.0, 0.0]);
        let h = hermite_interpolant(&s);
        for &x in &[0.1, 0.4, 0.77] {
            let b = crate::step_functions::beta_value(2, 1, x);
            assert!((h.value(x) - b).abs() < 1e-15);
        }
    }

    #[test]
    fn random_jets_match_and_agree_with_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let fa: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let gb: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let s = spec(1.0, fa.clone(), 2.5, gb.clone());
        let h = hermite_interpolant(&s);
        let left = h.derivatives(1.0, 2).unwrap();
        let right = h.derivatives(2.5, 3).unwrap();
        for (a, b) in left.iter().zip(&fa) {
            assert!((a - b).abs() < 1e-9);
        }
        for (a, b) in right.iter().zip(&gb) {
            assert!((a - b).abs() < 1e-9);
        }
        let o = hermite_oracle(&s).unwrap();
        for i in 0..=20 {
            let x = 1.0 + 1.5 * i as f64 / 20.0;
            assert!((o.value(x) - h.value(x)).abs() < 1e-8);
        }
    }

    #[test]
    fn guard_and_degenerate_interval() {
        let s = spec(0.0, vec![0.0; 7], 1.0, vec![1.0; 7]);
        assert!(hermite_oracle(&s).is_ok());
        let s = spec(0.0, vec![0.0; 8], 1.0, vec![1.0; 7]);
        assert!(matches!(hermite_oracle(&s), Err(Error::IllConditioned(13))));
        assert!(HermiteSpec::new(EndpointJet::new(1.0, vec![0.0]), EndpointJet::new(1.0, vec![1.0])).is_err());
    }
}
