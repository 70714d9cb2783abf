//! Truncated Taylor arithmetic.
//!
//! A [`Jet`] of order `k` at a base point `x0` holds the normalized Taylor
//! coefficients `c[i] = f^(i)(x0) / i!` for `i = 0..=k`. Products are Cauchy
//! convolutions (the Leibniz rule in normalized form), composition is
//! truncated series substitution (the chain rule), and the elementary
//! functions use the usual first-order recurrences.
//!
//! The fallible `try_*` methods report order mismatches. The `std::ops`
//! impls are for internal code where orders agree by construction and
//! panic on mismatch.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct Jet<T> {
    coeffs: Vec<T>,
    base: T,
}

/// Elementary functions with jet support.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Elementary {
    Sin,
    Cos,
    Exp,
    /// `u ↦ u^n`.
    Powi(i32),
    /// `u ↦ 1 / (1 + exp(-u))`.
    Logistic,
}

impl<T: Scalar> Jet<T> {
    /// Builds a jet from normalized coefficients. `coeffs` must be non-empty.
    pub fn from_coeffs(base: T, coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "a jet needs at least its value");
        Self { coeffs, base }
    }

    /// Builds a jet from raw derivatives `f, f', f'', ...`.
    pub fn from_derivatives(base: T, derivatives: &[T]) -> Self {
        let mut fact = T::one();
        let coeffs = derivatives
            .iter()
            .enumerate()
            .map(|(i, &d)| {
                if i > 1 {
                    fact *= T::from_usize_lossy(i);
                }
                d / fact
            })
            .collect();
        Self::from_coeffs(base, coeffs)
    }

    pub fn constant(base: T, value: T, order: usize) -> Self {
        let mut coeffs = vec![T::zero(); order + 1];
        coeffs[0] = value;
        Self { coeffs, base }
    }

    pub fn zero(base: T, order: usize) -> Self {
        Self::constant(base, T::zero(), order)
    }

    /// Jet of the identity map `x ↦ x` at `base`.
    pub fn variable(base: T, order: usize) -> Self {
        Self::affine(base, T::one(), T::zero(), order)
    }

    /// Jet of `x ↦ slope * x + intercept` at `base`.
    pub fn affine(base: T, slope: T, intercept: T, order: usize) -> Self {
        let mut coeffs = vec![T::zero(); order + 1];
        coeffs[0] = slope * base + intercept;
        if order >= 1 {
            coeffs[1] = slope;
        }
        Self { coeffs, base }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    #[inline]
    pub fn base(&self) -> T {
        self.base
    }

    #[inline]
    pub fn value(&self) -> T {
        self.coeffs[0]
    }

    #[inline]
    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Raw derivative `f^(i)(x0)`.
    pub fn derivative(&self, i: usize) -> T {
        let mut fact = T::one();
        for j in 2..=i {
            fact *= T::from_usize_lossy(j);
        }
        self.coeffs[i] * fact
    }

    /// All raw derivatives `f^(0) ..= f^(k)`.
    pub fn derivatives(&self) -> Vec<T> {
        let mut fact = T::one();
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                if i > 1 {
                    fact *= T::from_usize_lossy(i);
                }
                c * fact
            })
            .collect()
    }

    /// Drops coefficients above `order`.
    pub fn truncate(&self, order: usize) -> Self {
        let n = order.min(self.order()) + 1;
        Self {
            coeffs: self.coeffs[..n].to_vec(),
            base: self.base,
        }
    }

    pub fn with_base(mut self, base: T) -> Self {
        self.base = base;
        self
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    pub fn scale(&self, s: T) -> Self {
        self.map(|c| c * s)
    }

    pub fn add_scalar(&self, s: T) -> Self {
        let mut out = self.clone();
        out.coeffs[0] += s;
        out
    }

    /// Re-expresses a jet taken in a variable `u = x / h` as a jet in `x`,
    /// i.e. multiplies coefficient `i` by `factor^i`.
    pub fn rescale_argument(&self, factor: T) -> Self {
        let mut p = T::one();
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| {
                let v = c * p;
                p *= factor;
                v
            })
            .collect();
        Self {
            coeffs,
            base: self.base,
        }
    }

    fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&c| f(c)).collect(),
            base: self.base,
        }
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| a + b)
                .collect(),
            base: self.base,
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| a - b)
                .collect(),
            base: self.base,
        })
    }

    /// Cauchy product truncated at the common order.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let n = self.coeffs.len();
        let a = &self.coeffs;
        let b = &other.coeffs;
        let coeffs = (0..n)
            .map(|k| (0..=k).map(|j| a[j] * b[k - j]).sum())
            .collect();
        Ok(Self {
            coeffs,
            base: self.base,
        })
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let b = &other.coeffs;
        if b[0] == T::zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.coeffs.len();
        let mut c: Vec<T> = Vec::with_capacity(n);
        for k in 0..n {
            let mut s = self.coeffs[k];
            for j in 1..=k {
                s -= b[j] * c[k - j];
            }
            c.push(s / b[0]);
        }
        Ok(Self {
            coeffs: c,
            base: self.base,
        })
    }

    pub fn try_recip(&self) -> Result<Self> {
        Self::constant(self.base, T::one(), self.order()).try_div(self)
    }

    /// Composition `outer ∘ inner`, where `outer` holds the Taylor
    /// coefficients of the outer function at `inner.value()`.
    ///
    /// The result carries `inner`'s base point.
    pub fn try_compose(outer: &Self, inner: &Self) -> Result<Self> {
        outer.check_order(inner)?;
        let k = inner.order();
        // Horner in the nilpotent increment δ = inner - inner(x0).
        let mut delta = inner.clone();
        delta.coeffs[0] = T::zero();
        let mut acc = Self::constant(inner.base, outer.coeffs[k], k);
        for i in (0..k).rev() {
            acc = acc.try_mul(&delta)?;
            acc.coeffs[0] += outer.coeffs[i];
        }
        Ok(acc)
    }

    pub fn compose(&self, inner: &Self) -> Self {
        Self::try_compose(self, inner).expect("jet orders must agree")
    }

    pub fn elementary(&self, kind: Elementary) -> Self {
        match kind {
            Elementary::Sin => self.sin_cos().0,
            Elementary::Cos => self.sin_cos().1,
            Elementary::Exp => self.exp(),
            Elementary::Powi(n) => self.powi(n),
            Elementary::Logistic => self.logistic(),
        }
    }

    pub fn exp(&self) -> Self {
        let a = &self.coeffs;
        let n = a.len();
        let mut c = Vec::with_capacity(n);
        c.push(a[0].exp());
        for k in 1..n {
            let mut s = T::zero();
            for j in 1..=k {
                s += T::from_usize_lossy(j) * a[j] * c[k - j];
            }
            c.push(s / T::from_usize_lossy(k));
        }
        Self {
            coeffs: c,
            base: self.base,
        }
    }

    /// Simultaneous sine and cosine jets.
    pub fn sin_cos(&self) -> (Self, Self) {
        let a = &self.coeffs;
        let n = a.len();
        let (s0, c0) = a[0].sin_cos();
        let mut s = Vec::with_capacity(n);
        let mut c = Vec::with_capacity(n);
        s.push(s0);
        c.push(c0);
        for k in 1..n {
            let mut ss = T::zero();
            let mut cc = T::zero();
            for j in 1..=k {
                let ja = T::from_usize_lossy(j) * a[j];
                ss += ja * c[k - j];
                cc -= ja * s[k - j];
            }
            let kk = T::from_usize_lossy(k);
            s.push(ss / kk);
            c.push(cc / kk);
        }
        (
            Self {
                coeffs: s,
                base: self.base,
            },
            Self {
                coeffs: c,
                base: self.base,
            },
        )
    }

    pub fn sin(&self) -> Self {
        self.sin_cos().0
    }

    pub fn cos(&self) -> Self {
        self.sin_cos().1
    }

    /// Integer power by repeated squaring; valid at a zero constant term
    /// for `n >= 0`. Negative powers go through the reciprocal.
    pub fn powi(&self, n: i32) -> Self {
        if n < 0 {
            return self
                .powi(-n)
                .try_recip()
                .unwrap_or_else(|_| self.map(|_| T::infinity()));
        }
        let mut result = Self::constant(self.base, T::one(), self.order());
        let mut base = self.clone();
        let mut e = n as u32;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Logistic function `1 / (1 + exp(-u))` through `s' = s (1 - s) u'`.
    /// Stays bounded for large `|u|`, where `exp` would overflow.
    pub fn logistic(&self) -> Self {
        let a = &self.coeffs;
        let n = a.len();
        let u0 = a[0];
        let s0 = if u0 >= T::zero() {
            T::one() / (T::one() + (-u0).exp())
        } else {
            let e = u0.exp();
            e / (T::one() + e)
        };
        // q = s (1 - s), tracked coefficientwise as s grows.
        let mut s = Vec::with_capacity(n);
        s.push(s0);
        let mut q: Vec<T> = Vec::with_capacity(n);
        // s(1-s) at order zero; computed as s0 * (1 - s0) with the smaller
        // factor first for accuracy near saturation.
        q.push(s0 * (T::one() - s0));
        for k in 1..n {
            // p_{k-1} = Σ_i q_i * u'_{k-1-i}, with u'_j = (j+1) a_{j+1}
            let mut p = T::zero();
            for i in 0..k {
                let j = k - 1 - i;
                p += q[i] * T::from_usize_lossy(j + 1) * a[j + 1];
            }
            s.push(p / T::from_usize_lossy(k));
            // q_k = s_k - Σ_{i=0}^{k} s_i s_{k-i}
            let mut sq = T::zero();
            for i in 0..=k {
                sq += s[i] * s[k - i];
            }
            q.push(s[k] - sq);
        }
        Self {
            coeffs: s,
            base: self.base,
        }
    }
}

/// Free-function forms mirroring the operation names used in the docs.
pub fn jet_add<T: Scalar>(a: &Jet<T>, b: &Jet<T>) -> Result<Jet<T>> {
    a.try_add(b)
}

pub fn jet_mul<T: Scalar>(a: &Jet<T>, b: &Jet<T>) -> Result<Jet<T>> {
    a.try_mul(b)
}

pub fn jet_div<T: Scalar>(a: &Jet<T>, b: &Jet<T>) -> Result<Jet<T>> {
    a.try_div(b)
}

pub fn jet_compose<T: Scalar>(outer: &Jet<T>, inner: &Jet<T>) -> Result<Jet<T>> {
    Jet::try_compose(outer, inner)
}

pub fn jet_elementary<T: Scalar>(kind: Elementary, inner: &Jet<T>) -> Jet<T> {
    inner.elementary(kind)
}

macro_rules! binop {
    ($tr:ident, $m:ident, $try:ident) => {
        impl<'a, T: Scalar> $tr<&'a Jet<T>> for &'a Jet<T> {
            type Output = Jet<T>;
            fn $m(self, rhs: &'a Jet<T>) -> Jet<T> {
                self.$try(rhs).expect("jet orders must agree")
            }
        }
        impl<T: Scalar> $tr<Jet<T>> for Jet<T> {
            type Output = Jet<T>;
            fn $m(self, rhs: Jet<T>) -> Jet<T> {
                (&self).$m(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl<'a, T: Scalar> Div<&'a Jet<T>> for &'a Jet<T> {
    type Output = Jet<T>;
    /// Panics on order mismatch or a zero constant term in the divisor.
    fn div(self, rhs: &'a Jet<T>) -> Jet<T> {
        self.try_div(rhs).expect("valid jet division")
    }
}

impl<T: Scalar> Div<Jet<T>> for Jet<T> {
    type Output = Jet<T>;
    fn div(self, rhs: Jet<T>) -> Jet<T> {
        &self / &rhs
    }
}

impl<T: Scalar> Neg for Jet<T> {
    type Output = Jet<T>;
    fn neg(self) -> Jet<T> {
        self.map(|c| -c)
    }
}

impl<T: Scalar> Neg for &Jet<T> {
    type Output = Jet<T>;
    fn neg(self) -> Jet<T> {
        self.map(|c| -c)
    }
}
