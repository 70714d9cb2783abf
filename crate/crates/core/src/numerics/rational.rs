//! Exact rational arithmetic and the binomial sums behind the trigonometric
//! step coefficients.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Reduced fraction of arbitrary-precision integers with a positive
/// denominator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Self {
        Self(BigRational::new(numer.into(), denom.into()))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Self(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn one() -> Self {
        Self(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// Nearest-ish `f64`; exact for values representable in `f64`.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn pow(&self, e: i32) -> Self {
        Self(num_traits::Pow::pow(&self.0, e))
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

macro_rules! rat_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                Rational(self.0.$m(rhs.0))
            }
        }
        impl<'a> $tr<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $m(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$m(&rhs.0))
            }
        }
    };
}

rat_binop!(Add, add);
rat_binop!(Sub, sub);
rat_binop!(Mul, mul);
rat_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

/// `C(n, k)` exactly.
pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `Σ_{j=0}^{m} (-1)^{m-j} (2j+1)^{2k-1} C(2m+1, m-j)` exactly.
pub fn binomial_sum(m: u32, k: u32) -> BigInt {
    assert!(k >= 1, "the exponent 2k-1 needs k >= 1");
    (0..=m)
        .map(|j| {
            let sign = if (m - j).is_multiple_of(2) { 1 } else { -1 };
            let p = num_traits::pow(BigInt::from(2 * j + 1), (2 * k - 1) as usize);
            BigInt::from(sign) * p * binomial(2 * m + 1, m - j)
        })
        .sum()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinomialReport {
    pub m: u32,
    /// `(k, sum)` for `k = 1..=m`.
    pub sums: Vec<(u32, BigInt)>,
}

impl BinomialReport {
    pub fn passed(&self) -> bool {
        self.sums.iter().all(|(_, s)| s.is_zero())
    }
}

/// Evaluates the odd-power binomial sums for `k = 1..=m`; each must vanish.
pub fn binomial_identity_check(m: u32) -> BinomialReport {
    BinomialReport {
        m,
        sums: (1..=m).map(|k| (k, binomial_sum(m, k))).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(3, 4), BigInt::zero());
        assert_eq!(binomial(61, 30).to_string(), "232714176627630544");
    }

    #[test]
    fn identity_for_small_m() {
        assert_eq!(binomial_sum(1, 1), BigInt::zero());
        assert!(binomial_identity_check(2).passed());
        assert_eq!(binomial_identity_check(2).sums.len(), 2);
    }

    #[test]
    fn identity_is_sharp() {
        // -1·1·3 + 1·27·1
        assert_eq!(binomial_sum(1, 2), BigInt::from(24));
        for m in 1..=6 {
            assert!(!binomial_sum(m, m + 1).is_zero(), "m={m}");
        }
    }

    #[test]
    fn rational_arithmetic_is_reduced() {
        let a = Rational::new(2, 6);
        assert_eq!(a.numer(), &BigInt::from(1));
        assert_eq!(a.denom(), &BigInt::from(3));
        let b = Rational::new(1, -3);
        assert!(b.is_negative() && b.denom() > &BigInt::zero());
        assert!((a.clone() + b).is_zero());
        assert_eq!(format!("{}", Rational::new(-8, 3)), "-8/3");
        assert_eq!(Rational::new(1, 4).to_f64(), 0.25);
    }
}
