use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

use super::bigreal::{BigReal, DEFAULT_PRECISION, MIN_PRECISION};
use super::poly::Poly;
use super::Rational;

/// Coefficient field for polynomials and rational functions.
///
/// `Rational` is exact; `BigReal` and `f64` are approximate and treat a value
/// as zero when it is negligible relative to a reference magnitude.
pub trait Scalar:
    Clone + Debug + Display + PartialEq + PartialOrd + Num + std::ops::Neg<Output = Self> + Send + Sync + 'static
{
    /// True when arithmetic is exact and zero tests are decisive.
    const EXACT: bool;

    fn from_rational(q: &Rational) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(n)))
    }

    fn to_f64(&self) -> f64;

    fn magnitude(&self) -> Self;

    /// Whether `self` is zero relative to `scale` at this field's tolerance.
    fn is_negligible(&self, scale: &Self) -> bool;

    /// Square root when it exists in this field.
    fn try_sqrt(&self) -> Option<Self>;

    fn is_positive(&self) -> bool {
        *self > Self::zero()
    }

    /// Monic greatest common divisor.
    fn poly_gcd(a: &Poly<Self>, b: &Poly<Self>) -> Poly<Self> {
        euclid_gcd(a, b)
    }
}

/// Euclidean gcd with tolerance-based remainder truncation, for inexact fields.
pub(crate) fn euclid_gcd<T: Scalar>(a: &Poly<T>, b: &Poly<T>) -> Poly<T> {
    let (mut p, mut q) = if a.degree() >= b.degree() {
        (a.monic(), b.monic())
    } else {
        (b.monic(), a.monic())
    };
    while !q.is_zero() {
        let scale = p.max_abs_coeff().max_with(&q.max_abs_coeff());
        let (_, r) = p.divrem(&q).expect("nonzero divisor");
        let r = r.truncate_negligible(&scale);
        p = q;
        q = r.monic();
    }
    p.monic()
}

trait MaxWith {
    fn max_with(self, other: &Self) -> Self;
}

impl<T: Scalar> MaxWith for T {
    fn max_with(self, other: &Self) -> Self {
        if *other > self {
            other.clone()
        } else {
            self
        }
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn magnitude(&self) -> Self {
        self.abs()
    }

    fn is_negligible(&self, _scale: &Self) -> bool {
        self.is_zero()
    }

    fn try_sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        if &n * &n == *self.numer() && &d * &d == *self.denom() {
            Some(Rational::new(n, d))
        } else {
            None
        }
    }

    fn poly_gcd(a: &Poly<Self>, b: &Poly<Self>) -> Poly<Self> {
        primitive_gcd(a, b)
    }
}

/// Clears denominators and removes the integer content.
fn primitive_part(p: &Poly<Rational>) -> Vec<BigInt> {
    let lcm = p
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if content.is_zero() {
        return ints;
    }
    ints.into_iter().map(|c| c / &content).collect()
}

/// Pseudo-remainder of integer polynomials (coefficients low to high).
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let lb = b.last().expect("nonzero divisor").clone();
    let db = b.len() - 1;
    while r.len() > db && !r.is_empty() {
        let lr = r.last().unwrap().clone();
        let shift = r.len() - 1 - db;
        for c in r.iter_mut() {
            *c *= &lb;
        }
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] -= &lr * bc;
        }
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    r
}

/// Primitive polynomial remainder sequence over the integers.
fn primitive_gcd(a: &Poly<Rational>, b: &Poly<Rational>) -> Poly<Rational> {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    let (mut p, mut q) = (primitive_part(a), primitive_part(b));
    if p.len() < q.len() {
        std::mem::swap(&mut p, &mut q);
    }
    while !q.is_empty() {
        let r = pseudo_rem(&p, &q);
        p = q;
        q = if r.is_empty() {
            r
        } else {
            let content = r.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
            r.into_iter().map(|c| c / &content).collect()
        };
    }
    Poly::new(p.into_iter().map(Rational::from_integer).collect()).monic()
}

impl Scalar for BigReal {
    const EXACT: bool = false;

    fn from_rational(q: &Rational) -> Self {
        // small integers are exact at the minimum precision and must not raise
        // the precision of the values they combine with
        if q.is_integer() && q.numer().bits() <= 96 {
            BigReal::from_rational(q, MIN_PRECISION)
        } else {
            BigReal::from_rational(q, DEFAULT_PRECISION)
        }
    }

    fn to_f64(&self) -> f64 {
        BigReal::to_f64(self)
    }

    fn magnitude(&self) -> Self {
        self.abs()
    }

    fn is_negligible(&self, scale: &Self) -> bool {
        let precision = self.precision().max(scale.precision());
        let tol = BigReal::epsilon(precision / 2, precision);
        self.abs() <= tol * scale.abs()
    }

    fn try_sqrt(&self) -> Option<Self> {
        self.sqrt()
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_rational(q: &Rational) -> Self {
        ToPrimitive::to_f64(q).unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn magnitude(&self) -> Self {
        self.abs()
    }

    fn is_negligible(&self, scale: &Self) -> bool {
        self.abs() <= 1e-9 * scale.abs()
    }

    fn try_sqrt(&self) -> Option<Self> {
        (*self >= 0.0).then(|| self.sqrt())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn exact_sqrt_only_for_squares() {
        assert_eq!(q(9, 4).try_sqrt(), Some(q(3, 2)));
        assert_eq!(q(2, 1).try_sqrt(), None);
        assert_eq!(q(-1, 1).try_sqrt(), None);
        assert_eq!(q(0, 1).try_sqrt(), Some(q(0, 1)));
    }

    #[test]
    fn pseudo_remainder_matches_hand_division() {
        // (2s^2+3s+1) prem (s+1) = 0
        let a: Vec<BigInt> = [1, 3, 2].iter().map(|&c| BigInt::from(c)).collect();
        let b: Vec<BigInt> = [1, 1].iter().map(|&c| BigInt::from(c)).collect();
        assert!(pseudo_rem(&a, &b).is_empty());
    }
}
