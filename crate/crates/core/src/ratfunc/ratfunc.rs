use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;

use super::{Poly, RatFuncError, Scalar};

/// Reduced quotient `num / den` of polynomials in `s`.
///
/// Stored form: `gcd(num, den) = 1`, `den` monic, zero is `0/1`. Over
/// `Rational` this form is canonical, so structural equality is equality of
/// functions.
#[derive(Clone, Debug, PartialEq)]
pub struct RatFunc<T> {
    num: Poly<T>,
    den: Poly<T>,
}

impl<T: Scalar> RatFunc<T> {
    /// Reduces and normalizes `num / den`.
    pub fn new(num: Poly<T>, den: Poly<T>) -> Result<Self, RatFuncError> {
        if den.is_zero() {
            return Err(RatFuncError::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = num.gcd(&den);
        let (num, den) = if g.degree() > 0 {
            (num.div_exact(&g)?, den.div_exact(&g)?)
        } else {
            (num, den)
        };
        let lc = den.leading().expect("nonzero").clone();
        let num = num.scale(&(T::one() / lc));
        Ok(RatFunc {
            num,
            den: den.monic(),
        })
    }

    pub fn from_poly(p: Poly<T>) -> Self {
        RatFunc {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(c: T) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn s() -> Self {
        Self::from_poly(Poly::s())
    }

    pub fn num(&self) -> &Poly<T> {
        &self.num
    }

    pub fn den(&self) -> &Poly<T> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Max of reduced numerator and denominator degrees.
    pub fn mcmillan_degree(&self) -> usize {
        self.num.degree().max(self.den.degree()).max(0) as usize
    }

    pub fn inv(&self) -> Result<Self, RatFuncError> {
        if self.is_zero() {
            return Err(RatFuncError::ZeroDivisor);
        }
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, RatFuncError> {
        if rhs.is_zero() {
            return Err(RatFuncError::ZeroDivisor);
        }
        Self::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    pub fn pow(&self, n: i32) -> Result<Self, RatFuncError> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        Ok(RatFunc {
            num: base.num.pow(n.unsigned_abs()),
            den: base.den.pow(n.unsigned_abs()),
        })
    }

    /// `f(-s)`
    pub fn reflect(&self) -> Self {
        Self::new(self.num.reflect(), self.den.reflect()).expect("nonzero denominator")
    }

    /// `f(1/s)`
    pub fn reciprocal_argument(&self) -> Self {
        let n = self.num.degree().max(self.den.degree()).max(0) as usize;
        Self::new(self.num.reversed(n), self.den.reversed(n)).expect("nonzero denominator")
    }

    /// `(f(s) + f(-s)) / 2`
    pub fn even_part(&self) -> Self {
        let half = T::one() / T::from_i64(2);
        let sum = self + &self.reflect();
        Self::new(sum.num.scale(&half), sum.den).expect("nonzero denominator")
    }

    pub fn eval(&self, x: &T) -> Result<T, RatFuncError> {
        let z = self.eval_complex(&Complex::new(x.clone(), T::zero()))?;
        Ok(z.re)
    }

    pub fn eval_complex(&self, z: &Complex<T>) -> Result<Complex<T>, RatFuncError> {
        let d = self.den.eval_complex(z);
        let zmag = if z.re.magnitude() > z.im.magnitude() {
            z.re.magnitude()
        } else {
            z.im.magnitude()
        };
        let scale = self.den.map(|c| c.magnitude()).eval(&zmag);
        let dmag = if d.re.magnitude() > d.im.magnitude() {
            d.re.magnitude()
        } else {
            d.im.magnitude()
        };
        if dmag.is_zero() || dmag.is_negligible(&scale) {
            return Err(RatFuncError::PoleAt(format!("{} + {}j", z.re, z.im)));
        }
        let n = self.num.eval_complex(z);
        Ok(n / d)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> RatFunc<U> {
        RatFunc {
            num: self.num.map(&f),
            den: self.den.map(&f),
        }
    }

    /// Numerator and denominator agree coefficient-wise within `tol` relative.
    pub fn approx_eq(&self, other: &Self, tol: &T) -> bool {
        self.num.approx_eq(&other.num, tol) && self.den.approx_eq(&other.den, tol)
    }
}

impl<T: Scalar> Add for &RatFunc<T> {
    type Output = RatFunc<T>;
    fn add(self, rhs: &RatFunc<T>) -> RatFunc<T> {
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RatFunc::new(num, &self.den * &rhs.den).expect("nonzero denominator")
    }
}

impl<T: Scalar> Sub for &RatFunc<T> {
    type Output = RatFunc<T>;
    fn sub(self, rhs: &RatFunc<T>) -> RatFunc<T> {
        self + &(-rhs)
    }
}

impl<T: Scalar> Mul for &RatFunc<T> {
    type Output = RatFunc<T>;
    fn mul(self, rhs: &RatFunc<T>) -> RatFunc<T> {
        RatFunc::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero denominator")
    }
}

impl<T: Scalar> Neg for &RatFunc<T> {
    type Output = RatFunc<T>;
    fn neg(self) -> RatFunc<T> {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

/// Canonical text form `(<num>)/(<den>)`.
impl<T: Scalar> fmt::Display for RatFunc<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/({})", self.num, self.den)
    }
}
