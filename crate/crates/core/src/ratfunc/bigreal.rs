//! Arbitrary-precision decimal reals.
//!
//! A [`BigReal`] is `mantissa * 10^exponent` where the mantissa carries at most
//! `precision` significant decimal digits. Every arithmetic result is rounded
//! to nearest, ties to even, at the larger precision of its operands, so a
//! value written with `precision` digits reads back bit-for-bit.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{Num, One, Signed, Zero};

use super::Rational;

/// Working precision used when none is requested explicitly.
pub const DEFAULT_PRECISION: u32 = 50;
/// Smallest precision the type accepts.
pub const MIN_PRECISION: u32 = 30;

#[derive(Clone)]
pub struct BigReal {
    mantissa: BigInt,
    exponent: i64,
    precision: u32,
}

fn pow10(n: u64) -> BigInt {
    num_traits::pow(BigInt::from(10u32), n as usize)
}

/// Number of decimal digits in `|n|` (zero has zero digits).
fn digit_count(n: &BigInt) -> u64 {
    if n.is_zero() {
        return 0;
    }
    let bits = n.bits();
    // floor((bits - 1) * log10(2)) never overshoots.
    let guess = ((bits - 1) as f64 * std::f64::consts::LOG10_2).floor() as u64;
    let mut d = guess.max(1);
    let mag = n.magnitude();
    while BigInt::from(mag.clone()) >= pow10(d) {
        d += 1;
    }
    d
}

/// Round `|m| * 10^e` (plus a sticky fraction when `inexact`) to `precision`
/// digits, ties to even. The sticky flag says the true value lies strictly
/// above `|m|` in the last place.
fn round_to(m: BigInt, e: i64, precision: u32, inexact: bool) -> (BigInt, i64) {
    let negative = m.is_negative();
    let mut mag = m.abs();
    let mut exp = e;
    if inexact {
        // A nonzero guard digit breaks exact ties upward.
        mag = mag * 10 + 1;
        exp -= 1;
    }
    let digits = digit_count(&mag);
    debug_assert!(!inexact || digits > precision as u64 + 1);
    if digits > precision as u64 {
        let shift = digits - precision as u64;
        let divisor = pow10(shift);
        let (mut q, r) = mag.div_rem(&divisor);
        let twice: BigInt = &r * 2u32;
        match twice.cmp(&divisor) {
            Ordering::Greater => q += 1,
            Ordering::Equal => {
                if q.is_odd() {
                    q += 1
                }
            }
            Ordering::Less => {}
        }
        exp += shift as i64;
        if digit_count(&q) > precision as u64 {
            q /= 10;
            exp += 1;
        }
        mag = q;
    }
    if mag.is_zero() {
        return (BigInt::zero(), 0);
    }
    // Strip trailing zeros so equal values share one representation.
    while (&mag % 10u32).is_zero() {
        mag /= 10u32;
        exp += 1;
    }
    (if negative { -mag } else { mag }, exp)
}

impl BigReal {
    fn from_parts(mantissa: BigInt, exponent: i64, precision: u32, inexact: bool) -> Self {
        let precision = precision.max(MIN_PRECISION);
        let (mantissa, exponent) = round_to(mantissa, exponent, precision, inexact);
        BigReal {
            mantissa,
            exponent,
            precision,
        }
    }

    pub fn zero_with_precision(precision: u32) -> Self {
        BigReal {
            mantissa: BigInt::zero(),
            exponent: 0,
            precision: precision.max(MIN_PRECISION),
        }
    }

    pub fn from_integer(n: BigInt, precision: u32) -> Self {
        Self::from_parts(n, 0, precision, false)
    }

    /// Correctly rounded `num / den * 10^exp`.
    fn from_ratio(num: &BigInt, den: &BigInt, exp: i64, precision: u32) -> Self {
        assert!(!den.is_zero(), "BigReal division by zero");
        let precision = precision.max(MIN_PRECISION);
        if num.is_zero() {
            return Self::zero_with_precision(precision);
        }
        let negative = num.is_negative() != den.is_negative();
        let n = num.abs();
        let d = den.abs();
        let want = precision as i64 + 2;
        let shift = (want + digit_count(&d) as i64 - digit_count(&n) as i64).max(0) as u64;
        let (q, r) = (n * pow10(shift)).div_rem(&d);
        let q = if negative { -q } else { q };
        Self::from_parts(q, exp - shift as i64, precision, !r.is_zero())
    }

    pub fn from_rational(q: &Rational, precision: u32) -> Self {
        Self::from_ratio(q.numer(), q.denom(), 0, precision)
    }

    pub fn from_f64(x: f64, precision: u32) -> Self {
        let q = Rational::from_float(x).expect("finite f64");
        Self::from_rational(&q, precision)
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn with_precision(&self, precision: u32) -> Self {
        Self::from_parts(self.mantissa.clone(), self.exponent, precision, false)
    }

    /// Exact rational value of this decimal.
    pub fn to_rational(&self) -> Rational {
        if self.exponent >= 0 {
            Rational::from_integer(&self.mantissa * pow10(self.exponent as u64))
        } else {
            Rational::new(self.mantissa.clone(), pow10((-self.exponent) as u64))
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.mantissa.is_zero() {
            return 0.0;
        }
        format!("{}e{}", self.mantissa, self.exponent)
            .parse()
            .unwrap_or(f64::NAN)
    }

    fn mantissa_sign_matches(&self, other: &Self) -> bool {
        self.mantissa.sign() == other.mantissa.sign()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn abs(&self) -> Self {
        BigReal {
            mantissa: self.mantissa.abs(),
            ..self.clone()
        }
    }

    /// Decimal order of magnitude: value lies in [10^(m-1), 10^m).
    fn magnitude_order(&self) -> i64 {
        self.exponent + digit_count(&self.mantissa) as i64
    }

    /// Correctly rounded square root; `None` for negative input.
    pub fn sqrt(&self) -> Option<Self> {
        if self.mantissa.is_negative() {
            return None;
        }
        if self.mantissa.is_zero() {
            return Some(self.clone());
        }
        let mut m = self.mantissa.clone();
        let mut e = self.exponent;
        if e.rem_euclid(2) != 0 {
            m *= 10;
            e -= 1;
        }
        let want = 2 * (self.precision as i64 + 2);
        let extra = (want - digit_count(&m) as i64).max(0);
        let extra = extra + extra % 2;
        let scaled = m * pow10(extra as u64);
        let root = scaled.sqrt();
        let inexact = &root * &root != scaled;
        Some(Self::from_parts(
            root,
            (e - extra) / 2,
            self.precision,
            inexact,
        ))
    }

    /// Relative closeness: `|self - other| <= tol * max(|self|, |other|)`.
    pub fn approx_eq(&self, other: &Self, tol: &BigReal) -> bool {
        let diff = (self.clone() - other.clone()).abs();
        let scale = if self.abs() > other.abs() {
            self.abs()
        } else {
            other.abs()
        };
        diff <= tol.clone() * scale
    }

    /// `10^-digits` at the given precision.
    pub fn epsilon(digits: u32, precision: u32) -> Self {
        BigReal::from_parts(BigInt::one(), -(digits as i64), precision, false)
    }

    pub fn parse_decimal(text: &str, precision: u32) -> Result<Self, ParseBigRealError> {
        let q = parse_decimal_exact(text).ok_or_else(|| ParseBigRealError(text.to_string()))?;
        Ok(Self::from_rational(&q, precision))
    }
}

/// Parses `[-+]digits[.digits][e[-+]digits]` into an exact rational.
pub fn parse_decimal_exact(text: &str) -> Option<Rational> {
    let t = text.trim();
    let (negative, body) = match t.as_bytes().first()? {
        b'-' => (true, &t[1..]),
        b'+' => (false, &t[1..]),
        _ => (false, t),
    };
    let (mant, exp) = match body.find(['e', 'E']) {
        Some(pos) => (&body[..pos], body[pos + 1..].parse::<i64>().ok()?),
        None => (body, 0),
    };
    let (int_part, frac_part) = match mant.find('.') {
        Some(pos) => (&mant[..pos], &mant[pos + 1..]),
        None => (mant, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let m: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().ok()?
    };
    let e = exp - frac_part.len() as i64;
    let m = if negative { -m } else { m };
    Some(if e >= 0 {
        Rational::from_integer(m * pow10(e as u64))
    } else {
        Rational::new(m, pow10((-e) as u64))
    })
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid decimal literal `{0}`")]
pub struct ParseBigRealError(pub String);

impl fmt::Debug for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigReal({self})")
    }
}

/// Scientific notation with exactly `precision` significant digits.
impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mantissa.is_zero() {
            return write!(f, "0");
        }
        let digits = self.mantissa.magnitude().to_string();
        let mut padded = digits.clone();
        while padded.len() < self.precision as usize {
            padded.push('0');
        }
        let exp10 = self.exponent + digits.len() as i64 - 1;
        let sign = if self.mantissa.is_negative() { "-" } else { "" };
        write!(f, "{sign}{}.{}e{exp10}", &padded[..1], &padded[1..])
    }
}

impl FromStr for BigReal {
    type Err = ParseBigRealError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BigReal::parse_decimal(s, DEFAULT_PRECISION)
    }
}

impl PartialEq for BigReal {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_value(other) == Ordering::Equal
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_value(other))
    }
}

impl BigReal {
    fn cmp_value(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.mantissa.sign(), other.mantissa.sign());
        if sa != sb {
            let rank = |s: Sign| match s {
                Sign::Minus => 0,
                Sign::NoSign => 1,
                Sign::Plus => 2,
            };
            return rank(sa).cmp(&rank(sb));
        }
        if sa == Sign::NoSign {
            return Ordering::Equal;
        }
        let (oa, ob) = (self.magnitude_order(), other.magnitude_order());
        if oa != ob {
            let by_mag = oa.cmp(&ob);
            return if sa == Sign::Minus { by_mag.reverse() } else { by_mag };
        }
        let e = self.exponent.min(other.exponent);
        let a = &self.mantissa * pow10((self.exponent - e) as u64);
        let b = &other.mantissa * pow10((other.exponent - e) as u64);
        a.cmp(&b)
    }
}

impl Add for BigReal {
    type Output = BigReal;
    fn add(self, rhs: BigReal) -> BigReal {
        let precision = self.precision.max(rhs.precision);
        if rhs.mantissa.is_zero() {
            return self.with_precision(precision);
        }
        if self.mantissa.is_zero() {
            return rhs.with_precision(precision);
        }
        let (oa, ob) = (self.magnitude_order(), rhs.magnitude_order());
        let gap = precision as i64 + 3;
        // A far smaller addend only decides the direction of rounding.
        if oa - ob > gap || ob - oa > gap {
            let (big, small) = if oa > ob { (self, rhs) } else { (rhs, self) };
            let same_sign = big.mantissa_sign_matches(&small);
            let widen = (precision as i64 + 2 - digit_count(&big.mantissa) as i64).max(0);
            let m = big.mantissa * pow10(widen as u64);
            let e = big.exponent - widen;
            if same_sign {
                return BigReal::from_parts(m, e, precision, true);
            }
            let toward_zero = if m.is_negative() { 1 } else { -1 };
            return BigReal::from_parts(m * 10 + toward_zero, e - 1, precision, true);
        }
        let e = self.exponent.min(rhs.exponent);
        let a = &self.mantissa * pow10((self.exponent - e) as u64);
        let b = &rhs.mantissa * pow10((rhs.exponent - e) as u64);
        BigReal::from_parts(a + b, e, precision, false)
    }
}

impl Sub for BigReal {
    type Output = BigReal;
    fn sub(self, rhs: BigReal) -> BigReal {
        self + (-rhs)
    }
}

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal {
            mantissa: -self.mantissa,
            ..self
        }
    }
}

impl Mul for BigReal {
    type Output = BigReal;
    fn mul(self, rhs: BigReal) -> BigReal {
        let precision = self.precision.max(rhs.precision);
        BigReal::from_parts(
            self.mantissa * rhs.mantissa,
            self.exponent + rhs.exponent,
            precision,
            false,
        )
    }
}

impl Div for BigReal {
    type Output = BigReal;
    fn div(self, rhs: BigReal) -> BigReal {
        let precision = self.precision.max(rhs.precision);
        BigReal::from_ratio(
            &self.mantissa,
            &rhs.mantissa,
            self.exponent - rhs.exponent,
            precision,
        )
    }
}

impl Rem for BigReal {
    type Output = BigReal;
    fn rem(self, rhs: BigReal) -> BigReal {
        let q = (self.to_rational() / rhs.to_rational()).trunc();
        let precision = self.precision.max(rhs.precision);
        let r = self.to_rational() - q * rhs.to_rational();
        BigReal::from_rational(&r, precision)
    }
}

impl Zero for BigReal {
    fn zero() -> Self {
        BigReal::zero_with_precision(MIN_PRECISION)
    }
    fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }
}

impl One for BigReal {
    fn one() -> Self {
        BigReal::from_integer(BigInt::one(), MIN_PRECISION)
    }
}

impl Num for BigReal {
    type FromStrRadixErr = ParseBigRealError;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        if radix != 10 {
            return Err(ParseBigRealError(s.to_string()));
        }
        s.parse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn br(s: &str) -> BigReal {
        s.parse().unwrap()
    }

    #[test]
    fn one_third_rounds_to_precision() {
        let x = BigReal::from_integer(1.into(), 50) / BigReal::from_integer(3.into(), 50);
        assert_eq!(x.to_string(), format!("3.{}e-1", "3".repeat(49)));
        let y = BigReal::from_integer(2.into(), 50) / BigReal::from_integer(3.into(), 50);
        assert_eq!(y.to_string(), format!("6.{}7e-1", "6".repeat(48)));
    }

    #[test]
    fn ties_go_to_even() {
        // 1.5 and 2.5 at the last place
        let a = BigReal::from_parts(BigInt::from(15), -1, 30, false);
        let tie_up = BigReal::from_parts(
            BigInt::from(10u32).pow(30) + 5u32 * BigInt::from(10u32).pow(0) * 1u32,
            0,
            30,
            false,
        );
        assert_eq!(a.to_rational(), Rational::new(3.into(), 2.into()));
        // 10^30 + 5 has 31 digits; rounding drops the 5 toward the even neighbour 10^30.
        assert_eq!(tie_up.to_rational(), Rational::from_integer(BigInt::from(10u32).pow(30)));
        let odd = BigReal::from_parts(BigInt::from(10u32).pow(30) + 15u32, 0, 30, false);
        assert_eq!(
            odd.to_rational(),
            Rational::from_integer(BigInt::from(10u32).pow(30) + 20u32)
        );
    }

    #[test]
    fn sticky_breaks_ties_upward() {
        // exactly x.5 ulp plus a tiny remainder must round up
        let x = BigReal::from_parts(BigInt::from(10u32).pow(30) + 4u32, 0, 30, true);
        assert_eq!(
            x.to_rational(),
            Rational::from_integer(BigInt::from(10u32).pow(30))
        );
        let y = BigReal::from_ratio(&BigInt::from(1), &BigInt::from(7), 0, 30);
        // 1/7 = 0.142857142857... correctly rounded to 30 digits
        assert_eq!(y.to_string(), "1.42857142857142857142857142857e-1");
    }

    #[test]
    fn sqrt_two_matches_known_digits() {
        let two = BigReal::from_integer(2.into(), 50);
        let r = two.sqrt().unwrap();
        assert_eq!(
            r.to_string(),
            "1.4142135623730950488016887242096980785696718753769e0"
        );
        assert!(BigReal::from_integer((-1).into(), 50).sqrt().is_none());
        assert_eq!(BigReal::from_integer(49.into(), 50).sqrt().unwrap(), br("7"));
    }

    #[test]
    fn display_round_trips() {
        for text in ["1.25e-3", "-7", "0.1", "123456789.123456789"] {
            let x = br(text);
            let back: BigReal = x.to_string().parse().unwrap();
            assert_eq!(x, back);
            assert_eq!(x.to_string(), back.to_string());
        }
    }

    #[test]
    fn addition_with_disparate_magnitudes() {
        let big = br("1e40");
        let tiny = br("1e-40");
        assert_eq!(big.clone() + tiny.clone(), big);
        assert_eq!(tiny.clone() + big.clone(), big);
        let s = br("1") + br("1e-20");
        assert_eq!(s.to_rational(), Rational::new(BigInt::from(10u32).pow(20) + 1u32, BigInt::from(10u32).pow(20)));
    }

    #[test]
    fn ordering_and_equality() {
        assert!(br("-2") < br("-1"));
        assert!(br("0.001") < br("0.01"));
        assert!(br("3") > br("0"));
        assert_eq!(br("1.50"), br("1.5"));
    }

    #[test]
    fn decimal_parse_is_exact() {
        assert_eq!(
            parse_decimal_exact("0.1").unwrap(),
            Rational::new(1.into(), 10.into())
        );
        assert_eq!(
            parse_decimal_exact("-2.5e2").unwrap(),
            Rational::from_integer((-250).into())
        );
        assert!(parse_decimal_exact("1.2.3").is_none());
        assert!(parse_decimal_exact("e5").is_none());
    }
}
