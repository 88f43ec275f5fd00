//! Exact polynomial and rational-function arithmetic in `s`.

mod bigreal;
mod parse;
mod poly;
#[allow(clippy::module_inception)]
mod ratfunc;
mod scalar;

pub use bigreal::{parse_decimal_exact, BigReal, ParseBigRealError, DEFAULT_PRECISION, MIN_PRECISION};
pub use parse::parse_ratfunc;
pub use poly::Poly;
pub use ratfunc::RatFunc;
pub use scalar::Scalar;

/// Exact ratio of arbitrary-precision integers.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RatFuncError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by the zero polynomial")]
    ZeroDivisor,
    #[error("pole at s = {0}")]
    PoleAt(String),
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
}

/// Parses `p`, `p/q` or a decimal literal into an exact rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let t = text.trim();
    if let Some((n, d)) = t.split_once('/') {
        let n: num_bigint::BigInt = n.trim().parse().ok()?;
        let d: num_bigint::BigInt = d.trim().parse().ok()?;
        if d == num_bigint::BigInt::from(0) {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    parse_decimal_exact(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn small_poly() -> impl Strategy<Value = Poly<Rational>> {
        prop::collection::vec((-9i64..=9, 1i64..=4), 0..5).prop_map(|cs| {
            Poly::new(
                cs.into_iter()
                    .map(|(n, d)| Rational::new(n.into(), d.into()))
                    .collect(),
            )
        })
    }

    fn small_ratfunc() -> impl Strategy<Value = RatFunc<Rational>> {
        (small_poly(), small_poly())
            .prop_filter("nonzero denominator", |(_, d)| !d.is_zero())
            .prop_map(|(n, d)| RatFunc::new(n, d).unwrap())
    }

    proptest! {
        #[test]
        fn multiplication_distributes(p in small_poly(), q in small_poly(), r in small_poly()) {
            prop_assert_eq!(&(&p + &q) * &r, &(&p * &r) + &(&q * &r));
        }

        #[test]
        fn divrem_reconstructs(p in small_poly(), q in small_poly()) {
            prop_assume!(!q.is_zero());
            let (quot, rem) = p.divrem(&q).unwrap();
            prop_assert_eq!(&(&quot * &q) + &rem, p);
            prop_assert!(rem.degree() < q.degree());
        }

        #[test]
        fn normalize_is_idempotent_and_preserves_values(n in small_poly(), d in small_poly(), x in -20i64..20) {
            prop_assume!(!d.is_zero());
            let f = RatFunc::new(n.clone(), d.clone()).unwrap();
            let again = RatFunc::new(f.num().clone(), f.den().clone()).unwrap();
            prop_assert_eq!(&f, &again);
            let xq = Rational::new(x.into(), 3.into());
            let dv = d.eval(&xq);
            if dv != Rational::from_integer(0.into()) {
                prop_assert_eq!(f.eval(&xq).unwrap(), n.eval(&xq) / dv);
            }
        }

        #[test]
        fn even_part_is_even(f in small_ratfunc()) {
            let e = f.even_part();
            prop_assert_eq!(e.reflect(), e);
        }

        #[test]
        fn text_form_round_trips(f in small_ratfunc()) {
            let text = f.to_string();
            prop_assert_eq!(parse_ratfunc(&text).unwrap(), f);
        }
    }

    #[test]
    fn rational_literals() {
        assert_eq!(parse_rational("3/6"), Some(Rational::new(1.into(), 2.into())));
        assert_eq!(parse_rational("0.1"), Some(Rational::new(1.into(), 10.into())));
        assert_eq!(parse_rational("-4"), Some(Rational::from_integer((-4).into())));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
    }
}
