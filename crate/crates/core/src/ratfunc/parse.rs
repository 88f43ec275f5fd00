//! Recursive-descent parser for rational expressions in `s`.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary | power)*
//! unary  := '-' unary | '+' unary | power
//! power  := atom ('^' ['-'] digits)?
//! atom   := number | 's' | '(' expr ')'
//! number := digits ['.' digits] [('e' | 'E') ['+' | '-'] digits]
//! ```
//!
//! Literals are exact: `0.1` parses to `1/10`. A factor starting with `s`
//! or `(` may follow without `*`, so `2s^2` is `2*s^2`.

use super::bigreal::parse_decimal_exact;
use super::{RatFunc, RatFuncError, Rational};

pub fn parse_ratfunc(text: &str) -> Result<RatFunc<Rational>, RatFuncError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let value = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(value)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> RatFuncError {
        RatFuncError::Syntax {
            position: self.pos,
            message: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<RatFunc<Rational>, RatFuncError> {
        let mut acc = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == b'+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatFunc<Rational>, RatFuncError> {
        let mut acc = self.unary()?;
        loop {
            let op = match self.peek() {
                Some(op @ (b'*' | b'/')) => op,
                Some(b's' | b'(') => {
                    acc = &acc * &self.power()?;
                    continue;
                }
                _ => break,
            };
            let at = self.pos;
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if op == b'*' {
                &acc * &rhs
            } else {
                acc.checked_div(&rhs).map_err(|_| RatFuncError::Syntax {
                    position: at,
                    message: "division by zero polynomial".into(),
                })?
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RatFunc<Rational>, RatFuncError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RatFunc<Rational>, RatFuncError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let start = self.pos;
        if self.src.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let n: i32 = text.parse().map_err(|_| RatFuncError::Syntax {
            position: start,
            message: "expected integer exponent".into(),
        })?;
        base.pow(n).map_err(|_| RatFuncError::Syntax {
            position: start,
            message: "negative power of zero".into(),
        })
    }

    fn atom(&mut self) -> Result<RatFunc<Rational>, RatFuncError> {
        match self.peek() {
            Some(b's') => {
                self.pos += 1;
                Ok(RatFunc::s())
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<RatFunc<Rational>, RatFuncError> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
        };
        digits(self);
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            digits(self);
        }
        if matches!(self.src.get(self.pos), Some(b'e' | b'E')) {
            let mark = self.pos;
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            let before = self.pos;
            digits(self);
            if self.pos == before {
                self.pos = mark;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let value = parse_decimal_exact(text).ok_or(RatFuncError::Syntax {
            position: start,
            message: format!("invalid number `{text}`"),
        })?;
        Ok(RatFunc::constant(value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfunc::Poly;

    type P = Poly<Rational>;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn transcribes_direct_form() {
        let f = parse_ratfunc("(2*s^2+s+1)/(s*(s^2+s+1))").unwrap();
        assert_eq!(f.num(), &P::from_ints(&[1, 1, 2]));
        assert_eq!(f.den(), &P::from_ints(&[0, 1, 1, 1]));
    }

    #[test]
    fn juxtaposition_multiplies() {
        let implicit = parse_ratfunc("(2s^2+s+1)/(s(s^2+s+1))").unwrap();
        assert_eq!(implicit, parse_ratfunc("(2*s^2+s+1)/(s*(s^2+s+1))").unwrap());
        assert_eq!(parse_ratfunc("3(s+1)s").unwrap(), parse_ratfunc("3*(s+1)*s").unwrap());
    }

    #[test]
    fn sums_normalize() {
        let f = parse_ratfunc("1/s + 1").unwrap();
        assert_eq!(f.num(), &P::from_ints(&[1, 1]));
        assert_eq!(f.den(), &P::from_ints(&[0, 1]));
    }

    #[test]
    fn reduces_common_factor() {
        let f = parse_ratfunc("(s+1)^2/((s+1)*s)").unwrap();
        assert_eq!(f.num(), &P::from_ints(&[1, 1]));
        assert_eq!(f.den(), &P::from_ints(&[0, 1]));
        // oracle: pointwise agreement at 3 points with the unreduced expression
        for x in [q(1, 1), q(2, 3), q(-7, 2)] {
            let one = q(1, 1);
            let unreduced = (x.clone() + &one) * (x.clone() + &one) / ((x.clone() + &one) * x.clone());
            assert_eq!(f.eval(&x).unwrap(), unreduced);
        }
    }

    #[test]
    fn precedence_and_literals() {
        let f = parse_ratfunc("-s^2 + 0.5*s - 1/4").unwrap();
        assert_eq!(f.num(), &P::new(vec![q(-1, 4), q(1, 2), q(-1, 1)]));
        let g = parse_ratfunc("2^-1 * s^-1").unwrap();
        assert_eq!(g, RatFunc::new(P::one(), P::from_ints(&[0, 2])).unwrap());
        let h = parse_ratfunc("1.5e1").unwrap();
        assert_eq!(h, RatFunc::constant(q(15, 1)));
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse_ratfunc("s + * 2") {
            Err(RatFuncError::Syntax { position, .. }) => assert_eq!(position, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_ratfunc("(s+1"),
            Err(RatFuncError::Syntax { .. })
        ));
        assert!(matches!(
            parse_ratfunc("x"),
            Err(RatFuncError::Syntax { position: 0, .. })
        ));
        assert!(matches!(
            parse_ratfunc("1/(s-s)"),
            Err(RatFuncError::Syntax { position: 1, .. })
        ));
        assert!(matches!(
            parse_ratfunc("s^x"),
            Err(RatFuncError::Syntax { .. })
        ));
    }
}
