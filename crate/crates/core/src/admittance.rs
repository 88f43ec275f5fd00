//! The admittance class `Y(s) = k(a0 s^2 + a1 s + 1) / (s(d0 s^2 + d1 s + 1))`.
//!
//! Covers shape matching from a rational function, the positive-real
//! decision, the classifier `R_k`, frequency-inverse duality and detection of
//! a bare inductor.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ratfunc::{parse_rational, BigReal, Poly, RatFunc, RatFuncError, Rational, Scalar};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AdmittanceError {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("coefficient {name} is negative")]
    NegativeCoefficient { name: &'static str },
    #[error("gain k must be positive")]
    NonPositiveGain,
    #[error("frequency-inverse dual needs a0 > 0 and d0 > 0")]
    DegenerateDual,
    #[error("invalid coefficient `{0}`")]
    BadCoefficient(String),
    #[error(transparent)]
    RatFunc(#[from] RatFuncError),
}

/// Coefficients `(a0, a1, d0, d1, k)` of a class member.
#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalAdmittance<T = Rational> {
    pub a0: T,
    pub a1: T,
    pub d0: T,
    pub d1: T,
    pub k: T,
}

/// Inequality (or zero pattern) that rules out positive-realness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PrCondition {
    /// `a0 d1 - a1 d0 < 0`
    CrossTermNegative,
    /// `a1 - d1 < 0`
    DampingGapNegative,
    /// `a0 - d0 < 0`
    MassGapNegative,
    /// A zero pattern that admits no positive-real member.
    DegenerateViolation,
}

impl fmt::Display for PrCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PrCondition::CrossTermNegative => "a0*d1 - a1*d0 < 0",
            PrCondition::DampingGapNegative => "a1 - d1 < 0",
            PrCondition::MassGapNegative => "a0 - d0 < 0",
            PrCondition::DegenerateViolation => "degenerate-case violation",
        })
    }
}

/// Which branch of the decision applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PrCase {
    /// All four coefficients positive.
    General,
    /// `d0 = 0`: positive-real iff `a1 >= d1`.
    ZeroD0,
    /// `a1 = d1 = 0` (with `d0 > 0`): positive-real iff `a0 >= d0`.
    ZeroA1D1,
    /// Any other pattern containing a zero coefficient.
    OtherZero,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrVerdict {
    pub is_pr: bool,
    pub failed_condition: Option<PrCondition>,
    pub case: PrCase,
}

impl<T: Scalar> CanonicalAdmittance<T> {
    pub fn new(a0: T, a1: T, d0: T, d1: T, k: T) -> Result<Self, AdmittanceError> {
        for (name, v) in [("a0", &a0), ("a1", &a1), ("d0", &d0), ("d1", &d1)] {
            if *v < T::zero() {
                return Err(AdmittanceError::NegativeCoefficient { name });
            }
        }
        if !k.is_positive() {
            return Err(AdmittanceError::NonPositiveGain);
        }
        Ok(CanonicalAdmittance { a0, a1, d0, d1, k })
    }

    pub fn numerator(&self) -> Poly<T> {
        Poly::new(vec![T::one(), self.a1.clone(), self.a0.clone()])
    }

    /// `d0 s^2 + d1 s + 1`, without the factor `s`.
    pub fn denominator_quadratic(&self) -> Poly<T> {
        Poly::new(vec![T::one(), self.d1.clone(), self.d0.clone()])
    }

    pub fn to_ratfunc(&self) -> RatFunc<T> {
        let num = self.numerator().scale(&self.k);
        let den = &Poly::s() * &self.denominator_quadratic();
        RatFunc::new(num, den).expect("denominator contains s")
    }

    /// Matches a rational function against the class shape.
    pub fn from_ratfunc(f: &RatFunc<T>) -> Result<Self, AdmittanceError> {
        let f = RatFunc::new(f.num().clone(), f.den().clone())?;
        let (num, den) = (f.num(), f.den());
        if num.is_zero() {
            return Err(AdmittanceError::Shape("zero admittance".into()));
        }
        match den.low_order() {
            1 => {}
            0 => return Err(AdmittanceError::Shape("denominator lacks the factor s".into())),
            _ => return Err(AdmittanceError::Shape("denominator has a repeated factor s".into())),
        }
        let quad = Poly::new(den.coeffs()[1..].to_vec());
        if num.degree() > 2 || quad.degree() > 2 {
            return Err(AdmittanceError::Shape(format!(
                "degrees ({}, {}) exceed (2, 3)",
                num.degree(),
                den.degree()
            )));
        }
        let n0 = num.coeff(0);
        let q0 = quad.coeff(0);
        if n0.is_zero() || q0.is_zero() {
            return Err(AdmittanceError::Shape("vanishing constant term".into()));
        }
        let k = n0.clone() / q0.clone();
        let y = CanonicalAdmittance::new(
            num.coeff(2) / n0.clone(),
            num.coeff(1) / n0,
            quad.coeff(2) / q0.clone(),
            quad.coeff(1) / q0,
            k,
        )?;
        Ok(y)
    }

    /// Canonical tuple of the reduced admittance (common factors cancelled).
    pub fn reduced(&self) -> Self {
        Self::from_ratfunc(&self.to_ratfunc()).expect("class members reduce within the class")
    }

    /// `a0 d1 - a1 d0`
    pub fn cross(&self) -> T {
        self.a0.clone() * self.d1.clone() - self.a1.clone() * self.d0.clone()
    }

    /// `a1 - d1`
    pub fn damping_gap(&self) -> T {
        self.a1.clone() - self.d1.clone()
    }

    /// `a0 - d0`
    pub fn mass_gap(&self) -> T {
        self.a0.clone() - self.d0.clone()
    }

    /// `(a0 - d0)^2 - (a0 d1 - a1 d0)(a1 - d1)`
    pub fn r_k(&self) -> T {
        let m = self.mass_gap();
        m.clone() * m - self.cross() * self.damping_gap()
    }

    /// `(a0 d1 - a1 d0)(a1 - d1) - d0^2`, zero on the bridge family.
    pub fn bridge_condition(&self) -> T {
        self.cross() * self.damping_gap() - self.d0.clone() * self.d0.clone()
    }

    pub fn has_zero_coefficient(&self) -> bool {
        [&self.a0, &self.a1, &self.d0, &self.d1].iter().any(|c| c.is_zero())
    }

    pub fn is_positive_real(&self) -> PrVerdict {
        let zero = T::zero();
        let case = if !self.has_zero_coefficient() {
            PrCase::General
        } else if self.d0.is_zero() {
            PrCase::ZeroD0
        } else if self.a1.is_zero() && self.d1.is_zero() {
            PrCase::ZeroA1D1
        } else {
            PrCase::OtherZero
        };
        let failed = if self.d0.is_zero() {
            (self.damping_gap() < zero).then_some(PrCondition::DampingGapNegative)
        } else {
            let first = if self.mass_gap() < zero {
                Some(PrCondition::MassGapNegative)
            } else if self.cross() < zero {
                Some(PrCondition::CrossTermNegative)
            } else if self.damping_gap() < zero {
                Some(PrCondition::DampingGapNegative)
            } else {
                None
            };
            match (first, case) {
                (Some(_), PrCase::OtherZero) => Some(PrCondition::DegenerateViolation),
                (f, _) => f,
            }
        };
        PrVerdict {
            is_pr: failed.is_none(),
            failed_condition: failed,
            case,
        }
    }

    /// Coefficients of `Y^{-1}(1/s)`.
    pub fn fid_coefficients(&self) -> Result<Self, AdmittanceError> {
        if self.a0.is_zero() || self.d0.is_zero() {
            return Err(AdmittanceError::DegenerateDual);
        }
        let one = T::one();
        Ok(CanonicalAdmittance {
            a0: one.clone() / self.d0.clone(),
            a1: self.d1.clone() / self.d0.clone(),
            d0: one / self.a0.clone(),
            d1: self.a1.clone() / self.a0.clone(),
            k: self.d0.clone() / (self.k.clone() * self.a0.clone()),
        })
    }

    /// Inductance `1/k` when the admittance reduces to `k/s`.
    pub fn is_pure_inductor(&self) -> Option<T> {
        if self.damping_gap() != T::zero() || self.cross() != T::zero() {
            return None;
        }
        let r = self.reduced();
        let bare = [&r.a0, &r.a1, &r.d0, &r.d1].iter().all(|c| c.is_zero());
        bare.then(|| T::one() / r.k)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> CanonicalAdmittance<U> {
        CanonicalAdmittance {
            a0: f(&self.a0),
            a1: f(&self.a1),
            d0: f(&self.d0),
            d1: f(&self.d1),
            k: f(&self.k),
        }
    }

    /// Coefficient-wise relative agreement within `tol`.
    pub fn approx_eq(&self, other: &Self, tol: &T) -> bool {
        let scale = [&self.a0, &self.a1, &self.d0, &self.d1, &self.k]
            .into_iter()
            .chain([&other.a0, &other.a1, &other.d0, &other.d1, &other.k])
            .map(|c| c.magnitude())
            .fold(T::zero(), |a, b| if b > a { b } else { a });
        self.pairs(other)
            .iter()
            .all(|(a, b)| (a.clone() - b.clone()).magnitude() <= tol.clone() * scale.clone())
    }

    fn pairs(&self, other: &Self) -> [(T, T); 5] {
        [
            (self.a0.clone(), other.a0.clone()),
            (self.a1.clone(), other.a1.clone()),
            (self.d0.clone(), other.d0.clone()),
            (self.d1.clone(), other.d1.clone()),
            (self.k.clone(), other.k.clone()),
        ]
    }
}

impl CanonicalAdmittance<Rational> {
    pub fn from_ints(a0: i64, a1: i64, d0: i64, d1: i64, k: i64) -> Result<Self, AdmittanceError> {
        let q = |n: i64| Rational::from_integer(n.into());
        Self::new(q(a0), q(a1), q(d0), q(d1), q(k))
    }

    /// Parses `a0,a1,d0,d1,k` with exact `p/q` or decimal entries.
    pub fn parse_list(text: &str) -> Result<Self, AdmittanceError> {
        let parts: Vec<&str> = text.split(',').map(str::trim).collect();
        if parts.len() != 5 {
            return Err(AdmittanceError::BadCoefficient(format!(
                "expected 5 comma-separated values, got {}",
                parts.len()
            )));
        }
        let v: Vec<Rational> = parts
            .iter()
            .map(|p| parse_rational(p).ok_or_else(|| AdmittanceError::BadCoefficient(p.to_string())))
            .collect::<Result<_, _>>()?;
        Self::new(v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone(), v[4].clone())
    }

    pub fn to_bigreal(&self, precision: u32) -> CanonicalAdmittance<BigReal> {
        self.map(|c| BigReal::from_rational(c, precision))
    }

    pub fn to_f64(&self) -> CanonicalAdmittance<f64> {
        self.map(Scalar::to_f64)
    }
}

impl<T: Scalar> fmt::Display for CanonicalAdmittance<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}, {}, {})",
            self.a0, self.a1, self.d0, self.d1, self.k
        )
    }
}

/// JSON form `{a0, a1, d0, d1, k}` with exact `"p/q"` strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientRecord {
    pub a0: String,
    pub a1: String,
    pub d0: String,
    pub d1: String,
    pub k: String,
}

impl From<&CanonicalAdmittance<Rational>> for CoefficientRecord {
    fn from(y: &CanonicalAdmittance<Rational>) -> Self {
        CoefficientRecord {
            a0: y.a0.to_string(),
            a1: y.a1.to_string(),
            d0: y.d0.to_string(),
            d1: y.d1.to_string(),
            k: y.k.to_string(),
        }
    }
}

impl TryFrom<&CoefficientRecord> for CanonicalAdmittance<Rational> {
    type Error = AdmittanceError;
    fn try_from(r: &CoefficientRecord) -> Result<Self, Self::Error> {
        let p = |s: &String| parse_rational(s).ok_or_else(|| AdmittanceError::BadCoefficient(s.clone()));
        CanonicalAdmittance::new(p(&r.a0)?, p(&r.a1)?, p(&r.d0)?, p(&r.d1)?, p(&r.k)?)
    }
}

impl Serialize for CanonicalAdmittance<Rational> {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        CoefficientRecord::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CanonicalAdmittance<Rational> {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let record = CoefficientRecord::deserialize(deserializer)?;
        CanonicalAdmittance::try_from(&record).map_err(serde::de::Error::custom)
    }
}
