//! Driving-point admittance of a netlist by nodal analysis over polynomials
//! in `s`, coefficient extraction, and frequency-response sampling.

use num_complex::Complex;
use num_traits::Zero;

use crate::admittance::{AdmittanceError, CanonicalAdmittance};
use crate::netlist::{ElementKind, Netlist};
use crate::ratfunc::{Poly, RatFunc, RatFuncError, Rational, Scalar};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AnalysisError {
    #[error("singular nodal system")]
    Singular,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdmittanceResult<T> {
    pub y: RatFunc<T>,
    pub canonical: Option<CanonicalAdmittance<T>>,
    pub degree: usize,
}

/// Numerator and denominator of `Y(s)` before cancellation.
///
/// The node-admittance matrix times `s` has polynomial entries (`s/R`, `1/L`,
/// `C s^2`). With `T-` grounded and unit current into `T+`,
/// `Y = det(P) / (s det(P'))` where `P'` drops the `T+` row and column.
pub fn admittance_polys<T: Scalar>(n: &Netlist<T>) -> Result<(Poly<T>, Poly<T>), AnalysisError> {
    let p = scaled_nodal_matrix(n);
    let minor: Vec<Vec<Poly<T>>> = p[1..].iter().map(|row| row[1..].to_vec()).collect();
    let num = bareiss_det(p);
    let den = &Poly::s() * &bareiss_det(minor);
    if num.is_zero() || den.is_zero() {
        return Err(AnalysisError::Singular);
    }
    Ok((num, den))
}

/// Rows and columns are nodes other than `T-`, with `T+` first.
fn scaled_nodal_matrix<T: Scalar>(n: &Netlist<T>) -> Vec<Vec<Poly<T>>> {
    let size = n.node_count() - 1;
    let index = |v: usize| match v {
        0 => Some(0),
        1 => None,
        v => Some(v - 1),
    };
    let mut m = vec![vec![Poly::zero(); size]; size];
    for br in n.branches() {
        let v = br.element.value.clone();
        let stamp = match br.element.kind {
            ElementKind::R => Poly::monomial(T::one() / v, 1),
            ElementKind::L => Poly::constant(T::one() / v),
            ElementKind::C => Poly::monomial(v, 2),
        };
        let (a, b) = (index(br.a), index(br.b));
        for x in [a, b].into_iter().flatten() {
            m[x][x] = &m[x][x] + &stamp;
        }
        if let (Some(a), Some(b)) = (a, b) {
            m[a][b] = &m[a][b] - &stamp;
            m[b][a] = &m[b][a] - &stamp;
        }
    }
    m
}

/// Fraction-free determinant; every division is exact in the polynomial ring.
fn bareiss_det<T: Scalar>(mut m: Vec<Vec<Poly<T>>>) -> Poly<T> {
    let n = m.len();
    if n == 0 {
        return Poly::one();
    }
    let mut sign = T::one();
    let mut prev = Poly::one();
    for k in 0..n {
        let pivot = (k..n)
            .filter(|&i| !m[i][k].is_zero())
            .max_by(|&i, &j| {
                m[i][k]
                    .max_abs_coeff()
                    .partial_cmp(&m[j][k].max_abs_coeff())
                    .unwrap_or(std::cmp::Ordering::Equal)
            });
        let Some(p) = pivot else {
            return Poly::zero();
        };
        if p != k {
            m.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = t.div_exact(&prev).expect("nonzero pivot");
            }
        }
        prev = m[k][k].clone();
    }
    m[n - 1][n - 1].scale(&sign)
}

pub fn driving_point_admittance<T: Scalar>(n: &Netlist<T>) -> Result<AdmittanceResult<T>, AnalysisError> {
    let (num, den) = admittance_polys(n)?;
    let y = RatFunc::new(num, den).map_err(|_| AnalysisError::Singular)?;
    let canonical = CanonicalAdmittance::from_ratfunc(&y).ok();
    let degree = y.mcmillan_degree();
    Ok(AdmittanceResult { y, canonical, degree })
}

pub fn extract_canonical<T: Scalar>(r: &AdmittanceResult<T>) -> Result<CanonicalAdmittance<T>, AdmittanceError> {
    CanonicalAdmittance::from_ratfunc(&r.y)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResponseSample {
    pub omega: f64,
    pub re: f64,
    pub im: f64,
}

/// `n` log-spaced frequencies from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.log10(), hi.log10());
    (0..n)
        .map(|i| {
            let t = if n == 1 { 0.0 } else { i as f64 / (n - 1) as f64 };
            10f64.powf(a + t * (b - a))
        })
        .collect()
}

/// Default sampling grid: 601 points on `[1e-6, 1e6]` rad/s.
pub fn default_grid() -> Vec<f64> {
    log_grid(1e-6, 1e6, 601)
}

/// `Y(jw)` on the grid, evaluated in the field of `f` and reported as `f64`.
pub fn sample_response<T: Scalar>(f: &RatFunc<T>, grid: &[f64]) -> Result<Vec<ResponseSample>, RatFuncError> {
    grid.iter()
        .map(|&omega| {
            let w = Rational::from_float(omega).expect("finite frequency");
            let z = Complex::new(T::zero(), T::from_rational(&w));
            let v = f.eval_complex(&z)?;
            Ok(ResponseSample {
                omega,
                re: v.re.to_f64(),
                im: v.im.to_f64(),
            })
        })
        .collect()
}

/// Outcome of the sampled positive-real test.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericPrReport {
    /// Smallest sampled `Re Y(jw)` (exact where it was confirmed).
    pub min_re: f64,
    pub min_at: f64,
    /// Residues at imaginary-axis poles other than `s = 0` are real and
    /// nonnegative.
    pub residues_ok: bool,
    pub is_pr: bool,
}

/// Sampled positive-real test, independent of the closed-form inequalities:
/// `Re Y(jw) >= -1e-12` over the grid (negative `f64` samples small enough
/// to be rounding error are re-checked in exact arithmetic) and nonnegative
/// real residues at imaginary-axis poles.
pub fn numeric_pr_check(y: &CanonicalAdmittance<Rational>, grid: &[f64]) -> NumericPrReport {
    let exact = y.to_ratfunc();
    let approx = exact.map(Scalar::to_f64);
    let mut points: Vec<f64> = grid.to_vec();
    if y.d0.is_positive() {
        // neighbourhood of the resonance at w^2 = 1/d0
        let w0 = (1.0 / y.d0.to_f64()).sqrt();
        points.extend([0.9, 0.99, 0.999, 1.001, 1.01, 1.1].iter().map(|f| w0 * f));
    }
    let mut min_re = f64::INFINITY;
    let mut min_at = f64::NAN;
    for &omega in &points {
        let (re, size) = match approx.eval_complex(&Complex::new(0.0, omega)) {
            Ok(v) => (v.re, v.norm()),
            Err(_) => continue,
        };
        // only samples within rounding distance of zero are re-evaluated
        let re = if re < -1e-12 && re > -1e-9 * size {
            // a nearby frequency with a short mantissa keeps the exact evaluation cheap
            let w = Rational::from_float(f64::from_bits(omega.to_bits() & !0xFFFF_FFFF)).expect("finite frequency");
            match exact.eval_complex(&Complex::new(Rational::zero(), w)) {
                Ok(v) => v.re.to_f64(),
                Err(_) => continue,
            }
        } else {
            re
        };
        if re < min_re {
            min_re = re;
            min_at = omega;
        }
    }
    let residues_ok = imaginary_axis_residues_ok(y);
    NumericPrReport {
        min_re,
        min_at,
        residues_ok,
        is_pr: min_re >= -1e-12 && residues_ok,
    }
}

/// Residues of `N/D` at the roots of `d0 s^2 + 1` when that factor has no
/// `s` term. With `p^2 = -1/d0`, both `N(p)` and `D'(p)` reduce to
/// `c0 + c1 p`, so realness and sign follow without square roots.
fn imaginary_axis_residues_ok(y: &CanonicalAdmittance<Rational>) -> bool {
    if !y.d0.is_positive() || !y.d1.is_zero() {
        return true;
    }
    let one = Rational::from_integer(1.into());
    let quad = Poly::new(vec![one.clone(), Rational::zero(), y.d0.clone()]);
    let num = y.numerator().scale(&y.k);
    let den = &Poly::s() * &y.denominator_quadratic();
    let (_, nr) = num.divrem(&quad).expect("nonzero");
    let (_, dr) = den.derivative().divrem(&quad).expect("nonzero");
    let (n0, n1) = (nr.coeff(0), nr.coeff(1));
    let (m0, m1) = (dr.coeff(0), dr.coeff(1));
    // p = j w with w^2 = 1/d0: (n0 + j n1 w) / (m0 + j m1 w)
    let w2 = one / y.d0.clone();
    let imaginary = n1.clone() * &m0 - n0.clone() * &m1;
    let real = n0 * m0 + n1 * m1 * w2;
    imaginary.is_zero() && real >= Rational::zero()
}
