//! Classification by `R_k` and the coefficient conditions, and closed-form
//! realizations. Every emitted network is re-analyzed before it is returned.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::admittance::{CanonicalAdmittance, PrVerdict};
use crate::analysis::driving_point_admittance;
use crate::netlist::{fid_netlist, AnyNetlist, Element, ElementKind, Netlist, NetlistBuilder, SpTree};
use crate::netlist::topology;
use crate::ratfunc::{BigReal, Rational, Scalar, DEFAULT_PRECISION, MIN_PRECISION};

type Y = CanonicalAdmittance<Rational>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Case {
    PureInductor,
    DegenerateZeroCoeff,
    ReducibleRkZero,
    Fig7aThm3,
    Fig7bDual,
    Rl5Thm5,
    BridgeLemma13,
    CanonicalRequired,
    NotPositiveReal,
}

impl Case {
    /// Largest element count a realization of this case may have.
    pub fn max_elements(self) -> usize {
        match self {
            Case::PureInductor => 1,
            Case::ReducibleRkZero => 3,
            Case::DegenerateZeroCoeff | Case::Fig7aThm3 | Case::Fig7bDual => 4,
            Case::Rl5Thm5 | Case::BridgeLemma13 => 5,
            Case::CanonicalRequired | Case::NotPositiveReal => 0,
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Condition values the classifier looked at.
#[derive(Clone, Debug, PartialEq)]
pub struct Conditions {
    pub r_k: Rational,
    /// `a0 d1 - a1 d0`
    pub cross: Rational,
    /// `a1 - d1`
    pub damping_gap: Rational,
    /// `a0 - d0`
    pub mass_gap: Rational,
    /// `(a0 d1 - a1 d0)(a1 - d1) - d0^2`
    pub bridge: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    pub pr: PrVerdict,
    pub rk: Rational,
    pub case: Case,
    pub witness: Conditions,
}

impl Classification {
    /// Whether at most four elements suffice for an all-positive tuple:
    /// `R_k = 0`, or `a0 > d0` with `a1 = d1` or `a0 d1 = a1 d0`.
    pub fn four_element_condition(&self) -> bool {
        let w = &self.witness;
        w.r_k.is_zero() || (w.mass_gap.is_positive() && (w.damping_gap.is_zero() || w.cross.is_zero()))
    }
}

pub fn classify(y: &Y) -> Classification {
    let pr = y.is_positive_real();
    let witness = Conditions {
        r_k: y.r_k(),
        cross: y.cross(),
        damping_gap: y.damping_gap(),
        mass_gap: y.mass_gap(),
        bridge: y.bridge_condition(),
    };
    let w = &witness;
    let case = if !pr.is_pr {
        Case::NotPositiveReal
    } else if y.is_pure_inductor().is_some() {
        Case::PureInductor
    } else if y.has_zero_coefficient() {
        Case::DegenerateZeroCoeff
    } else if w.r_k.is_zero() {
        Case::ReducibleRkZero
    } else if w.damping_gap.is_zero() && w.mass_gap.is_positive() {
        Case::Fig7aThm3
    } else if w.cross.is_zero() && w.mass_gap.is_positive() {
        Case::Fig7bDual
    } else if w.r_k < Rational::zero() {
        Case::Rl5Thm5
    } else if w.bridge.is_zero() {
        Case::BridgeLemma13
    } else {
        Case::CanonicalRequired
    };
    Classification {
        rk: witness.r_k.clone(),
        pr,
        case,
        witness,
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SynthesisError {
    #[error("admittance is not positive-real")]
    NotPositiveReal(PrVerdict),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("negative discriminant in the RL factorization")]
    DiscriminantViolation,
    #[error("roots are not ordered A > B > C > D > 0")]
    OrderingViolation,
    #[error("bridge formulas disagree: {0}")]
    CrossCheck(String),
    #[error("realization does not reproduce the input admittance")]
    VerificationFailed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SynthConfig {
    /// Decimal digits for irrational element values.
    pub precision: u32,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            precision: DEFAULT_PRECISION,
        }
    }
}

impl SynthConfig {
    pub fn with_precision(precision: u32) -> Self {
        SynthConfig {
            precision: precision.max(MIN_PRECISION),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Realization {
    pub netlist: AnyNetlist,
    pub case: Case,
    /// `label = expression` for every element.
    pub element_formulas: Vec<String>,
    /// Intermediate quantities (`A`..`D`, `T`, `W`...) as text.
    pub parameters: Vec<(String, String)>,
    pub verified: bool,
    pub element_count: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SynthesisOutcome {
    pub classification: Classification,
    /// Absent exactly when the case is `CanonicalRequired`.
    pub realization: Option<Realization>,
}

/// Classifies, realizes and verifies.
pub fn synthesize(y: &Y, config: &SynthConfig) -> Result<SynthesisOutcome, SynthesisError> {
    let classification = classify(y);
    let realization = match classification.case {
        Case::NotPositiveReal => return Err(SynthesisError::NotPositiveReal(classification.pr)),
        Case::CanonicalRequired => None,
        Case::PureInductor => Some(realize_pure_inductor(y)?),
        Case::DegenerateZeroCoeff => Some(realize_degenerate(y)?),
        Case::ReducibleRkZero => Some(realize_reduced(y)?),
        Case::Fig7aThm3 | Case::Fig7bDual => Some(realize_fig7(y)?),
        Case::Rl5Thm5 => Some(realize_rl5(y, config)?),
        Case::BridgeLemma13 => Some(realize_bridge(y)?),
    };
    Ok(SynthesisOutcome {
        classification,
        realization,
    })
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn elem<T>(kind: ElementKind, value: T, expr: &str) -> Element<T> {
    Element::new(kind, value).with_provenance(expr)
}

fn leaf<T: Scalar>(kind: ElementKind, value: T, expr: &str) -> SpTree<T> {
    SpTree::Leaf(elem(kind, value, expr))
}

fn formulas<T: Scalar>(n: &Netlist<T>) -> Vec<String> {
    n.branches()
        .iter()
        .map(|b| match &b.element.provenance {
            Some(p) => format!("{} = {}", b.label, p),
            None => format!("{} = {}", b.label, b.element.value),
        })
        .collect()
}

/// Exact round trip: the network's reduced admittance has the reduced
/// coefficients of `y`.
fn verify_exact(n: &Netlist<Rational>, y: &Y) -> bool {
    driving_point_admittance(n)
        .ok()
        .and_then(|r| r.canonical)
        .is_some_and(|c| c == y.reduced())
}

/// Round trip at `precision` digits, `1e-30` relative.
fn verify_approx(n: &Netlist<BigReal>, y: &Y, precision: u32) -> bool {
    let target = y.reduced().to_bigreal(precision);
    let tol = BigReal::epsilon(30, precision);
    driving_point_admittance(n)
        .ok()
        .and_then(|r| r.canonical)
        .is_some_and(|c| c.approx_eq(&target, &tol))
}

fn finish_exact(n: Netlist<Rational>, y: &Y, case: Case, parameters: Vec<(String, String)>) -> Result<Realization, SynthesisError> {
    if !verify_exact(&n, y) {
        return Err(SynthesisError::VerificationFailed);
    }
    Ok(Realization {
        element_formulas: formulas(&n),
        element_count: n.element_count(),
        netlist: AnyNetlist::Exact(n),
        case,
        parameters,
        verified: true,
    })
}

fn finish_approx(
    n: Netlist<BigReal>,
    y: &Y,
    case: Case,
    parameters: Vec<(String, String)>,
    precision: u32,
) -> Result<Realization, SynthesisError> {
    if !verify_approx(&n, y, precision) {
        return Err(SynthesisError::VerificationFailed);
    }
    Ok(Realization {
        element_formulas: formulas(&n),
        element_count: n.element_count(),
        netlist: AnyNetlist::Approx(n),
        case,
        parameters,
        verified: true,
    })
}

fn require_pr(y: &Y) -> Result<(), SynthesisError> {
    let pr = y.is_positive_real();
    if pr.is_pr {
        Ok(())
    } else {
        Err(SynthesisError::NotPositiveReal(pr))
    }
}

fn realize_pure_inductor(y: &Y) -> Result<Realization, SynthesisError> {
    let l = y
        .is_pure_inductor()
        .ok_or_else(|| SynthesisError::Precondition("admittance is not k/s".into()))?;
    let n = leaf(ElementKind::L, l, "1/k").compose().with_name("L");
    finish_exact(n, y, Case::PureInductor, vec![])
}

/// Networks for tuples with a zero coefficient: `d0 = 0`, or `a1 = d1 = 0`.
pub fn realize_degenerate(y: &Y) -> Result<Realization, SynthesisError> {
    require_pr(y)?;
    if !y.has_zero_coefficient() {
        return Err(SynthesisError::Precondition("no zero coefficient".into()));
    }
    if y.is_pure_inductor().is_some() {
        return realize_pure_inductor(y);
    }
    let (a0, a1, d0, d1, k) = (&y.a0, &y.a1, &y.d0, &y.d1, &y.k);
    let one = q(1);
    let lk = leaf(ElementKind::L, one.clone() / k, "1/k");
    let tree = if d0.is_zero() {
        let rk = y.r_k();
        if a0.is_zero() || rk.is_zero() {
            let mut r = realize_reduced(y)?;
            r.case = Case::DegenerateZeroCoeff;
            return Ok(r);
        }
        if rk.is_positive() {
            // Y - k/s = k(a0 s + a1 - d1)/(d1 s + 1)
            let mut inner = vec![leaf(ElementKind::C, k.clone() * a0 * a0 * a0 / &rk, "k*a0^3/R_k")];
            if !y.damping_gap().is_zero() {
                inner.push(leaf(
                    ElementKind::R,
                    rk.clone() / (k.clone() * a0 * a0 * y.damping_gap()),
                    "R_k/(k*a0^2*(a1-d1))",
                ));
            }
            let shunt = if inner.len() == 1 { inner.pop().unwrap() } else { SpTree::Parallel(inner) };
            let branch = if d1.is_zero() {
                shunt
            } else {
                SpTree::Series(vec![leaf(ElementKind::R, d1.clone() / (k.clone() * a0), "d1/(k*a0)"), shunt])
            };
            SpTree::Parallel(vec![lk, branch])
        } else {
            let denom = -(k.clone() * &rk);
            SpTree::Parallel(vec![
                lk,
                leaf(ElementKind::R, d1.clone() / (k.clone() * a0), "d1/(k*a0)"),
                SpTree::Series(vec![
                    leaf(ElementKind::R, a0.clone() * d1 / &denom, "-a0*d1/(k*R_k)"),
                    leaf(ElementKind::L, a0.clone() * d1 * d1 / &denom, "-a0*d1^2/(k*R_k)"),
                ]),
            ])
        }
    } else if a1.is_zero() && d1.is_zero() {
        let gap = y.mass_gap();
        SpTree::Parallel(vec![
            lk,
            SpTree::Series(vec![
                leaf(ElementKind::L, d0.clone() / (k.clone() * &gap), "d0/(k*(a0-d0))"),
                leaf(ElementKind::C, k.clone() * &gap, "k*(a0-d0)"),
            ]),
        ])
    } else {
        return Err(SynthesisError::Precondition("zero pattern without a positive-real member".into()));
    };
    let n = tree.compose().with_name("Degenerate");
    finish_exact(n, y, Case::DegenerateZeroCoeff, vec![("R_k".into(), y.r_k().to_string())])
}

/// Three-element network after cancelling the common factor:
/// `Y = k(As+1)/(s(Cs+1)) = k/s + k(A-C)/(Cs+1)`.
pub fn realize_reduced(y: &Y) -> Result<Realization, SynthesisError> {
    require_pr(y)?;
    let r = y.reduced();
    if !r.a0.is_zero() || !r.d0.is_zero() {
        return Err(SynthesisError::Precondition("no common factor to cancel".into()));
    }
    let (a, c, k) = (&r.a1, &r.d1, &r.k);
    let params = vec![("A".to_string(), a.to_string()), ("C".to_string(), c.to_string())];
    let lk = leaf(ElementKind::L, q(1) / k, "1/k");
    if a == c {
        return finish_exact(lk.compose().with_name("L"), y, Case::ReducibleRkZero, params);
    }
    let gap = a.clone() - c;
    let r1 = leaf(ElementKind::R, q(1) / (k.clone() * &gap), "1/(k*(A-C))");
    let branch = if c.is_zero() {
        r1
    } else {
        SpTree::Series(vec![r1, leaf(ElementKind::L, c.clone() / (k.clone() * &gap), "C/(k*(A-C))")])
    };
    let n = SpTree::Parallel(vec![lk, branch]).compose().with_name("Fig5b");
    finish_exact(n, y, Case::ReducibleRkZero, params)
}

/// Four-element realization when `a1 = d1` (direct) or `a0 d1 = a1 d0`
/// (through the frequency-inverse dual), with `a0 > d0` and `R_k != 0`.
pub fn realize_fig7(y: &Y) -> Result<Realization, SynthesisError> {
    require_pr(y)?;
    if y.has_zero_coefficient() || y.r_k().is_zero() || !y.mass_gap().is_positive() {
        return Err(SynthesisError::Precondition(
            "needs positive coefficients, R_k != 0 and a0 > d0".into(),
        ));
    }
    if y.damping_gap().is_zero() {
        let n = fig7a_network(y);
        return finish_exact(n, y, Case::Fig7aThm3, vec![]);
    }
    if y.cross().is_zero() {
        let dual = y.fid_coefficients().expect("a0, d0 > 0");
        let n = fid_netlist(&fig7a_network(&dual))
            .expect("series-parallel")
            .with_name("Fig7b");
        return finish_exact(n, y, Case::Fig7bDual, vec![]);
    }
    Err(SynthesisError::Precondition("neither a1 = d1 nor a0*d1 = a1*d0".into()))
}

fn fig7a_network(y: &Y) -> Netlist<Rational> {
    let (a0, a1, d0, k) = (&y.a0, &y.a1, &y.d0, &y.k);
    let gap = y.mass_gap();
    let r1 = a1.clone() * &gap / (k.clone() * a0 * a0);
    let l1 = d0.clone() / (k.clone() * a0);
    let l2 = gap.clone() / (k.clone() * a0);
    let c1 = k.clone() * a0 * a0 / &gap;
    let n = topology::fig7a(r1, l1, l2, c1);
    with_provenance(
        n,
        &[
            ("R1", "a1*(a0-d0)/(k*a0^2)"),
            ("L1", "d0/(k*a0)"),
            ("L2", "(a0-d0)/(k*a0)"),
            ("C1", "k*a0^2/(a0-d0)"),
        ],
    )
}

fn with_provenance<T: Scalar>(n: Netlist<T>, exprs: &[(&str, &str)]) -> Netlist<T> {
    let mut b = NetlistBuilder::new();
    for _ in 2..n.node_count() {
        b.node();
    }
    for br in n.branches() {
        let mut e = br.element.clone();
        if let Some((_, expr)) = exprs.iter().find(|(l, _)| *l == br.label) {
            e = e.with_provenance(*expr);
        }
        b.add_labelled(br.label.clone(), e, br.a, br.b);
    }
    b.build(n.name()).expect("same graph")
}

/// Roots with `a0 s^2 + a1 s + 1 = (As+1)(Cs+1)` and
/// `d0 s^2 + d1 s + 1 = (Bs+1)(Ds+1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Rl5Roots<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

pub fn rl5_roots<T: Scalar>(y: &CanonicalAdmittance<T>) -> Result<Rl5Roots<T>, SynthesisError> {
    let two = T::from_i64(2);
    let four = T::from_i64(4);
    let disc_a = y.a1.clone() * y.a1.clone() - four.clone() * y.a0.clone();
    let disc_d = y.d1.clone() * y.d1.clone() - four * y.d0.clone();
    let sa = disc_a.try_sqrt().ok_or(SynthesisError::DiscriminantViolation)?;
    let sd = disc_d.try_sqrt().ok_or(SynthesisError::DiscriminantViolation)?;
    let roots = Rl5Roots {
        a: (y.a1.clone() + sa.clone()) / two.clone(),
        c: (y.a1.clone() - sa) / two.clone(),
        b: (y.d1.clone() + sd.clone()) / two.clone(),
        d: (y.d1.clone() - sd) / two,
    };
    let ordered = roots.a > roots.b && roots.b > roots.c && roots.c > roots.d && roots.d > T::zero();
    if ordered {
        Ok(roots)
    } else {
        Err(SynthesisError::OrderingViolation)
    }
}

fn rl5_network<T: Scalar>(y: &CanonicalAdmittance<T>, r: &Rl5Roots<T>) -> Netlist<T> {
    let (a, b, c, d, k) = (&r.a, &r.b, &r.c, &r.d, &y.k);
    let bd = b.clone() - d.clone();
    let first = k.clone() * (a.clone() - b.clone()) * (b.clone() - c.clone());
    let second = k.clone() * (a.clone() - d.clone()) * (c.clone() - d.clone());
    let n = topology::fig8(
        T::one() / k.clone(),
        b.clone() * bd.clone() / first.clone(),
        d.clone() * bd.clone() / second.clone(),
        bd.clone() / first,
        bd / second,
    );
    with_provenance(
        n,
        &[
            ("L1", "1/k"),
            ("L2", "B(B-D)/(k(A-B)(B-C))"),
            ("L3", "D(B-D)/(k(A-D)(C-D))"),
            ("R1", "(B-D)/(k(A-B)(B-C))"),
            ("R2", "(B-D)/(k(A-D)(C-D))"),
        ],
    )
}

/// Five-element RL network `L1 || (L2 -- R1) || (L3 -- R2)` for `R_k < 0`.
pub fn realize_rl5(y: &Y, config: &SynthConfig) -> Result<Realization, SynthesisError> {
    require_pr(y)?;
    if y.has_zero_coefficient() || !y.r_k().is_negative() {
        return Err(SynthesisError::Precondition("needs positive coefficients and R_k < 0".into()));
    }
    let params = |r: &Rl5Roots<String>| {
        vec![
            ("A".to_string(), r.a.clone()),
            ("B".to_string(), r.b.clone()),
            ("C".to_string(), r.c.clone()),
            ("D".to_string(), r.d.clone()),
        ]
    };
    match rl5_roots(y) {
        Ok(r) => {
            let n = rl5_network(y, &r);
            let p = params(&Rl5Roots {
                a: r.a.to_string(),
                b: r.b.to_string(),
                c: r.c.to_string(),
                d: r.d.to_string(),
            });
            finish_exact(n, y, Case::Rl5Thm5, p)
        }
        Err(SynthesisError::DiscriminantViolation) if discriminants_nonnegative(y) => {
            let yb = y.to_bigreal(config.precision);
            let r = rl5_roots(&yb)?;
            let n = rl5_network(&yb, &r);
            let p = params(&Rl5Roots {
                a: r.a.to_string(),
                b: r.b.to_string(),
                c: r.c.to_string(),
                d: r.d.to_string(),
            });
            finish_approx(n, y, Case::Rl5Thm5, p, config.precision)
        }
        Err(e) => Err(e),
    }
}

fn discriminants_nonnegative(y: &Y) -> bool {
    let four = q(4);
    y.a1.clone() * &y.a1 >= four.clone() * &y.a0 && y.d1.clone() * &y.d1 >= four * &y.d0
}

trait SignExt {
    fn is_negative(&self) -> bool;
}

impl SignExt for Rational {
    fn is_negative(&self) -> bool {
        *self < Rational::zero()
    }
}

/// Intermediate quantities of the bridge construction.
#[derive(Clone, Debug, PartialEq)]
pub struct BridgeData<T> {
    pub t: T,
    /// `(alpha1, alpha2, alpha3)`
    pub alpha: [T; 3],
    /// `(beta1, beta2, beta3, beta4)`
    pub beta: [T; 4],
    pub w1: T,
    pub w2: T,
    pub w3: T,
    pub w: T,
    /// `(R1, L1, L2, L3, C1)` from the formulas in `a0..k` and `T`.
    pub direct: [T; 5],
    /// `(R1, L1, L2, L3, C1)` from the formulas in `alpha`, `beta`, `W`.
    pub general: [T; 5],
}

impl<T: Scalar> BridgeData<T> {
    /// `W^2 - 4 W1 W2 W3`
    pub fn discriminant(&self) -> T {
        self.w.clone() * self.w.clone() - T::from_i64(4) * self.w1.clone() * self.w2.clone() * self.w3.clone()
    }

    /// `beta4 + alpha1 beta3 + alpha3 beta1 - alpha2 beta2`
    pub fn coefficient_identity(&self) -> T {
        let [a1, a2, a3] = self.alpha.clone();
        let [b1, b2, b3, b4] = self.beta.clone();
        b4 + a1 * b3 + a3 * b1 - a2 * b2
    }

    /// `W - 2 alpha2 W3`
    pub fn margin(&self) -> T {
        self.w.clone() - T::from_i64(2) * self.alpha[1].clone() * self.w3.clone()
    }
}

/// Evaluates both sets of bridge formulas for a given `T`.
pub fn bridge_data<T: Scalar>(y: &CanonicalAdmittance<T>, t: T) -> BridgeData<T> {
    let (a0, a1, d0, d1, k) = (y.a0.clone(), y.a1.clone(), y.d0.clone(), y.d1.clone(), y.k.clone());
    let one = T::one();
    let dg = a1.clone() - d1.clone();
    let mg = a0.clone() - d0.clone();
    let tail = dg.clone() * t.clone() + mg.clone();
    let a1t = a1.clone() + t.clone();
    let direct = [
        a1.clone() * (t.clone() * t.clone() + a1.clone() * t.clone() + a0.clone())
            / (k.clone() * a1t.clone() * a1t.clone() * tail.clone()),
        (dg.clone() * t.clone() * t.clone()
            + (a1.clone() * a1.clone() - a1.clone() * d1.clone() - d0.clone()) * t.clone()
            + a1.clone() * mg)
            / (k.clone() * a1t.clone() * tail.clone()),
        a0.clone() * t.clone() / (k.clone() * a1t.clone() * tail.clone()),
        (d1.clone() * t.clone() + d0.clone()) / (k.clone() * tail.clone()),
        k.clone() * tail,
    ];

    let alpha = [a1t, a0.clone() + a1 * t.clone(), a0 * t.clone()];
    let beta = [
        one / k.clone(),
        (d1.clone() + t.clone()) / k.clone(),
        (d0.clone() + d1 * t.clone()) / k.clone(),
        d0 * t.clone() / k,
    ];
    let [al1, al2, al3] = alpha.clone();
    let [b1, b2, b3, b4] = beta.clone();
    let w1 = al1.clone() * al2.clone() - al3.clone();
    let w2 = al2.clone() * b1.clone() - b3.clone();
    let w3 = al1.clone() * b1.clone() - b2.clone();
    let core = al1.clone() * al2.clone() * b1.clone() - al3.clone() * b1.clone() - al1.clone() * b3.clone();
    // equals 2 * core once beta4 + alpha1 beta3 + alpha3 beta1 = alpha2 beta2
    let w = core.clone() + al1.clone() * al2.clone() * b1.clone() - al2.clone() * b2 + b4;
    let general = [
        w1.clone() * b1.clone() * b1.clone() / (al1.clone() * al1.clone() * w2.clone()),
        core * b1.clone() / (al1.clone() * w2.clone()),
        al3 * b1.clone() * b1.clone() / (al1 * w2.clone()),
        b1.clone() * b3 / w2.clone(),
        w2.clone() / (b1.clone() * b1),
    ];
    BridgeData {
        t,
        alpha,
        beta,
        w1,
        w2,
        w3,
        w,
        direct,
        general,
    }
}

/// Checks the side conditions and that both formula sets agree.
fn check_bridge<T: Scalar>(d: &BridgeData<T>, tol: &T) -> Result<(), SynthesisError> {
    let zeroish = |x: T, scale: T| x.magnitude() <= tol.clone() * scale.magnitude();
    if !(d.w1.is_positive() && d.w2.is_positive() && d.w3.is_positive()) {
        return Err(SynthesisError::CrossCheck("W1, W2, W3 must be positive".into()));
    }
    if !d.margin().is_positive() {
        return Err(SynthesisError::CrossCheck("W - 2*alpha2*W3 must be positive".into()));
    }
    if !zeroish(d.discriminant(), d.w.clone() * d.w.clone()) {
        return Err(SynthesisError::CrossCheck("W^2 - 4*W1*W2*W3 != 0".into()));
    }
    if !zeroish(d.coefficient_identity(), d.alpha[1].clone() * d.beta[1].clone()) {
        return Err(SynthesisError::CrossCheck(
            "beta4 + alpha1*beta3 + alpha3*beta1 - alpha2*beta2 != 0".into(),
        ));
    }
    for (x, g) in d.direct.iter().zip(&d.general) {
        if !zeroish(x.clone() - g.clone(), x.clone()) {
            return Err(SynthesisError::CrossCheck(format!("element values {x} and {g} differ")));
        }
        if !x.is_positive() {
            return Err(SynthesisError::CrossCheck(format!("nonpositive element value {x}")));
        }
    }
    Ok(())
}

fn bridge_network<T: Scalar>(d: &BridgeData<T>) -> Netlist<T> {
    let [r1, l1, l2, l3, c1] = d.direct.clone();
    let n = topology::fig12(r1, l1, l2, l3, c1);
    with_provenance(
        n,
        &[
            ("R1", "a1(T^2+a1*T+a0)/(k(a1+T)^2((a1-d1)T+a0-d0))"),
            ("L1", "((a1-d1)T^2+(a1^2-a1*d1-d0)T+a1(a0-d0))/(k(a1+T)((a1-d1)T+a0-d0))"),
            ("L2", "a0*T/(k(a1+T)((a1-d1)T+a0-d0))"),
            ("L3", "(d1*T+d0)/(k((a1-d1)T+a0-d0))"),
            ("C1", "k((a1-d1)T+a0-d0)"),
        ],
    )
}

fn bridge_parameters<T: Scalar>(d: &BridgeData<T>) -> Vec<(String, String)> {
    vec![
        ("T".into(), d.t.to_string()),
        ("W1".into(), d.w1.to_string()),
        ("W2".into(), d.w2.to_string()),
        ("W3".into(), d.w3.to_string()),
        ("W".into(), d.w.to_string()),
    ]
}

/// Bridge realization for `(a0 d1 - a1 d0)(a1 - d1) = d0^2`,
/// `T = sqrt((a0 d1 - a1 d0)/(a1 - d1))`.
pub fn realize_bridge(y: &Y) -> Result<Realization, SynthesisError> {
    require_pr(y)?;
    if y.has_zero_coefficient() || y.r_k().is_zero() || !y.bridge_condition().is_zero() {
        return Err(SynthesisError::Precondition(
            "needs positive coefficients, R_k != 0 and (a0*d1 - a1*d0)(a1 - d1) = d0^2".into(),
        ));
    }
    if !y.damping_gap().is_positive() {
        return Err(SynthesisError::Precondition("T is undefined unless a1 > d1".into()));
    }
    // On the bridge surface T^2 = cross/gap = d0^2/gap^2, so T is rational.
    let t = &y.d0 / y.damping_gap();
    debug_assert_eq!(&t * &t, y.cross() / y.damping_gap());
    let d = bridge_data(y, t);
    check_bridge(&d, &Rational::zero())?;
    let n = bridge_network(&d);
    finish_exact(n, y, Case::BridgeLemma13, bridge_parameters(&d))
}
