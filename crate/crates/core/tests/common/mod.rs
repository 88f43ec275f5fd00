#![allow(dead_code)]

use netsynth::admittance::CanonicalAdmittance;
use netsynth::ratfunc::Rational;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Y = CanonicalAdmittance<Rational>;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// `p/q` with `q` in `1..=6` and `p/q` in `(0, 10]`.
pub fn positive(rng: &mut ChaCha8Rng) -> Rational {
    let d = rng.gen_range(1..=6);
    q(rng.gen_range(1..=10 * d), d)
}

pub fn y(a0: Rational, a1: Rational, d0: Rational, d1: Rational, k: Rational) -> Y {
    Y::new(a0, a1, d0, d1, k).expect("nonnegative tuple")
}

fn ordered_pair(rng: &mut ChaCha8Rng) -> (Rational, Rational) {
    loop {
        let (a, b) = (positive(rng), positive(rng));
        if a != b {
            return if a > b { (a, b) } else { (b, a) };
        }
    }
}

/// Tuples aimed at each branch of the classifier, in a fixed rotation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    PureInductor,
    ZeroD0,
    ZeroDamping,
    CommonFactor,
    EqualDamping,
    ZeroCross,
    RlFactored,
    Bridge,
    General,
}

pub const REGIONS: [Region; 9] = [
    Region::PureInductor,
    Region::ZeroD0,
    Region::ZeroDamping,
    Region::CommonFactor,
    Region::EqualDamping,
    Region::ZeroCross,
    Region::RlFactored,
    Region::Bridge,
    Region::General,
];

/// A positive-real tuple from `region`.
pub fn sample_pr(region: Region, rng: &mut ChaCha8Rng) -> Y {
    let zero = Rational::zero;
    loop {
        let k = positive(rng);
        let t = match region {
            Region::PureInductor => {
                if rng.gen_bool(0.5) {
                    y(zero(), zero(), zero(), zero(), k)
                } else {
                    let (a0, a1) = (positive(rng), positive(rng));
                    y(a0.clone(), a1.clone(), a0, a1, k)
                }
            }
            Region::ZeroD0 => {
                let (a1, d1) = ordered_pair(rng);
                let a0 = if rng.gen_bool(0.3) { zero() } else { positive(rng) };
                y(a0, a1, zero(), d1, k)
            }
            Region::ZeroDamping => {
                let (a0, d0) = ordered_pair(rng);
                y(a0, zero(), d0, zero(), k)
            }
            Region::CommonFactor => {
                // (As+1)(Bs+1) / (s(Bs+1)(Cs+1)) with A > C
                let (a, c) = ordered_pair(rng);
                let b = positive(rng);
                y(&a * &b, &a + &b, &b * &c, &b + &c, k)
            }
            Region::EqualDamping => {
                let (a0, d0) = ordered_pair(rng);
                let a1 = positive(rng);
                y(a0, a1.clone(), d0, a1, k)
            }
            Region::ZeroCross => {
                let (a0, d0) = ordered_pair(rng);
                let d1 = positive(rng);
                let a1 = &a0 * &d1 / &d0;
                y(a0, a1, d0, d1, k)
            }
            Region::RlFactored => {
                // k(As+1)(Cs+1) / (s(Bs+1)(Ds+1)) with A > B > C > D
                let mut v: Vec<Rational> = (0..4).map(|_| positive(rng)).collect();
                v.sort();
                v.dedup();
                if v.len() < 4 {
                    continue;
                }
                let (dd, c, b, a) = (&v[0], &v[1], &v[2], &v[3]);
                y(a * c, a + c, b * dd, b + dd, k)
            }
            Region::Bridge => {
                let (gap, d0, d1) = (positive(rng), positive(rng), positive(rng));
                let a1 = &d1 + &gap;
                let a0 = (&d0 * &d0 / &gap + &a1 * &d0) / &d1;
                y(a0, a1, d0, d1, k)
            }
            Region::General => {
                let t = y(positive(rng), positive(rng), positive(rng), positive(rng), k);
                if !t.is_positive_real().is_pr {
                    continue;
                }
                t
            }
        };
        debug_assert!(t.is_positive_real().is_pr);
        return t;
    }
}

/// Arbitrary nonnegative tuple; each coefficient is zero with probability
/// `p_zero`.
pub fn sample_any(rng: &mut ChaCha8Rng, p_zero: f64) -> Y {
    let mut c = || {
        if rng.gen_bool(p_zero) {
            Rational::zero()
        } else {
            positive(rng)
        }
    };
    let (a0, a1, d0, d1) = (c(), c(), c(), c());
    y(a0, a1, d0, d1, positive(rng))
}

pub fn one() -> Rational {
    Rational::one()
}
