//! Named networks of the admittance class.
//!
//! Each constructor fixes node placement and element labels; the tests pin
//! every topology to its closed-form admittance.

use crate::ratfunc::Scalar;

use super::{fid_netlist, Element, ElementKind, Netlist, NetlistBuilder};

use ElementKind::{C, L, R};

/// Tags accepted by [`skeleton`].
pub const TAGS: [&str; 13] = [
    "Fig5b", "Fig6", "Fig7a", "Fig7b", "Fig7c", "Fig7d", "Fig8", "Fig9a", "Fig9b", "Fig12", "Fig13a",
    "Fig13b", "Fig5c",
];

fn build<T: Scalar>(name: &str, internal: usize, parts: Vec<(&str, ElementKind, T, usize, usize)>) -> Netlist<T> {
    let mut b = NetlistBuilder::new();
    for _ in 0..internal {
        b.node();
    }
    for (label, kind, value, x, y) in parts {
        b.add_labelled(label.to_string(), Element::new(kind, value), x, y);
    }
    b.build(Some(name)).expect("named topologies are valid")
}

const P: usize = 0;
const M: usize = 1;
const N1: usize = 2;
const N2: usize = 3;

/// `L1 || (R1 -- L2)`
pub fn fig5b<T: Scalar>(l1: T, r1: T, l2: T) -> Netlist<T> {
    build("Fig5b", 1, vec![("L1", L, l1, P, M), ("R1", R, r1, P, N1), ("L2", L, l2, N1, M)])
}

/// `L1 -- (R1 || L2)`, the dual of [`fig5b`].
pub fn fig5c<T: Scalar>(l1: T, r1: T, l2: T) -> Netlist<T> {
    build("Fig5c", 1, vec![("L1", L, l1, P, N1), ("R1", R, r1, N1, M), ("L2", L, l2, N1, M)])
}

/// `L1 -- (L2 || (L3 -- R1))`
pub fn fig6<T: Scalar>(l1: T, l2: T, l3: T, r1: T) -> Netlist<T> {
    build(
        "Fig6",
        2,
        vec![
            ("L1", L, l1, P, N1),
            ("L2", L, l2, N1, M),
            ("L3", L, l3, N1, N2),
            ("R1", R, r1, N2, M),
        ],
    )
}

/// `L1 -- (L2 || (C1 -- R1))`
pub fn fig7a<T: Scalar>(r1: T, l1: T, l2: T, c1: T) -> Netlist<T> {
    build(
        "Fig7a",
        2,
        vec![
            ("L1", L, l1, P, N1),
            ("L2", L, l2, N1, M),
            ("C1", C, c1, N1, N2),
            ("R1", R, r1, N2, M),
        ],
    )
}

/// `L1 || (L2 -- (C1 || R1))`, the graph dual of [`fig7a`].
pub fn fig7b<T: Scalar>(r1: T, l1: T, l2: T, c1: T) -> Netlist<T> {
    build(
        "Fig7b",
        1,
        vec![
            ("L1", L, l1, P, M),
            ("L2", L, l2, P, N1),
            ("C1", C, c1, N1, M),
            ("R1", R, r1, N1, M),
        ],
    )
}

/// `L1 || (L2 -- C1 -- R1)`
pub fn fig7c<T: Scalar>(r1: T, l1: T, l2: T, c1: T) -> Netlist<T> {
    build(
        "Fig7c",
        2,
        vec![
            ("L1", L, l1, P, M),
            ("L2", L, l2, P, N1),
            ("C1", C, c1, N1, N2),
            ("R1", R, r1, N2, M),
        ],
    )
}

/// `L1 -- (L2 || C1 || R1)`, the graph dual of [`fig7c`].
pub fn fig7d<T: Scalar>(r1: T, l1: T, l2: T, c1: T) -> Netlist<T> {
    build(
        "Fig7d",
        1,
        vec![
            ("L1", L, l1, P, N1),
            ("L2", L, l2, N1, M),
            ("C1", C, c1, N1, M),
            ("R1", R, r1, N1, M),
        ],
    )
}

/// `L1 || (L2 -- R1) || (L3 -- R2)`
pub fn fig8<T: Scalar>(l1: T, l2: T, l3: T, r1: T, r2: T) -> Netlist<T> {
    build(
        "Fig8",
        2,
        vec![
            ("L1", L, l1, P, M),
            ("L2", L, l2, P, N1),
            ("R1", R, r1, N1, M),
            ("L3", L, l3, P, N2),
            ("R2", R, r2, N2, M),
        ],
    )
}

/// `L1 -- (L3 || C1 || (L2 -- R1))`
pub fn fig9a<T: Scalar>(r1: T, l1: T, l2: T, l3: T, c1: T) -> Netlist<T> {
    build(
        "Fig9a",
        2,
        vec![
            ("L1", L, l1, P, N1),
            ("L2", L, l2, N1, N2),
            ("R1", R, r1, N2, M),
            ("L3", L, l3, N1, M),
            ("C1", C, c1, N1, M),
        ],
    )
}

/// Graph dual of [`fig9a`] with the given (not reciprocated) values.
pub fn fig9b<T: Scalar>(r1: T, l1: T, l2: T, l3: T, c1: T) -> Netlist<T> {
    let inv = |v: T| T::one() / v;
    let base = fig9a(inv(r1), inv(l1), inv(l2), inv(l3), inv(c1));
    fid_netlist(&base).expect("planar").with_name("Fig9b")
}

/// Bridge: arms `L1` (T+,n1), `L2` (n1,T-), `L3` (T+,n2), `C1` (n2,T-),
/// `R1` across n1-n2.
pub fn fig12<T: Scalar>(r1: T, l1: T, l2: T, l3: T, c1: T) -> Netlist<T> {
    build(
        "Fig12",
        2,
        vec![
            ("L1", L, l1, P, N1),
            ("L2", L, l2, N1, M),
            ("L3", L, l3, P, N2),
            ("C1", C, c1, N2, M),
            ("R1", R, r1, N1, N2),
        ],
    )
}

/// Bridge: arms `L1` (T+,n1), `L2` (n1,T-), `L3` (T+,n2), `R1` (n2,T-),
/// `C1` across n1-n2.
pub fn fig13a<T: Scalar>(r1: T, l1: T, l2: T, l3: T, c1: T) -> Netlist<T> {
    build(
        "Fig13a",
        2,
        vec![
            ("L1", L, l1, P, N1),
            ("L2", L, l2, N1, M),
            ("L3", L, l3, P, N2),
            ("R1", R, r1, N2, M),
            ("C1", C, c1, N1, N2),
        ],
    )
}

/// Graph dual of [`fig13a`] with the given (not reciprocated) values.
pub fn fig13b<T: Scalar>(r1: T, l1: T, l2: T, l3: T, c1: T) -> Netlist<T> {
    let inv = |v: T| T::one() / v;
    let base = fig13a(inv(r1), inv(l1), inv(l2), inv(l3), inv(c1));
    fid_netlist(&base).expect("planar").with_name("Fig13b")
}

/// Named topology with all values set to one.
pub fn skeleton<T: Scalar>(tag: &str) -> Option<Netlist<T>> {
    let o = T::one;
    Some(match tag {
        "Fig5b" => fig5b(o(), o(), o()),
        "Fig5c" => fig5c(o(), o(), o()),
        "Fig6" => fig6(o(), o(), o(), o()),
        "Fig7a" => fig7a(o(), o(), o(), o()),
        "Fig7b" => fig7b(o(), o(), o(), o()),
        "Fig7c" => fig7c(o(), o(), o(), o()),
        "Fig7d" => fig7d(o(), o(), o(), o()),
        "Fig8" => fig8(o(), o(), o(), o(), o()),
        "Fig9a" => fig9a(o(), o(), o(), o(), o()),
        "Fig9b" => fig9b(o(), o(), o(), o(), o()),
        "Fig12" => fig12(o(), o(), o(), o(), o()),
        "Fig13a" => fig13a(o(), o(), o(), o(), o()),
        "Fig13b" => fig13b(o(), o(), o(), o(), o()),
        _ => return None,
    })
}
