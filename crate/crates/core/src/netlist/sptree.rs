use crate::ratfunc::{Poly, RatFunc, Scalar};

use super::{Element, ElementKind, Netlist, NetlistBuilder};

use std::collections::{BTreeSet, VecDeque};

/// Series/parallel composition tree.
#[derive(Clone, Debug, PartialEq)]
pub enum SpTree<T> {
    Leaf(Element<T>),
    Series(Vec<SpTree<T>>),
    Parallel(Vec<SpTree<T>>),
}

impl<T: Scalar> SpTree<T> {
    pub fn leaf(kind: ElementKind, value: T) -> Self {
        SpTree::Leaf(Element::new(kind, value))
    }

    pub fn r(value: T) -> Self {
        Self::leaf(ElementKind::R, value)
    }

    pub fn l(value: T) -> Self {
        Self::leaf(ElementKind::L, value)
    }

    pub fn c(value: T) -> Self {
        Self::leaf(ElementKind::C, value)
    }

    pub fn element_count(&self) -> usize {
        match self {
            SpTree::Leaf(_) => 1,
            SpTree::Series(cs) | SpTree::Parallel(cs) => cs.iter().map(Self::element_count).sum(),
        }
    }

    /// Leaves in depth-first order, matching branch order of [`Self::compose`].
    pub fn leaves(&self) -> Vec<&Element<T>> {
        match self {
            SpTree::Leaf(e) => vec![e],
            SpTree::Series(cs) | SpTree::Parallel(cs) => cs.iter().flat_map(Self::leaves).collect(),
        }
    }

    /// Builds the netlist. Internal nodes are numbered in depth-first order
    /// and elements are labelled by kind in leaf order.
    pub fn compose(&self) -> Netlist<T> {
        let mut b = NetlistBuilder::new();
        self.place(&mut b, NetlistBuilder::<T>::PLUS, NetlistBuilder::<T>::MINUS);
        b.build(None).expect("trees compose to connected netlists")
    }

    fn place(&self, b: &mut NetlistBuilder<T>, from: usize, to: usize) {
        match self {
            SpTree::Leaf(e) => {
                b.add(e.clone(), from, to);
            }
            SpTree::Parallel(cs) => {
                for c in cs {
                    c.place(b, from, to);
                }
            }
            SpTree::Series(cs) => {
                let mut at = from;
                for (i, c) in cs.iter().enumerate() {
                    let next = if i + 1 == cs.len() { to } else { b.node() };
                    c.place(b, at, next);
                    at = next;
                }
            }
        }
    }

    /// Same as [`Self::compose`] with branch labels taken from `labels` in
    /// leaf order.
    pub fn compose_labelled(&self, labels: &[String], name: Option<&str>) -> Netlist<T> {
        let mut b = NetlistBuilder::new();
        let mut next = labels.iter();
        self.place_labelled(&mut b, NetlistBuilder::<T>::PLUS, NetlistBuilder::<T>::MINUS, &mut next);
        b.build(name).expect("trees compose to connected netlists")
    }

    fn place_labelled<'a>(
        &self,
        b: &mut NetlistBuilder<T>,
        from: usize,
        to: usize,
        labels: &mut impl Iterator<Item = &'a String>,
    ) {
        match self {
            SpTree::Leaf(e) => {
                let label = labels.next().expect("one label per leaf").clone();
                b.add_labelled(label, e.clone(), from, to);
            }
            SpTree::Parallel(cs) => {
                for c in cs {
                    c.place_labelled(b, from, to, labels);
                }
            }
            SpTree::Series(cs) => {
                let mut at = from;
                for (i, c) in cs.iter().enumerate() {
                    let next = if i + 1 == cs.len() { to } else { b.node() };
                    c.place_labelled(b, at, next, labels);
                    at = next;
                }
            }
        }
    }

    /// Series and parallel swapped, values reciprocated, child order kept.
    pub fn dual(&self) -> Self {
        match self {
            SpTree::Leaf(e) => SpTree::Leaf(Element {
                kind: e.kind,
                value: T::one() / e.value.clone(),
                provenance: e.provenance.as_ref().map(|p| format!("1/({p})")),
            }),
            SpTree::Series(cs) => SpTree::Parallel(cs.iter().map(Self::dual).collect()),
            SpTree::Parallel(cs) => SpTree::Series(cs.iter().map(Self::dual).collect()),
        }
    }

    /// Series/parallel decomposition between the terminals, with branch
    /// labels in leaf order. `None` for bridges or dangling parts.
    pub fn decompose(n: &Netlist<T>) -> Option<(Self, Vec<String>)> {
        let all: Vec<usize> = (0..n.element_count()).collect();
        let mut labels = Vec::new();
        let tree = split(n, &all, 0, 1, &mut labels)?;
        Some((tree, labels))
    }

    /// Admittance by the series/parallel recursion.
    pub fn admittance(&self) -> RatFunc<T> {
        match self {
            SpTree::Leaf(e) => element_admittance(e),
            SpTree::Parallel(cs) => cs
                .iter()
                .map(Self::admittance)
                .fold(RatFunc::zero(), |acc, y| &acc + &y),
            SpTree::Series(cs) => {
                let z = cs
                    .iter()
                    .map(|c| c.admittance().inv().expect("element admittances are nonzero"))
                    .fold(RatFunc::zero(), |acc, z| &acc + &z);
                z.inv().expect("nonzero impedance")
            }
        }
    }

    /// Kind-only canonical string: nested series/parallel flattened, children
    /// sorted. Equal strings mean isomorphic skeletons.
    pub fn canonical_form(&self) -> String {
        match self {
            SpTree::Leaf(e) => e.kind.to_string(),
            SpTree::Series(_) | SpTree::Parallel(_) => {
                let series = matches!(self, SpTree::Series(_));
                let mut parts = Vec::new();
                self.collect_flat(series, &mut parts);
                parts.sort();
                format!("{}({})", if series { 'S' } else { 'P' }, parts.join(","))
            }
        }
    }

    fn collect_flat(&self, series: bool, out: &mut Vec<String>) {
        match self {
            SpTree::Series(cs) if series => cs.iter().for_each(|c| c.collect_flat(series, out)),
            SpTree::Parallel(cs) if !series => cs.iter().for_each(|c| c.collect_flat(series, out)),
            other => out.push(other.canonical_form()),
        }
    }
}

fn split<T: Scalar>(n: &Netlist<T>, edges: &[usize], a: usize, b: usize, labels: &mut Vec<String>) -> Option<SpTree<T>> {
    let br = n.branches();
    if let [e] = edges {
        let (u, v) = (br[*e].a, br[*e].b);
        if (u, v) != (a, b) && (u, v) != (b, a) {
            return None;
        }
        labels.push(br[*e].label.clone());
        return Some(SpTree::Leaf(br[*e].element.clone()));
    }
    let groups = groups_avoiding(n, edges, &[a, b]);
    if groups.len() > 1 {
        let children = groups
            .iter()
            .map(|g| split(n, g, a, b, labels))
            .collect::<Option<Vec<_>>>()?;
        return Some(SpTree::Parallel(children));
    }
    // One block: cut vertices on every a-b path, ordered from a.
    let mut nodes = BTreeSet::new();
    for &e in edges {
        nodes.insert(br[e].a);
        nodes.insert(br[e].b);
    }
    let dist = distances(n, edges, a, None);
    let mut cuts: Vec<usize> = nodes
        .iter()
        .copied()
        .filter(|&v| v != a && v != b && distances(n, edges, a, Some(v))[b].is_none())
        .collect();
    if cuts.is_empty() {
        return None;
    }
    cuts.sort_by_key(|&v| dist[v]);
    let mut barriers = vec![a];
    barriers.extend(cuts);
    barriers.push(b);
    let mut segments: Vec<Vec<usize>> = vec![Vec::new(); barriers.len() - 1];
    for g in groups_avoiding(n, edges, &barriers) {
        let mut touched: Vec<usize> = g
            .iter()
            .flat_map(|&e| [br[e].a, br[e].b])
            .filter_map(|v| barriers.iter().position(|&x| x == v))
            .collect();
        touched.sort_unstable();
        touched.dedup();
        match touched[..] {
            [i, j] if j == i + 1 => segments[i].extend(g),
            _ => return None,
        }
    }
    let children = segments
        .iter()
        .enumerate()
        .map(|(i, seg)| split(n, seg, barriers[i], barriers[i + 1], labels))
        .collect::<Option<Vec<_>>>()?;
    Some(SpTree::Series(children))
}

/// Edge classes connected through nodes other than `barriers`, ordered by
/// first edge.
fn groups_avoiding<T: Scalar>(n: &Netlist<T>, edges: &[usize], barriers: &[usize]) -> Vec<Vec<usize>> {
    let br = n.branches();
    let mut group: Vec<Option<usize>> = vec![None; edges.len()];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for start in 0..edges.len() {
        if group[start].is_some() {
            continue;
        }
        let id = out.len();
        out.push(Vec::new());
        let mut queue = VecDeque::from([start]);
        group[start] = Some(id);
        while let Some(i) = queue.pop_front() {
            out[id].push(edges[i]);
            let ends = [br[edges[i]].a, br[edges[i]].b];
            for (j, &f) in edges.iter().enumerate() {
                if group[j].is_none()
                    && [br[f].a, br[f].b]
                        .iter()
                        .any(|v| ends.contains(v) && !barriers.contains(v))
                {
                    group[j] = Some(id);
                    queue.push_back(j);
                }
            }
        }
        out[id].sort_unstable();
    }
    out
}

/// Hop distances from `from` using `edges`, optionally with one node removed.
fn distances<T: Scalar>(n: &Netlist<T>, edges: &[usize], from: usize, removed: Option<usize>) -> Vec<Option<usize>> {
    let br = n.branches();
    let mut dist = vec![None; n.node_count()];
    dist[from] = Some(0);
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        for &e in edges {
            let v = if br[e].a == u {
                br[e].b
            } else if br[e].b == u {
                br[e].a
            } else {
                continue;
            };
            if Some(v) != removed && dist[v].is_none() {
                dist[v] = Some(dist[u].unwrap() + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// `1/R`, `1/(L s)` or `C s`.
pub(crate) fn element_admittance<T: Scalar>(e: &Element<T>) -> RatFunc<T> {
    let v = e.value.clone();
    match e.kind {
        ElementKind::R => RatFunc::constant(T::one() / v),
        ElementKind::L => RatFunc::new(Poly::one(), Poly::monomial(v, 1)).expect("positive value"),
        ElementKind::C => RatFunc::from_poly(Poly::monomial(v, 1)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfunc::{parse_ratfunc, Rational};

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn single_leaf() {
        let n = SpTree::l(q(2, 1)).compose();
        assert_eq!(n.element_count(), 1);
        assert_eq!((n.branches()[0].a, n.branches()[0].b), (0, 1));
        assert_eq!(SpTree::l(q(2, 1)).admittance(), parse_ratfunc("1/(2*s)").unwrap());
    }

    #[test]
    fn three_element_shape() {
        let t = SpTree::Parallel(vec![
            SpTree::l(q(1, 1)),
            SpTree::Series(vec![SpTree::r(q(1, 1)), SpTree::l(q(1, 1))]),
        ]);
        let n = t.compose();
        assert_eq!(n.node_count(), 3);
        let labels: Vec<&str> = n.branches().iter().map(|b| b.label.as_str()).collect();
        assert_eq!(labels, ["L1", "R1", "L2"]);
        // k/s + 1/(R + L s) with k = R = L = 1
        assert_eq!(t.admittance(), parse_ratfunc("1/s + 1/(1+s)").unwrap());
    }

    #[test]
    fn fig7a_shape_matches_displayed_formula() {
        let (r1, l1, l2, c1) = (q(1, 3), q(2, 1), q(5, 7), q(3, 2));
        let t = SpTree::Series(vec![
            SpTree::l(l1.clone()),
            SpTree::Parallel(vec![
                SpTree::l(l2.clone()),
                SpTree::Series(vec![SpTree::c(c1.clone()), SpTree::r(r1.clone())]),
            ]),
        ]);
        let num = Poly::new(vec![q(1, 1), r1.clone() * &c1, l2.clone() * &c1]);
        let den = Poly::new(vec![
            q(0, 1),
            l1.clone() + &l2,
            r1.clone() * &c1 * (l1.clone() + &l2),
            l1 * l2 * c1,
        ]);
        assert_eq!(t.admittance(), RatFunc::new(num, den).unwrap());
    }

    #[test]
    fn decompose_recovers_composed_trees() {
        use crate::netlist::topology;
        let t = SpTree::Series(vec![
            SpTree::l(q(1, 1)),
            SpTree::Parallel(vec![
                SpTree::l(q(2, 1)),
                SpTree::c(q(3, 1)),
                SpTree::Series(vec![SpTree::l(q(4, 1)), SpTree::r(q(5, 1))]),
            ]),
        ]);
        let n = t.compose();
        let (back, labels) = SpTree::decompose(&n).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.compose_labelled(&labels, None), n);
        assert!(SpTree::decompose(&topology::fig12(q(1, 1), q(1, 1), q(1, 1), q(1, 1), q(1, 1))).is_none());
        let f9 = topology::fig9a(q(1, 1), q(2, 1), q(3, 1), q(4, 1), q(5, 1));
        let (t9, l9) = SpTree::decompose(&f9).unwrap();
        assert!(t9.compose_labelled(&l9, Some("Fig9a")).is_isomorphic(&f9));
    }

    #[test]
    fn canonical_form_flattens_and_sorts() {
        let a: SpTree<Rational> = SpTree::Series(vec![
            SpTree::l(q(1, 1)),
            SpTree::Series(vec![SpTree::r(q(1, 1)), SpTree::c(q(1, 1))]),
        ]);
        let b = SpTree::Series(vec![SpTree::c(q(1, 1)), SpTree::l(q(1, 1)), SpTree::r(q(1, 1))]);
        assert_eq!(a.canonical_form(), b.canonical_form());
        assert_eq!(b.canonical_form(), "S(C,L,R)");
        let c = SpTree::Parallel(vec![
            SpTree::Series(vec![SpTree::r(q(1, 1)), SpTree::l(q(1, 1))]),
            SpTree::l(q(1, 1)),
        ]);
        assert_eq!(c.canonical_form(), "P(L,S(L,R))");
    }
}
