//! Two-terminal RLC networks: graph model, series/parallel trees, named
//! topologies, the frequency-inverse dual and the text file format.

mod dual;
mod format;
mod sptree;
pub mod topology;

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use crate::ratfunc::{BigReal, Rational, Scalar};

pub use dual::fid_netlist;
pub use format::{read_netlist, read_netlist_any, write_netlist, ValueText};
pub use sptree::SpTree;

pub const POSITIVE_TERMINAL: &str = "T+";
pub const NEGATIVE_TERMINAL: &str = "T-";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NetlistError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unknown element kind {0}")]
    UnknownKind(String),
    #[error("element {0} has a nonpositive value")]
    NonPositiveValue(String),
    #[error("element {0} is a self-loop")]
    SelfLoop(String),
    #[error("element {label} references unknown node {node}")]
    UnknownNode { label: String, node: usize },
    #[error("network is not connected")]
    Disconnected,
    #[error("missing terminal {0}")]
    MissingTerminal(&'static str),
    #[error("no planar embedding with both terminals on one face")]
    NonPlanar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ElementKind {
    R,
    L,
    C,
}

impl ElementKind {
    pub const ALL: [ElementKind; 3] = [ElementKind::R, ElementKind::L, ElementKind::C];

    pub fn letter(self) -> char {
        match self {
            ElementKind::R => 'R',
            ElementKind::L => 'L',
            ElementKind::C => 'C',
        }
    }
}

impl fmt::Display for ElementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl FromStr for ElementKind {
    type Err = NetlistError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "R" => Ok(ElementKind::R),
            "L" => Ok(ElementKind::L),
            "C" => Ok(ElementKind::C),
            other => Err(NetlistError::UnknownKind(other.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Element<T> {
    pub kind: ElementKind,
    pub value: T,
    /// Closed-form expression the value came from, if any.
    pub provenance: Option<String>,
}

impl<T> Element<T> {
    pub fn new(kind: ElementKind, value: T) -> Self {
        Element {
            kind,
            value,
            provenance: None,
        }
    }

    pub fn with_provenance(mut self, expr: impl Into<String>) -> Self {
        self.provenance = Some(expr.into());
        self
    }
}

/// An element placed between two nodes, with its reference designator.
#[derive(Clone, Debug, PartialEq)]
pub struct Branch<T> {
    pub label: String,
    pub element: Element<T>,
    pub a: usize,
    pub b: usize,
}

/// Connected two-terminal network. Node 0 is `T+`, node 1 is `T-`.
#[derive(Clone, Debug, PartialEq)]
pub struct Netlist<T> {
    nodes: Vec<String>,
    branches: Vec<Branch<T>>,
    name: Option<String>,
}

impl<T: Scalar> Netlist<T> {
    pub fn new(
        nodes: Vec<String>,
        branches: Vec<Branch<T>>,
        name: Option<String>,
    ) -> Result<Self, NetlistError> {
        if nodes.first().map(String::as_str) != Some(POSITIVE_TERMINAL) {
            return Err(NetlistError::MissingTerminal(POSITIVE_TERMINAL));
        }
        if nodes.get(1).map(String::as_str) != Some(NEGATIVE_TERMINAL) {
            return Err(NetlistError::MissingTerminal(NEGATIVE_TERMINAL));
        }
        for br in &branches {
            for node in [br.a, br.b] {
                if node >= nodes.len() {
                    return Err(NetlistError::UnknownNode {
                        label: br.label.clone(),
                        node,
                    });
                }
            }
            if br.a == br.b {
                return Err(NetlistError::SelfLoop(br.label.clone()));
            }
            if !br.element.value.is_positive() {
                return Err(NetlistError::NonPositiveValue(br.label.clone()));
            }
        }
        let n = Netlist {
            nodes,
            branches,
            name,
        };
        if n.reachable(0, |_| true).iter().any(|r| !r) {
            return Err(NetlistError::Disconnected);
        }
        Ok(n)
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn branches(&self) -> &[Branch<T>] {
        &self.branches
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn element_count(&self) -> usize {
        self.branches.len()
    }

    pub fn count_kind(&self, kind: ElementKind) -> usize {
        self.branches.iter().filter(|b| b.element.kind == kind).count()
    }

    pub fn values(&self) -> Vec<T> {
        self.branches.iter().map(|b| b.element.value.clone()).collect()
    }

    pub fn value_of(&self, label: &str) -> Option<&T> {
        self.branches
            .iter()
            .find(|b| b.label == label)
            .map(|b| &b.element.value)
    }

    /// Same graph and labels, values passed through `f`.
    pub fn map_values<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Netlist<U> {
        Netlist {
            nodes: self.nodes.clone(),
            branches: self
                .branches
                .iter()
                .map(|b| Branch {
                    label: b.label.clone(),
                    element: Element {
                        kind: b.element.kind,
                        value: f(&b.element.value),
                        provenance: b.element.provenance.clone(),
                    },
                    a: b.a,
                    b: b.b,
                })
                .collect(),
            name: self.name.clone(),
        }
    }

    /// Same graph with the given values in branch order.
    pub fn with_values<U: Scalar>(&self, values: &[U]) -> Netlist<U> {
        assert_eq!(values.len(), self.branches.len());
        let mut out = self.map_values(|_| U::one());
        for (br, v) in out.branches.iter_mut().zip(values) {
            br.element.value = v.clone();
            br.element.provenance = None;
        }
        out
    }

    pub fn to_f64(&self) -> Netlist<f64> {
        self.map_values(Scalar::to_f64)
    }

    fn reachable(&self, from: usize, allowed: impl Fn(&Branch<T>) -> bool) -> Vec<bool> {
        let mut seen = vec![false; self.nodes.len()];
        let mut queue = VecDeque::from([from]);
        seen[from] = true;
        while let Some(u) = queue.pop_front() {
            for br in self.branches.iter().filter(|b| allowed(b)) {
                let next = if br.a == u {
                    br.b
                } else if br.b == u {
                    br.a
                } else {
                    continue;
                };
                if !seen[next] {
                    seen[next] = true;
                    queue.push_back(next);
                }
            }
        }
        seen
    }

    /// An all-inductor `T+`-`T-` path exists and some terminal-separating
    /// cut-set consists of inductors only.
    pub fn inductor_path_and_cutset(&self) -> bool {
        let is_l = |b: &Branch<T>| b.element.kind == ElementKind::L;
        let path = self.reachable(0, is_l)[1];
        // An inductor-only cut-set exists iff the other elements alone leave
        // the terminals disconnected.
        let cut = !self.reachable(0, |b| !is_l(b))[1];
        path && cut
    }

    /// Graph isomorphism fixing the terminal pair (possibly swapped) and
    /// matching kinds and values.
    pub fn is_isomorphic(&self, other: &Netlist<T>) -> bool {
        if self.nodes.len() != other.nodes.len() || self.branches.len() != other.branches.len() {
            return false;
        }
        let internal: Vec<usize> = (2..self.nodes.len()).collect();
        for swap in [false, true] {
            let mut perm = internal.clone();
            if permutations_any(&mut perm, 0, &mut |p| {
                let map = |u: usize| match u {
                    0 => usize::from(swap),
                    1 => usize::from(!swap),
                    _ => p[u - 2],
                };
                self.matches_under(other, map)
            }) {
                return true;
            }
        }
        false
    }

    fn matches_under(&self, other: &Netlist<T>, map: impl Fn(usize) -> usize) -> bool {
        let mut used = vec![false; other.branches.len()];
        self.branches.iter().all(|br| {
            let (a, b) = (map(br.a), map(br.b));
            let hit = other.branches.iter().enumerate().position(|(i, o)| {
                !used[i]
                    && o.element.kind == br.element.kind
                    && o.element.value == br.element.value
                    && ((o.a == a && o.b == b) || (o.a == b && o.b == a))
            });
            match hit {
                Some(i) => {
                    used[i] = true;
                    true
                }
                None => false,
            }
        })
    }
}

fn permutations_any(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
    if k == p.len() {
        return f(p);
    }
    for i in k..p.len() {
        p.swap(k, i);
        if permutations_any(p, k + 1, f) {
            p.swap(k, i);
            return true;
        }
        p.swap(k, i);
    }
    false
}

/// Incremental construction with deterministic node and element labels.
#[derive(Clone, Debug)]
pub struct NetlistBuilder<T> {
    nodes: Vec<String>,
    branches: Vec<Branch<T>>,
    counters: [usize; 3],
}

impl<T: Scalar> Default for NetlistBuilder<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Scalar> NetlistBuilder<T> {
    pub const PLUS: usize = 0;
    pub const MINUS: usize = 1;

    pub fn new() -> Self {
        NetlistBuilder {
            nodes: vec![POSITIVE_TERMINAL.into(), NEGATIVE_TERMINAL.into()],
            branches: Vec::new(),
            counters: [0; 3],
        }
    }

    /// Allocates the next internal node `n1`, `n2`, ...
    pub fn node(&mut self) -> usize {
        self.nodes.push(format!("n{}", self.nodes.len() - 1));
        self.nodes.len() - 1
    }

    /// Adds an element labelled by kind in insertion order (`L1`, `L2`, ...).
    pub fn add(&mut self, element: Element<T>, a: usize, b: usize) -> &mut Self {
        let slot = ElementKind::ALL.iter().position(|k| *k == element.kind).unwrap();
        self.counters[slot] += 1;
        let label = format!("{}{}", element.kind, self.counters[slot]);
        self.add_labelled(label, element, a, b)
    }

    pub fn add_labelled(&mut self, label: String, element: Element<T>, a: usize, b: usize) -> &mut Self {
        self.branches.push(Branch {
            label,
            element,
            a,
            b,
        });
        self
    }

    pub fn build(self, name: Option<&str>) -> Result<Netlist<T>, NetlistError> {
        Netlist::new(self.nodes, self.branches, name.map(str::to_string))
    }
}

/// A netlist with exact or high-precision values.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyNetlist {
    Exact(Netlist<Rational>),
    Approx(Netlist<BigReal>),
}

impl AnyNetlist {
    pub fn name(&self) -> Option<&str> {
        match self {
            AnyNetlist::Exact(n) => n.name(),
            AnyNetlist::Approx(n) => n.name(),
        }
    }

    pub fn element_count(&self) -> usize {
        match self {
            AnyNetlist::Exact(n) => n.element_count(),
            AnyNetlist::Approx(n) => n.element_count(),
        }
    }

    pub fn to_f64(&self) -> Netlist<f64> {
        match self {
            AnyNetlist::Exact(n) => n.to_f64(),
            AnyNetlist::Approx(n) => n.to_f64(),
        }
    }

    pub fn write(&self) -> String {
        match self {
            AnyNetlist::Exact(n) => write_netlist(n),
            AnyNetlist::Approx(n) => write_netlist(n),
        }
    }
}
