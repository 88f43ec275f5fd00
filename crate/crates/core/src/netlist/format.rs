//! Line-oriented netlist text:
//!
//! ```text
//! # netsynth v1
//! # topology: Fig7a
//! L1 T+ n1 1/2
//! R1 n2 T- 1/4 ; a1*(a0-d0)/(k*a0^2)
//! ```
//!
//! Values are exact `p/q` or decimal; anything after `;` is the value's
//! provenance expression.

use std::collections::HashMap;

use crate::ratfunc::{parse_rational, BigReal, Rational, Scalar, DEFAULT_PRECISION};

use super::{AnyNetlist, Branch, Element, ElementKind, Netlist, NetlistError, NEGATIVE_TERMINAL, POSITIVE_TERMINAL};

pub const HEADER: &str = "# netsynth v1";
const TOPOLOGY_PREFIX: &str = "# topology:";

/// Text form of element values in netlist files.
pub trait ValueText: Sized {
    fn format_value(&self) -> String;
    fn parse_value(text: &str) -> Option<Self>;
}

impl ValueText for Rational {
    fn format_value(&self) -> String {
        self.to_string()
    }

    fn parse_value(text: &str) -> Option<Self> {
        parse_rational(text)
    }
}

impl ValueText for BigReal {
    fn format_value(&self) -> String {
        self.to_string()
    }

    fn parse_value(text: &str) -> Option<Self> {
        let q = parse_rational(text)?;
        Some(BigReal::from_rational(&q, significant_digits(text).max(DEFAULT_PRECISION)))
    }
}

impl ValueText for f64 {
    fn format_value(&self) -> String {
        format!("{self:e}")
    }

    fn parse_value(text: &str) -> Option<Self> {
        parse_rational(text).map(|q| q.to_f64())
    }
}

fn significant_digits(text: &str) -> u32 {
    let mantissa = text.split(['e', 'E']).next().unwrap_or("");
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    digits.trim_start_matches('0').len() as u32
}

pub fn write_netlist<T: Scalar + ValueText>(n: &Netlist<T>) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    if let Some(name) = n.name() {
        out.push_str(&format!("{TOPOLOGY_PREFIX} {name}\n"));
    }
    for br in n.branches() {
        out.push_str(&format!(
            "{} {} {} {}",
            br.label,
            n.nodes()[br.a],
            n.nodes()[br.b],
            br.element.value.format_value()
        ));
        if let Some(p) = &br.element.provenance {
            out.push_str(" ; ");
            out.push_str(p);
        }
        out.push('\n');
    }
    out
}

struct RawLine<'a> {
    line: usize,
    label: &'a str,
    kind: ElementKind,
    a: &'a str,
    b: &'a str,
    value: &'a str,
    provenance: Option<&'a str>,
}

fn parse_lines(text: &str) -> Result<(Option<String>, Vec<RawLine<'_>>), NetlistError> {
    let mut name = None;
    let mut rows = Vec::new();
    let mut seen_header = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if !seen_header {
            if trimmed != HEADER {
                return Err(NetlistError::Parse {
                    line,
                    message: format!("expected header `{HEADER}`"),
                });
            }
            seen_header = true;
            continue;
        }
        if let Some(tag) = trimmed.strip_prefix(TOPOLOGY_PREFIX) {
            name = Some(tag.trim().to_string());
            continue;
        }
        if trimmed.starts_with('#') {
            continue;
        }
        let (body, provenance) = match trimmed.split_once(';') {
            Some((b, p)) => (b.trim(), Some(p.trim())),
            None => (trimmed, None),
        };
        let fields: Vec<&str> = body.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(NetlistError::Parse {
                line,
                message: format!("expected 4 fields, found {}", fields.len()),
            });
        }
        let label = fields[0];
        let kind: ElementKind = label[..label.chars().next().map_or(0, char::len_utf8)]
            .parse()
            .map_err(|e: NetlistError| match e {
                NetlistError::UnknownKind(k) => NetlistError::Parse {
                    line,
                    message: format!("unknown element kind {k}"),
                },
                other => other,
            })?;
        rows.push(RawLine {
            line,
            label,
            kind,
            a: fields[1],
            b: fields[2],
            value: fields[3],
            provenance,
        });
    }
    if !seen_header {
        return Err(NetlistError::Parse {
            line: 1,
            message: format!("expected header `{HEADER}`"),
        });
    }
    Ok((name, rows))
}

/// Internal nodes sorted numerically when labelled `n<k>`, else by first use.
fn node_table(rows: &[RawLine<'_>]) -> (Vec<String>, HashMap<String, usize>) {
    let mut internal: Vec<&str> = Vec::new();
    for r in rows {
        for node in [r.a, r.b] {
            if node != POSITIVE_TERMINAL && node != NEGATIVE_TERMINAL && !internal.contains(&node) {
                internal.push(node);
            }
        }
    }
    let numeric = |s: &str| s.strip_prefix('n').and_then(|d| d.parse::<u64>().ok());
    if internal.iter().all(|s| numeric(s).is_some()) {
        internal.sort_by_key(|s| numeric(s));
    }
    let mut nodes = vec![POSITIVE_TERMINAL.to_string(), NEGATIVE_TERMINAL.to_string()];
    nodes.extend(internal.iter().map(|s| s.to_string()));
    let index = nodes.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
    (nodes, index)
}

pub fn read_netlist<T: Scalar + ValueText>(text: &str) -> Result<Netlist<T>, NetlistError> {
    let (name, rows) = parse_lines(text)?;
    let (nodes, index) = node_table(&rows);
    let mut branches = Vec::with_capacity(rows.len());
    for r in &rows {
        let value = T::parse_value(r.value).ok_or_else(|| NetlistError::Parse {
            line: r.line,
            message: format!("invalid value `{}`", r.value),
        })?;
        if !value.is_positive() {
            return Err(NetlistError::NonPositiveValue(r.label.to_string()));
        }
        let element = Element {
            kind: r.kind,
            value,
            provenance: r.provenance.map(str::to_string),
        };
        branches.push(Branch {
            label: r.label.to_string(),
            element,
            a: index[r.a],
            b: index[r.b],
        });
    }
    if rows.is_empty() {
        return Err(NetlistError::Parse {
            line: text.lines().count().max(1),
            message: "no elements".into(),
        });
    }
    Netlist::new(nodes, branches, name)
}

/// Exact when every value is an integer or `p/q`, high-precision otherwise.
pub fn read_netlist_any(text: &str) -> Result<AnyNetlist, NetlistError> {
    let (_, rows) = parse_lines(text)?;
    let decimal = rows.iter().any(|r| r.value.contains(['.', 'e', 'E']));
    if decimal {
        read_netlist::<BigReal>(text).map(AnyNetlist::Approx)
    } else {
        read_netlist::<Rational>(text).map(AnyNetlist::Exact)
    }
}
