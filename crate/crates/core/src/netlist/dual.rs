use crate::ratfunc::Scalar;

use super::{Branch, Element, Netlist, NetlistError, SpTree, NEGATIVE_TERMINAL, POSITIVE_TERMINAL};

/// Frequency-inverse dual: the planar dual of the network closed by a port
/// edge, element kinds kept and values reciprocated. Its admittance is
/// `Y^{-1}(1/s)`.
///
/// Series/parallel networks are dualized through their decomposition tree so
/// that series order is kept and the map is an exact involution; other graphs
/// go through face tracing of a brute-forced planar embedding.
pub fn fid_netlist<T: Scalar>(n: &Netlist<T>) -> Result<Netlist<T>, NetlistError> {
    let name = n.name().map(|s| format!("dual({s})"));
    if let Some((tree, labels)) = SpTree::decompose(n) {
        return Ok(tree.dual().compose_labelled(&labels, name.as_deref()));
    }
    let port = n.branches().len();
    let mut ends: Vec<(usize, usize)> = n.branches().iter().map(|b| (b.a, b.b)).collect();
    ends.push((0, 1));
    let faces = planar_faces(n.node_count(), &ends).ok_or(NetlistError::NonPlanar)?;

    let (plus, minus) = (faces[2 * port], faces[2 * port + 1]);
    if plus == minus {
        return Err(NetlistError::NonPlanar);
    }
    let mut index = vec![None; faces.iter().max().map_or(0, |m| m + 1)];
    index[plus] = Some(0);
    index[minus] = Some(1);
    let mut nodes = vec![POSITIVE_TERMINAL.to_string(), NEGATIVE_TERMINAL.to_string()];
    let mut slot = |f: usize, nodes: &mut Vec<String>| {
        *index[f].get_or_insert_with(|| {
            nodes.push(format!("n{}", nodes.len() - 1));
            nodes.len() - 1
        })
    };

    let mut branches = Vec::with_capacity(port);
    for (e, br) in n.branches().iter().enumerate() {
        let (fa, fb) = (faces[2 * e], faces[2 * e + 1]);
        if fa == fb {
            return Err(NetlistError::SelfLoop(br.label.clone()));
        }
        let a = slot(fa, &mut nodes);
        let b = slot(fb, &mut nodes);
        branches.push(Branch {
            label: br.label.clone(),
            element: Element {
                kind: br.element.kind,
                value: T::one() / br.element.value.clone(),
                provenance: br.element.provenance.as_ref().map(|p| format!("1/({p})")),
            },
            a,
            b,
        });
    }
    Netlist::new(nodes, branches, name)
}

/// Face index of every dart (`2e` runs `a -> b`, `2e + 1` runs `b -> a`) for
/// the first rotation system that embeds the graph in the plane.
fn planar_faces(vertex_count: usize, ends: &[(usize, usize)]) -> Option<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); vertex_count];
    for (e, &(a, b)) in ends.iter().enumerate() {
        out[a].push(2 * e);
        out[b].push(2 * e + 1);
    }
    let target_faces = 2 + ends.len() as isize - vertex_count as isize;
    let mut rotation = out.clone();
    search(0, &out, &mut rotation, ends, target_faces)
}

fn search(
    v: usize,
    out: &[Vec<usize>],
    rotation: &mut Vec<Vec<usize>>,
    ends: &[(usize, usize)],
    target: isize,
) -> Option<Vec<usize>> {
    if v == out.len() {
        let faces = trace_faces(rotation, ends);
        let count = faces.iter().max().map_or(0, |m| m + 1) as isize;
        return (count == target).then_some(faces);
    }
    let darts = &out[v];
    if darts.len() <= 2 {
        rotation[v] = darts.clone();
        return search(v + 1, out, rotation, ends, target);
    }
    // First dart fixed; cyclic orders of the rest.
    let mut rest: Vec<usize> = darts[1..].to_vec();
    let mut found = None;
    permute(&mut rest, 0, &mut |perm| {
        let mut order = vec![darts[0]];
        order.extend_from_slice(perm);
        rotation[v] = order;
        found = search(v + 1, out, rotation, ends, target);
        found.is_some()
    });
    found
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
    if k == p.len() {
        return f(p);
    }
    for i in k..p.len() {
        p.swap(k, i);
        let done = permute(p, k + 1, f);
        p.swap(k, i);
        if done {
            return true;
        }
    }
    false
}

fn trace_faces(rotation: &[Vec<usize>], ends: &[(usize, usize)]) -> Vec<usize> {
    let head = |d: usize| if d % 2 == 0 { ends[d / 2].1 } else { ends[d / 2].0 };
    let next_at = |v: usize, d: usize| {
        let r = &rotation[v];
        let i = r.iter().position(|&x| x == d).expect("dart leaves v");
        r[(i + 1) % r.len()]
    };
    let mut face = vec![usize::MAX; 2 * ends.len()];
    let mut count = 0;
    for start in 0..face.len() {
        if face[start] != usize::MAX {
            continue;
        }
        let mut d = start;
        while face[d] == usize::MAX {
            face[d] = count;
            let v = head(d);
            d = next_at(v, d ^ 1);
        }
        count += 1;
    }
    face
}
