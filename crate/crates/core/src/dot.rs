//! Deterministic DOT exports: specialization preorder, open-set inclusion
//! lattice, and entourage-family inclusion lattice.  Nodes and edges are
//! emitted in sorted order so identical inputs give identical bytes.

use crate::quniform::Entourage;
use crate::set::PointSet;
use crate::topo::{FiniteTopology, TopoError};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn set_label(points: &[String], s: &PointSet) -> String {
    let names: Vec<&str> = s.iter().map(|i| points[i].as_str()).collect();
    format!("{{{}}}", names.join(","))
}

/// Specialization preorder: one node per point, an edge `x -> y` whenever
/// every open containing `x` contains `y` (loops omitted).
pub fn specialization_dot(points: &[String], t: &FiniteTopology) -> String {
    assert_eq!(points.len(), t.points());
    let mut out = String::from("digraph specialization {\n");
    for p in points {
        out.push_str(&format!("  {};\n", quote(p)));
    }
    let mut edges = t.specialization_edges();
    edges.sort_unstable();
    for (x, y) in edges {
        out.push_str(&format!("  {} -> {};\n", quote(&points[x]), quote(&points[y])));
    }
    out.push_str("}\n");
    out
}

/// Hasse diagram edges of a family ordered by `is_below`: `i -> j` when
/// `i < j` strictly with nothing strictly between.
fn hasse_edges(len: usize, is_below: impl Fn(usize, usize) -> bool) -> Vec<(usize, usize)> {
    let strict =
        |a: usize, b: usize| a != b && is_below(a, b) && !(is_below(b, a));
    let mut edges = Vec::new();
    for i in 0..len {
        for j in 0..len {
            if strict(i, j) && !(0..len).any(|k| strict(i, k) && strict(k, j)) {
                edges.push((i, j));
            }
        }
    }
    edges
}

/// Open-set lattice under inclusion (Hasse diagram).  Refuses carriers too
/// large to materialize.
pub fn open_lattice_dot(points: &[String], t: &FiniteTopology) -> Result<String, TopoError> {
    assert_eq!(points.len(), t.points());
    let opens = t.opens()?;
    let mut out = String::from("digraph open_sets {\n  rankdir=BT;\n");
    for o in &opens {
        out.push_str(&format!("  {};\n", quote(&set_label(points, o))));
    }
    for (i, j) in hasse_edges(opens.len(), |a, b| opens[a].is_subset(&opens[b])) {
        out.push_str(&format!(
            "  {} -> {};\n",
            quote(&set_label(points, &opens[i])),
            quote(&set_label(points, &opens[j]))
        ));
    }
    out.push_str("}\n");
    Ok(out)
}

/// Inclusion lattice of a named entourage family (Hasse diagram).
pub fn entourage_lattice_dot(named: &[(String, Entourage)]) -> String {
    let mut out = String::from("digraph entourages {\n  rankdir=BT;\n");
    for (name, _) in named {
        out.push_str(&format!("  {};\n", quote(name)));
    }
    for (i, j) in hasse_edges(named.len(), |a, b| named[a].1.is_subset(&named[b].1)) {
        out.push_str(&format!("  {} -> {};\n", quote(&named[i].0), quote(&named[j].0)));
    }
    out.push_str("}\n");
    out
}
