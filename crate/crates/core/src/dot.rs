//! Graphviz export.
//!
//! Nodes are drawn as circles labeled `q<level>`, the terminal as a box
//! labeled `1`, and zero-stubs as separate `0` leaves. Weights other than 1
//! are written on the edges; the 0-successor leaves through the lower-left
//! port and the 1-successor through the lower-right.

use std::fmt::Write;

use crate::dd::{Edge, Package, StateDd};

pub fn to_dot(pkg: &Package, dd: &StateDd) -> String {
    let mut out = String::new();
    out.push_str("digraph dd {\n");
    out.push_str("  node [shape=circle, fontsize=10];\n");
    out.push_str("  root [shape=point];\n");
    out.push_str("  t [shape=box, label=\"1\"];\n");
    write_edge(&mut out, "root", None, &dd.root, 0, "r");

    for id in pkg.reachable(dd.root) {
        let node = pkg.node(id);
        let name = format!("n{}", id.index());
        let _ = writeln!(out, "  {name} [label=\"q{}\"];", node.level);
        for (bit, succ) in node.succ.iter().enumerate() {
            let port = if bit == 0 { "sw" } else { "se" };
            write_edge(&mut out, &name, Some(port), succ, bit, &name);
        }
    }
    out.push_str("}\n");
    out
}

fn write_edge(out: &mut String, from: &str, port: Option<&str>, e: &Edge, bit: usize, stub: &str) {
    let tail = match port {
        Some(p) => format!("{from}:{p}"),
        None => from.to_string(),
    };
    if e.is_zero() {
        let leaf = format!("z_{stub}_{bit}");
        let _ = writeln!(out, "  {leaf} [shape=none, label=\"0\"];");
        let _ = writeln!(out, "  {tail} -> {leaf};");
        return;
    }
    let head = if e.is_terminal() {
        "t".to_string()
    } else {
        format!("n{}", e.target.index())
    };
    if e.weight.is_one() {
        let _ = writeln!(out, "  {tail} -> {head};");
    } else {
        let _ = writeln!(out, "  {tail} -> {head} [label=\"{}\"];", e.weight);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn fig2_dot() {
        let mut p = Package::new();
        let r = |x: f64| Complex64::new(x, 0.0);
        let (a, b) = (2.0 / 10f64.sqrt(), 1.0 / 10f64.sqrt());
        let dd = p
            .from_vector(&[r(0.0), r(a), r(0.0), r(a), r(b), r(0.0), r(0.0), r(-b)])
            .unwrap();
        let dot = to_dot(&p, &dd);
        assert!(dot.starts_with("digraph dd {"));
        assert_eq!(dot.matches("label=\"q0\"").count(), 1);
        assert_eq!(dot.matches("label=\"q1\"").count(), 2);
        assert_eq!(dot.matches("label=\"q2\"").count(), 3);
        // three q2 nodes each with one zero-stub
        assert_eq!(dot.matches("label=\"0\"").count(), 3);
        assert!(dot.contains("root -> "));
        assert!(dot.contains("[label=\"0.632456\"]"));
        assert!(dot.contains("[label=\"0.5\"]"));
        assert!(dot.contains("[label=\"-1\"]"));
    }
}
