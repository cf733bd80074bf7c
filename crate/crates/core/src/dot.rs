//! Graphviz rendering of gadgets.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::model::Gadget;

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn quote(s: &str) -> String {
    format!("\"{}\"", escape(s))
}

/// A state diagram of `g`. Parallel transitions share one edge with one
/// label line each. Trivial transitions are left out unless asked for;
/// they still belong to the gadget.
pub fn to_dot(g: &Gadget, show_trivial: bool) -> String {
    let mut edges: BTreeMap<(&str, &str), Vec<String>> = BTreeMap::new();
    for t in &g.transitions {
        if t.is_trivial() && !show_trivial {
            continue;
        }
        edges
            .entry((t.from.as_str(), t.to.as_str()))
            .or_default()
            .push(t.symbol().glyphs());
    }
    let mut out = String::from("digraph gadget {\n  rankdir=LR;\n  node [shape=circle];\n");
    out.push_str("  __start [shape=point];\n");
    let _ = writeln!(out, "  __start -> {};", quote(&g.start));
    for q in &g.states {
        let _ = writeln!(out, "  {};", quote(q));
    }
    for ((from, to), mut labels) in edges {
        labels.sort();
        labels.dedup();
        let label: Vec<String> = labels.iter().map(|l| escape(l)).collect();
        let _ = writeln!(
            out,
            "  {} -> {} [label=\"{}\"];",
            quote(from),
            quote(to),
            label.join("\\n")
        );
    }
    out.push_str("}\n");
    out
}
