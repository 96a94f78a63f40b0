use std::fmt::Write;

use super::{Odd, OddNode};

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz rendering: decision nodes are ellipses labelled by attribute,
/// sinks are boxes, edges carry value names. Output depends only on the
/// diagram.
pub fn export_dot(odd: &Odd) -> String {
    let mut out = String::from("digraph odd {\n");
    for (id, node) in odd.nodes() {
        match node {
            OddNode::Sink(v) => {
                writeln!(out, "  n{} [label=\"{}\", shape=box];", id.index(), u8::from(*v)).unwrap();
            }
            OddNode::Decision { level, .. } => {
                let name = escape(&odd.level_attribute(*level).name);
                writeln!(out, "  n{} [label=\"{}\", shape=ellipse];", id.index(), name).unwrap();
            }
        }
    }
    for (id, node) in odd.nodes() {
        if let OddNode::Decision { level, children } = node {
            let attr = odd.level_attribute(*level);
            for (value, child) in attr.values.iter().zip(children) {
                writeln!(
                    out,
                    "  n{} -> n{} [label=\"{}\"];",
                    id.index(),
                    child.index(),
                    escape(value)
                )
                .unwrap();
            }
        }
    }
    out.push_str("}\n");
    out
}
