//! Graphviz DOT rendering of a common representation.

use std::fmt::Write;

use crate::cr::{CommonRepresentation, InterfaceId};

fn quoted(i: &InterfaceId) -> String {
    let s = i.to_string();
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// One node per interface and one edge per flow, both in canonical order.
pub fn to_dot(cr: &CommonRepresentation) -> String {
    let mut out = String::from("digraph cr {\n");
    for i in cr.interfaces() {
        let shape = match i {
            InterfaceId::Explicit { .. } => "box",
            InterfaceId::Implicit { .. } => "ellipse",
        };
        writeln!(out, "  {} [shape={shape}];", quoted(i)).unwrap();
    }
    for f in cr.flows() {
        writeln!(out, "  {} -> {};", quoted(f.from()), quoted(f.to())).unwrap();
    }
    out.push_str("}\n");
    out
}
