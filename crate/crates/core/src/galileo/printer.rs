//! Canonical pretty-printer; `parse(pretty_print(parse(t))) == parse(t)`.

use std::fmt::Write;

use super::ast::{AttackFaultTree, AttributeValue, GateKind, LeafKind, Node};
use crate::rational_to_string;

/// Renders the tree back to Galileo text in a canonical form: toplevel
/// first, then every definition in file order with all attributes explicit.
pub fn pretty_print(tree: &AttackFaultTree) -> String {
    let mut out = String::new();
    writeln!(out, "toplevel \"{}\";", tree.root).unwrap();
    for node in tree.nodes() {
        match node {
            Node::Gate(g) => {
                write!(out, "\"{}\" {}", g.name, kind_token(g)).unwrap();
                for child in &g.children {
                    write!(out, " \"{child}\"").unwrap();
                }
                write!(out, " cost={}", value(&g.cost)).unwrap();
                write!(out, " damage={}", value(&g.damage)).unwrap();
                writeln!(out, ";").unwrap();
            }
            Node::Leaf(l) => {
                write!(out, "\"{}\"", l.name).unwrap();
                write!(out, " mintime={}", value(&l.min_time)).unwrap();
                write!(out, " maxtime={}", value(&l.max_time)).unwrap();
                write!(out, " cost={}", value(&l.cost)).unwrap();
                write!(out, " damage={}", value(&l.damage)).unwrap();
                let kind = match l.kind {
                    LeafKind::Bas => "bas",
                    LeafKind::Bcf => "bcf",
                };
                writeln!(out, " kind={kind};").unwrap();
            }
        }
    }
    out
}

fn kind_token(gate: &super::ast::GateNode) -> String {
    match gate.kind {
        GateKind::Vot(k) => format!("{k}of{}", gate.children.len()),
        other => other.to_string(),
    }
}

fn value(v: &AttributeValue) -> String {
    match v {
        AttributeValue::Constant(c) => rational_to_string(c),
        AttributeValue::Parameter(p) => p.clone(),
    }
}

#[cfg(test)]
mod tests {
    use crate::galileo::parse;

    use super::*;

    fn assert_roundtrip(text: &str) {
        let first = parse(text).unwrap();
        let printed = parse(&pretty_print(&first)).unwrap();
        assert_eq!(first.root, printed.root);
        assert_eq!(first.nodes(), printed.nodes());
        assert_eq!(first.timing_parameters, printed.timing_parameters);
        assert_eq!(first.weight_parameters, printed.weight_parameters);
    }

    #[test]
    fn round_trips_the_paper_example() {
        assert_roundtrip(
            "toplevel \"A\";\n\"A\" or \"B\" \"C\";\n\"B\" mintime=50 maxtime=100 cost=50;\n\"C\" mintime=30 maxtime=70 cost=30;",
        );
    }

    #[test]
    fn round_trips_decimals_as_fractions() {
        assert_roundtrip("toplevel \"L\";\n\"L\" time=11.5 cost=0.25 kind=bcf;");
    }

    #[test]
    fn round_trips_parameters_and_vot() {
        assert_roundtrip(
            "toplevel \"G\";\n\"G\" 2of3 \"A\" \"B\" \"C\" cost=5;\n\"A\" mintime=2 maxtime=tMax cost=c1;\n\"B\" time=1;\n\"C\" time=1 damage=7;",
        );
    }

    #[test]
    fn printer_is_stable_on_its_own_output() {
        let text = "toplevel \"G\";\n\"G\" wsp \"P\" \"S\" damage=1;\n\"P\" time=3/2;\n\"S\" mintime=1 maxtime=4 cost=9;";
        let once = pretty_print(&parse(text).unwrap());
        let twice = pretty_print(&parse(&once).unwrap());
        assert_eq!(once, twice);
    }
}
