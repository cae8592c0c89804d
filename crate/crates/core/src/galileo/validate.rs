//! Structural validation of parsed trees.

use std::collections::{BTreeMap, BTreeSet};

use super::ast::{AttackFaultTree, Diagnostic, GateKind, Node};

/// Names claimed by the translation's observer automaton; user parameters
/// must not collide with them.
const RESERVED_NAMES: &[&str] = &[
    "total_time",
    "total_cost",
    "total_damage",
    "abs_time",
    "current_cost_root",
    "current_damage_root",
];

/// Checks every tree invariant and returns one diagnostic per violation.
/// An empty result means the tree is ready for translation.
pub fn validate(tree: &AttackFaultTree) -> Vec<Diagnostic> {
    let mut out: Vec<Diagnostic> = tree.pending_diagnostics.clone();

    // Names must be usable as automaton/action/variable stems.
    for node in tree.nodes() {
        if !is_identifier(node.name()) {
            out.push(Diagnostic {
                node: node.name().to_string(),
                rule: "invalid-name",
                message: format!("node name `{}` is not a valid identifier", node.name()),
            });
        }
        if node.name() == "rootTA" {
            out.push(Diagnostic {
                node: node.name().to_string(),
                rule: "reserved-name",
                message: "node name `rootTA` is reserved for the generated observer automaton"
                    .into(),
            });
        }
    }

    // Exactly one definition per name.
    let mut seen: BTreeSet<&str> = BTreeSet::new();
    for node in tree.nodes() {
        if !seen.insert(node.name()) {
            out.push(Diagnostic {
                node: node.name().to_string(),
                rule: "duplicate-definition",
                message: format!("node `{}` is defined more than once", node.name()),
            });
        }
    }

    // Tree shape: every non-root node has exactly one parent.
    let mut parent_count: BTreeMap<&str, usize> = BTreeMap::new();
    for node in tree.nodes() {
        for child in node.children() {
            *parent_count.entry(child.as_str()).or_insert(0) += 1;
        }
    }
    for (child, count) in &parent_count {
        if *count > 1 {
            out.push(Diagnostic {
                node: child.to_string(),
                rule: "shared-subtree",
                message: format!("shared subtree not supported: `{child}` is a child of {count} gates"),
            });
        }
    }
    if parent_count.contains_key(tree.root.as_str()) {
        out.push(Diagnostic {
            node: tree.root.clone(),
            rule: "root-has-parent",
            message: format!("toplevel node `{}` cannot also be a child", tree.root),
        });
    }
    let reachable: BTreeSet<String> =
        tree.preorder().iter().map(|n| n.name().to_string()).collect();
    for node in tree.nodes() {
        if !reachable.contains(node.name()) {
            out.push(Diagnostic {
                node: node.name().to_string(),
                rule: "unreachable-node",
                message: format!("node `{}` is not reachable from the toplevel", node.name()),
            });
        }
    }

    // Per-gate arity rules.
    for node in tree.nodes() {
        let gate = match node {
            Node::Gate(g) => g,
            Node::Leaf(leaf) => {
                if let (Some(min), Some(max)) = (leaf.min_time.as_constant(), leaf.max_time.as_constant()) {
                    if min > max {
                        out.push(Diagnostic {
                            node: leaf.name.clone(),
                            rule: "leaf-window",
                            message: format!("leaf `{}` has mintime exceeding maxtime", leaf.name),
                        });
                    }
                }
                continue;
            }
        };
        let n = gate.children.len();
        if n == 0 {
            out.push(Diagnostic {
                node: gate.name.clone(),
                rule: "gate-no-children",
                message: format!("gate `{}` has no children", gate.name),
            });
            continue;
        }
        match gate.kind {
            GateKind::Xor if n != 2 => out.push(Diagnostic {
                node: gate.name.clone(),
                rule: "xor-arity",
                message: format!("XOR gate `{}` must have exactly 2 children, has {n}", gate.name),
            }),
            GateKind::Vot(k) => {
                if k == 0 {
                    out.push(Diagnostic {
                        node: gate.name.clone(),
                        rule: "vot-threshold-zero",
                        message: format!("VOT threshold of `{}` must be at least 1", gate.name),
                    });
                } else if k as usize > n {
                    out.push(Diagnostic {
                        node: gate.name.clone(),
                        rule: "vot-threshold-exceeds-arity",
                        message: format!(
                            "VOT threshold exceeds arity: `{}` requires {k} of {n} children",
                            gate.name
                        ),
                    });
                }
            }
            GateKind::Fdep => {
                if n < 2 {
                    out.push(Diagnostic {
                        node: gate.name.clone(),
                        rule: "fdep-arity",
                        message: format!(
                            "FDEP gate `{}` needs a trigger and at least one dependent event",
                            gate.name
                        ),
                    });
                }
                // Forcing an arbitrary subtree to succeed instantly is not
                // meaningful; dependents are basic events.
                for dep in gate.children.iter().skip(1) {
                    if let Some(Node::Gate(_)) = tree.node(dep) {
                        out.push(Diagnostic {
                            node: gate.name.clone(),
                            rule: "fdep-dependent-not-leaf",
                            message: format!(
                                "FDEP gate `{}` has gate `{dep}` as a dependent event; dependents must be leaves",
                                gate.name
                            ),
                        });
                    }
                }
            }
            GateKind::Spare if n < 2 => out.push(Diagnostic {
                node: gate.name.clone(),
                rule: "spare-arity",
                message: format!("spare gate `{}` needs a primary and at least one spare", gate.name),
            }),
            _ => {}
        }
    }

    // Parameter hygiene: sorts disjoint, names free of collisions.
    for param in tree.timing_parameters.intersection(&tree.weight_parameters) {
        out.push(Diagnostic {
            node: param.clone(),
            rule: "parameter-sort-clash",
            message: format!("parameter `{param}` is used in both timing and weight positions"),
        });
    }
    let mut generated: BTreeSet<String> = RESERVED_NAMES.iter().map(|s| s.to_string()).collect();
    for node in tree.nodes() {
        generated.insert(format!("x_{}", node.name()));
        generated.insert(format!("w_cost_{}", node.name()));
        generated.insert(format!("w_dmg_{}", node.name()));
    }
    for param in tree.timing_parameters.union(&tree.weight_parameters) {
        if generated.contains(param) {
            out.push(Diagnostic {
                node: param.clone(),
                rule: "reserved-name",
                message: format!("parameter `{param}` collides with a name generated by the translation"),
            });
        }
    }

    out
}

fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
