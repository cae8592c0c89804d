//! Tree data model produced by the parser.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_rational::BigRational;

/// An attribute position either holds an exact rational or names a
/// parameter whose sort (timing vs weight) follows from the position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AttributeValue {
    Constant(BigRational),
    Parameter(String),
}

impl AttributeValue {
    pub fn zero() -> Self {
        AttributeValue::Constant(BigRational::from_integer(0.into()))
    }

    pub fn as_constant(&self) -> Option<&BigRational> {
        match self {
            AttributeValue::Constant(c) => Some(c),
            AttributeValue::Parameter(_) => None,
        }
    }

    pub fn as_parameter(&self) -> Option<&str> {
        match self {
            AttributeValue::Constant(_) => None,
            AttributeValue::Parameter(p) => Some(p),
        }
    }
}

/// Basic attack step vs basic component failure. The translation treats the
/// two identically; the distinction is kept for display and export.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeafKind {
    Bas,
    Bcf,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeafNode {
    pub name: String,
    pub kind: LeafKind,
    pub min_time: AttributeValue,
    pub max_time: AttributeValue,
    pub cost: AttributeValue,
    pub damage: AttributeValue,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateKind {
    And,
    Sand,
    Pand,
    Or,
    Sor,
    Xor,
    Fdep,
    Spare,
    /// Voting gate: disrupted when `k` of the children are disrupted.
    Vot(u32),
}

impl GateKind {
    /// Whether child order carries meaning for this gate.
    pub fn order_sensitive(self) -> bool {
        matches!(
            self,
            GateKind::Sand | GateKind::Pand | GateKind::Sor | GateKind::Spare | GateKind::Fdep
        )
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateKind::And => write!(f, "and"),
            GateKind::Sand => write!(f, "sand"),
            GateKind::Pand => write!(f, "pand"),
            GateKind::Or => write!(f, "or"),
            GateKind::Sor => write!(f, "sor"),
            GateKind::Xor => write!(f, "xor"),
            GateKind::Fdep => write!(f, "fdep"),
            GateKind::Spare => write!(f, "wsp"),
            GateKind::Vot(k) => write!(f, "{k}of?"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GateNode {
    pub name: String,
    pub kind: GateKind,
    pub children: Vec<String>,
    pub cost: AttributeValue,
    pub damage: AttributeValue,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    Leaf(LeafNode),
    Gate(GateNode),
}

impl Node {
    pub fn name(&self) -> &str {
        match self {
            Node::Leaf(l) => &l.name,
            Node::Gate(g) => &g.name,
        }
    }

    pub fn children(&self) -> &[String] {
        match self {
            Node::Leaf(_) => &[],
            Node::Gate(g) => &g.children,
        }
    }
}

/// A structural problem found in an otherwise parseable tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    /// Name of the offending node (or parameter).
    pub node: String,
    /// Stable machine-readable rule id, e.g. `vot-threshold-exceeds-arity`.
    pub rule: &'static str,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]: {}", self.node, self.rule, self.message)
    }
}

/// A parsed attack-fault tree. Nodes keep their file definition order so the
/// pretty-printer and translation are deterministic.
#[derive(Debug, Clone)]
pub struct AttackFaultTree {
    pub root: String,
    nodes: Vec<Node>,
    index: HashMap<String, usize>,
    pub timing_parameters: BTreeSet<String>,
    pub weight_parameters: BTreeSet<String>,
    /// Structural issues already visible during parsing (duplicate
    /// definitions, shared children); folded into `validate`'s output.
    pub(crate) pending_diagnostics: Vec<Diagnostic>,
}

impl AttackFaultTree {
    pub(crate) fn new(
        root: String,
        nodes: Vec<Node>,
        timing_parameters: BTreeSet<String>,
        weight_parameters: BTreeSet<String>,
        pending_diagnostics: Vec<Diagnostic>,
    ) -> Self {
        let mut index = HashMap::new();
        // First definition wins on duplicates; validate reports them.
        for (i, node) in nodes.iter().enumerate() {
            index.entry(node.name().to_string()).or_insert(i);
        }
        AttackFaultTree { root, nodes, index, timing_parameters, weight_parameters, pending_diagnostics }
    }

    pub fn node(&self, name: &str) -> Option<&Node> {
        self.index.get(name).map(|&i| &self.nodes[i])
    }

    /// All definitions in file order, duplicates included.
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn root_node(&self) -> &Node {
        self.node(&self.root).expect("root exists after parse")
    }

    /// Nodes reachable from the root in pre-order (children left to right).
    pub fn preorder(&self) -> Vec<&Node> {
        let mut out = Vec::new();
        let mut stack = vec![self.root.as_str()];
        let mut seen = BTreeSet::new();
        while let Some(name) = stack.pop() {
            if !seen.insert(name.to_string()) {
                continue;
            }
            if let Some(node) = self.node(name) {
                out.push(node);
                for child in node.children().iter().rev() {
                    stack.push(child);
                }
            }
        }
        out
    }

    /// True when no attribute anywhere references a parameter.
    pub fn is_concrete(&self) -> bool {
        self.timing_parameters.is_empty() && self.weight_parameters.is_empty()
    }
}
