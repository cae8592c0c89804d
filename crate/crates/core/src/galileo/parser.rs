//! Statement parser building an [`AttackFaultTree`].

use std::collections::BTreeSet;

use num_traits::Signed;
use thiserror::Error;

use super::ast::{
    AttackFaultTree, AttributeValue, Diagnostic, GateKind, GateNode, LeafKind, LeafNode, Node,
};
use super::lexer::{lex, Span, Token};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn at(span: Span, message: String) -> Self {
        ParseError { line: span.line, col: span.col, message }
    }
}

/// Attribute keys of historical Galileo/DFT dialects we deliberately do not
/// support; they get a pointed message instead of "unknown attribute".
const LEGACY_KEYS: &[&str] = &["prob", "lambda", "dorm", "dormancy", "repair", "cov", "res", "phase", "phases"];

/// Parses the extended Galileo text into a tree.
///
/// Hard errors (with line/column): lexical and grammar problems, unknown or
/// unsupported attributes, missing/duplicate toplevel, references to
/// undefined nodes. Structural rule violations that need the whole tree
/// (arity, sharing, parameter sorts) are left to [`super::validate`].
pub fn parse(text: &str) -> Result<AttackFaultTree, ParseError> {
    let tokens = lex(text)?;
    let eof = tokens.last().map(|&(_, s)| s).unwrap_or(Span { line: 1, col: 1 });

    let mut toplevel: Option<(String, Span)> = None;
    let mut nodes: Vec<Node> = Vec::new();
    let mut child_refs: Vec<(String, Span)> = Vec::new();
    let mut timing_parameters: BTreeSet<String> = BTreeSet::new();
    let mut weight_parameters: BTreeSet<String> = BTreeSet::new();
    let mut pending: Vec<Diagnostic> = Vec::new();

    for statement in tokens.split(|(t, _)| *t == Token::Semicolon) {
        if statement.is_empty() {
            continue;
        }
        match &statement[0].0 {
            Token::Ident(kw) if kw == "toplevel" => {
                let name = match statement.get(1) {
                    Some((Token::Str(name), _)) => name.clone(),
                    Some(&(_, span)) => {
                        return Err(ParseError::at(span, "expected a quoted node name after `toplevel`".into()))
                    }
                    None => {
                        return Err(ParseError::at(statement[0].1, "expected a quoted node name after `toplevel`".into()))
                    }
                };
                if let Some((_, span)) = statement.get(2) {
                    return Err(ParseError::at(*span, "unexpected token after toplevel declaration".into()));
                }
                if toplevel.is_some() {
                    return Err(ParseError::at(statement[0].1, "duplicate toplevel declaration".into()));
                }
                toplevel = Some((name, statement[1].1));
            }
            Token::Str(name) => {
                let node = parse_definition(
                    name.clone(),
                    &statement[1..],
                    &mut child_refs,
                    &mut timing_parameters,
                    &mut weight_parameters,
                    &mut pending,
                )?;
                nodes.push(node);
            }
            Token::Ident(other) => {
                return Err(ParseError::at(
                    statement[0].1,
                    format!("expected `toplevel` or a quoted node name, found `{other}`"),
                ));
            }
            _ => {
                return Err(ParseError::at(statement[0].1, "expected `toplevel` or a quoted node name".into()));
            }
        }
    }

    let (root, root_span) = toplevel.ok_or_else(|| ParseError::at(eof, "toplevel missing".into()))?;

    let defined: BTreeSet<&str> = nodes.iter().map(|n| n.name()).collect();
    if !defined.contains(root.as_str()) {
        return Err(ParseError::at(root_span, format!("reference to undefined node `{root}`")));
    }
    for (child, span) in &child_refs {
        if !defined.contains(child.as_str()) {
            return Err(ParseError::at(*span, format!("reference to undefined node `{child}`")));
        }
    }

    Ok(AttackFaultTree::new(root, nodes, timing_parameters, weight_parameters, pending))
}

/// Parses everything after the node name: either a gate (kind + children +
/// weight attributes) or a leaf (attributes only).
fn parse_definition(
    name: String,
    rest: &[(Token, Span)],
    child_refs: &mut Vec<(String, Span)>,
    timing_parameters: &mut BTreeSet<String>,
    weight_parameters: &mut BTreeSet<String>,
    pending: &mut Vec<Diagnostic>,
) -> Result<Node, ParseError> {
    let gate_kind = match rest.first() {
        Some((Token::Ident(word), _)) if gate_kind_of(word).is_some() => {
            Some((gate_kind_of(word).unwrap(), None))
        }
        Some(&(Token::VotSpec(k, n), span)) => Some((GateKind::Vot(k), Some((n, span)))),
        _ => None,
    };

    if let Some((kind, vot_info)) = gate_kind {
        let mut children = Vec::new();
        let mut cursor = 1;
        while let Some((Token::Str(child), span)) = rest.get(cursor).map(|(t, s)| (t, *s)) {
            children.push(child.clone());
            child_refs.push((child.clone(), span));
            cursor += 1;
        }
        let attrs = parse_attributes(&rest[cursor..], AttributeContext::Gate, timing_parameters, weight_parameters)?;
        if let Some((declared_n, span)) = vot_info {
            if declared_n as usize != children.len() {
                pending.push(Diagnostic {
                    node: name.clone(),
                    rule: "vot-arity-mismatch",
                    message: format!(
                        "voting gate declared over {declared_n} children but lists {} (line {}, column {})",
                        children.len(),
                        span.line,
                        span.col
                    ),
                });
            }
        }
        return Ok(Node::Gate(GateNode {
            name,
            kind,
            children,
            cost: attrs.cost.unwrap_or_else(AttributeValue::zero),
            damage: attrs.damage.unwrap_or_else(AttributeValue::zero),
        }));
    }

    if let Some((Token::Str(_), span)) = rest.first() {
        return Err(ParseError::at(
            *span,
            "expected a gate kind (and, sand, pand, or, sor, xor, fdep, wsp, <k>of<n>) before child list".into(),
        ));
    }

    let attrs = parse_attributes(rest, AttributeContext::Leaf, timing_parameters, weight_parameters)?;
    let (min_time, max_time) = match (attrs.min_time, attrs.max_time) {
        (Some(min), Some(max)) => (min, max),
        (Some(min), None) => (min.clone(), min),
        (None, Some(max)) => (max.clone(), max),
        (None, None) => (AttributeValue::zero(), AttributeValue::zero()),
    };
    Ok(Node::Leaf(LeafNode {
        name,
        kind: attrs.kind.unwrap_or(LeafKind::Bas),
        min_time,
        max_time,
        cost: attrs.cost.unwrap_or_else(AttributeValue::zero),
        damage: attrs.damage.unwrap_or_else(AttributeValue::zero),
    }))
}

fn gate_kind_of(word: &str) -> Option<GateKind> {
    match word {
        "and" => Some(GateKind::And),
        "sand" => Some(GateKind::Sand),
        "pand" => Some(GateKind::Pand),
        "or" => Some(GateKind::Or),
        "sor" => Some(GateKind::Sor),
        "xor" => Some(GateKind::Xor),
        "fdep" => Some(GateKind::Fdep),
        "wsp" => Some(GateKind::Spare),
        _ => None,
    }
}

#[derive(Clone, Copy, PartialEq)]
enum AttributeContext {
    Leaf,
    Gate,
}

#[derive(Default)]
struct Attributes {
    min_time: Option<AttributeValue>,
    max_time: Option<AttributeValue>,
    cost: Option<AttributeValue>,
    damage: Option<AttributeValue>,
    kind: Option<LeafKind>,
}

/// Parses a run of `key=value` pairs, recording parameter declarations in
/// the sort matching the key.
fn parse_attributes(
    tokens: &[(Token, Span)],
    context: AttributeContext,
    timing_parameters: &mut BTreeSet<String>,
    weight_parameters: &mut BTreeSet<String>,
) -> Result<Attributes, ParseError> {
    let mut attrs = Attributes::default();
    let mut time_sugar: Option<Span> = None;
    let mut explicit_min_max: Option<Span> = None;
    let mut i = 0;
    while i < tokens.len() {
        let (key, key_span) = match &tokens[i] {
            (Token::Ident(k), s) => (k.clone(), *s),
            (Token::Str(_), s) => {
                return Err(ParseError::at(*s, "child names may only follow a gate kind".into()));
            }
            (_, s) => {
                return Err(ParseError::at(*s, "expected `key=value` attribute".into()));
            }
        };
        if LEGACY_KEYS.contains(&key.as_str()) {
            return Err(ParseError::at(
                key_span,
                format!("legacy attribute `{key}` is not supported (probabilities, dormancy and repair are out of scope)"),
            ));
        }
        match tokens.get(i + 1) {
            Some((Token::Equals, _)) => {}
            _ => {
                return Err(ParseError::at(key_span, format!("expected `=` after attribute `{key}`")));
            }
        }
        let (value_token, value_span) = match tokens.get(i + 2) {
            Some((t, s)) => (t.clone(), *s),
            None => {
                return Err(ParseError::at(key_span, format!("missing value for attribute `{key}`")));
            }
        };
        i += 3;

        let set_once = |slot: &mut Option<AttributeValue>, value: AttributeValue| -> Result<(), ParseError> {
            if slot.is_some() {
                return Err(ParseError::at(key_span, format!("duplicate attribute `{key}`")));
            }
            *slot = Some(value);
            Ok(())
        };

        match key.as_str() {
            "mintime" | "maxtime" | "time" => {
                if context == AttributeContext::Gate {
                    return Err(ParseError::at(
                        key_span,
                        format!("gates cannot carry `{key}` (timing attributes belong to leaves)"),
                    ));
                }
                let value = timing_value(&value_token, value_span, timing_parameters)?;
                if key == "time" {
                    if explicit_min_max.is_some() {
                        return Err(ParseError::at(key_span, "`time=` conflicts with `mintime=`/`maxtime=`".into()));
                    }
                    if attrs.min_time.is_some() {
                        return Err(ParseError::at(key_span, "duplicate attribute `time`".into()));
                    }
                    attrs.min_time = Some(value.clone());
                    attrs.max_time = Some(value);
                    time_sugar = Some(key_span);
                } else {
                    if time_sugar.is_some() {
                        return Err(ParseError::at(key_span, "`time=` conflicts with `mintime=`/`maxtime=`".into()));
                    }
                    explicit_min_max = Some(key_span);
                    if key == "mintime" {
                        set_once(&mut attrs.min_time, value)?;
                    } else {
                        set_once(&mut attrs.max_time, value)?;
                    }
                }
            }
            "cost" | "damage" => {
                let value = weight_value(&value_token, value_span, weight_parameters)?;
                if key == "cost" {
                    set_once(&mut attrs.cost, value)?;
                } else {
                    set_once(&mut attrs.damage, value)?;
                }
            }
            "kind" => {
                if context == AttributeContext::Gate {
                    return Err(ParseError::at(key_span, "gates cannot carry `kind`".into()));
                }
                if attrs.kind.is_some() {
                    return Err(ParseError::at(key_span, "duplicate attribute `kind`".into()));
                }
                attrs.kind = Some(match &value_token {
                    Token::Ident(v) if v == "bas" => LeafKind::Bas,
                    Token::Ident(v) if v == "bcf" => LeafKind::Bcf,
                    _ => {
                        return Err(ParseError::at(value_span, "`kind` must be `bas` or `bcf`".into()));
                    }
                });
            }
            other => {
                return Err(ParseError::at(key_span, format!("unknown attribute `{other}`")));
            }
        }
    }
    Ok(attrs)
}

fn timing_value(
    token: &Token,
    span: Span,
    timing_parameters: &mut BTreeSet<String>,
) -> Result<AttributeValue, ParseError> {
    match token {
        Token::Number(n) => {
            if n.is_negative() {
                return Err(ParseError::at(span, "time values must be non-negative".into()));
            }
            Ok(AttributeValue::Constant(n.clone()))
        }
        Token::Ident(name) => {
            timing_parameters.insert(name.clone());
            Ok(AttributeValue::Parameter(name.clone()))
        }
        _ => Err(ParseError::at(span, "expected a number or parameter name".into())),
    }
}

fn weight_value(
    token: &Token,
    span: Span,
    weight_parameters: &mut BTreeSet<String>,
) -> Result<AttributeValue, ParseError> {
    match token {
        Token::Number(n) => Ok(AttributeValue::Constant(n.clone())),
        Token::Ident(name) => {
            weight_parameters.insert(name.clone());
            Ok(AttributeValue::Parameter(name.clone()))
        }
        _ => Err(ParseError::at(span, "expected a number or parameter name".into())),
    }
}
