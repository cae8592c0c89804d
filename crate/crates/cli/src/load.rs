//! Input loading and the shared error-to-exit-code plumbing.

use std::fs;
use std::path::Path;

use aftsynth_core::galileo::{parse, validate, AttackFaultTree, Diagnostic, ParseError};
use aftsynth_core::pwta::LocationId;
use aftsynth_core::translation::{translate, TranslationOutput};

use crate::{Format, Target};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 1;
pub const EXIT_INTERNAL: u8 = 2;
pub const EXIT_EMPTY: u8 = 3;

/// A failed subcommand: the line(s) for stderr plus the exit code. The
/// message is already in its final form, JSON when the subcommand was asked
/// for machine-readable output.
#[derive(Debug)]
pub struct Failure {
    pub rendered: String,
    pub code: u8,
}

impl Failure {
    pub fn input(rendered: impl Into<String>) -> Self {
        Failure { rendered: rendered.into(), code: EXIT_INPUT }
    }

    pub fn internal(rendered: impl Into<String>) -> Self {
        Failure { rendered: rendered.into(), code: EXIT_INTERNAL }
    }

    pub fn empty(rendered: impl Into<String>) -> Self {
        Failure { rendered: rendered.into(), code: EXIT_EMPTY }
    }
}

pub enum LoadError {
    Io(std::io::Error),
    Parse(ParseError),
    Invalid(Vec<Diagnostic>),
}

/// Reads, parses, and validates a tree file.
pub fn load_tree(path: &Path) -> Result<AttackFaultTree, LoadError> {
    let text = fs::read_to_string(path).map_err(LoadError::Io)?;
    let tree = parse(&text).map_err(LoadError::Parse)?;
    let diagnostics = validate(&tree);
    if diagnostics.is_empty() {
        Ok(tree)
    } else {
        Err(LoadError::Invalid(diagnostics))
    }
}

/// Loads a tree and renders any failure for the requested format.
pub fn load_tree_or_fail(path: &Path, format: Format) -> Result<AttackFaultTree, Failure> {
    load_tree(path).map_err(|err| Failure::input(render_load_error(path, &err, format)))
}

fn render_load_error(path: &Path, err: &LoadError, format: Format) -> String {
    match format {
        Format::Text => match err {
            LoadError::Io(e) => format!("{}: {e}", path.display()),
            LoadError::Parse(e) => {
                format!("{}:{}:{}: {}", path.display(), e.line, e.col, e.message)
            }
            LoadError::Invalid(diagnostics) => diagnostics
                .iter()
                .map(|d| format!("{}: {d}", path.display()))
                .collect::<Vec<_>>()
                .join("\n"),
        },
        Format::Json => {
            let error = match err {
                LoadError::Io(e) => serde_json::json!({
                    "kind": "io",
                    "message": e.to_string(),
                }),
                LoadError::Parse(e) => serde_json::json!({
                    "kind": "parse",
                    "line": e.line,
                    "column": e.col,
                    "message": e.message,
                }),
                LoadError::Invalid(diagnostics) => serde_json::json!({
                    "kind": "validate",
                    "diagnostics": diagnostics.iter().map(|d| serde_json::json!({
                        "node": d.node,
                        "rule": d.rule,
                        "message": d.message,
                    })).collect::<Vec<_>>(),
                }),
            };
            serde_json::json!({ "file": path.display().to_string(), "error": error }).to_string()
        }
    }
}

/// Translates a validated tree; validation already passed, so any error here
/// is a bug rather than bad input.
pub fn translate_or_fail(tree: &AttackFaultTree) -> Result<TranslationOutput, Failure> {
    translate(tree).map_err(|e| Failure::internal(format!("translation failed: {e}")))
}

/// Observer location corresponding to the requested root outcome.
pub fn target_location(out: &TranslationOutput, target: Target) -> (usize, LocationId) {
    let location = match target {
        Target::Success => out.root_success,
        Target::Fail => out.root_fail,
    };
    (out.root_automaton, location)
}
