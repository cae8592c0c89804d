//! Extended Galileo format: lexing, parsing, validation, pretty-printing.
//!
//! The dialect is line-oriented and `;`-terminated with `#` comments:
//!
//! ```text
//! toplevel "A";
//! "A" or "B" "C";
//! "B" mintime=50 maxtime=100 cost=50;
//! "C" mintime=30 maxtime=70 cost=30;
//! ```
//!
//! Gate kinds: `and`, `sand`, `pand`, `or`, `sor`, `xor`, `fdep`, `wsp`
//! (spare), and `<k>of<n>` voting gates. Attribute values are decimal
//! rationals (`11.5`), fractions (`3/2`), or identifiers; an identifier in a
//! timing position declares a timing parameter, in a cost/damage position a
//! weight parameter. `time=v` is sugar for `mintime=v maxtime=v`. Leaves
//! accept `kind=bas|bcf` (default `bas`).
//!
//! [`parse`] reports hard errors (syntax, unknown attributes, undefined
//! references, missing toplevel) with line and column; [`validate`] returns
//! structural diagnostics (arity rules, shared subtrees, parameter sort
//! clashes) for a tree that parsed successfully.

mod ast;
mod lexer;
mod parser;
mod printer;
mod validate;

pub use ast::{
    AttackFaultTree, AttributeValue, Diagnostic, GateKind, GateNode, LeafKind, LeafNode, Node,
};
pub use parser::{parse, ParseError};
pub use printer::pretty_print;
pub use validate::validate;
