//! Exact convex polyhedra over named, sorted variables.
//!
//! Constraints are conjunctions of linear (in)equalities with arbitrary
//! precision rational coefficients. Projection is Fourier-Motzkin
//! elimination with an equality-substitution fast path; emptiness, inclusion
//! and union coverage are all decided exactly, with no floating point
//! anywhere.
//!
//! Variables carry a sort ([`VarSort`]) so higher layers can ask for "all
//! clocks" or "all weight parameters" without tracking index ranges
//! themselves. The polyhedron itself only cares about variable count.

mod expr;
mod polyhedron;
mod row;
mod universe;

pub use expr::LinearExpr;
pub use polyhedron::{union_covers, union_equivalent, Polyhedron};
pub use row::{Relation, Row};
pub use universe::{UniverseError, VarId, VarSort, VariableUniverse};
