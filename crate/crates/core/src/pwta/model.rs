//! Structural model: automata, locations, edges, guards, updates.

use std::collections::BTreeSet;

use num_rational::BigRational;
use thiserror::Error;

use crate::polyhedra::{LinearExpr, Relation, VarId, VarSort, VariableUniverse};

pub type LocationId = usize;
pub type ActionId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

impl Comparison {
    pub fn holds(self, lhs: &BigRational, rhs: &BigRational) -> bool {
        match self {
            Comparison::Lt => lhs < rhs,
            Comparison::Le => lhs <= rhs,
            Comparison::Eq => lhs == rhs,
            Comparison::Ge => lhs >= rhs,
            Comparison::Gt => lhs > rhs,
        }
    }
}

/// Right-hand side of a clock comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bound {
    Constant(BigRational),
    /// A timing parameter.
    Parameter(VarId),
}

/// `clock CMP bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClockAtom {
    pub clock: VarId,
    pub cmp: Comparison,
    pub bound: Bound,
}

/// `weight-variable = weight-parameter`; only the observer automaton may
/// use these (guards are otherwise clock-only).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeightEquality {
    pub variable: VarId,
    pub parameter: VarId,
}

/// Conjunction of clock atoms plus (observer-only) weight equalities.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Guard {
    pub clock_atoms: Vec<ClockAtom>,
    pub weight_atoms: Vec<WeightEquality>,
}

impl Guard {
    pub fn top() -> Self {
        Guard::default()
    }

    pub fn is_top(&self) -> bool {
        self.clock_atoms.is_empty() && self.weight_atoms.is_empty()
    }

    /// The guard as `expr REL 0` constraints for the symbolic engine.
    pub fn to_constraints(&self) -> Vec<(LinearExpr, Relation)> {
        let mut out = Vec::with_capacity(self.clock_atoms.len() + self.weight_atoms.len());
        for atom in &self.clock_atoms {
            let bound = match &atom.bound {
                Bound::Constant(c) => LinearExpr::constant(c.clone()),
                Bound::Parameter(p) => LinearExpr::var(*p),
            };
            let diff = LinearExpr::var(atom.clock) - bound;
            let (expr, rel) = match atom.cmp {
                Comparison::Lt => (diff, Relation::Lt),
                Comparison::Le => (diff, Relation::Le),
                Comparison::Eq => (diff, Relation::Eq),
                Comparison::Ge => (-diff, Relation::Le),
                Comparison::Gt => (-diff, Relation::Lt),
            };
            out.push((expr, rel));
        }
        for atom in &self.weight_atoms {
            let expr = LinearExpr::var(atom.variable) - LinearExpr::var(atom.parameter);
            out.push((expr, Relation::Eq));
        }
        out
    }
}

/// Simultaneous affine weight update `w_i := expr_i`; unassigned weights
/// keep their value.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WeightUpdate {
    pub assignments: Vec<(VarId, LinearExpr)>,
}

impl WeightUpdate {
    pub fn identity() -> Self {
        WeightUpdate::default()
    }

    pub fn is_identity(&self) -> bool {
        self.assignments.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct Location {
    pub name: String,
    /// Time cannot elapse while any automaton sits in an urgent location.
    pub urgent: bool,
    /// Clock-atoms-only constraint that must hold whenever the automaton is
    /// in this location.
    pub invariant: Guard,
    pub accepting: bool,
}

impl Location {
    pub fn plain(name: impl Into<String>) -> Self {
        Location { name: name.into(), urgent: false, invariant: Guard::top(), accepting: false }
    }

    pub fn urgent(name: impl Into<String>) -> Self {
        Location { name: name.into(), urgent: true, invariant: Guard::top(), accepting: false }
    }
}

#[derive(Debug, Clone)]
pub struct Edge {
    pub source: LocationId,
    pub guard: Guard,
    pub action: ActionId,
    pub resets: Vec<VarId>,
    pub update: WeightUpdate,
    pub target: LocationId,
}

#[derive(Debug, Clone)]
pub struct Pwta {
    pub name: String,
    pub locations: Vec<Location>,
    pub initial: LocationId,
    /// Clocks owned by this automaton (reset/read only here).
    pub clocks: Vec<VarId>,
    pub edges: Vec<Edge>,
    /// Observer automata may compare weight variables against weight
    /// parameters in guards; everything else may not.
    pub allow_weight_guards: bool,
}

impl Pwta {
    /// Actions occurring on this automaton's edges; the handshake set.
    pub fn alphabet(&self) -> BTreeSet<ActionId> {
        self.edges.iter().map(|e| e.action).collect()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("automaton `{automaton}`: {message}")]
    Malformed { automaton: String, message: String },
}

#[derive(Debug, Clone)]
pub struct Network {
    pub universe: VariableUniverse,
    pub action_names: Vec<String>,
    pub automata: Vec<Pwta>,
}

impl Network {
    pub fn action_id(&self, name: &str) -> Option<ActionId> {
        self.action_names.iter().position(|n| n == name)
    }

    pub fn action_name(&self, id: ActionId) -> &str {
        &self.action_names[id]
    }

    /// Checks sort discipline and referential integrity. Translation output
    /// must always pass; hand-built networks are checked in tests.
    pub fn well_formed(&self) -> Result<(), ModelError> {
        for automaton in &self.automata {
            let err = |message: String| ModelError::Malformed {
                automaton: automaton.name.clone(),
                message,
            };
            if automaton.initial >= automaton.locations.len() {
                return Err(err("initial location out of range".into()));
            }
            for clock in &automaton.clocks {
                if self.universe.sort(*clock) != VarSort::Clock {
                    return Err(err(format!("`{}` is not clock-sorted", self.universe.name(*clock))));
                }
            }
            for location in &automaton.locations {
                if location.urgent && !location.invariant.is_top() {
                    return Err(err(format!(
                        "urgent location `{}` must have a trivial invariant",
                        location.name
                    )));
                }
                if !location.invariant.weight_atoms.is_empty() {
                    return Err(err(format!(
                        "invariant of `{}` uses weight atoms",
                        location.name
                    )));
                }
                self.check_guard(&location.invariant, false, &err)?;
            }
            for edge in &automaton.edges {
                if edge.source >= automaton.locations.len() || edge.target >= automaton.locations.len() {
                    return Err(err("edge endpoints out of range".into()));
                }
                if edge.action >= self.action_names.len() {
                    return Err(err("edge action out of range".into()));
                }
                self.check_guard(&edge.guard, automaton.allow_weight_guards, &err)?;
                for reset in &edge.resets {
                    if self.universe.sort(*reset) != VarSort::Clock {
                        return Err(err(format!(
                            "reset target `{}` is not clock-sorted",
                            self.universe.name(*reset)
                        )));
                    }
                }
                let mut targets = BTreeSet::new();
                for (var, expr) in &edge.update.assignments {
                    if self.universe.sort(*var) != VarSort::WeightVariable {
                        return Err(err(format!(
                            "update target `{}` is not a weight variable",
                            self.universe.name(*var)
                        )));
                    }
                    if !targets.insert(*var) {
                        return Err(err(format!(
                            "weight `{}` assigned twice on one edge",
                            self.universe.name(*var)
                        )));
                    }
                    for var in expr.variables() {
                        let sort = self.universe.sort(var);
                        if sort != VarSort::WeightVariable && sort != VarSort::WeightParameter {
                            return Err(err(format!(
                                "update expression uses non-weight variable `{}`",
                                self.universe.name(var)
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn check_guard(
        &self,
        guard: &Guard,
        weight_atoms_allowed: bool,
        err: &impl Fn(String) -> ModelError,
    ) -> Result<(), ModelError> {
        for atom in &guard.clock_atoms {
            if self.universe.sort(atom.clock) != VarSort::Clock {
                return Err(err(format!(
                    "guard compares non-clock `{}`",
                    self.universe.name(atom.clock)
                )));
            }
            if let Bound::Parameter(p) = atom.bound {
                if self.universe.sort(p) != VarSort::TimingParameter {
                    return Err(err(format!(
                        "clock bound `{}` is not a timing parameter",
                        self.universe.name(p)
                    )));
                }
            }
        }
        if !guard.weight_atoms.is_empty() && !weight_atoms_allowed {
            return Err(err("weight atoms are only allowed on observer guards".into()));
        }
        for atom in &guard.weight_atoms {
            if self.universe.sort(atom.variable) != VarSort::WeightVariable
                || self.universe.sort(atom.parameter) != VarSort::WeightParameter
            {
                return Err(err("weight atom must compare a weight variable to a weight parameter".into()));
            }
        }
        Ok(())
    }
}
