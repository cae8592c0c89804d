//! Variable naming and sorting shared by a whole automata network.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Index of a variable inside its [`VariableUniverse`].
pub type VarId = usize;

/// What role a variable plays in the model.
///
/// Clocks grow under time elapse; everything else is constant during delays.
/// Timing parameters are constrained to be nonnegative at initialisation,
/// weight parameters are not.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VarSort {
    Clock,
    TimingParameter,
    WeightVariable,
    WeightParameter,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum UniverseError {
    #[error("variable `{0}` declared twice")]
    Duplicate(String),
}

/// An ordered set of named variables, each with a [`VarSort`].
///
/// The declaration order fixes the column order of every [`super::Row`] and
/// is therefore part of the public contract: two polyhedra may only be
/// combined when they were built against the same universe.
#[derive(Debug, Clone, Default)]
pub struct VariableUniverse {
    names: Vec<String>,
    sorts: Vec<VarSort>,
    index: HashMap<String, VarId>,
}

impl VariableUniverse {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares a new variable and returns its id. Names must be unique
    /// across all sorts.
    pub fn add(&mut self, name: &str, sort: VarSort) -> Result<VarId, UniverseError> {
        if self.index.contains_key(name) {
            return Err(UniverseError::Duplicate(name.to_string()));
        }
        let id = self.names.len();
        self.names.push(name.to_string());
        self.sorts.push(sort);
        self.index.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn id(&self, name: &str) -> Option<VarId> {
        self.index.get(name).copied()
    }

    pub fn name(&self, id: VarId) -> &str {
        &self.names[id]
    }

    pub fn sort(&self, id: VarId) -> VarSort {
        self.sorts[id]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, &str, VarSort)> + '_ {
        (0..self.len()).map(move |id| (id, self.name(id), self.sort(id)))
    }

    pub fn vars_of_sort(&self, sort: VarSort) -> Vec<VarId> {
        (0..self.len()).filter(|&id| self.sorts[id] == sort).collect()
    }
}
