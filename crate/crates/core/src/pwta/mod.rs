//! Parametric weighted timed automata and their concrete semantics.
//!
//! [`model`] holds the structural types: locations with urgency flags and
//! clock invariants, edges with guards, clock resets and affine weight
//! updates, and networks of automata synchronizing by multi-party handshake
//! (every automaton whose alphabet contains an action must fire one edge).
//!
//! [`concrete`] executes a network under a fixed parameter valuation with
//! exact rational arithmetic: successor enumeration with sampled delays,
//! depth-first reachability, and step-by-step replay of a given run.

pub mod concrete;
pub mod model;

pub use concrete::{
    replay, run_reaches, synchronized_successors, ConcreteState, DelayChoice, ParameterValuation,
    ReachOutcome, ReplayError, Trace, TraceStep,
};
pub use model::{
    ActionId, Bound, ClockAtom, Comparison, Edge, Guard, Location, LocationId, ModelError, Network,
    Pwta, WeightEquality, WeightUpdate,
};
