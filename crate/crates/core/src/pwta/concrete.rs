//! Concrete execution under a fixed parameter valuation.
//!
//! Delay choices are sampled at guard/invariant boundary points plus
//! interval midpoints. For the translated attack-fault-tree networks (whose
//! guards are closed or point constraints on single clocks) this sampling is
//! complete for reachability; for hand-written models with strict guards the
//! midpoint samples cover the open cases that matter in practice, and
//! [`run_reaches`] reports a distinct outcome when it stops on budget rather
//! than exhaustion.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use super::model::{ActionId, Bound, Comparison, Edge, Guard, LocationId, Network, WeightUpdate};
use crate::polyhedra::{VarId, VarSort};

/// Values for every timing and weight parameter of a universe.
#[derive(Debug, Clone)]
pub struct ParameterValuation {
    values: BTreeMap<VarId, BigRational>,
}

impl ParameterValuation {
    /// Builds a valuation from `(name, value)` pairs; every parameter in the
    /// universe must be covered, timing parameters must be nonnegative.
    pub fn from_pairs(
        universe: &crate::polyhedra::VariableUniverse,
        pairs: &[(&str, BigRational)],
    ) -> Result<Self, String> {
        let mut values = BTreeMap::new();
        for (name, value) in pairs {
            let id = universe
                .id(name)
                .ok_or_else(|| format!("unknown parameter `{name}`"))?;
            match universe.sort(id) {
                VarSort::TimingParameter => {
                    if value.is_negative() {
                        return Err(format!("timing parameter `{name}` must be non-negative"));
                    }
                }
                VarSort::WeightParameter => {}
                _ => return Err(format!("`{name}` is not a parameter")),
            }
            if values.insert(id, value.clone()).is_some() {
                return Err(format!("parameter `{name}` given twice"));
            }
        }
        for (id, name, sort) in universe.iter() {
            if matches!(sort, VarSort::TimingParameter | VarSort::WeightParameter)
                && !values.contains_key(&id)
            {
                return Err(format!("missing parameter `{name}` in valuation"));
            }
        }
        Ok(ParameterValuation { values })
    }

    pub fn get(&self, id: VarId) -> &BigRational {
        &self.values[&id]
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, &BigRational)> + '_ {
        self.values.iter().map(|(&id, v)| (id, v))
    }
}

/// One concrete network configuration. `values` is indexed by `VarId` and
/// carries clocks, weight variables, and (fixed) parameters alike.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConcreteState {
    pub locations: Vec<LocationId>,
    pub values: Vec<BigRational>,
}

/// The sampled delay of a successor plus the exact feasibility window it was
/// drawn from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DelayChoice {
    pub delay: BigRational,
    pub earliest: BigRational,
    pub earliest_strict: bool,
    pub latest: Option<BigRational>,
    pub latest_strict: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub delay: BigRational,
    pub action: ActionId,
    pub state: ConcreteState,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub initial: ConcreteState,
    pub steps: Vec<TraceStep>,
}

impl Trace {
    pub fn final_state(&self) -> &ConcreteState {
        self.steps.last().map(|s| &s.state).unwrap_or(&self.initial)
    }

    /// Pretty form mirroring run notation:
    /// `(l1; x=0, y=0; w=0) -(press, 2)-> (l2; ...)`.
    pub fn render(&self, net: &Network) -> String {
        let mut out = render_state(net, &self.initial);
        for step in &self.steps {
            out.push_str(&format!(
                " -({}, {})-> {}",
                net.action_name(step.action),
                crate::rational_to_string(&step.delay),
                render_state(net, &step.state)
            ));
        }
        out
    }
}

fn render_state(net: &Network, state: &ConcreteState) -> String {
    let locs: Vec<&str> = net
        .automata
        .iter()
        .zip(&state.locations)
        .map(|(a, &l)| a.locations[l].name.as_str())
        .collect();
    let mut clocks = Vec::new();
    let mut weights = Vec::new();
    for (id, name, sort) in net.universe.iter() {
        match sort {
            VarSort::Clock => clocks.push(format!("{name}={}", crate::rational_to_string(&state.values[id]))),
            VarSort::WeightVariable => {
                weights.push(format!("{name}={}", crate::rational_to_string(&state.values[id])))
            }
            _ => {}
        }
    }
    format!("({}; {}; {})", locs.join(","), clocks.join(", "), weights.join(", "))
}

/// Applies a simultaneous weight update: all right-hand sides are evaluated
/// against the pre-state, then written at once.
pub fn evaluate_update(update: &WeightUpdate, values: &[BigRational]) -> Vec<BigRational> {
    let mut out = values.to_vec();
    let computed: Vec<(VarId, BigRational)> = update
        .assignments
        .iter()
        .map(|(var, expr)| (*var, expr.evaluate(values)))
        .collect();
    for (var, value) in computed {
        out[var] = value;
    }
    out
}

/// Closed/open rational interval used for delay feasibility.
#[derive(Debug, Clone)]
struct DelayInterval {
    lo: BigRational,
    lo_strict: bool,
    hi: Option<BigRational>,
    hi_strict: bool,
    empty: bool,
}

impl DelayInterval {
    fn nonnegative() -> Self {
        DelayInterval {
            lo: BigRational::zero(),
            lo_strict: false,
            hi: None,
            hi_strict: false,
            empty: false,
        }
    }

    fn point_zero() -> Self {
        DelayInterval {
            lo: BigRational::zero(),
            lo_strict: false,
            hi: Some(BigRational::zero()),
            hi_strict: false,
            empty: false,
        }
    }

    fn tighten_lo(&mut self, lo: BigRational, strict: bool) {
        if self.empty {
            return;
        }
        if lo > self.lo || (lo == self.lo && strict && !self.lo_strict) {
            self.lo = lo;
            self.lo_strict = strict;
        }
        self.check();
    }

    fn tighten_hi(&mut self, hi: BigRational, strict: bool) {
        if self.empty {
            return;
        }
        match &self.hi {
            None => {
                self.hi = Some(hi);
                self.hi_strict = strict;
            }
            Some(cur) => {
                if hi < *cur || (hi == *cur && strict && !self.hi_strict) {
                    self.hi = Some(hi);
                    self.hi_strict = strict;
                }
            }
        }
        self.check();
    }

    fn check(&mut self) {
        if let Some(hi) = &self.hi {
            if *hi < self.lo || (*hi == self.lo && (self.lo_strict || self.hi_strict)) {
                self.empty = true;
            }
        }
    }

    /// Representative delays: both endpoints when attainable, the midpoint,
    /// and a step past the lower bound when unbounded above.
    fn samples(&self) -> Vec<BigRational> {
        if self.empty {
            return Vec::new();
        }
        let mut out = Vec::new();
        if !self.lo_strict {
            out.push(self.lo.clone());
        }
        match &self.hi {
            Some(hi) => {
                if !self.hi_strict && *hi != self.lo {
                    out.push(hi.clone());
                }
                if *hi != self.lo {
                    let two = BigRational::from_integer(BigInt::from(2));
                    out.push((&self.lo + hi) / two);
                }
            }
            None => {
                out.push(&self.lo + BigRational::from_integer(BigInt::from(1)));
                if self.lo_strict {
                    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
                    out.push(&self.lo + half);
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }
}

/// Folds `current(clock) + d CMP bound` into a constraint on `d`.
fn constrain_by_atom(
    interval: &mut DelayInterval,
    state: &ConcreteState,
    clock: VarId,
    cmp: Comparison,
    bound: &Bound,
) {
    let bound_value = match bound {
        Bound::Constant(c) => c.clone(),
        Bound::Parameter(p) => state.values[*p].clone(),
    };
    let delta = bound_value - &state.values[clock];
    match cmp {
        Comparison::Lt => interval.tighten_hi(delta, true),
        Comparison::Le => interval.tighten_hi(delta, false),
        Comparison::Eq => {
            interval.tighten_lo(delta.clone(), false);
            interval.tighten_hi(delta, false);
        }
        Comparison::Ge => interval.tighten_lo(delta, false),
        Comparison::Gt => interval.tighten_lo(delta, true),
    }
}

fn guard_weight_atoms_hold(guard: &Guard, state: &ConcreteState) -> bool {
    guard
        .weight_atoms
        .iter()
        .all(|atom| state.values[atom.variable] == state.values[atom.parameter])
}

fn state_satisfies_invariants(net: &Network, state: &ConcreteState) -> bool {
    net.automata.iter().zip(&state.locations).all(|(automaton, &loc)| {
        automaton.locations[loc].invariant.clock_atoms.iter().all(|atom| {
            let bound = match &atom.bound {
                Bound::Constant(c) => c.clone(),
                Bound::Parameter(p) => state.values[*p].clone(),
            };
            atom.cmp.holds(&state.values[atom.clock], &bound)
        })
    })
}

/// The initial configuration: initial locations, clocks and weight
/// variables at zero, parameter slots fixed from `valuation`.
pub fn initial_state(net: &Network, valuation: &ParameterValuation) -> ConcreteState {
    let mut values = vec![BigRational::zero(); net.universe.len()];
    for (id, value) in valuation.iter() {
        values[id] = value.clone();
    }
    ConcreteState {
        locations: net.automata.iter().map(|a| a.initial).collect(),
        values,
    }
}

/// All `(action, delay, successor)` triples from `state`, with delays drawn
/// from the exact feasibility window of each synchronized edge combination.
pub fn synchronized_successors(
    net: &Network,
    state: &ConcreteState,
) -> Vec<(ActionId, DelayChoice, ConcreteState)> {
    let alphabets: Vec<_> = net.automata.iter().map(|a| a.alphabet()).collect();
    successors_with_alphabets(net, &alphabets, state)
}

fn successors_with_alphabets(
    net: &Network,
    alphabets: &[std::collections::BTreeSet<ActionId>],
    state: &ConcreteState,
) -> Vec<(ActionId, DelayChoice, ConcreteState)> {
    let urgent_now = net
        .automata
        .iter()
        .zip(&state.locations)
        .any(|(a, &l)| a.locations[l].urgent);

    let mut out = Vec::new();
    for action in 0..net.action_names.len() {
        let participants: Vec<usize> = (0..net.automata.len())
            .filter(|&i| alphabets[i].contains(&action))
            .collect();
        if participants.is_empty() {
            continue;
        }
        // Candidate edges per participant; weight atoms are delay-independent
        // and filtered here.
        let mut candidate_edges: Vec<Vec<&Edge>> = Vec::with_capacity(participants.len());
        let mut blocked = false;
        for &i in &participants {
            let automaton = &net.automata[i];
            let edges: Vec<&Edge> = automaton
                .edges
                .iter()
                .filter(|e| {
                    e.source == state.locations[i]
                        && e.action == action
                        && guard_weight_atoms_hold(&e.guard, state)
                })
                .collect();
            if edges.is_empty() {
                blocked = true;
                break;
            }
            candidate_edges.push(edges);
        }
        if blocked {
            continue;
        }

        for combination in cartesian(&candidate_edges) {
            let mut interval = if urgent_now {
                DelayInterval::point_zero()
            } else {
                DelayInterval::nonnegative()
            };
            // Source invariants bound the delay; each atom's satisfaction
            // set in d is convex and contains 0, so checking the endpoint
            // covers the whole delay.
            for (automaton, &loc) in net.automata.iter().zip(&state.locations) {
                for atom in &automaton.locations[loc].invariant.clock_atoms {
                    constrain_by_atom(&mut interval, state, atom.clock, atom.cmp, &atom.bound);
                }
            }
            for edge in &combination {
                for atom in &edge.guard.clock_atoms {
                    constrain_by_atom(&mut interval, state, atom.clock, atom.cmp, &atom.bound);
                }
            }
            for delay in interval.samples() {
                let successor = apply_combination(net, state, &participants, &combination, &delay);
                if state_satisfies_invariants(net, &successor) {
                    out.push((
                        action,
                        DelayChoice {
                            delay,
                            earliest: interval.lo.clone(),
                            earliest_strict: interval.lo_strict,
                            latest: interval.hi.clone(),
                            latest_strict: interval.hi_strict,
                        },
                        successor,
                    ));
                }
            }
        }
    }
    out
}

fn cartesian<'a>(per_participant: &[Vec<&'a Edge>]) -> Vec<Vec<&'a Edge>> {
    let mut combos: Vec<Vec<&Edge>> = vec![Vec::new()];
    for edges in per_participant {
        let mut next = Vec::with_capacity(combos.len() * edges.len());
        for combo in &combos {
            for &edge in edges {
                let mut extended = combo.clone();
                extended.push(edge);
                next.push(extended);
            }
        }
        combos = next;
    }
    combos
}

/// Advances every clock by `delay`, then fires the chosen edge in each
/// participating automaton in network order: clock resets, then the edge's
/// simultaneous weight update.
fn apply_combination(
    net: &Network,
    state: &ConcreteState,
    participants: &[usize],
    combination: &[&Edge],
    delay: &BigRational,
) -> ConcreteState {
    let mut values = state.values.clone();
    if !delay.is_zero() {
        for (id, _, sort) in net.universe.iter() {
            if sort == VarSort::Clock {
                values[id] += delay;
            }
        }
    }
    let mut locations = state.locations.clone();
    for (&i, edge) in participants.iter().zip(combination) {
        for &clock in &edge.resets {
            values[clock] = BigRational::zero();
        }
        values = evaluate_update(&edge.update, &values);
        locations[i] = edge.target;
    }
    ConcreteState { locations, values }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReachOutcome {
    Reached(Trace),
    Unreachable,
    /// The search stopped after expanding `step_budget` states with frontier
    /// left; reachability was not decided.
    BudgetExhausted,
}

/// Depth-first search for a state satisfying `target`.
pub fn run_reaches(
    net: &Network,
    valuation: &ParameterValuation,
    target: &dyn Fn(&ConcreteState) -> bool,
    step_budget: usize,
) -> ReachOutcome {
    assert!(step_budget > 0, "step budget must be positive");
    let alphabets: Vec<_> = net.automata.iter().map(|a| a.alphabet()).collect();
    let initial = initial_state(net, valuation);
    if !state_satisfies_invariants(net, &initial) {
        return ReachOutcome::Unreachable;
    }
    if target(&initial) {
        return ReachOutcome::Reached(Trace { initial, steps: Vec::new() });
    }

    // Nodes store parent links for trace reconstruction.
    let mut nodes: Vec<(Option<(usize, BigRational, ActionId)>, ConcreteState)> =
        vec![(None, initial.clone())];
    let mut visited: HashSet<ConcreteState> = HashSet::new();
    visited.insert(initial.clone());
    let mut stack: Vec<usize> = vec![0];
    let mut expansions = 0usize;

    while let Some(node) = stack.pop() {
        if expansions >= step_budget {
            return ReachOutcome::BudgetExhausted;
        }
        expansions += 1;
        let state = nodes[node].1.clone();
        let mut successors = successors_with_alphabets(net, &alphabets, &state);
        // Reverse so the lexicographically first successor is explored first.
        successors.reverse();
        for (action, choice, successor) in successors {
            if visited.contains(&successor) {
                continue;
            }
            visited.insert(successor.clone());
            nodes.push((Some((node, choice.delay.clone(), action)), successor.clone()));
            let idx = nodes.len() - 1;
            if target(&successor) {
                return ReachOutcome::Reached(build_trace(&nodes, idx, initial));
            }
            stack.push(idx);
        }
    }
    ReachOutcome::Unreachable
}

fn build_trace(
    nodes: &[(Option<(usize, BigRational, ActionId)>, ConcreteState)],
    mut idx: usize,
    initial: ConcreteState,
) -> Trace {
    let mut steps = Vec::new();
    while let Some((parent, delay, action)) = nodes[idx].0.clone() {
        steps.push(TraceStep { delay, action, state: nodes[idx].1.clone() });
        idx = parent;
    }
    steps.reverse();
    Trace { initial, steps }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReplayError {
    #[error("step {index} ({action}, delay {delay}): {reason}")]
    Rejected { index: usize, action: String, delay: String, reason: String },
    #[error("unknown action `{0}`")]
    UnknownAction(String),
}

/// Validates and executes a fixed `(delay, action)` sequence from the
/// initial state, firing the first enabled edge per participant.
pub fn replay(
    net: &Network,
    valuation: &ParameterValuation,
    steps: &[(BigRational, &str)],
) -> Result<Trace, ReplayError> {
    let alphabets: Vec<_> = net.automata.iter().map(|a| a.alphabet()).collect();
    let initial = initial_state(net, valuation);
    let mut current = initial.clone();
    let mut trace_steps = Vec::new();

    for (index, (delay, action_name)) in steps.iter().enumerate() {
        let action = net
            .action_id(action_name)
            .ok_or_else(|| ReplayError::UnknownAction(action_name.to_string()))?;
        let reject = |reason: String| ReplayError::Rejected {
            index,
            action: action_name.to_string(),
            delay: crate::rational_to_string(delay),
            reason,
        };
        if delay.is_negative() {
            return Err(reject("negative delay".into()));
        }
        let urgent_now = net
            .automata
            .iter()
            .zip(&current.locations)
            .any(|(a, &l)| a.locations[l].urgent);
        if urgent_now && !delay.is_zero() {
            return Err(reject("time cannot elapse in an urgent location".into()));
        }

        // Delay, then check every invariant still holds.
        let mut delayed = current.clone();
        if !delay.is_zero() {
            for (id, _, sort) in net.universe.iter() {
                if sort == VarSort::Clock {
                    delayed.values[id] += delay;
                }
            }
        }
        if !state_satisfies_invariants(net, &delayed) {
            return Err(reject("delay violates a location invariant".into()));
        }

        let participants: Vec<usize> = (0..net.automata.len())
            .filter(|&i| alphabets[i].contains(&action))
            .collect();
        if participants.is_empty() {
            return Err(reject("no automaton knows this action".into()));
        }
        let mut chosen: Vec<&Edge> = Vec::with_capacity(participants.len());
        for &i in &participants {
            let automaton = &net.automata[i];
            let edge = automaton.edges.iter().find(|e| {
                e.source == delayed.locations[i]
                    && e.action == action
                    && guard_weight_atoms_hold(&e.guard, &delayed)
                    && e.guard.clock_atoms.iter().all(|atom| {
                        let bound = match &atom.bound {
                            Bound::Constant(c) => c.clone(),
                            Bound::Parameter(p) => delayed.values[*p].clone(),
                        };
                        atom.cmp.holds(&delayed.values[atom.clock], &bound)
                    })
            });
            match edge {
                Some(e) => chosen.push(e),
                None => {
                    return Err(reject(format!(
                        "no enabled edge in automaton `{}`",
                        automaton.name
                    )));
                }
            }
        }
        let mut next = delayed.clone();
        for (&i, edge) in participants.iter().zip(&chosen) {
            for &clock in &edge.resets {
                next.values[clock] = BigRational::zero();
            }
            next.values = evaluate_update(&edge.update, &next.values);
            next.locations[i] = edge.target;
        }
        if !state_satisfies_invariants(net, &next) {
            return Err(reject("target invariant violated".into()));
        }
        trace_steps.push(TraceStep { delay: delay.clone(), action, state: next.clone() });
        current = next;
    }
    Ok(Trace { initial, steps: trace_steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testkit::coffee_machine;
    use num_bigint::BigInt;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn ratq(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn coffee_valuation(p1: i64, p2: i64) -> (Network, ParameterValuation) {
        let net = coffee_machine();
        let valuation = ParameterValuation::from_pairs(
            &net.universe,
            &[("p1", rat(p1)), ("p2", rat(p2)), ("q", ratq(1, 2))],
        )
        .unwrap();
        (net, valuation)
    }

    #[test]
    fn update_is_simultaneous() {
        // w1 := w2, w2 := w1 swaps.
        let update = WeightUpdate {
            assignments: vec![
                (0, crate::polyhedra::LinearExpr::var(1)),
                (1, crate::polyhedra::LinearExpr::var(0)),
            ],
        };
        let out = evaluate_update(&update, &[rat(1), rat(7)]);
        assert_eq!(out, vec![rat(7), rat(1)]);
    }

    #[test]
    fn update_leaves_unassigned_weights() {
        let update = WeightUpdate::identity();
        let values = vec![rat(2), rat(3)];
        assert_eq!(evaluate_update(&update, &values), values);
    }

    #[test]
    fn coffee_first_press_matches_run() {
        let (net, valuation) = coffee_valuation(5, 8);
        let trace = replay(&net, &valuation, &[(rat(2), "press")]).unwrap();
        let state = trace.final_state();
        let x = net.universe.id("x").unwrap();
        let y = net.universe.id("y").unwrap();
        let w = net.universe.id("w").unwrap();
        assert_eq!(state.locations, vec![1]); // l2
        assert_eq!(state.values[x], rat(0));
        assert_eq!(state.values[y], rat(0));
        assert_eq!(state.values[w], rat(2));
    }

    #[test]
    fn printed_delays_rejected_at_third_press() {
        // The published run uses delay 1 for the third press, which lands on
        // x = 1 against the strict guard x > 1.
        let (net, valuation) = coffee_valuation(5, 8);
        let steps = [
            (rat(2), "press"),
            (ratq(3, 2), "press"),
            (rat(1), "press"),
            (ratq(5, 2), "prepare"),
        ];
        let err = replay(&net, &valuation, &steps).unwrap_err();
        match err {
            ReplayError::Rejected { index, ref action, .. } => {
                assert_eq!(index, 2);
                assert_eq!(action, "press");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn corrected_delays_reproduce_printed_weights() {
        // Any delays with d2, d3 > 1 and total 5 after the first press work;
        // weights only depend on the number of presses.
        let (net, valuation) = coffee_valuation(5, 8);
        let steps = [
            (rat(2), "press"),
            (ratq(3, 2), "press"),
            (ratq(11, 10), "press"),
            (ratq(12, 5), "prepare"),
        ];
        let trace = replay(&net, &valuation, &steps).unwrap();
        let w = net.universe.id("w").unwrap();
        let weights: Vec<BigRational> =
            std::iter::once(trace.initial.values[w].clone())
                .chain(trace.steps.iter().map(|s| s.state.values[w].clone()))
                .collect();
        assert_eq!(weights, vec![rat(0), rat(2), ratq(5, 2), rat(3), rat(3)]);
        let locations: Vec<usize> = trace.steps.iter().map(|s| s.state.locations[0]).collect();
        assert_eq!(locations, vec![1, 1, 1, 2]); // l2, l2, l2, l3
        // Weight stays 3 at l3; the published final value 2.5 contradicts
        // the update rule.
        assert_eq!(trace.final_state().values[w], rat(3));
    }

    #[test]
    fn serve_reachable_for_p1_5_p2_8() {
        let (net, valuation) = coffee_valuation(5, 8);
        let w = net.universe.id("w").unwrap();
        let outcome = run_reaches(
            &net,
            &valuation,
            &|state| state.locations[0] == 0 && !state.values[w].is_zero(),
            10_000,
        );
        match outcome {
            ReachOutcome::Reached(trace) => {
                let serve = net.action_id("serve").unwrap();
                assert!(trace.steps.iter().any(|s| s.action == serve));
            }
            other => panic!("expected Reached, got {other:?}"),
        }
    }

    #[test]
    fn serve_unreachable_for_p1_8_p2_5() {
        let (net, valuation) = coffee_valuation(8, 5);
        let w = net.universe.id("w").unwrap();
        let outcome = run_reaches(
            &net,
            &valuation,
            &|state| state.locations[0] == 0 && !state.values[w].is_zero(),
            50_000,
        );
        assert_eq!(outcome, ReachOutcome::Unreachable);
    }

    #[test]
    fn budget_exhaustion_is_distinct() {
        let (net, valuation) = coffee_valuation(5, 8);
        let outcome = run_reaches(&net, &valuation, &|_| false, 3);
        assert_eq!(outcome, ReachOutcome::BudgetExhausted);
    }

    #[test]
    fn delay_never_changes_weights_and_actions_never_advance_clocks() {
        let (net, valuation) = coffee_valuation(5, 8);
        let initial = initial_state(&net, &valuation);
        let w = net.universe.id("w").unwrap();
        let x = net.universe.id("x").unwrap();
        let y = net.universe.id("y").unwrap();
        for (_, choice, successor) in synchronized_successors(&net, &initial) {
            // Weight after = effect of the edge update alone, independent of
            // the delay; the first press always writes w = 2.
            assert_eq!(successor.values[w], rat(2));
            // Clocks after = delay effect then reset; the press edge resets
            // both clocks, so any delay information is erased by the action.
            assert_eq!(successor.values[x], rat(0));
            assert_eq!(successor.values[y], rat(0));
            assert!(choice.delay >= rat(0));
        }
    }

    #[test]
    fn urgent_location_forces_zero_delay() {
        let mut net = coffee_machine();
        net.automata[0].locations[0].urgent = true;
        let valuation = ParameterValuation::from_pairs(
            &net.universe,
            &[("p1", rat(5)), ("p2", rat(8)), ("q", ratq(1, 2))],
        )
        .unwrap();
        let initial = initial_state(&net, &valuation);
        let successors = synchronized_successors(&net, &initial);
        assert!(!successors.is_empty());
        for (_, choice, _) in successors {
            assert!(choice.delay.is_zero());
        }
    }

    #[test]
    fn handshake_requires_all_participants() {
        use crate::polyhedra::{VariableUniverse, VarSort};
        use crate::pwta::model::{ClockAtom, Location, Pwta};
        // Two automata share action `go`; the second one's guard x >= 5
        // cannot fire at delay 0 from an urgent location, so `go` is not
        // offered at all.
        let mut universe = VariableUniverse::new();
        let x = universe.add("x", VarSort::Clock).unwrap();
        let make = |name: &str, guard: Guard, urgent: bool| Pwta {
            name: name.into(),
            locations: vec![
                Location { name: "a".into(), urgent, invariant: Guard::top(), accepting: false },
                Location::plain("b"),
            ],
            initial: 0,
            clocks: vec![x],
            edges: vec![Edge {
                source: 0,
                guard,
                action: 0,
                resets: vec![],
                update: WeightUpdate::identity(),
                target: 1,
            }],
            allow_weight_guards: false,
        };
        let blocked_guard = Guard {
            clock_atoms: vec![ClockAtom {
                clock: x,
                cmp: Comparison::Ge,
                bound: Bound::Constant(rat(5)),
            }],
            weight_atoms: vec![],
        };
        let net = Network {
            universe,
            action_names: vec!["go".into()],
            automata: vec![make("left", Guard::top(), true), make("right", blocked_guard, false)],
        };
        let valuation = ParameterValuation::from_pairs(&net.universe, &[]).unwrap();
        let initial = initial_state(&net, &valuation);
        assert!(synchronized_successors(&net, &initial).is_empty());
    }

    #[test]
    fn trace_render_shows_run_notation() {
        let (net, valuation) = coffee_valuation(5, 8);
        let trace = replay(&net, &valuation, &[(rat(2), "press")]).unwrap();
        let rendered = trace.render(&net);
        assert_eq!(
            rendered,
            "(l1; x=0, y=0; w=0) -(press, 2)-> (l2; x=0, y=0; w=2)"
        );
    }
}
