//! Compiles a validated attack-fault tree into a network of PWTAs, one
//! automaton per node plus a root observer.
//!
//! Naming is deterministic so golden files stay stable: node `N` owns the
//! actions `start_N`, `success_N`, `fail_N`, leaf clock `x_N`, and gate
//! accumulators `w_cost_N`, `w_dmg_N`. The observer is called `rootTA`; it
//! owns the never-reset clock `abs_time`, the accumulators
//! `current_cost_root` and `current_damage_root`, and compares them against
//! the observation parameters `total_time`, `total_cost`, `total_damage` on
//! its success edge (the one place weight guards are allowed).
//!
//! Shape notes:
//!
//! * Activation is atomic: the locations a gate traverses while starting
//!   children are urgent, so siblings start at one instant and sequential
//!   gates hand over without a gap.
//! * Gates conclude eagerly (AND fails on the first child fail, OR succeeds
//!   on the first child success, VOT on reaching either threshold). A
//!   terminal reached while children are still running carries self-loops
//!   consuming the leftover child completions; without them an abandoned
//!   child would hit its deadline with no synchronization partner and block
//!   time for the whole network.
//! * PAND parks out-of-order completions in a non-urgent absorbing pre-fail
//!   location first, so still-running children can finish before (or after)
//!   the gate reports failure.
//! * FDEP starts only its trigger. The dependent children must be leaves;
//!   they are modeled as two-location automata whose success both applies
//!   their weight and can only fire inside the trigger-success forcing
//!   chain, which is urgent, so dependents are disrupted instantly.
//! * Weight flow is winner-only: a child's success adds its weight to the
//!   parent's accumulators, and a gate's success forwards its accumulators
//!   (plus its own attributes) upward at that instant. Completions consumed
//!   by terminal self-loops still write to the gate's accumulators, but the
//!   value was already forwarded, so late finishers never count.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use thiserror::Error;

use crate::galileo::{
    validate, AttackFaultTree, AttributeValue, Diagnostic, GateKind, GateNode, LeafNode, Node,
};
use crate::polyhedra::{LinearExpr, VarId, VarSort, VariableUniverse};
use crate::pwta::{
    ActionId, Bound, ClockAtom, Comparison, Edge, Guard, Location, LocationId, Network, Pwta,
    WeightEquality, WeightUpdate,
};

/// Name of the generated observer automaton; rejected as a node name by
/// validation.
pub const ROOT_AUTOMATON: &str = "rootTA";

/// The start/success/fail action triple of one node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodeActions {
    pub start: ActionId,
    pub success: ActionId,
    pub fail: ActionId,
}

#[derive(Debug, Clone)]
pub struct TranslationOutput {
    pub network: Network,
    /// Timing parameter compared against `abs_time` on the observation edge.
    pub total_time: VarId,
    /// Weight parameters compared against the root accumulators.
    pub total_cost: VarId,
    pub total_damage: VarId,
    /// Node name (plus [`ROOT_AUTOMATON`]) to action triple.
    pub actions: BTreeMap<String, NodeActions>,
    /// Gate name (plus [`ROOT_AUTOMATON`]) to (cost, damage) accumulator.
    pub weight_vars: BTreeMap<String, (VarId, VarId)>,
    /// Index of the observer automaton (always the last one).
    pub root_automaton: usize,
    pub root_success: LocationId,
    pub root_fail: LocationId,
}

#[derive(Debug, Error)]
pub enum TranslationError {
    #[error("tree failed validation: {}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Diagnostic>),
}

pub fn translate(tree: &AttackFaultTree) -> Result<TranslationOutput, TranslationError> {
    let diagnostics = validate(tree);
    if !diagnostics.is_empty() {
        return Err(TranslationError::Invalid(diagnostics));
    }
    Ok(Translator::new(tree).run())
}

struct Translator<'t> {
    tree: &'t AttackFaultTree,
    universe: VariableUniverse,
    action_names: Vec<String>,
    actions: BTreeMap<String, NodeActions>,
    weight_vars: BTreeMap<String, (VarId, VarId)>,
    clocks: BTreeMap<String, VarId>,
    parents: BTreeMap<String, String>,
    /// FDEP dependents: leaves whose success is forced by their gate.
    forced: BTreeSet<String>,
    abs_time: VarId,
    total_time: VarId,
    root_cost: VarId,
    root_damage: VarId,
    total_cost: VarId,
    total_damage: VarId,
    root_success_action: ActionId,
    root_fail_action: ActionId,
}

impl<'t> Translator<'t> {
    fn new(tree: &'t AttackFaultTree) -> Self {
        let preorder = tree.preorder();
        let mut parents = BTreeMap::new();
        let mut forced = BTreeSet::new();
        for node in &preorder {
            for child in node.children() {
                parents.insert(child.clone(), node.name().to_string());
            }
            if let Node::Gate(g) = node {
                if g.kind == GateKind::Fdep {
                    for dep in &g.children[1..] {
                        forced.insert(dep.clone());
                    }
                }
            }
        }

        // Variable layout: clocks, timing parameters, weight variables,
        // weight parameters, with the observer's variables closing each
        // group. Validation guarantees the generated names are free.
        let mut universe = VariableUniverse::new();
        let fresh = "validated tree has collision-free names";
        let mut clocks = BTreeMap::new();
        for node in &preorder {
            if let Node::Leaf(leaf) = node {
                if !forced.contains(&leaf.name) {
                    let x = universe.add(&format!("x_{}", leaf.name), VarSort::Clock).expect(fresh);
                    clocks.insert(leaf.name.clone(), x);
                }
            }
        }
        let abs_time = universe.add("abs_time", VarSort::Clock).expect(fresh);
        for param in &tree.timing_parameters {
            universe.add(param, VarSort::TimingParameter).expect(fresh);
        }
        let total_time = universe.add("total_time", VarSort::TimingParameter).expect(fresh);
        let mut weight_vars = BTreeMap::new();
        for node in &preorder {
            if let Node::Gate(g) = node {
                let c = universe.add(&format!("w_cost_{}", g.name), VarSort::WeightVariable).expect(fresh);
                let d = universe.add(&format!("w_dmg_{}", g.name), VarSort::WeightVariable).expect(fresh);
                weight_vars.insert(g.name.clone(), (c, d));
            }
        }
        let root_cost = universe.add("current_cost_root", VarSort::WeightVariable).expect(fresh);
        let root_damage = universe.add("current_damage_root", VarSort::WeightVariable).expect(fresh);
        weight_vars.insert(ROOT_AUTOMATON.to_string(), (root_cost, root_damage));
        for param in &tree.weight_parameters {
            universe.add(param, VarSort::WeightParameter).expect(fresh);
        }
        let total_cost = universe.add("total_cost", VarSort::WeightParameter).expect(fresh);
        let total_damage = universe.add("total_damage", VarSort::WeightParameter).expect(fresh);

        let mut action_names = Vec::new();
        let mut actions = BTreeMap::new();
        for node in &preorder {
            let base = action_names.len();
            action_names.push(format!("start_{}", node.name()));
            action_names.push(format!("success_{}", node.name()));
            action_names.push(format!("fail_{}", node.name()));
            actions.insert(
                node.name().to_string(),
                NodeActions { start: base, success: base + 1, fail: base + 2 },
            );
        }
        let root_success_action = action_names.len();
        action_names.push(format!("success_{ROOT_AUTOMATON}"));
        let root_fail_action = action_names.len();
        action_names.push(format!("fail_{ROOT_AUTOMATON}"));
        actions.insert(
            ROOT_AUTOMATON.to_string(),
            NodeActions {
                start: actions[&tree.root].start,
                success: root_success_action,
                fail: root_fail_action,
            },
        );

        Translator {
            tree,
            universe,
            action_names,
            actions,
            weight_vars,
            clocks,
            parents,
            forced,
            abs_time,
            total_time,
            root_cost,
            root_damage,
            total_cost,
            total_damage,
            root_success_action,
            root_fail_action,
        }
    }

    fn run(self) -> TranslationOutput {
        let mut automata = Vec::new();
        for node in self.tree.preorder() {
            automata.push(match node {
                Node::Leaf(leaf) => self.translate_leaf(leaf),
                Node::Gate(gate) => self.translate_gate(gate),
            });
        }
        automata.push(self.build_root());
        let root_automaton = automata.len() - 1;

        let network = Network {
            universe: self.universe,
            action_names: self.action_names,
            automata,
        };
        network.well_formed().expect("translation output is well formed by construction");
        TranslationOutput {
            network,
            total_time: self.total_time,
            total_cost: self.total_cost,
            total_damage: self.total_damage,
            actions: self.actions,
            weight_vars: self.weight_vars,
            root_automaton,
            root_success: 4,
            root_fail: 5,
        }
    }

    fn parent_vars(&self, name: &str) -> (VarId, VarId) {
        match self.parents.get(name) {
            Some(parent) => self.weight_vars[parent],
            None => (self.root_cost, self.root_damage),
        }
    }

    fn timing_bound(&self, attr: &AttributeValue) -> Bound {
        match attr {
            AttributeValue::Constant(c) => Bound::Constant(c.clone()),
            AttributeValue::Parameter(p) => {
                Bound::Parameter(self.universe.id(p).expect("timing parameter is declared"))
            }
        }
    }

    /// `parent += own accumulators (for gates) + attribute values`, skipping
    /// components that add a literal zero.
    fn accumulate(
        &self,
        parent: (VarId, VarId),
        cost: &AttributeValue,
        damage: &AttributeValue,
        own: Option<(VarId, VarId)>,
    ) -> WeightUpdate {
        let mut assignments = Vec::new();
        for (target, own_var, attr) in [
            (parent.0, own.map(|o| o.0), cost),
            (parent.1, own.map(|o| o.1), damage),
        ] {
            let mut expr = LinearExpr::var(target);
            let mut meaningful = false;
            if let Some(o) = own_var {
                expr = expr + LinearExpr::var(o);
                meaningful = true;
            }
            match attr {
                AttributeValue::Constant(c) if c.is_zero() => {}
                AttributeValue::Constant(c) => {
                    expr = expr + LinearExpr::constant(c.clone());
                    meaningful = true;
                }
                AttributeValue::Parameter(p) => {
                    expr = expr
                        + LinearExpr::var(self.universe.id(p).expect("weight parameter is declared"));
                    meaningful = true;
                }
            }
            if meaningful {
                assignments.push((target, expr));
            }
        }
        WeightUpdate { assignments }
    }

    fn translate_leaf(&self, leaf: &LeafNode) -> Pwta {
        let acts = self.actions[&leaf.name];
        let update = self.accumulate(self.parent_vars(&leaf.name), &leaf.cost, &leaf.damage, None);
        if self.forced.contains(&leaf.name) {
            // FDEP dependent: disrupted instantly when the gate's forcing
            // chain offers its success action; never started, never timed.
            return Pwta {
                name: leaf.name.clone(),
                locations: vec![Location::plain("idle"), Location::plain("success")],
                initial: 0,
                clocks: vec![],
                edges: vec![Edge {
                    source: 0,
                    guard: Guard::top(),
                    action: acts.success,
                    resets: vec![],
                    update,
                    target: 1,
                }],
                allow_weight_guards: false,
            };
        }

        let x = self.clocks[&leaf.name];
        let clock_guard = |cmp, attr| Guard {
            clock_atoms: vec![ClockAtom { clock: x, cmp, bound: self.timing_bound(attr) }],
            weight_atoms: vec![],
        };
        let window = clock_guard(Comparison::Ge, &leaf.min_time);
        Pwta {
            name: leaf.name.clone(),
            locations: vec![
                Location::plain("idle"),
                Location {
                    name: "running".into(),
                    urgent: false,
                    invariant: clock_guard(Comparison::Le, &leaf.max_time),
                    accepting: false,
                },
                Location::plain("success"),
                Location::plain("fail"),
            ],
            initial: 0,
            clocks: vec![x],
            edges: vec![
                Edge {
                    source: 0,
                    guard: Guard::top(),
                    action: acts.start,
                    resets: vec![x],
                    update: WeightUpdate::identity(),
                    target: 1,
                },
                Edge {
                    source: 1,
                    guard: window.clone(),
                    action: acts.success,
                    resets: vec![],
                    update,
                    target: 2,
                },
                Edge {
                    source: 1,
                    guard: window,
                    action: acts.fail,
                    resets: vec![],
                    update: WeightUpdate::identity(),
                    target: 3,
                },
            ],
            allow_weight_guards: false,
        }
    }

    fn translate_gate(&self, gate: &GateNode) -> Pwta {
        let own = self.actions[&gate.name];
        let kids: Vec<NodeActions> = gate.children.iter().map(|c| self.actions[c]).collect();
        let success_update = self.accumulate(
            self.parent_vars(&gate.name),
            &gate.cost,
            &gate.damage,
            Some(self.weight_vars[&gate.name]),
        );
        let mut b = Builder::default();
        let init = b.plain("init");
        match gate.kind {
            GateKind::And => build_and(&mut b, init, own, &kids, success_update),
            GateKind::Or => build_or(&mut b, init, own, &kids, success_update),
            GateKind::Sand | GateKind::Spare => {
                build_sand(&mut b, init, own, &kids, success_update)
            }
            GateKind::Sor => build_sor(&mut b, init, own, &kids, success_update),
            GateKind::Pand => build_pand(&mut b, init, own, &kids, success_update),
            GateKind::Xor => build_xor(&mut b, init, own, &kids, success_update),
            GateKind::Vot(k) => build_vot(&mut b, init, own, &kids, k as usize, success_update),
            GateKind::Fdep => build_fdep(&mut b, init, own, &kids, success_update),
        }
        b.finish(gate.name.clone())
    }

    fn build_root(&self) -> Pwta {
        let top = self.actions[&self.tree.root];
        let mut b = Builder::default();
        let init = b.plain("init");
        let awaiting = b.plain("awaiting");
        let observing = b.urgent("observing");
        let failing = b.urgent("failing");
        let success = b.plain("success");
        let fail = b.plain("fail");
        b.locations[success].accepting = true;
        // Time may idle before the attack begins; abs_time is reset here and
        // never again, so it measures time since the toplevel start.
        b.edges.push(Edge {
            source: init,
            guard: Guard::top(),
            action: top.start,
            resets: vec![self.abs_time],
            update: WeightUpdate::identity(),
            target: awaiting,
        });
        b.edge(awaiting, top.success, observing);
        b.edges.push(Edge {
            source: observing,
            guard: Guard {
                clock_atoms: vec![ClockAtom {
                    clock: self.abs_time,
                    cmp: Comparison::Eq,
                    bound: Bound::Parameter(self.total_time),
                }],
                weight_atoms: vec![
                    WeightEquality { variable: self.root_cost, parameter: self.total_cost },
                    WeightEquality { variable: self.root_damage, parameter: self.total_damage },
                ],
            },
            action: self.root_success_action,
            resets: vec![],
            update: WeightUpdate::identity(),
            target: success,
        });
        b.edge(awaiting, top.fail, failing);
        b.edge(failing, self.root_fail_action, fail);
        let mut automaton = b.finish(ROOT_AUTOMATON.to_string());
        automaton.clocks = vec![self.abs_time];
        automaton.allow_weight_guards = true;
        automaton
    }
}

#[derive(Default)]
struct Builder {
    locations: Vec<Location>,
    edges: Vec<Edge>,
}

impl Builder {
    fn plain(&mut self, name: impl Into<String>) -> LocationId {
        self.locations.push(Location::plain(name));
        self.locations.len() - 1
    }

    fn urgent(&mut self, name: impl Into<String>) -> LocationId {
        self.locations.push(Location::urgent(name));
        self.locations.len() - 1
    }

    fn edge(&mut self, source: LocationId, action: ActionId, target: LocationId) {
        self.edges.push(Edge {
            source,
            guard: Guard::top(),
            action,
            resets: vec![],
            update: WeightUpdate::identity(),
            target,
        });
    }

    fn updating_edge(
        &mut self,
        source: LocationId,
        action: ActionId,
        update: WeightUpdate,
        target: LocationId,
    ) {
        self.edges.push(Edge { source, guard: Guard::top(), action, resets: vec![], update, target });
    }

    /// Self-loops consuming every child completion, for terminals reached
    /// while children may still be running.
    fn absorb_completions(&mut self, at: LocationId, kids: &[NodeActions]) {
        for kid in kids {
            self.edge(at, kid.success, at);
            self.edge(at, kid.fail, at);
        }
    }

    fn finish(self, name: String) -> Pwta {
        Pwta {
            name,
            locations: self.locations,
            initial: 0,
            clocks: vec![],
            edges: self.edges,
            allow_weight_guards: false,
        }
    }
}

/// `init -start_own-> (urgent burst starting every child) -> ready`; the
/// burst locations are urgent so all children start at the same instant.
fn start_all(
    b: &mut Builder,
    init: LocationId,
    own: NodeActions,
    kids: &[NodeActions],
    ready_name: &str,
) -> LocationId {
    let mut cur = b.urgent("starting_0");
    b.edge(init, own.start, cur);
    for (i, kid) in kids.iter().enumerate() {
        let next = if i + 1 == kids.len() {
            b.plain(ready_name)
        } else {
            b.urgent(format!("starting_{}", i + 1))
        };
        b.edge(cur, kid.start, next);
        cur = next;
    }
    cur
}

fn subset_name(prefix: &str, tag: char, mask: usize, n: usize) -> String {
    let mut name = prefix.to_string();
    for i in 0..n {
        if mask & (1 << i) != 0 {
            name.push('_');
            name.push(tag);
            name.push_str(&i.to_string());
        }
    }
    name
}

/// Tracks the set of succeeded children; any fail is fatal immediately.
fn build_and(
    b: &mut Builder,
    init: LocationId,
    own: NodeActions,
    kids: &[NodeActions],
    success_update: WeightUpdate,
) {
    let n = kids.len();
    let full = (1usize << n) - 1;
    let mut subset = vec![usize::MAX; 1 << n];
    subset[0] = start_all(b, init, own, kids, "awaiting");
    for (mask, slot) in subset.iter_mut().enumerate().take(full).skip(1) {
        *slot = b.plain(subset_name("awaiting", 's', mask, n));
    }
    let staging = b.urgent("all_succeeded");
    let failing = b.urgent("failing");
    let success = b.plain("success");
    let fail = b.plain("fail");
    for mask in 0..full {
        for (i, kid) in kids.iter().enumerate() {
            if mask & (1 << i) != 0 {
                continue;
            }
            let next = mask | (1 << i);
            b.edge(subset[mask], kid.success, if next == full { staging } else { subset[next] });
            b.edge(subset[mask], kid.fail, failing);
        }
    }
    b.updating_edge(staging, own.success, success_update, success);
    b.edge(failing, own.fail, fail);
    b.absorb_completions(fail, kids);
}

/// Tracks the set of failed children; any success wins immediately.
fn build_or(
    b: &mut Builder,
    init: LocationId,
    own: NodeActions,
    kids: &[NodeActions],
    success_update: WeightUpdate,
) {
    let n = kids.len();
    let full = (1usize << n) - 1;
    let mut subset = vec![usize::MAX; 1 << n];
    subset[0] = start_all(b, init, own, kids, "awaiting");
    for (mask, slot) in subset.iter_mut().enumerate().take(full).skip(1) {
        *slot = b.plain(subset_name("awaiting", 'f', mask, n));
    }
    let staging = b.urgent("one_succeeded");
    let failing = b.urgent("all_failed");
    let success = b.plain("success");
    let fail = b.plain("fail");
    for mask in 0..full {
        for (i, kid) in kids.iter().enumerate() {
            if mask & (1 << i) != 0 {
                continue;
            }
            let next = mask | (1 << i);
            b.edge(subset[mask], kid.success, staging);
            b.edge(subset[mask], kid.fail, if next == full { failing } else { subset[next] });
        }
    }
    b.updating_edge(staging, own.success, success_update, success);
    b.edge(failing, own.fail, fail);
    b.absorb_completions(success, kids);
}

/// Strictly sequential: child i+1 starts at the instant child i succeeds.
fn build_sand(
    b: &mut Builder,
    init: LocationId,
    own: NodeActions,
    kids: &[NodeActions],
    success_update: WeightUpdate,
) {
    let n = kids.len();
    let mut starting = Vec::with_capacity(n);
    let mut awaiting = Vec::with_capacity(n);
    for i in 0..n {
        starting.push(b.urgent(format!("starting_{i}")));
        awaiting.push(b.plain(format!("awaiting_{i}")));
    }
    let staging = b.urgent("all_succeeded");
    let failing = b.urgent("failing");
    let success = b.plain("success");
    let fail = b.plain("fail");
    b.edge(init, own.start, starting[0]);
    for i in 0..n {
        b.edge(starting[i], kids[i].start, awaiting[i]);
        b.edge(awaiting[i], kids[i].success, if i + 1 == n { staging } else { starting[i + 1] });
        b.edge(awaiting[i], kids[i].fail, failing);
    }
    b.updating_edge(staging, own.success, success_update, success);
    b.edge(failing, own.fail, fail);
}

/// Sequential like SAND, but a child fail activates the next child and the
/// first child success disrupts the gate.
fn build_sor(
    b: &mut Builder,
    init: LocationId,
    own: NodeActions,
    kids: &[NodeActions],
    success_update: WeightUpdate,
) {
    let n = kids.len();
    let mut starting = Vec::with_capacity(n);
    let mut awaiting = Vec::with_capacity(n);
    for i in 0..n {
        starting.push(b.urgent(format!("starting_{i}")));
        awaiting.push(b.plain(format!("awaiting_{i}")));
    }
    let staging = b.urgent("one_succeeded");
    let failing = b.urgent("all_failed");
    let success = b.plain("success");
    let fail = b.plain("fail");
    b.edge(init, own.start, starting[0]);
    for i in 0..n {
        b.edge(starting[i], kids[i].start, awaiting[i]);
        b.edge(awaiting[i], kids[i].success, staging);
        b.edge(awaiting[i], kids[i].fail, if i + 1 == n { failing } else { starting[i + 1] });
    }
    b.updating_edge(staging, own.success, success_update, success);
    b.edge(failing, own.fail, fail);
}

/// All children start together; successes must arrive in child order.
/// Anything else parks in the absorbing pre-fail first.
fn build_pand(
    b: &mut Builder,
    init: LocationId,
    own: NodeActions,
    kids: &[NodeActions],
    success_update: WeightUpdate,
) {
    let n = kids.len();
    let mut awaiting = Vec::with_capacity(n);
    awaiting.push(start_all(b, init, own, kids, "awaiting_0"));
    for i in 1..n {
        awaiting.push(b.plain(format!("awaiting_{i}")));
    }
    let staging = b.urgent("all_succeeded");
    let pre_fail = b.plain("pre_fail");
    let success = b.plain("success");
    let fail = b.plain("fail");
    for i in 0..n {
        b.edge(awaiting[i], kids[i].success, if i + 1 == n { staging } else { awaiting[i + 1] });
        b.edge(awaiting[i], kids[i].fail, pre_fail);
        for kid in &kids[i + 1..] {
            b.edge(awaiting[i], kid.success, pre_fail);
            b.edge(awaiting[i], kid.fail, pre_fail);
        }
    }
    b.updating_edge(staging, own.success, success_update, success);
    b.absorb_completions(pre_fail, kids);
    b.edge(pre_fail, own.fail, fail);
    b.absorb_completions(fail, kids);
}

/// Both children start together and both completions are awaited; exactly
/// one success disrupts the gate. Arity 2 is enforced by validation.
fn build_xor(
    b: &mut Builder,
    init: LocationId,
    own: NodeActions,
    kids: &[NodeActions],
    success_update: WeightUpdate,
) {
    assert_eq!(kids.len(), 2, "xor gates have exactly two children");
    let ready = start_all(b, init, own, kids, "awaiting");
    let after: Vec<(LocationId, usize, bool)> = vec![
        (b.plain("after_s0"), 1, true),
        (b.plain("after_f0"), 1, false),
        (b.plain("after_s1"), 0, true),
        (b.plain("after_f1"), 0, false),
    ];
    let staging = b.urgent("exactly_one_succeeded");
    let failing = b.urgent("same_outcomes");
    let success = b.plain("success");
    let fail = b.plain("fail");
    b.edge(ready, kids[0].success, after[0].0);
    b.edge(ready, kids[0].fail, after[1].0);
    b.edge(ready, kids[1].success, after[2].0);
    b.edge(ready, kids[1].fail, after[3].0);
    for (loc, other, first_succeeded) in after {
        // A second completion of the opposite polarity disrupts the gate.
        let (to_success, to_fail) = if first_succeeded {
            (kids[other].fail, kids[other].success)
        } else {
            (kids[other].success, kids[other].fail)
        };
        b.edge(loc, to_success, staging);
        b.edge(loc, to_fail, failing);
    }
    b.updating_edge(staging, own.success, success_update, success);
    b.edge(failing, own.fail, fail);
}

/// All children start together; the gate counts successes and fails and
/// concludes at `k` successes or `n - k + 1` fails.
fn build_vot(
    b: &mut Builder,
    init: LocationId,
    own: NodeActions,
    kids: &[NodeActions],
    k: usize,
    success_update: WeightUpdate,
) {
    let n = kids.len();
    let fail_at = n - k + 1;
    let mut grid = vec![vec![usize::MAX; fail_at]; k];
    grid[0][0] = start_all(b, init, own, kids, "awaiting_s0_f0");
    for s in 0..k {
        for f in 0..fail_at {
            if s == 0 && f == 0 {
                continue;
            }
            grid[s][f] = b.plain(format!("awaiting_s{s}_f{f}"));
        }
    }
    let staging = b.urgent("threshold_reached");
    let failing = b.urgent("too_many_failed");
    let success = b.plain("success");
    let fail = b.plain("fail");
    for s in 0..k {
        for f in 0..fail_at {
            for kid in kids {
                b.edge(grid[s][f], kid.success, if s + 1 == k { staging } else { grid[s + 1][f] });
                b.edge(grid[s][f], kid.fail, if f + 1 == fail_at { failing } else { grid[s][f + 1] });
            }
        }
    }
    b.updating_edge(staging, own.success, success_update, success);
    b.edge(failing, own.fail, fail);
    b.absorb_completions(success, kids);
    b.absorb_completions(fail, kids);
}

/// Starts only the trigger (first child). Trigger success forces every
/// dependent's success through an urgent chain; trigger fail fails the gate.
fn build_fdep(
    b: &mut Builder,
    init: LocationId,
    own: NodeActions,
    kids: &[NodeActions],
    success_update: WeightUpdate,
) {
    let trigger = kids[0];
    let deps = &kids[1..];
    let act = b.urgent("starting_trigger");
    let awaiting = b.plain("awaiting_trigger");
    let mut forcing = Vec::with_capacity(deps.len());
    for i in 0..deps.len() {
        forcing.push(b.urgent(format!("forcing_{i}")));
    }
    let staging = b.urgent("forced_all");
    let failing = b.urgent("failing");
    let success = b.plain("success");
    let fail = b.plain("fail");
    b.edge(init, own.start, act);
    b.edge(act, trigger.start, awaiting);
    b.edge(awaiting, trigger.success, *forcing.first().unwrap_or(&staging));
    for (i, dep) in deps.iter().enumerate() {
        b.edge(forcing[i], dep.success, if i + 1 == deps.len() { staging } else { forcing[i + 1] });
    }
    b.updating_edge(staging, own.success, success_update, success);
    b.edge(awaiting, trigger.fail, failing);
    b.edge(failing, own.fail, fail);
}
