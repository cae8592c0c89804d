//! Bottom-up scenario calculus on concrete trees, used to cross-validate the
//! symbolic engine.
//!
//! A [`Scenario`] is one way to disrupt the tree: a closed window of possible
//! completion times together with the exact cost and damage charged for it.
//! [`scenarios`] enumerates all of them compositionally for the gate kinds
//! whose timing decomposes per subtree (AND, OR, SAND, SOR, VOT); the
//! remaining gates owe their behaviour to event interleaving and are checked
//! against hand-enumerated expectations elsewhere instead.
//!
//! Weight accounting mirrors the network semantics: only subtrees that
//! succeed contribute, a disrupted gate adds its own attributes on top of its
//! children's, and anything inside a failed subtree is charged as zero even
//! if parts of it succeeded before the failure.
//!
//! Failure timing matters for the sequential-or gate: child `j` only starts
//! after children `1..j` have failed, so the calculus also tracks, per node,
//! the closed windows in which the node can fail. For leaves that is the
//! activity window itself; for gates it follows from which child failure
//! settles the gate's outcome (any one child for AND, the last of all for OR,
//! the last of `n - k + 1` for VOT, and prefix sums for the sequential
//! gates).
//!
//! [`crosscheck`] compares the scenario set against a synthesized
//! [`ConstraintResult`] by sampling in both directions: every scenario
//! endpoint and midpoint must satisfy some disjunct, and endpoint/midpoint
//! samples drawn from every disjunct must be explained by some scenario.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::galileo::{AttackFaultTree, AttributeValue, GateKind, Node};
use crate::polyhedra::{LinearExpr, Polyhedron, Relation, VarId};
use crate::rational_to_string;
use crate::synthesis::ConstraintResult;
use crate::translation::TranslationOutput;

/// One way to disrupt the tree: completion time ranges over the closed
/// window, and exactly `cost`/`damage` is charged. `fired` lists the leaves
/// whose success contributed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Scenario {
    pub earliest: BigRational,
    pub latest: BigRational,
    pub cost: BigRational,
    pub damage: BigRational,
    pub fired: BTreeSet<String>,
}

impl Scenario {
    pub fn covers_time(&self, t: &BigRational) -> bool {
        &self.earliest <= t && t <= &self.latest
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("gate `{node}` uses `{kind}`, which the scenario calculus does not model")]
    UnsupportedGate { node: String, kind: String },
    #[error("attribute on `{node}` references parameter `{parameter}`; scenarios need constants")]
    ParametricAttribute { node: String, parameter: String },
}

/// All disruption scenarios of a concrete tree, sorted and deduplicated.
pub fn scenarios(tree: &AttackFaultTree) -> Result<Vec<Scenario>, OracleError> {
    let mut out = success_scenarios(tree, tree.root_node())?;
    out.sort();
    out.dedup();
    Ok(out)
}

/// A closed interval of possible failure times for one node.
type Window = (BigRational, BigRational);

fn constant(node: &str, attr: &AttributeValue) -> Result<BigRational, OracleError> {
    match attr {
        AttributeValue::Constant(c) => Ok(c.clone()),
        AttributeValue::Parameter(p) => Err(OracleError::ParametricAttribute {
            node: node.to_string(),
            parameter: p.clone(),
        }),
    }
}

fn success_scenarios(tree: &AttackFaultTree, node: &Node) -> Result<Vec<Scenario>, OracleError> {
    let mut out = match node {
        Node::Leaf(leaf) => {
            vec![Scenario {
                earliest: constant(&leaf.name, &leaf.min_time)?,
                latest: constant(&leaf.name, &leaf.max_time)?,
                cost: constant(&leaf.name, &leaf.cost)?,
                damage: constant(&leaf.name, &leaf.damage)?,
                fired: BTreeSet::from([leaf.name.clone()]),
            }]
        }
        Node::Gate(gate) => {
            let own_cost = constant(&gate.name, &gate.cost)?;
            let own_damage = constant(&gate.name, &gate.damage)?;
            let children: Vec<&Node> = gate
                .children
                .iter()
                .map(|c| tree.node(c).expect("validated tree resolves children"))
                .collect();
            let mut combined = match gate.kind {
                GateKind::And => {
                    let per_child = children
                        .iter()
                        .map(|c| success_scenarios(tree, c))
                        .collect::<Result<Vec<_>, _>>()?;
                    parallel_products(&per_child)
                }
                GateKind::Sand => {
                    let per_child = children
                        .iter()
                        .map(|c| success_scenarios(tree, c))
                        .collect::<Result<Vec<_>, _>>()?;
                    sequential_products(&per_child)
                }
                GateKind::Or => {
                    let mut all = Vec::new();
                    for child in &children {
                        all.extend(success_scenarios(tree, child)?);
                    }
                    all
                }
                GateKind::Sor => {
                    // Child j runs only after children 1..j failed; the
                    // failures shift the start of j but cost nothing.
                    let mut all = Vec::new();
                    let mut prefixes: Vec<Window> =
                        vec![(BigRational::zero(), BigRational::zero())];
                    for (j, child) in children.iter().enumerate() {
                        let successes = success_scenarios(tree, child)?;
                        for (shift_lo, shift_hi) in &prefixes {
                            for s in &successes {
                                let mut shifted = s.clone();
                                shifted.earliest += shift_lo;
                                shifted.latest += shift_hi;
                                all.push(shifted);
                            }
                        }
                        if j + 1 < children.len() {
                            let fails = fail_windows(tree, child)?;
                            prefixes = prefixes
                                .iter()
                                .flat_map(|(plo, phi)| {
                                    fails.iter().map(move |(flo, fhi)| (plo + flo, phi + fhi))
                                })
                                .collect();
                            prefixes.sort();
                            prefixes.dedup();
                        }
                    }
                    all
                }
                GateKind::Vot(k) => {
                    let per_child = children
                        .iter()
                        .map(|c| success_scenarios(tree, c))
                        .collect::<Result<Vec<_>, _>>()?;
                    let mut all = Vec::new();
                    for subset in subsets(children.len(), k as usize) {
                        let chosen: Vec<Vec<Scenario>> =
                            subset.iter().map(|&i| per_child[i].clone()).collect();
                        all.extend(parallel_products(&chosen));
                    }
                    all
                }
                other => {
                    return Err(OracleError::UnsupportedGate {
                        node: gate.name.clone(),
                        kind: other.to_string(),
                    })
                }
            };
            for s in &mut combined {
                s.cost += &own_cost;
                s.damage += &own_damage;
            }
            combined
        }
    };
    out.sort();
    out.dedup();
    Ok(out)
}

/// Scenario combinations when all chosen subtrees run from the same instant:
/// the gate is disrupted when the last one succeeds.
fn parallel_products(per_child: &[Vec<Scenario>]) -> Vec<Scenario> {
    combine(per_child, |acc, s| {
        acc.earliest = acc.earliest.clone().max(s.earliest.clone());
        acc.latest = acc.latest.clone().max(s.latest.clone());
    })
}

/// Scenario combinations when subtrees run one after another: windows add.
fn sequential_products(per_child: &[Vec<Scenario>]) -> Vec<Scenario> {
    combine(per_child, |acc, s| {
        acc.earliest += &s.earliest;
        acc.latest += &s.latest;
    })
}

fn combine(per_child: &[Vec<Scenario>], fold_window: impl Fn(&mut Scenario, &Scenario)) -> Vec<Scenario> {
    let mut acc = vec![Scenario {
        earliest: BigRational::zero(),
        latest: BigRational::zero(),
        cost: BigRational::zero(),
        damage: BigRational::zero(),
        fired: BTreeSet::new(),
    }];
    for child in per_child {
        let mut next = Vec::with_capacity(acc.len() * child.len());
        for base in &acc {
            for s in child {
                let mut merged = base.clone();
                fold_window(&mut merged, s);
                merged.cost += &s.cost;
                merged.damage += &s.damage;
                merged.fired.extend(s.fired.iter().cloned());
                next.push(merged);
            }
        }
        acc = next;
    }
    acc
}

/// All `k`-element index subsets of `0..n` in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            rec(i + 1, n, k, current, out);
            current.pop();
        }
    }
    rec(0, n, k, &mut current, &mut out);
    out
}

/// Closed windows in which `node` can fail, assuming it starts at time zero.
fn fail_windows(tree: &AttackFaultTree, node: &Node) -> Result<Vec<Window>, OracleError> {
    let mut out = match node {
        Node::Leaf(leaf) => vec![(
            constant(&leaf.name, &leaf.min_time)?,
            constant(&leaf.name, &leaf.max_time)?,
        )],
        Node::Gate(gate) => {
            let children: Vec<&Node> = gate
                .children
                .iter()
                .map(|c| tree.node(c).expect("validated tree resolves children"))
                .collect();
            match gate.kind {
                // The first child failure settles the gate; the others can
                // always dodge by succeeding instead.
                GateKind::And => {
                    let mut all = Vec::new();
                    for child in &children {
                        all.extend(fail_windows(tree, child)?);
                    }
                    all
                }
                // Every child must fail; the last failure settles the gate.
                GateKind::Or => {
                    let per_child = children
                        .iter()
                        .map(|c| fail_windows(tree, c))
                        .collect::<Result<Vec<_>, _>>()?;
                    max_combinations(&per_child)
                }
                // Children 1..j succeed in sequence, then child j fails.
                GateKind::Sand => {
                    let mut all = Vec::new();
                    for (j, child) in children.iter().enumerate() {
                        let mut prefixes: Vec<Window> =
                            vec![(BigRational::zero(), BigRational::zero())];
                        for prev in &children[..j] {
                            let successes = success_scenarios(tree, prev)?;
                            prefixes = prefixes
                                .iter()
                                .flat_map(|(plo, phi)| {
                                    successes
                                        .iter()
                                        .map(move |s| (plo + &s.earliest, phi + &s.latest))
                                })
                                .collect();
                            prefixes.sort();
                            prefixes.dedup();
                        }
                        for f in fail_windows(tree, child)? {
                            for (plo, phi) in &prefixes {
                                all.push((plo + &f.0, phi + &f.1));
                            }
                        }
                    }
                    all
                }
                // All children fail back to back.
                GateKind::Sor => {
                    let per_child = children
                        .iter()
                        .map(|c| fail_windows(tree, c))
                        .collect::<Result<Vec<_>, _>>()?;
                    let mut acc: Vec<Window> = vec![(BigRational::zero(), BigRational::zero())];
                    for windows in &per_child {
                        acc = acc
                            .iter()
                            .flat_map(|(alo, ahi)| {
                                windows.iter().map(move |(lo, hi)| (alo + lo, ahi + hi))
                            })
                            .collect();
                        acc.sort();
                        acc.dedup();
                    }
                    acc
                }
                // With n - k + 1 failures the threshold is out of reach; the
                // last of those failures settles the gate.
                GateKind::Vot(k) => {
                    let need = children.len() - k as usize + 1;
                    let per_child = children
                        .iter()
                        .map(|c| fail_windows(tree, c))
                        .collect::<Result<Vec<_>, _>>()?;
                    let mut all = Vec::new();
                    for subset in subsets(children.len(), need) {
                        let chosen: Vec<Vec<Window>> =
                            subset.iter().map(|&i| per_child[i].clone()).collect();
                        all.extend(max_combinations(&chosen));
                    }
                    all
                }
                other => {
                    return Err(OracleError::UnsupportedGate {
                        node: gate.name.clone(),
                        kind: other.to_string(),
                    })
                }
            }
        }
    };
    out.sort();
    out.dedup();
    Ok(out)
}

/// Windows of `max(t_1, .., t_n)` over independent choices `t_i` from each
/// child list.
fn max_combinations(per_child: &[Vec<Window>]) -> Vec<Window> {
    let mut acc: Vec<Window> = vec![(BigRational::zero(), BigRational::zero())];
    for windows in per_child {
        acc = acc
            .iter()
            .flat_map(|(alo, ahi)| {
                windows.iter().map(move |(lo, hi)| {
                    (alo.clone().max(lo.clone()), ahi.clone().max(hi.clone()))
                })
            })
            .collect();
        acc.sort();
        acc.dedup();
    }
    acc
}

/// One disagreement between the scenario calculus and a synthesized result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Mismatch {
    /// A scenario sample satisfies no disjunct.
    ScenarioNotCovered { time: BigRational, cost: BigRational, damage: BigRational },
    /// A sample drawn from a disjunct matches no scenario.
    SampleUnexplained {
        disjunct: usize,
        time: BigRational,
        cost: BigRational,
        damage: BigRational,
    },
    /// A disjunct leaves an observation parameter unbounded, so no finite
    /// sample set can witness it.
    UnboundedObservation { disjunct: usize, parameter: String },
}

impl std::fmt::Display for Mismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mismatch::ScenarioNotCovered { time, cost, damage } => write!(
                f,
                "scenario sample (time {}, cost {}, damage {}) satisfies no disjunct",
                rational_to_string(time),
                rational_to_string(cost),
                rational_to_string(damage)
            ),
            Mismatch::SampleUnexplained { disjunct, time, cost, damage } => write!(
                f,
                "disjunct {} admits (time {}, cost {}, damage {}) but no scenario explains it",
                disjunct,
                rational_to_string(time),
                rational_to_string(cost),
                rational_to_string(damage)
            ),
            Mismatch::UnboundedObservation { disjunct, parameter } => {
                write!(f, "disjunct {disjunct} leaves {parameter} unbounded")
            }
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct CrosscheckReport {
    pub mismatches: Vec<Mismatch>,
    pub scenarios_checked: usize,
    pub samples_checked: usize,
}

impl CrosscheckReport {
    pub fn clean(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn render_text(&self) -> String {
        let mut out = format!(
            "{} scenarios, {} samples, {} mismatches\n",
            self.scenarios_checked,
            self.samples_checked,
            self.mismatches.len()
        );
        for m in &self.mismatches {
            out.push_str(&format!("  {m}\n"));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "scenarios_checked": self.scenarios_checked,
            "samples_checked": self.samples_checked,
            "mismatches": self.mismatches.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
        })
    }
}

/// Samples the scenario set and the synthesized disjuncts against each other.
///
/// Direction one: for each scenario, the endpoints and midpoint of its window
/// paired with its exact cost and damage must satisfy some disjunct.
/// Direction two: endpoint and midpoint samples of each disjunct's time, cost
/// and damage ranges must land inside some scenario. All membership tests are
/// exact rational arithmetic; sampling endpoints plus midpoints is complete
/// for membership in affine constraint sets up to strict-inequality
/// boundaries, which the midpoint covers.
pub fn crosscheck(
    tree: &AttackFaultTree,
    translation: &TranslationOutput,
    result: &ConstraintResult,
) -> Result<CrosscheckReport, OracleError> {
    let all = scenarios(tree)?;
    let universe = &translation.network.universe;
    let time = translation.total_time;
    let cost = translation.total_cost;
    let damage = translation.total_damage;

    let mut report = CrosscheckReport { scenarios_checked: all.len(), ..Default::default() };

    // Scenario samples must satisfy some disjunct.
    for scenario in &all {
        for t in window_samples(&scenario.earliest, &scenario.latest) {
            report.samples_checked += 1;
            let mut point = vec![BigRational::zero(); universe.len()];
            point[time] = t.clone();
            point[cost] = scenario.cost.clone();
            point[damage] = scenario.damage.clone();
            let covered = result.disjuncts.iter().any(|d| d.constraints.contains_point(&point));
            if !covered {
                report.mismatches.push(Mismatch::ScenarioNotCovered {
                    time: t,
                    cost: scenario.cost.clone(),
                    damage: scenario.damage.clone(),
                });
            }
        }
    }

    // Disjunct samples must be explained by some scenario.
    for (index, disjunct) in result.disjuncts.iter().enumerate() {
        let poly = &disjunct.constraints;
        let Some(times) = variable_samples(poly, time) else {
            report.mismatches.push(Mismatch::UnboundedObservation {
                disjunct: index,
                parameter: universe.name(time).to_string(),
            });
            continue;
        };
        for t in times {
            let pinned_t = pin(poly, time, &t);
            let Some(costs) = variable_samples(&pinned_t, cost) else {
                report.mismatches.push(Mismatch::UnboundedObservation {
                    disjunct: index,
                    parameter: universe.name(cost).to_string(),
                });
                continue;
            };
            for c in costs {
                let pinned_c = pin(&pinned_t, cost, &c);
                let Some(damages) = variable_samples(&pinned_c, damage) else {
                    report.mismatches.push(Mismatch::UnboundedObservation {
                        disjunct: index,
                        parameter: universe.name(damage).to_string(),
                    });
                    continue;
                };
                for d in damages {
                    report.samples_checked += 1;
                    let explained = all.iter().any(|s| {
                        s.cost == c && s.damage == d && s.covers_time(&t)
                    });
                    if !explained {
                        report.mismatches.push(Mismatch::SampleUnexplained {
                            disjunct: index,
                            time: t.clone(),
                            cost: c.clone(),
                            damage: d.clone(),
                        });
                    }
                }
            }
        }
    }

    Ok(report)
}

/// Endpoint-plus-midpoint samples of the `(total_time, total_cost,
/// total_damage)` triples admitted by one disjunct, after `fixed` pins any
/// remaining tree parameters. `None` when some observation dimension is
/// unbounded, the empty list when the pinned disjunct is infeasible.
pub fn observation_samples(
    poly: &Polyhedron,
    observation: (VarId, VarId, VarId),
    fixed: &[(VarId, BigRational)],
) -> Option<Vec<(BigRational, BigRational, BigRational)>> {
    let mut pinned = poly.clone();
    for (var, value) in fixed {
        let expr = LinearExpr::var(*var) + LinearExpr::constant(-value.clone());
        pinned.add_expr(&expr, Relation::Eq);
    }
    let (time, cost, damage) = observation;
    let mut out = Vec::new();
    for t in variable_samples(&pinned, time)? {
        let pinned_t = pin(&pinned, time, &t);
        for c in variable_samples(&pinned_t, cost)? {
            let pinned_c = pin(&pinned_t, cost, &c);
            for d in variable_samples(&pinned_c, damage)? {
                out.push((t.clone(), c.clone(), d.clone()));
            }
        }
    }
    Some(out)
}

/// Endpoints plus midpoint of a closed interval, deduplicated.
fn window_samples(lo: &BigRational, hi: &BigRational) -> Vec<BigRational> {
    if lo == hi {
        return vec![lo.clone()];
    }
    let two = BigRational::from_integer(BigInt::from(2));
    vec![lo.clone(), (lo + hi) / two, hi.clone()]
}

fn pin(poly: &Polyhedron, var: VarId, value: &BigRational) -> Polyhedron {
    let mut pinned = poly.clone();
    let expr = LinearExpr::var(var) + LinearExpr::constant(-value.clone());
    pinned.add_expr(&expr, Relation::Eq);
    pinned
}

/// One-variable bound extraction: projects everything else away, then reads
/// the interval off the surviving rows. Returns `None` when the variable is
/// unbounded on either side, an empty list when the projection is empty.
fn variable_samples(poly: &Polyhedron, var: VarId) -> Option<Vec<BigRational>> {
    let others: Vec<VarId> = (0..poly.dims()).filter(|&v| v != var).collect();
    let projected = poly.eliminate(&others).minimized();
    if projected.is_known_empty() {
        return Some(Vec::new());
    }
    // (value, inclusive) per side; tightest bound wins, strict beats weak on
    // ties.
    let mut lower: Option<(BigRational, bool)> = None;
    let mut upper: Option<(BigRational, bool)> = None;
    for row in projected.rows() {
        let a = row.coeff(var);
        if a.is_zero() {
            continue;
        }
        let value = BigRational::new(-row.constant.clone(), a.clone());
        let inclusive = row.rel != Relation::Lt;
        let (on_upper, on_lower) = match row.rel {
            Relation::Eq => (true, true),
            _ if a.is_positive() => (true, false),
            _ => (false, true),
        };
        if on_upper {
            let tighter = match &upper {
                None => true,
                Some((v, incl)) => value < *v || (value == *v && *incl && !inclusive),
            };
            if tighter {
                upper = Some((value.clone(), inclusive));
            }
        }
        if on_lower {
            let tighter = match &lower {
                None => true,
                Some((v, incl)) => value > *v || (value == *v && *incl && !inclusive),
            };
            if tighter {
                lower = Some((value.clone(), inclusive));
            }
        }
    }
    let (lo, lo_inclusive) = lower?;
    let (hi, hi_inclusive) = upper?;
    if lo > hi || (lo == hi && !(lo_inclusive && hi_inclusive)) {
        return Some(Vec::new());
    }
    let mut samples = Vec::new();
    if lo_inclusive {
        samples.push(lo.clone());
    }
    if lo < hi {
        let two = BigRational::from_integer(BigInt::from(2));
        samples.push((&lo + &hi) / two);
        if hi_inclusive {
            samples.push(hi);
        }
    }
    Some(samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galileo::parse;
    use crate::synthesis::{ef_synth, SynthesisOptions};
    use crate::translation::translate;
    use crate::{parse_rational, testkit};

    fn rat(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    fn tree(text: &str) -> AttackFaultTree {
        parse(text).unwrap()
    }

    fn analyzed(text: &str) -> (AttackFaultTree, TranslationOutput, ConstraintResult) {
        let tree = tree(text);
        let out = translate(&tree).unwrap();
        let success = move |locations: &[usize]| locations[out.root_automaton] == out.root_success;
        let result = ef_synth(&out.network, &success, &SynthesisOptions::default()).unwrap();
        (tree, out, result)
    }

    #[test]
    fn single_leaf_has_exactly_one_scenario() {
        let t = tree("toplevel \"L\";\n\"L\" time=5 cost=50;");
        let all = scenarios(&t).unwrap();
        assert_eq!(
            all,
            vec![Scenario {
                earliest: rat("5"),
                latest: rat("5"),
                cost: rat("50"),
                damage: rat("0"),
                fired: BTreeSet::from(["L".to_string()]),
            }]
        );
    }

    #[test]
    fn or_example_keeps_both_branches() {
        let t = tree(testkit::MINIMAL_OR);
        let all = scenarios(&t).unwrap();
        assert_eq!(all.len(), 2);
        assert_eq!((&all[0].earliest, &all[0].latest, &all[0].cost), (&rat("30"), &rat("70"), &rat("30")));
        assert_eq!((&all[1].earliest, &all[1].latest, &all[1].cost), (&rat("50"), &rat("100"), &rat("50")));
    }

    #[test]
    fn instantiated_iot_tree_yields_the_two_documented_scenarios() {
        let text = testkit::IOT.replace("tMax_Break", "2").replace("CostFindLAN_AP", "20");
        let t = tree(&text);
        let all = scenarios(&t).unwrap();
        let lan = all.iter().find(|s| s.cost == rat("200")).expect("LAN route present");
        assert_eq!((&lan.earliest, &lan.latest), (&rat("23/2"), &rat("23/2")));
        assert_eq!(lan.damage, rat("0"));
        let wlan = all.iter().find(|s| s.cost == rat("232")).expect("WLAN route present");
        assert_eq!((&wlan.earliest, &wlan.latest), (&rat("23/2"), &rat("23/2")));
    }

    #[test]
    fn gate_attributes_are_charged_on_top_of_children() {
        let t = tree(
            "toplevel \"G\";\n\"G\" and \"A\" \"B\" cost=7 damage=1;\n\"A\" time=1 cost=2;\n\"B\" time=2 damage=3;",
        );
        let all = scenarios(&t).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].cost, rat("9"));
        assert_eq!(all[0].damage, rat("4"));
        assert_eq!((&all[0].earliest, &all[0].latest), (&rat("2"), &rat("2")));
    }

    #[test]
    fn sor_shifts_by_fail_windows_of_gate_children() {
        // The AND child can fail as soon as either leaf gives up, so the
        // fallback leaf D starts anywhere in [1,2] u [3,4].
        let t = tree(
            "toplevel \"G\";\n\"G\" sor \"A\" \"D\";\n\"A\" and \"B\" \"C\";\n\"B\" mintime=1 maxtime=2;\n\"C\" mintime=3 maxtime=4;\n\"D\" time=5 cost=7;",
        );
        let all = scenarios(&t).unwrap();
        let windows: Vec<(BigRational, BigRational)> =
            all.iter().map(|s| (s.earliest.clone(), s.latest.clone())).collect();
        assert_eq!(
            windows,
            vec![
                (rat("3"), rat("4")), // A itself succeeds
                (rat("6"), rat("7")), // B fails first, then D
                (rat("8"), rat("9")), // C fails first, then D
            ]
        );
        assert_eq!(all[1].cost, rat("7"));
        assert_eq!(all[1].fired, BTreeSet::from(["D".to_string()]));
    }

    #[test]
    fn vot_charges_exactly_the_chosen_subset() {
        let t = tree(
            "toplevel \"G\";\n\"G\" 2of3 \"A\" \"B\" \"C\";\n\"A\" time=1 cost=1;\n\"B\" time=2 cost=2;\n\"C\" time=3 cost=4;",
        );
        let all = scenarios(&t).unwrap();
        let summary: Vec<(BigRational, BigRational)> =
            all.iter().map(|s| (s.latest.clone(), s.cost.clone())).collect();
        assert_eq!(
            summary,
            vec![(rat("2"), rat("3")), (rat("3"), rat("5")), (rat("3"), rat("6"))]
        );
    }

    #[test]
    fn scenarios_ignore_child_order_for_commutative_gates() {
        for (a, b) in [
            (r#""G" and "A" "B";"#, r#""G" and "B" "A";"#),
            (r#""G" or "A" "B";"#, r#""G" or "B" "A";"#),
            (r#""G" 1of2 "A" "B";"#, r#""G" 1of2 "B" "A";"#),
        ] {
            let base = "\n\"A\" mintime=1 maxtime=4 cost=3;\n\"B\" mintime=2 maxtime=3 damage=5;";
            let left = scenarios(&tree(&format!("toplevel \"G\";\n{a}{base}"))).unwrap();
            let right = scenarios(&tree(&format!("toplevel \"G\";\n{b}{base}"))).unwrap();
            assert_eq!(left, right);
        }
    }

    #[test]
    fn parametric_attributes_are_rejected() {
        let t = tree(testkit::IOT);
        match scenarios(&t) {
            Err(OracleError::ParametricAttribute { .. }) => {}
            other => panic!("expected parametric rejection, got {other:?}"),
        }
    }

    #[test]
    fn interleaving_sensitive_gates_are_rejected() {
        let t = tree("toplevel \"G\";\n\"G\" pand \"A\" \"B\";\n\"A\" time=1;\n\"B\" time=2;");
        assert_eq!(
            scenarios(&t),
            Err(OracleError::UnsupportedGate { node: "G".into(), kind: "pand".into() })
        );
    }

    #[test]
    fn crosscheck_accepts_the_or_example() {
        let (tree, out, result) = analyzed(testkit::MINIMAL_OR);
        let report = crosscheck(&tree, &out, &result).unwrap();
        assert!(report.clean(), "{}", report.render_text());
        assert_eq!(report.scenarios_checked, 2);
    }

    #[test]
    fn crosscheck_accepts_a_single_leaf() {
        let (tree, out, result) = analyzed("toplevel \"L\";\n\"L\" time=5 cost=50;");
        let report = crosscheck(&tree, &out, &result).unwrap();
        assert!(report.clean(), "{}", report.render_text());
    }

    #[test]
    fn crosscheck_accepts_sequential_failures_over_gate_children() {
        let (tree, out, result) = analyzed(
            "toplevel \"G\";\n\"G\" sor \"A\" \"D\";\n\"A\" and \"B\" \"C\";\n\"B\" mintime=1 maxtime=2;\n\"C\" mintime=3 maxtime=4;\n\"D\" time=5 cost=7;",
        );
        let report = crosscheck(&tree, &out, &result).unwrap();
        assert!(report.clean(), "{}", report.render_text());
    }

    #[test]
    fn corrupted_cost_is_reported_from_both_directions() {
        let (tree, out, mut result) = analyzed(testkit::MINIMAL_OR);
        // Shift every admitted cost up by one: scenarios lose their cover
        // and the shifted samples match no scenario.
        for disjunct in &mut result.disjuncts {
            let shift = LinearExpr::var(out.total_cost) + LinearExpr::from_integer(1);
            disjunct.constraints = disjunct.constraints.affine_image(&[(out.total_cost, shift)]);
        }
        let report = crosscheck(&tree, &out, &result).unwrap();
        assert!(report.mismatches.iter().any(|m| matches!(m, Mismatch::ScenarioNotCovered { .. })));
        assert!(report.mismatches.iter().any(|m| matches!(m, Mismatch::SampleUnexplained { .. })));
    }

    #[test]
    fn empty_result_reports_every_scenario_sample() {
        let (tree, out, mut result) = analyzed("toplevel \"L\";\n\"L\" mintime=2 maxtime=4;");
        result.disjuncts.clear();
        let report = crosscheck(&tree, &out, &result).unwrap();
        assert_eq!(report.mismatches.len(), 3); // both endpoints and the midpoint
    }

    #[test]
    fn seeded_random_trees_crosscheck_clean() {
        for seed in 0..10 {
            let text = testkit::random_concrete_tree(seed);
            let (tree, out, result) = analyzed(&text);
            let report = crosscheck(&tree, &out, &result).unwrap();
            assert!(report.clean(), "seed {seed}:\n{text}\n{}", report.render_text());
        }
    }

    #[test]
    fn observation_samples_enumerate_pinned_disjuncts() {
        let (_, out, result) = analyzed(testkit::IOT);
        let universe = &out.network.universe;
        let observation = (out.total_time, out.total_cost, out.total_damage);
        let fixed = [
            (universe.id("tMax_Break").unwrap(), rat("2")),
            (universe.id("CostFindLAN_AP").unwrap(), rat("20")),
        ];
        let mut triples = BTreeSet::new();
        for disjunct in &result.disjuncts {
            let samples = observation_samples(&disjunct.constraints, observation, &fixed)
                .expect("instantiated totals are bounded");
            triples.extend(samples);
        }
        // With tMax_Break=2 both routes finish at exactly 23/2; the LAN route
        // costs 180 + CostFindLAN_AP, the WLAN route 232.
        assert_eq!(
            triples,
            BTreeSet::from([
                (rat("23/2"), rat("200"), rat("0")),
                (rat("23/2"), rat("232"), rat("0")),
            ])
        );
    }

    #[test]
    fn observation_samples_report_infeasible_pins_as_empty() {
        let (_, out, result) = analyzed("toplevel \"L\";\n\"L\" mintime=2 maxtime=4 cost=9;");
        let observation = (out.total_time, out.total_cost, out.total_damage);
        let poly = &result.disjuncts[0].constraints;
        let samples = observation_samples(poly, observation, &[]).unwrap();
        assert_eq!(samples.len(), 3);
        assert!(samples.iter().all(|(_, c, d)| c == &rat("9") && d.is_zero()));
        let pinned_outside = observation_samples(
            poly,
            observation,
            &[(out.total_time, rat("5"))],
        )
        .unwrap();
        assert!(pinned_outside.is_empty());
    }
}
