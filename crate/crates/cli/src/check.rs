//! `aftsynth check`: two independent engines must agree.
//!
//! Concrete trees whose gates the scenario oracle supports are checked by
//! bidirectional sampling between the oracle's scenario set and the
//! synthesized disjuncts. Everything else runs in simulation mode: tree
//! parameters are pinned to each point of a finite grid, observation totals
//! are sampled from every disjunct (plus perturbed and baseline probes), and
//! for each full valuation the constraint membership test and the concrete
//! simulator must agree on reachability.
//!
//! The simulator tries delays only at constraint boundaries and midpoints,
//! which realizes every sampled total but not every interior point of a
//! wide disjunct. Perturbed probes that land back inside the constraint
//! region are therefore skipped; probes outside it are conclusive in both
//! directions (reaching one would disprove the constraints).

use std::collections::BTreeSet;
use std::fmt::Write as _;

use aftsynth_core::galileo::AttackFaultTree;
use aftsynth_core::oracle::{self, OracleError};
use aftsynth_core::polyhedra::VarId;
use aftsynth_core::pwta::{run_reaches, ConcreteState, ParameterValuation, ReachOutcome};
use aftsynth_core::synthesis::{check_valuation, ef_synth, ConstraintResult, SynthesisOptions};
use aftsynth_core::translation::TranslationOutput;
use aftsynth_core::{parse_rational, rational_to_string, testkit};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::load::{self, Failure, EXIT_EMPTY, EXIT_OK};
use crate::{CheckArgs, Format};

struct CheckReport {
    mode: &'static str,
    summary: String,
    stats: serde_json::Value,
    mismatches: Vec<String>,
}

pub fn run(args: &CheckArgs) -> Result<u8, Failure> {
    if let Some(count) = args.random {
        return run_random(args, count);
    }
    let file = args.file.as_ref().expect("clap requires a file without --random");
    let tree = load::load_tree_or_fail(file, args.format)?;
    let out = load::translate_or_fail(&tree)?;
    let result = synthesize(&out, args)?;

    if let Some(spec) = &args.grid {
        let axes = parse_grid_for(&tree, spec).map_err(Failure::input)?;
        let report = simulation_check(&out, &result, &axes, args.steps)?;
        return finish(args, &file.display().to_string(), report);
    }
    if !tree.is_concrete() {
        let names: Vec<&str> = tree
            .timing_parameters
            .iter()
            .chain(tree.weight_parameters.iter())
            .map(|s| s.as_str())
            .collect();
        return Err(Failure::input(format!(
            "{}: tree has parameters ({}); give each a finite range with --grid",
            file.display(),
            names.join(", ")
        )));
    }
    match oracle::crosscheck(&tree, &out, &result) {
        Ok(report) => {
            let report = CheckReport {
                mode: "oracle",
                summary: format!(
                    "{} scenarios, {} samples",
                    report.scenarios_checked, report.samples_checked
                ),
                stats: report.to_json(),
                mismatches: report.mismatches.iter().map(|m| m.to_string()).collect(),
            };
            finish(args, &file.display().to_string(), report)
        }
        Err(OracleError::UnsupportedGate { node, kind }) => {
            eprintln!(
                "note: gate `{node}` ({kind}) is outside the scenario oracle; \
                 falling back to simulation mode"
            );
            let report = simulation_check(&out, &result, &[], args.steps)?;
            finish(args, &file.display().to_string(), report)
        }
        // A concrete tree has no parametric attributes.
        Err(err) => Err(Failure::internal(err.to_string())),
    }
}

fn synthesize(out: &TranslationOutput, args: &CheckArgs) -> Result<ConstraintResult, Failure> {
    let options =
        SynthesisOptions { jobs: args.jobs, subsumption: true, max_states: None };
    let automaton = out.root_automaton;
    let location = out.root_success;
    let goal = move |locations: &[usize]| locations[automaton] == location;
    ef_synth(&out.network, &goal, &options).map_err(|e| Failure::internal(e.to_string()))
}

fn run_random(args: &CheckArgs, count: u32) -> Result<u8, Failure> {
    let mut mismatches = Vec::new();
    let mut scenarios = 0usize;
    let mut samples = 0usize;
    for index in 0..count {
        let seed = args.seed.wrapping_add(u64::from(index));
        let text = testkit::random_concrete_tree(seed);
        let tree = aftsynth_core::galileo::parse(&text).expect("generated trees parse");
        let out = load::translate_or_fail(&tree)?;
        let result = synthesize(&out, args)?;
        let report = oracle::crosscheck(&tree, &out, &result)
            .map_err(|e| Failure::internal(format!("seed {seed}: {e}")))?;
        scenarios += report.scenarios_checked;
        samples += report.samples_checked;
        for m in &report.mismatches {
            mismatches.push(format!("seed {seed}: {m}"));
        }
    }
    let report = CheckReport {
        mode: "random",
        summary: format!("{count} trees, {scenarios} scenarios, {samples} samples"),
        stats: serde_json::json!({
            "trees": count,
            "scenarios_checked": scenarios,
            "samples_checked": samples,
        }),
        mismatches,
    };
    finish(args, &format!("{count} random trees (seed {})", args.seed), report)
}

struct GridAxis {
    name: String,
    values: Vec<BigRational>,
}

/// Parses `name=lo..histepS` / `name=value` axes and checks they cover the
/// tree's parameters exactly.
fn parse_grid_for(tree: &AttackFaultTree, spec: &str) -> Result<Vec<GridAxis>, String> {
    let mut axes = Vec::new();
    for part in spec.split(',') {
        axes.push(parse_axis(part.trim())?);
    }
    let mut expected: BTreeSet<&str> =
        tree.timing_parameters.iter().map(|s| s.as_str()).collect();
    expected.extend(tree.weight_parameters.iter().map(|s| s.as_str()));
    let mut seen: BTreeSet<&str> = BTreeSet::new();
    for axis in &axes {
        if !expected.contains(axis.name.as_str()) {
            return Err(format!("--grid: `{}` is not a parameter of the tree", axis.name));
        }
        if !seen.insert(axis.name.as_str()) {
            return Err(format!("--grid: `{}` given twice", axis.name));
        }
    }
    let missing: Vec<&str> = expected.difference(&seen).copied().collect();
    if !missing.is_empty() {
        return Err(format!("--grid: missing parameters: {}", missing.join(", ")));
    }
    Ok(axes)
}

fn parse_axis(part: &str) -> Result<GridAxis, String> {
    let (name, range) = part
        .split_once('=')
        .ok_or_else(|| format!("--grid: `{part}`: expected name=lo..histepS or name=value"))?;
    let name = name.trim().to_string();
    let range = range.trim();
    if let Some((bounds, step)) = range.split_once("step") {
        let (lo, hi) = bounds
            .split_once("..")
            .ok_or_else(|| format!("--grid: `{part}`: expected lo..hi before `step`"))?;
        let lo = parse_grid_value(part, lo)?;
        let hi = parse_grid_value(part, hi)?;
        let step = parse_grid_value(part, step)?;
        if step <= BigRational::zero() {
            return Err(format!("--grid: `{part}`: step must be positive"));
        }
        let mut values = Vec::new();
        let mut v = lo;
        while v <= hi {
            values.push(v.clone());
            v = &v + &step;
        }
        if values.is_empty() {
            return Err(format!("--grid: `{part}`: empty range"));
        }
        Ok(GridAxis { name, values })
    } else if range.contains("..") {
        Err(format!("--grid: `{part}`: ranges need an explicit step, e.g. 0..12step3"))
    } else {
        Ok(GridAxis { name, values: vec![parse_grid_value(part, range)?] })
    }
}

fn parse_grid_value(part: &str, text: &str) -> Result<BigRational, String> {
    parse_rational(text.trim())
        .ok_or_else(|| format!("--grid: `{part}`: `{}` is not a rational", text.trim()))
}

/// Cartesian product of the axes; one empty point when there are no axes.
fn grid_points(axes: &[GridAxis]) -> Vec<Vec<(String, BigRational)>> {
    let mut points: Vec<Vec<(String, BigRational)>> = vec![Vec::new()];
    for axis in axes {
        let mut next = Vec::new();
        for point in &points {
            for value in &axis.values {
                let mut extended = point.clone();
                extended.push((axis.name.clone(), value.clone()));
                next.push(extended);
            }
        }
        points = next;
    }
    points
}

fn render_point(point: &[(String, BigRational)]) -> String {
    point
        .iter()
        .map(|(name, value)| format!("{name}={}", rational_to_string(value)))
        .collect::<Vec<_>>()
        .join(", ")
}

fn simulation_check(
    out: &TranslationOutput,
    result: &ConstraintResult,
    axes: &[GridAxis],
    steps: usize,
) -> Result<CheckReport, Failure> {
    let universe = &out.network.universe;
    let observation = (out.total_time, out.total_cost, out.total_damage);
    let automaton = out.root_automaton;
    let location = out.root_success;
    let mut mismatches = Vec::new();
    let mut points = 0usize;
    let mut valuations = 0usize;
    for point in grid_points(axes) {
        points += 1;
        let pins: Vec<(VarId, BigRational)> = point
            .iter()
            .map(|(name, value)| (universe.id(name).expect("axis name validated"), value.clone()))
            .collect();
        let mut triples: BTreeSet<(BigRational, BigRational, BigRational)> = BTreeSet::new();
        for (index, disjunct) in result.disjuncts.iter().enumerate() {
            match oracle::observation_samples(&disjunct.constraints, observation, &pins) {
                Some(samples) => triples.extend(samples),
                None => {
                    return Err(Failure::internal(format!(
                        "disjunct {} admits unbounded totals; cannot sample at grid point {}",
                        index + 1,
                        render_point(&point)
                    )))
                }
            }
        }
        // Positives come straight from the disjuncts; perturbing each
        // coordinate by one probes the surroundings. Probes landing back
        // inside the constraint region are dropped below: only sampled
        // totals are guaranteed realizable by the boundary-delay search.
        let one = BigRational::one();
        let mut probes = BTreeSet::new();
        for (t, c, d) in &triples {
            probes.insert((t + &one, c.clone(), d.clone()));
            probes.insert((t.clone(), c + &one, d.clone()));
            probes.insert((t.clone(), c.clone(), d + &one));
            if *t >= one {
                probes.insert((t - &one, c.clone(), d.clone()));
            }
            probes.insert((t.clone(), c - &one, d.clone()));
            probes.insert((t.clone(), c.clone(), d - &one));
        }
        probes.insert((BigRational::zero(), BigRational::zero(), BigRational::zero()));
        for sample in &triples {
            probes.remove(sample);
        }
        let candidates = triples
            .into_iter()
            .map(|totals| (totals, true))
            .chain(probes.into_iter().map(|totals| (totals, false)));
        for ((t, c, d), is_sample) in candidates {
            let mut pairs: Vec<(&str, BigRational)> =
                point.iter().map(|(name, value)| (name.as_str(), value.clone())).collect();
            pairs.push((universe.name(out.total_time), t.clone()));
            pairs.push((universe.name(out.total_cost), c.clone()));
            pairs.push((universe.name(out.total_damage), d.clone()));
            let valuation = ParameterValuation::from_pairs(universe, &pairs)
                .map_err(Failure::internal)?;
            let symbolic = check_valuation(universe, result, &valuation);
            if !is_sample && symbolic {
                continue;
            }
            valuations += 1;
            let goal = |state: &ConcreteState| state.locations[automaton] == location;
            let concrete = run_reaches(&out.network, &valuation, &goal, steps);
            let prefix = if point.is_empty() {
                String::new()
            } else {
                format!("{}; ", render_point(&point))
            };
            let totals = format!(
                "total_time={}, total_cost={}, total_damage={}",
                rational_to_string(&t),
                rational_to_string(&c),
                rational_to_string(&d)
            );
            let verdict = |reachable: bool| if reachable { "reachable" } else { "unreachable" };
            match concrete {
                ReachOutcome::Reached(_) if symbolic => {}
                ReachOutcome::Unreachable if !symbolic => {}
                ReachOutcome::BudgetExhausted => mismatches.push(format!(
                    "{prefix}{totals}: simulation undecided after {steps} steps \
                     (constraints say {})",
                    verdict(symbolic)
                )),
                outcome => mismatches.push(format!(
                    "{prefix}{totals}: constraints say {}, simulator says {}",
                    verdict(symbolic),
                    verdict(matches!(outcome, ReachOutcome::Reached(_)))
                )),
            }
        }
    }
    Ok(CheckReport {
        mode: "simulation",
        summary: format!("{points} grid points, {valuations} valuations"),
        stats: serde_json::json!({ "grid_points": points, "valuations": valuations }),
        mismatches,
    })
}

fn finish(args: &CheckArgs, subject: &str, report: CheckReport) -> Result<u8, Failure> {
    let pass = report.mismatches.is_empty();
    match args.format {
        Format::Text => {
            let mut text =
                format!("check {subject}: {} mode, {}\n", report.mode, report.summary);
            for m in &report.mismatches {
                writeln!(text, "  mismatch: {m}").expect("string write");
            }
            text.push_str(if pass { "PASS" } else { "FAIL" });
            println!("{text}");
        }
        Format::Json => {
            let value = serde_json::json!({
                "subject": subject,
                "mode": report.mode,
                "stats": report.stats,
                "mismatches": report.mismatches,
                "pass": pass,
            });
            println!("{}", serde_json::to_string_pretty(&value).expect("report serializes"));
        }
    }
    Ok(if pass { EXIT_OK } else { EXIT_EMPTY })
}
