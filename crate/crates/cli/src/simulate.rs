//! `aftsynth simulate`: one concrete run under a fixed valuation.

use aftsynth_core::parse_rational;
use aftsynth_core::pwta::{run_reaches, ConcreteState, ParameterValuation, ReachOutcome};

use crate::load::{self, Failure, EXIT_OK};
use crate::{Format, SimulateArgs};

pub fn run(args: &SimulateArgs) -> Result<u8, Failure> {
    let tree = load::load_tree_or_fail(&args.file, Format::Text)?;
    let out = load::translate_or_fail(&tree)?;
    let mut pairs = Vec::new();
    for assignment in &args.set {
        let (name, value) = assignment
            .split_once('=')
            .ok_or_else(|| Failure::input(format!("--set `{assignment}`: expected NAME=VALUE")))?;
        let value = parse_rational(value).ok_or_else(|| {
            Failure::input(format!("--set `{assignment}`: `{value}` is not a rational"))
        })?;
        pairs.push((name, value));
    }
    let pair_refs: Vec<(&str, _)> = pairs.iter().map(|(n, v)| (*n, v.clone())).collect();
    let valuation = ParameterValuation::from_pairs(&out.network.universe, &pair_refs)
        .map_err(|e| Failure::input(format!("{}: {e}", args.file.display())))?;
    let (automaton, location) = load::target_location(&out, args.target);
    let goal = move |state: &ConcreteState| state.locations[automaton] == location;
    match run_reaches(&out.network, &valuation, &goal, args.steps) {
        ReachOutcome::Reached(trace) => {
            // One step per line; the core renderer chains steps on one line.
            println!("{}", trace.render(&out.network).replace(" -(", "\n  -("));
            Ok(EXIT_OK)
        }
        ReachOutcome::Unreachable => Err(Failure::empty(format!(
            "root {} is unreachable under this valuation",
            args.target.as_str()
        ))),
        ReachOutcome::BudgetExhausted => Err(Failure::internal(format!(
            "search undecided after {} steps; raise --steps",
            args.steps
        ))),
    }
}
