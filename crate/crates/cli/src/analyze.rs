//! `aftsynth analyze`: end-to-end synthesis and result rendering.

use std::time::Instant;

use aftsynth_core::galileo::{AttackFaultTree, Node};
use aftsynth_core::pwta::{ActionId, Network};
use aftsynth_core::synthesis::{ef_synth, ConstraintResult, SynthesisOptions};
use aftsynth_core::translation::TranslationOutput;

use crate::load::{self, Failure, EXIT_EMPTY, EXIT_OK};
use crate::{AnalyzeArgs, Format};

pub fn run(args: &AnalyzeArgs) -> Result<u8, Failure> {
    let tree = load::load_tree_or_fail(&args.file, args.format)?;
    let out = load::translate_or_fail(&tree)?;
    let options = SynthesisOptions {
        jobs: args.jobs,
        subsumption: !args.no_subsumption,
        max_states: None,
    };
    let (automaton, location) = load::target_location(&out, args.target);
    let goal = move |locations: &[usize]| locations[automaton] == location;
    let started = Instant::now();
    let result = ef_synth(&out.network, &goal, &options)
        .map_err(|e| Failure::internal(e.to_string()))?;
    log::info!(
        "explored {} symbolic states in {:.2?}",
        result.states_explored,
        started.elapsed()
    );
    let rendered = match args.format {
        Format::Text => render_text(args, &tree, &out, &result),
        Format::Json => render_json(args, &tree, &out, &result),
    };
    println!("{rendered}");
    Ok(if result.disjuncts.is_empty() { EXIT_EMPTY } else { EXIT_OK })
}

/// Leaf nodes whose success action occurs in the witness, in firing order.
fn fired_leaves(tree: &AttackFaultTree, net: &Network, witness: &[ActionId]) -> Vec<String> {
    witness
        .iter()
        .filter_map(|&action| {
            let leaf = net.action_name(action).strip_prefix("success_")?;
            match tree.node(leaf) {
                Some(Node::Leaf(_)) => Some(leaf.to_string()),
                _ => None,
            }
        })
        .collect()
}

fn render_text(
    args: &AnalyzeArgs,
    tree: &AttackFaultTree,
    out: &TranslationOutput,
    result: &ConstraintResult,
) -> String {
    let file = args.file.display();
    let target = args.target.as_str();
    if result.disjuncts.is_empty() {
        return format!(
            "{file}: no valuation reaches root {target} ({} states explored)",
            result.states_explored
        );
    }
    let mut text = format!(
        "{file}: {} disjunct{} reach{} root {target} ({} states explored)\n",
        result.disjuncts.len(),
        if result.disjuncts.len() == 1 { "" } else { "s" },
        if result.disjuncts.len() == 1 { "es" } else { "" },
        result.states_explored
    );
    for (index, disjunct) in result.disjuncts.iter().enumerate() {
        text.push_str(&format!("\ndisjunct {}:\n", index + 1));
        let constraints = disjunct.constraints.constraint_strings(&out.network.universe);
        if constraints.is_empty() {
            text.push_str("  (all valuations)\n");
        }
        for line in constraints {
            text.push_str(&format!("  {line}\n"));
        }
        let leaves = fired_leaves(tree, &out.network, &disjunct.witness);
        if !leaves.is_empty() {
            text.push_str(&format!("  fired leaves: {}\n", leaves.join(", ")));
        }
        let actions: Vec<&str> =
            disjunct.witness.iter().map(|&a| out.network.action_name(a)).collect();
        text.push_str(&format!("  witness: {}\n", actions.join(" -> ")));
    }
    text.pop();
    text
}

fn render_json(
    args: &AnalyzeArgs,
    tree: &AttackFaultTree,
    out: &TranslationOutput,
    result: &ConstraintResult,
) -> String {
    let disjuncts: Vec<serde_json::Value> = result
        .disjuncts
        .iter()
        .map(|disjunct| {
            serde_json::json!({
                "constraints": disjunct.constraints.constraint_strings(&out.network.universe),
                "witness": disjunct.witness.iter()
                    .map(|&a| out.network.action_name(a).to_string())
                    .collect::<Vec<_>>(),
                "fired_leaves": fired_leaves(tree, &out.network, &disjunct.witness),
            })
        })
        .collect();
    let report = serde_json::json!({
        "file": args.file.display().to_string(),
        "target": args.target.as_str(),
        "states_explored": result.states_explored,
        "disjuncts": disjuncts,
    });
    serde_json::to_string_pretty(&report).expect("report serializes")
}
