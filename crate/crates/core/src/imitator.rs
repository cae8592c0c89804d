//! Write-only export of a translated network into the textual model format
//! of the IMITATOR checker (2.x series grammar).
//!
//! The export covers everything the analysis uses: clocks, discrete weight
//! variables, parameters, per-automaton synchronization labels, urgent
//! locations, invariants, guarded transitions with resets and weight
//! updates, the initial state, and a reachability objective on the
//! observer's success location (posed, as that grammar does, by naming the
//! target location in the `property` block; the checker's EF mode then
//! synthesizes the valuations reaching it).
//!
//! We never parse this format back; golden files pin the output byte for
//! byte.

use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};

use crate::polyhedra::{LinearExpr, VarSort, VariableUniverse};
use crate::pwta::{Bound, Comparison, Guard, Network, Pwta};
use crate::rational_to_string;
use crate::translation::TranslationOutput;

/// Renders the whole model; the result is deterministic for a given
/// translation output.
pub fn export_model(translation: &TranslationOutput) -> String {
    let net = &translation.network;
    let universe = &net.universe;
    let mut out = String::new();

    let _ = writeln!(out, "(* Parametric weighted timed automata for an attack-fault tree. *)");
    let _ = writeln!(out, "(* Generated by aftsynth; edit the tree, not this file. *)");
    out.push('\n');
    out.push_str(&var_block(universe));

    for automaton in &net.automata {
        out.push('\n');
        out.push_str(&automaton_block(net, universe, automaton));
    }

    out.push('\n');
    out.push_str(&init_block(net, universe));
    out.push('\n');
    let success_location =
        &net.automata[translation.root_automaton].locations[translation.root_success].name;
    let _ = writeln!(out, "(* EF objective: valuations that can reach the observer's success. *)");
    let _ = writeln!(
        out,
        "property := unreachable loc[{}] = {};",
        net.automata[translation.root_automaton].name, success_location
    );
    out
}

fn var_block(universe: &VariableUniverse) -> String {
    let mut out = String::from("var\n");
    let groups = [
        (vec![VarSort::Clock], "clock"),
        (vec![VarSort::WeightVariable], "discrete"),
        (vec![VarSort::TimingParameter, VarSort::WeightParameter], "parameter"),
    ];
    for (sorts, keyword) in groups {
        let names: Vec<&str> = universe
            .iter()
            .filter(|(_, _, sort)| sorts.contains(sort))
            .map(|(_, name, _)| name)
            .collect();
        if names.is_empty() {
            continue;
        }
        let _ = writeln!(out, "    {}", names.join(", "));
        let _ = writeln!(out, "        : {keyword};");
    }
    out
}

fn automaton_block(net: &Network, universe: &VariableUniverse, automaton: &Pwta) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "(*{}*)", "*".repeat(58));
    let _ = writeln!(out, "automaton {}", automaton.name);
    let _ = writeln!(out, "(*{}*)", "*".repeat(58));
    let labels: Vec<&str> =
        automaton.alphabet().iter().map(|&a| net.action_name(a)).collect();
    let _ = writeln!(out, "synclabs: {};", labels.join(", "));
    for (id, location) in automaton.locations.iter().enumerate() {
        out.push('\n');
        let keyword = if location.urgent { "urgent loc" } else { "loc" };
        let _ = writeln!(
            out,
            "{keyword} {}: while {} wait {{}}",
            location.name,
            guard_text(universe, &location.invariant)
        );
        for edge in automaton.edges.iter().filter(|e| e.source == id) {
            let mut line = format!(
                "    when {} sync {}",
                guard_text(universe, &edge.guard),
                net.action_name(edge.action)
            );
            let mut updates: Vec<String> = edge
                .resets
                .iter()
                .map(|&clock| format!("{}' = 0", universe.name(clock)))
                .collect();
            for (target, expr) in &edge.update.assignments {
                updates.push(format!("{}' = {}", universe.name(*target), expr_text(universe, expr)));
            }
            if !updates.is_empty() {
                let _ = write!(line, " do {{{}}}", updates.join(", "));
            }
            let _ = write!(line, " goto {};", automaton.locations[edge.target].name);
            let _ = writeln!(out, "{line}");
        }
    }
    out.push('\n');
    let _ = writeln!(out, "end (* {} *)", automaton.name);
    out
}

fn guard_text(universe: &VariableUniverse, guard: &Guard) -> String {
    if guard.is_top() {
        return "True".into();
    }
    let mut atoms = Vec::new();
    for atom in &guard.clock_atoms {
        let cmp = match atom.cmp {
            Comparison::Lt => "<",
            Comparison::Le => "<=",
            Comparison::Eq => "=",
            Comparison::Ge => ">=",
            Comparison::Gt => ">",
        };
        let bound = match &atom.bound {
            Bound::Constant(c) => rational_to_string(c),
            Bound::Parameter(p) => universe.name(*p).to_string(),
        };
        atoms.push(format!("{} {cmp} {bound}", universe.name(atom.clock)));
    }
    for atom in &guard.weight_atoms {
        atoms.push(format!(
            "{} = {}",
            universe.name(atom.variable),
            universe.name(atom.parameter)
        ));
    }
    atoms.join(" & ")
}

fn expr_text(universe: &VariableUniverse, expr: &LinearExpr) -> String {
    let mut out = String::new();
    for (id, coeff) in expr.terms() {
        let (sign, magnitude) = if coeff.is_negative() {
            ("-", -coeff.clone())
        } else {
            ("+", coeff.clone())
        };
        if out.is_empty() {
            if sign == "-" {
                out.push_str("-");
            }
        } else {
            let _ = write!(out, " {sign} ");
        }
        if magnitude.is_one() {
            out.push_str(universe.name(id));
        } else {
            let _ = write!(out, "{}*{}", rational_to_string(&magnitude), universe.name(id));
        }
    }
    let constant = expr.constant_part();
    if !constant.is_zero() || out.is_empty() {
        if out.is_empty() {
            out.push_str(&rational_to_string(constant));
        } else if constant.is_negative() {
            let _ = write!(out, " - {}", rational_to_string(&-constant.clone()));
        } else {
            let _ = write!(out, " + {}", rational_to_string(constant));
        }
    }
    out
}

fn init_block(net: &Network, universe: &VariableUniverse) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "(*{}*)", "*".repeat(58));
    let _ = writeln!(out, "(* Initial state *)");
    let _ = writeln!(out, "(*{}*)", "*".repeat(58));
    let _ = writeln!(out, "init := True");
    for automaton in &net.automata {
        let _ = writeln!(
            out,
            "    & loc[{}] = {}",
            automaton.name, automaton.locations[automaton.initial].name
        );
    }
    for (id, name, sort) in universe.iter() {
        let _ = id;
        match sort {
            VarSort::Clock | VarSort::WeightVariable => {
                let _ = writeln!(out, "    & {name} = 0");
            }
            VarSort::TimingParameter => {
                let _ = writeln!(out, "    & {name} >= 0");
            }
            // Weight parameters range over all rationals.
            VarSort::WeightParameter => {}
        }
    }
    let _ = writeln!(out, ";");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galileo::parse;
    use crate::testkit;
    use crate::translation::translate;

    fn export(text: &str) -> String {
        export_model(&translate(&parse(text).unwrap()).unwrap())
    }

    #[test]
    fn or_example_exports_four_automata() {
        let model = export(testkit::MINIMAL_OR);
        assert_eq!(model.matches("\nautomaton ").count(), 4);
        assert!(model.contains("automaton rootTA"));
        assert!(model.ends_with("property := unreachable loc[rootTA] = success;\n"));
    }

    #[test]
    fn iot_declares_every_parameter() {
        let model = export(testkit::IOT);
        let parameter_line = model
            .lines()
            .find(|l| l.contains("tMax_Break"))
            .expect("parameter group present");
        for name in ["tMax_Break", "CostFindLAN_AP", "total_time", "total_cost", "total_damage"] {
            assert!(parameter_line.contains(name), "{name} missing from {parameter_line}");
        }
    }

    #[test]
    fn urgent_locations_are_marked() {
        let model = export(testkit::MINIMAL_OR);
        assert!(model.contains("urgent loc "));
    }

    #[test]
    fn guards_updates_and_resets_render_inline() {
        let model = export("toplevel \"L\";\n\"L\" mintime=1/2 maxtime=3/2 cost=50;");
        assert!(model.contains("when True sync start_L do {x_L' = 0} goto running;"));
        assert!(model.contains("loc running: while x_L <= 3/2 wait {}"));
        assert!(model.contains(
            "when x_L >= 1/2 sync success_L do {current_cost_root' = current_cost_root + 50} goto success;"
        ));
        assert!(model.contains("& abs_time = 0"));
        assert!(model.contains("& total_time >= 0"));
    }

    #[test]
    fn observation_guard_appears_on_the_observer_success_edge() {
        let model = export(testkit::MINIMAL_OR);
        assert!(model.contains("abs_time = total_time"));
        assert!(model.contains("current_cost_root = total_cost"));
        assert!(model.contains("current_damage_root = total_damage"));
    }

    #[test]
    fn export_is_deterministic() {
        assert_eq!(export(testkit::IOT), export(testkit::IOT));
    }
}
