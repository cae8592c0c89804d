//! Hand-built models shared by unit, property, and acceptance tests.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::polyhedra::{LinearExpr, VarSort, VariableUniverse};
use crate::pwta::{
    Bound, ClockAtom, Comparison, Edge, Guard, Location, Network, Pwta, WeightUpdate,
};

/// The two-leaf OR tree from the README, also shipped in `models/`.
pub const MINIMAL_OR: &str = include_str!("../../../models/minimal_or.galileo");

/// Compromising an IoT device over LAN or WLAN; two parameters.
pub const IOT: &str = include_str!("../../../models/iot.galileo");

/// Rocket explosion via a compromised pressure vessel; two parameters.
pub const SPACEX: &str = include_str!("../../../models/spacex.galileo");

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Single-automaton coffee machine over clocks `x`, `y`, timing parameters
/// `p1`, `p2`, weight `w`, and weight parameter `q`:
///
/// * `l1 -press-> l2`: resets `x`, `y`; `w := 2`
/// * `l2 -press-> l2` with `y <= 5 && x > 1`: resets `x`; `w := w + q`
/// * `l2 -prepare-> l3` with `y = p1`
/// * `l3 -serve-> l1` with `y = p2`
pub fn coffee_machine() -> Network {
    let mut universe = VariableUniverse::new();
    let x = universe.add("x", VarSort::Clock).unwrap();
    let y = universe.add("y", VarSort::Clock).unwrap();
    let p1 = universe.add("p1", VarSort::TimingParameter).unwrap();
    let p2 = universe.add("p2", VarSort::TimingParameter).unwrap();
    let w = universe.add("w", VarSort::WeightVariable).unwrap();
    let q = universe.add("q", VarSort::WeightParameter).unwrap();

    let atom = |clock, cmp, bound| ClockAtom { clock, cmp, bound };
    let edges = vec![
        Edge {
            source: 0,
            guard: Guard::top(),
            action: 0,
            resets: vec![x, y],
            update: WeightUpdate {
                assignments: vec![(w, LinearExpr::constant(rat(2)))],
            },
            target: 1,
        },
        Edge {
            source: 1,
            guard: Guard {
                clock_atoms: vec![
                    atom(y, Comparison::Le, Bound::Constant(rat(5))),
                    atom(x, Comparison::Gt, Bound::Constant(rat(1))),
                ],
                weight_atoms: vec![],
            },
            action: 0,
            resets: vec![x],
            update: WeightUpdate {
                assignments: vec![(w, LinearExpr::var(w) + LinearExpr::var(q))],
            },
            target: 1,
        },
        Edge {
            source: 1,
            guard: Guard {
                clock_atoms: vec![atom(y, Comparison::Eq, Bound::Parameter(p1))],
                weight_atoms: vec![],
            },
            action: 1,
            resets: vec![],
            update: WeightUpdate::identity(),
            target: 2,
        },
        Edge {
            source: 2,
            guard: Guard {
                clock_atoms: vec![atom(y, Comparison::Eq, Bound::Parameter(p2))],
                weight_atoms: vec![],
            },
            action: 2,
            resets: vec![],
            update: WeightUpdate::identity(),
            target: 0,
        },
    ];

    Network {
        universe,
        action_names: vec!["press".into(), "prepare".into(), "serve".into()],
        automata: vec![Pwta {
            name: "coffee".into(),
            locations: vec![Location::plain("l1"), Location::plain("l2"), Location::plain("l3")],
            initial: 0,
            clocks: vec![x, y],
            edges,
            allow_weight_guards: false,
        }],
    }
}

/// Deterministic random concrete tree in Galileo text form: gate depth at
/// most three, at most six leaves, gates from {and, or, sand, sor, vot},
/// integer attributes at most 20. The same seed always yields the same tree.
pub fn random_concrete_tree(seed: u64) -> String {
    use rand::Rng;
    use rand::SeedableRng;

    struct Gen {
        rng: rand_chacha::ChaCha8Rng,
        lines: Vec<String>,
        next_id: usize,
    }

    impl Gen {
        fn fresh(&mut self, prefix: &str) -> String {
            self.next_id += 1;
            format!("{prefix}{}", self.next_id)
        }

        fn weight_attrs(&mut self, always: bool) -> String {
            let mut out = String::new();
            if always || self.rng.gen_bool(0.3) {
                out.push_str(&format!(" cost={}", self.rng.gen_range(0..=20)));
            }
            if self.rng.gen_bool(if always { 0.8 } else { 0.3 }) {
                out.push_str(&format!(" damage={}", self.rng.gen_range(0..=20)));
            }
            out
        }

        fn leaf(&mut self) -> String {
            let name = self.fresh("l");
            let lo = self.rng.gen_range(0..=20);
            let hi = self.rng.gen_range(lo..=20);
            let attrs = self.weight_attrs(true);
            self.lines.push(format!("\"{name}\" mintime={lo} maxtime={hi}{attrs};"));
            name
        }

        /// Emits a subtree using at most `budget` leaves (at least one);
        /// returns its name and the number of leaves actually used.
        fn node(&mut self, depth: usize, budget: usize) -> (String, usize) {
            if depth >= 3 || budget <= 1 || self.rng.gen_bool(0.3) {
                return (self.leaf(), 1);
            }
            let arity = self.rng.gen_range(2..=budget.min(3));
            let kind = match self.rng.gen_range(0..5) {
                0 => "and".to_string(),
                1 => "or".to_string(),
                2 => "sand".to_string(),
                3 => "sor".to_string(),
                _ => format!("{}of{arity}", self.rng.gen_range(1..=arity)),
            };
            let mut children = Vec::new();
            let mut remaining = budget;
            for i in 0..arity {
                // Reserve one leaf for each sibling still to come.
                let reserve = arity - 1 - i;
                let (child, used) = self.node(depth + 1, remaining - reserve);
                remaining -= used;
                children.push(format!("\"{child}\""));
            }
            let name = self.fresh("g");
            let attrs = self.weight_attrs(false);
            self.lines.push(format!("\"{name}\" {kind} {}{attrs};", children.join(" ")));
            (name, budget - remaining)
        }
    }

    let mut gen = Gen {
        rng: rand_chacha::ChaCha8Rng::seed_from_u64(seed),
        lines: Vec::new(),
        next_id: 0,
    };
    let (root, _) = gen.node(0, 6);
    let mut text = format!("toplevel \"{root}\";\n");
    // Definitions were pushed children-first; reverse for readability.
    for line in gen.lines.iter().rev() {
        text.push_str(line);
        text.push('\n');
    }
    text
}
