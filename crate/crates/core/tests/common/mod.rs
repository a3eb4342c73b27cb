#![allow(dead_code)]

use std::collections::BTreeSet;
use std::fmt::Write;

use hexeval::builtins;
use hexeval::ground::{ground_program, GroundConfig, GroundProgram};
use hexeval::solver::{solve, FlpMode, Minimization, SolverConfig, SolverStats};
use hexeval::syntax::parse_program;
use rand::seq::SliceRandom;
use rand::Rng;

pub type Sets = Vec<BTreeSet<String>>;

pub fn ground(text: &str) -> GroundProgram {
    let program = parse_program(text).unwrap_or_else(|e| panic!("{e}\n{text}"));
    ground_program(&program, &builtins::registry(), &GroundConfig::default())
        .unwrap_or_else(|e| panic!("{e}\n{text}"))
}

pub fn solve_sets(text: &str, config: SolverConfig) -> (Sets, SolverStats) {
    let gp = ground(text);
    let outcome =
        solve(&gp, &builtins::registry(), config).unwrap_or_else(|e| panic!("{e}\n{text}"));
    let mut sets: Sets = outcome
        .answer_sets
        .iter()
        .map(|a| a.texts(&gp).into_iter().collect())
        .collect();
    sets.sort();
    (sets, outcome.stats)
}

/// Every combination of the search flags that must not change answer sets.
pub fn flag_matrix() -> Vec<SolverConfig> {
    let mut out = Vec::new();
    for partial_eval in [true, false] {
        for minimization in [
            Minimization::Off,
            Minimization::Deletion,
            Minimization::QuickXplain,
        ] {
            for flp_mode in [FlpMode::Explicit, FlpMode::SkipAuto] {
                for eval_frequency in [1, 4] {
                    out.push(SolverConfig {
                        partial_eval,
                        eval_frequency,
                        minimization,
                        flp_mode,
                        max_models: 0,
                    });
                }
            }
        }
    }
    out
}

/// `n` domain elements, each either selected or not, through two mutually
/// dependent `diff` atoms.
pub fn setminus(n: usize) -> String {
    let mut s = String::new();
    for i in 0..n {
        write!(s, "dom(c{i}). ").unwrap();
    }
    s.push_str("sel(X) :- dom(X), &diff[dom,nsel](X). nsel(X) :- dom(X), &diff[dom,sel](X).");
    s
}

/// A guess over two elements feeding a chain of `len` alternating `diff`
/// links: `p{i}` holds exactly the elements missing from `p{i-1}`.
pub fn diff_chain(len: usize) -> String {
    let mut s = String::from(
        "dom(a). dom(b). \
         p0(X) :- dom(X), &diff[dom,q](X). q(X) :- dom(X), &diff[dom,p0](X). ",
    );
    for i in 1..len {
        write!(s, "p{i}(X) :- dom(X), &diff[dom,p{}](X). ", i - 1).unwrap();
    }
    s
}

pub const CONCAT: &str = "firstname(pat). lastname(doe). \
    fullname(Full) :- &concat[F,L](Full), firstname(F), lastname(L).";

pub const FIRST_PRUNED: &str = "d(a). r(a) :- d(a), &first[d,r](a).";

/// Curated programs covering each builtin, loops, disjunction, constraints
/// and weak constraints.
pub const CORPUS: &[(&str, &str)] = &[
    ("concat", CONCAT),
    ("id_self_support", "p :- &id[p]."),
    ("id_with_fact", "q. p :- &id[q]."),
    ("id_cycle_pair", "p :- &id[q]. q :- &id[p]."),
    ("id_cycle_with_choice", "p :- &id[q]. q :- &id[p]. q :- not r. r :- not q."),
    ("negated_id", "p :- not &id[q]. q :- not p."),
    ("setminus_2", "dom(a). dom(b). sel(X) :- dom(X), &diff[dom,nsel](X). nsel(X) :- dom(X), &diff[dom,sel](X)."),
    ("setminus_3_constraint", "dom(a). dom(b). dom(c). sel(X) :- dom(X), &diff[dom,nsel](X). nsel(X) :- dom(X), &diff[dom,sel](X). :- sel(a), sel(b)."),
    ("first_pruned", FIRST_PRUNED),
    ("first_cyclic", "d(a). d(b). r(X) :- d(X), &first[r,d](X)."),
    ("first_choice", "d(a). d(b). r(X) :- d(X), &first[d,s](X), not s(X). s(X) :- d(X), not r(X)."),
    ("at_least_loop", "d(a). d(b). p(X) :- d(X), not q(X). q(X) :- d(X), not p(X). ok :- &atLeast[p,2]."),
    ("at_least_self", "p(a) :- &atLeast[p,1]. p(b) :- &atLeast[p,1]. p(a) :- not z. z :- not p(a)."),
    ("at_least_unsat", "d(a). p(X) :- d(X), not q(X). q(X) :- d(X), not p(X). :- not &atLeast[p,1]. :- p(a)."),
    ("diff_chain_5", "dom(a). dom(b). p0(X) :- dom(X), &diff[dom,q](X). q(X) :- dom(X), &diff[dom,p0](X). p1(X) :- dom(X), &diff[dom,p0](X). p2(X) :- dom(X), &diff[dom,p1](X). p3(X) :- dom(X), &diff[dom,p2](X). p4(X) :- dom(X), &diff[dom,p3](X)."),
    ("list_functions", "l(cons(a,cons(b,nil))). h(X) :- l(L), &head[L](X). t(T) :- l(L), &tail[L](T). both(Y) :- l(L), &append[L,L](Y)."),
    ("even_loop", "a :- not b. b :- not a."),
    ("odd_loop", "a :- not a."),
    ("positive_loop", "a :- b. b :- a. a :- not c. c :- not a."),
    ("disjunction", "a | b. c :- a. c :- b."),
    ("disjunction_loop", "a | b. a :- b. b :- a."),
    ("disjunction_external", "p | q :- &id[r]. r."),
    ("weak_choice", "a :- not b. b :- not a. :~ a. [1@2] :~ b. [5@1]"),
    ("stratified", "e(a,b). e(b,c). r(X,Y) :- e(X,Y). r(X,Z) :- e(X,Y), r(Y,Z)."),
    ("contradiction", "a. :- a."),
];

const CONSTS: [&str; 3] = ["a", "b", "c"];

struct Sig {
    name: &'static str,
    unary: bool,
}

const PREDS: [&str; 4] = ["p", "q", "r", "s"];

fn atom(sig: &Sig, arg: &str) -> String {
    if sig.unary {
        format!("{}({arg})", sig.name)
    } else {
        sig.name.to_string()
    }
}

fn term(rng: &mut impl Rng, var_ok: bool) -> String {
    if var_ok && rng.gen_bool(0.5) {
        "X".to_string()
    } else {
        CONSTS.choose(rng).unwrap().to_string()
    }
}

fn external(rng: &mut impl Rng, sigs: &[Sig], out: &str) -> String {
    let pred = |rng: &mut _| sigs.choose(rng).unwrap().name;
    let unary: Vec<&str> = sigs.iter().filter(|s| s.unary).map(|s| s.name).collect();
    let choice = if unary.is_empty() {
        rng.gen_range(0..2)
    } else {
        rng.gen_range(0..4)
    };
    match choice {
        0 => format!("&id[{}]", pred(rng)),
        1 => format!("&atLeast[{},{}]", pred(rng), rng.gen_range(1..3)),
        2 => format!(
            "&diff[{},{}]({out})",
            unary.choose(rng).unwrap(),
            unary.choose(rng).unwrap()
        ),
        _ => format!(
            "&first[{},{}]({out})",
            unary.choose(rng).unwrap(),
            pred(rng)
        ),
    }
}

/// A small random HEX-program over at most three constants and four
/// predicates of arity at most one, with at most six rules.
pub fn random_program(rng: &mut impl Rng, with_weak: bool) -> String {
    let npreds = rng.gen_range(2..=4);
    let sigs: Vec<Sig> = PREDS[..npreds]
        .iter()
        .map(|&name| Sig {
            name,
            unary: rng.gen_bool(0.6),
        })
        .collect();
    let mut s = String::new();

    // Facts give unary predicates something to range over.
    let nfacts = rng.gen_range(1..=2);
    for _ in 0..nfacts {
        let sig = sigs.choose(rng).unwrap();
        writeln!(s, "{}.", atom(sig, CONSTS.choose(rng).unwrap())).unwrap();
    }

    let nrules = rng.gen_range(1..=6 - nfacts);
    for _ in 0..nrules {
        let var = rng.gen_bool(0.5) && sigs.iter().any(|s| s.unary);
        let mut body = Vec::new();
        if var {
            // Bind X positively, through an ordinary atom or an output.
            let unary: Vec<&Sig> = sigs.iter().filter(|s| s.unary).collect();
            if rng.gen_bool(0.7) {
                body.push(atom(unary.choose(rng).unwrap(), "X"));
            } else {
                let u = unary.choose(rng).unwrap().name;
                let q = unary.choose(rng).unwrap().name;
                body.push(if rng.gen_bool(0.5) {
                    format!("&diff[{u},{q}](X)")
                } else {
                    format!("&first[{u},{q}](X)")
                });
            }
        }
        for _ in 0..rng.gen_range(0..=2) {
            let neg = rng.gen_bool(0.4);
            let arg = term(rng, var);
            let lit = if rng.gen_bool(0.3) {
                external(rng, &sigs, &arg)
            } else {
                atom(sigs.choose(rng).unwrap(), &arg)
            };
            body.push(if neg { format!("not {lit}") } else { lit });
        }
        let heads = match rng.gen_range(0..10) {
            0 if !body.is_empty() => 0,
            1 => 2,
            _ => 1,
        };
        let head: Vec<String> = (0..heads)
            .map(|_| atom(sigs.choose(rng).unwrap(), &term(rng, var)))
            .collect();
        if head.is_empty() {
            writeln!(s, ":- {}.", body.join(", ")).unwrap();
        } else if body.is_empty() {
            writeln!(s, "{}.", head.join(" | ")).unwrap();
        } else {
            writeln!(s, "{} :- {}.", head.join(" | "), body.join(", ")).unwrap();
        }
    }

    if with_weak {
        for _ in 0..rng.gen_range(1..=3) {
            let sig = sigs.choose(rng).unwrap();
            let lit = atom(sig, CONSTS.choose(rng).unwrap());
            let lit = if rng.gen_bool(0.3) {
                format!("not {lit}")
            } else {
                lit
            };
            writeln!(
                s,
                ":~ {lit}. [{}@{}]",
                rng.gen_range(0..4),
                rng.gen_range(0..3)
            )
            .unwrap();
        }
    }
    s
}
