mod common;

use common::*;
use hexeval::builtins;
use hexeval::flp::{brute_force_answer_sets, ReferenceError};
use hexeval::solver::{optimize, FlpMode, Solver, SolverConfig};
use hexeval::syntax::parse_program;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A random program from `seed` the reference can evaluate, if any.
fn program(seed: u64, with_weak: bool) -> Option<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let text = random_program(&mut rng, with_weak);
    let parsed = parse_program(&text).ok()?;
    match brute_force_answer_sets(&parsed, &builtins::registry(), 18) {
        Ok(_) => Some(text),
        Err(ReferenceError::TooManyAtoms { .. }) | Err(ReferenceError::Ground(_)) => None,
        Err(e) => panic!("{e}\n{text}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn answer_sets_do_not_depend_on_flags(seed in any::<u64>()) {
        let Some(text) = program(seed, false) else { return Ok(()) };
        let matrix = flag_matrix();
        let (baseline, _) = solve_sets(&text, matrix[0]);
        for config in &matrix[1..] {
            let (got, _) = solve_sets(&text, *config);
            prop_assert_eq!(&got, &baseline, "{:?}\n{}", config, text);
        }
    }

    #[test]
    fn learned_nogoods_keep_every_answer_set(seed in any::<u64>()) {
        let Some(text) = program(seed, false) else { return Ok(()) };
        let gp = ground(&text);
        let reg = builtins::registry();
        let mut first = Solver::new(&gp, &reg, SolverConfig::default()).unwrap();
        let mut expected: Vec<_> = first.by_ref().map(|a| a.unwrap().texts(&gp)).collect();
        expected.sort();
        let mut second = Solver::new(&gp, &reg, SolverConfig::default()).unwrap();
        for ng in first.learned_nogoods() {
            second.add_nogood(ng);
        }
        let mut got: Vec<_> = second.map(|a| a.unwrap().texts(&gp)).collect();
        got.sort();
        prop_assert_eq!(got, expected, "{}", text);
    }

    #[test]
    fn optimum_does_not_depend_on_flags(seed in any::<u64>()) {
        let Some(text) = program(seed, true) else { return Ok(()) };
        let gp = ground(&text);
        let reg = builtins::registry();
        let costs: Vec<_> = flag_matrix()
            .into_iter()
            .map(|c| optimize(&gp, &reg, c).unwrap().optimum)
            .collect();
        prop_assert!(costs.windows(2).all(|w| w[0] == w[1]), "{}", text);
    }

    #[test]
    fn improving_models_strictly_decrease(seed in any::<u64>()) {
        let Some(text) = program(seed, true) else { return Ok(()) };
        let gp = ground(&text);
        let opt = optimize(&gp, &builtins::registry(), SolverConfig::default()).unwrap();
        prop_assert!(opt.improving.windows(2).all(|w| w[1].cost < w[0].cost));
        if let Some(best) = &opt.optimum {
            prop_assert!(!opt.optimal.is_empty());
            prop_assert!(opt.optimal.iter().all(|a| &a.cost == best));
        }
    }
}

#[test]
fn max_models_limits_enumeration() {
    let gp = ground(&setminus(4));
    let reg = builtins::registry();
    let config = SolverConfig {
        max_models: 3,
        ..Default::default()
    };
    assert_eq!(Solver::new(&gp, &reg, config).unwrap().count(), 3);
}

#[test]
fn disabled_flp_check_admits_cyclic_justification() {
    let config = SolverConfig {
        flp_mode: FlpMode::Off,
        ..Default::default()
    };
    let (sets, stats) = solve_sets("p :- &id[p].", config);
    assert_eq!(sets.len(), 2);
    assert_eq!(stats.flp_checks_run, 0);
}

#[test]
fn diff_chain_alternates() {
    // p0 = {a}, q = {b}, then each link complements the previous one.
    let (sets, _) = solve_sets(&diff_chain(4), SolverConfig::default());
    assert_eq!(sets.len(), 4);
    let one = sets
        .iter()
        .find(|s| s.contains("p0(a)") && !s.contains("p0(b)"))
        .unwrap();
    for atom in ["q(b)", "p1(b)", "p2(a)", "p3(b)"] {
        assert!(one.contains(atom), "{atom} missing from {one:?}");
    }
    assert!(!one.contains("p1(a)"));
}

#[test]
fn weak_levels_without_instances_appear_in_costs() {
    let gp = ground("a. :~ b. [2@3] :~ a. [1@1]");
    let opt = optimize(&gp, &builtins::registry(), SolverConfig::default()).unwrap();
    assert_eq!(opt.optimum.unwrap().to_string(), "0@3 1@1");
}
