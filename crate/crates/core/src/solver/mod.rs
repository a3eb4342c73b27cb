//! Answer-set search for ground HEX programs.
//!
//! The engine searches over the guessing translation, where each external
//! instance is an exactly-one choice between its `e_` and `ne_` atoms.
//! External oracles are consulted on partial assignments (learning
//! input-output nogoods) and on every complete candidate (compatibility).
//! Compatible candidates pass the FLP minimality check unless the
//! dependency graph shows it cannot fail.

mod cost;
mod encode;
pub(crate) mod engine;
mod theory;

use std::collections::HashSet;
use std::fmt;
use std::ops::AddAssign;

use thiserror::Error;

pub use cost::Cost;
pub use theory::{partial_nogoods, verify_candidate, Compatibility};

use encode::{atom_var, encode_static_nogoods, lit};
use engine::Engine;
use theory::{Bound, HexTheory};

use crate::external::{ExternalEvaluator, Nogood, PluginError, PluginRegistry};
use crate::flp::{build_dependency_graph, needs_flp_check};
use crate::ground::{AtomId, GroundProgram};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Minimization {
    Off,
    #[default]
    Deletion,
    QuickXplain,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FlpMode {
    /// Check every compatible candidate.
    Explicit,
    /// Check only when the dependency graph has a cycle.
    #[default]
    SkipAuto,
    /// Never check. Unsound on programs with cyclic external dependencies.
    Off,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    /// Evaluate externals on partial assignments.
    pub partial_eval: bool,
    /// Decisions between two partial evaluations.
    pub eval_frequency: u32,
    pub minimization: Minimization,
    pub flp_mode: FlpMode,
    /// Stop after this many answer sets; 0 means all.
    pub max_models: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            partial_eval: true,
            eval_frequency: 1,
            minimization: Minimization::default(),
            flp_mode: FlpMode::default(),
            max_models: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Plugin(#[from] PluginError),
    #[error("evaluation frequency must be at least 1")]
    ZeroEvalFrequency,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolverStats {
    pub decisions: u64,
    pub conflicts: u64,
    pub external_calls: u64,
    pub candidates_checked: u64,
    pub candidates_incompatible: u64,
    pub flp_checks_run: u64,
    pub flp_checks_skipped: u64,
    pub flp_rejected: u64,
    pub learned_external_nogoods: u64,
}

impl AddAssign<&SolverStats> for SolverStats {
    fn add_assign(&mut self, o: &SolverStats) {
        self.decisions += o.decisions;
        self.conflicts += o.conflicts;
        self.external_calls += o.external_calls;
        self.candidates_checked += o.candidates_checked;
        self.candidates_incompatible += o.candidates_incompatible;
        self.flp_checks_run += o.flp_checks_run;
        self.flp_checks_skipped += o.flp_checks_skipped;
        self.flp_rejected += o.flp_rejected;
        self.learned_external_nogoods += o.learned_external_nogoods;
    }
}

impl fmt::Display for SolverStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows = [
            ("decisions", self.decisions),
            ("conflicts", self.conflicts),
            ("external calls", self.external_calls),
            ("candidates checked", self.candidates_checked),
            ("candidates incompatible", self.candidates_incompatible),
            ("flp checks run", self.flp_checks_run),
            ("flp checks skipped", self.flp_checks_skipped),
            ("flp rejected", self.flp_rejected),
            ("learned external nogoods", self.learned_external_nogoods),
        ];
        for (name, value) in rows {
            writeln!(f, "{name}: {value}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnswerSet {
    /// True ordinary atoms, ascending.
    pub atoms: Vec<AtomId>,
    pub cost: Cost,
}

impl AnswerSet {
    /// Atom texts, sorted.
    pub fn texts(&self, gp: &GroundProgram) -> Vec<String> {
        let mut out: Vec<String> = self
            .atoms
            .iter()
            .map(|&a| gp.table.text(a).to_string())
            .collect();
        out.sort();
        out
    }

    pub fn display<'a>(&'a self, gp: &'a GroundProgram) -> impl fmt::Display + 'a {
        struct D(Vec<String>);
        impl fmt::Display for D {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{{{}}}", self.0.join(", "))
            }
        }
        D(self.texts(gp))
    }
}

/// Enumerates answer sets of a ground program one at a time.
pub struct Solver<'g> {
    engine: Engine,
    theory: HexTheory<'g>,
    found: usize,
    done: bool,
    failed: bool,
}

impl<'g> Solver<'g> {
    pub fn new(
        gp: &'g GroundProgram,
        registry: &'g PluginRegistry,
        config: SolverConfig,
    ) -> Result<Self, SolveError> {
        if config.eval_frequency == 0 {
            return Err(SolveError::ZeroEvalFrequency);
        }
        let enc = encode_static_nogoods(gp);
        let mut engine = Engine::new(enc.num_vars);
        for v in 0..enc.num_atoms {
            engine.set_decidable(v, true);
        }
        for ng in &enc.nogoods {
            engine.add_nogood(ng);
        }
        let flp_needed = needs_flp_check(&build_dependency_graph(gp));
        let theory = HexTheory::new(gp, ExternalEvaluator::new(registry), config, flp_needed);
        Ok(Self {
            engine,
            theory,
            found: 0,
            done: false,
            failed: false,
        })
    }

    pub(crate) fn with_bound(mut self, bound: Bound) -> Self {
        self.theory.bound = bound;
        self
    }

    /// Whether FLP checks run under the `skip-auto` mode.
    pub fn flp_needed(&self) -> bool {
        self.theory.flp_needed
    }

    pub fn next_answer_set(&mut self) -> Result<Option<AnswerSet>, SolveError> {
        let max = self.theory.config.max_models;
        if self.done || self.failed || (max > 0 && self.found >= max) {
            return Ok(None);
        }
        match self.engine.search(&mut self.theory) {
            Err(e) => {
                self.failed = true;
                Err(e)
            }
            Ok(false) => {
                self.done = true;
                Ok(None)
            }
            Ok(true) => {
                self.found += 1;
                let gp = self.theory.gp;
                let atoms = gp
                    .ordinary_atoms()
                    .filter(|&a| self.engine.value(atom_var(a)) == Some(true))
                    .collect();
                let cost = self
                    .theory
                    .accepted_cost
                    .take()
                    .unwrap_or_else(|| self.theory.cost(&self.engine));
                let block = self.theory.blocking_nogood(&self.engine);
                if !self.engine.add_nogood(&block) {
                    self.done = true;
                }
                Ok(Some(AnswerSet { atoms, cost }))
            }
        }
    }

    pub fn stats(&self) -> SolverStats {
        let mut s = self.theory.stats.clone();
        s.decisions = self.engine.decisions;
        s.conflicts = self.engine.conflicts;
        s.external_calls = self.theory.evaluator.calls();
        s
    }

    /// Input-output nogoods learned from oracle calls so far.
    pub fn learned_nogoods(&self) -> &HashSet<Nogood> {
        &self.theory.learned
    }

    /// Adds a nogood over program atoms, such as one learned by another
    /// solver on the same ground program.
    pub fn add_nogood(&mut self, nogood: &Nogood) {
        let lits: Vec<_> = nogood.iter().map(lit).collect();
        if !self.engine.add_nogood(&lits) {
            self.done = true;
        }
    }
}

impl Iterator for Solver<'_> {
    type Item = Result<AnswerSet, SolveError>;

    fn next(&mut self) -> Option<Self::Item> {
        self.next_answer_set().transpose()
    }
}

#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub answer_sets: Vec<AnswerSet>,
    pub stats: SolverStats,
}

pub fn solve(
    gp: &GroundProgram,
    registry: &PluginRegistry,
    config: SolverConfig,
) -> Result<SolveOutcome, SolveError> {
    let mut solver = Solver::new(gp, registry, config)?;
    let mut answer_sets = Vec::new();
    while let Some(a) = solver.next_answer_set()? {
        answer_sets.push(a);
    }
    Ok(SolveOutcome {
        answer_sets,
        stats: solver.stats(),
    })
}

#[derive(Clone, Debug)]
pub struct Optimization {
    /// Answer sets found while descending, each strictly cheaper than the
    /// one before.
    pub improving: Vec<AnswerSet>,
    /// `None` iff the program has no answer set.
    pub optimum: Option<Cost>,
    /// Answer sets of optimal cost, up to `max_models` (0 means all).
    pub optimal: Vec<AnswerSet>,
    pub stats: SolverStats,
}

/// Branch-and-bound over weak constraints, then enumeration of all answer
/// sets at the optimum.
pub fn optimize(
    gp: &GroundProgram,
    registry: &PluginRegistry,
    config: SolverConfig,
) -> Result<Optimization, SolveError> {
    let descend = SolverConfig {
        max_models: 0,
        ..config
    };
    let mut solver = Solver::new(gp, registry, descend)?;
    let mut improving: Vec<AnswerSet> = Vec::new();
    loop {
        if let Some(best) = improving.last() {
            solver.theory.bound = Bound::Below(best.cost.clone());
        }
        match solver.next_answer_set()? {
            Some(a) => improving.push(a),
            None => break,
        }
    }
    let mut stats = solver.stats();
    let Some(best) = improving.last().map(|a| a.cost.clone()) else {
        return Ok(Optimization {
            improving,
            optimum: None,
            optimal: vec![],
            stats,
        });
    };
    let mut enumerate = Solver::new(gp, registry, config)?.with_bound(Bound::AtMost(best.clone()));
    for ng in solver.learned_nogoods() {
        enumerate.add_nogood(ng);
    }
    let mut optimal = Vec::new();
    while let Some(a) = enumerate.next_answer_set()? {
        optimal.push(a);
    }
    stats += &enumerate.stats();
    Ok(Optimization {
        improving,
        optimum: Some(best),
        optimal,
        stats,
    })
}
