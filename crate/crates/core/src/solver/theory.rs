//! External evaluation during search: partial checks with nogood learning,
//! the compatibility check on complete candidates, the optimization bound
//! and the FLP check.

use std::collections::{BTreeSet, HashSet};

use super::encode::{atom_var, lit};
use super::engine::{Engine, Lit, Theory};
use super::{Cost, FlpMode, Minimization, SolveError, SolverConfig, SolverStats};
use crate::external::{
    default_learn_nogood, learn_partial_nogood, minimize_nogood_deletion,
    minimize_nogood_quickxplain, ExternalEvaluator, MinimizeError, Nogood, PartialInterpretation,
    PluginError, SignedLiteral, Truth,
};
use crate::flp::{flp_reduct, is_minimal_model};
use crate::ground::{AtomId, AtomKind, ExternalInstance, GroundProgram};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Compatibility {
    Compatible,
    /// One nogood per replacement atom whose guess disagrees with its oracle.
    Incompatible(Vec<Nogood>),
}

fn minimize(
    instance: &ExternalInstance,
    nogood: Nogood,
    verdict: bool,
    evaluator: &ExternalEvaluator<'_>,
    mode: Minimization,
) -> Result<Nogood, PluginError> {
    let repl = SignedLiteral::new(instance.replacement, !verdict);
    let validator = |c: &[SignedLiteral]| evaluator.certifies(instance, c);
    let result = match mode {
        Minimization::Off => return Ok(nogood),
        Minimization::Deletion => minimize_nogood_deletion(&nogood, repl, validator),
        Minimization::QuickXplain => minimize_nogood_quickxplain(&nogood, repl, validator),
    };
    match result {
        Ok(n) => Ok(n),
        Err(MinimizeError::Validator(e)) => Err(e),
        // The oracle did not confirm its own verdict; keep the sound
        // unminimized nogood.
        Err(_) => Ok(nogood),
    }
}

/// Evaluates every external instance under the partial assignment `truth`.
/// Instances with a definite verdict whose replacement atom is unassigned
/// or guessed the other way yield a partial nogood.
pub fn partial_nogoods(
    gp: &GroundProgram,
    evaluator: &ExternalEvaluator<'_>,
    truth: impl Fn(AtomId) -> Truth,
    minimization: Minimization,
) -> Result<Vec<Nogood>, PluginError> {
    let mut out = Vec::new();
    for inst in &gp.externals {
        let guess = truth(inst.replacement);
        let partial = PartialInterpretation::from_fn(inst, &truth);
        let verdict = evaluator.evaluate(inst, |a| partial.get(a))?;
        let Some(v) = verdict.as_bool() else { continue };
        if guess == Truth::from_bool(v) {
            continue;
        }
        if let Some(ng) = learn_partial_nogood(inst, &partial, verdict) {
            out.push(minimize(inst, ng, v, evaluator, minimization)?);
        }
    }
    Ok(out)
}

/// Compatibility check of a complete candidate given by its true atoms,
/// ordinary and replacement.
pub fn verify_candidate(
    gp: &GroundProgram,
    candidate: &BTreeSet<AtomId>,
    evaluator: &ExternalEvaluator<'_>,
    minimization: Minimization,
) -> Result<Compatibility, PluginError> {
    let mut nogoods = Vec::new();
    for inst in &gp.externals {
        let partial =
            PartialInterpretation::from_fn(inst, |a| Truth::from_bool(candidate.contains(&a)));
        let verdict = evaluator.evaluate(inst, |a| partial.get(a))?;
        let Some(v) = verdict.as_bool() else {
            return Err(PluginError {
                instance: inst.to_string(),
                message: "oracle returned unknown on a complete interpretation".into(),
            });
        };
        if candidate.contains(&inst.replacement) == v {
            continue;
        }
        let ng = default_learn_nogood(inst, &partial, verdict).expect("definite verdict");
        nogoods.push(minimize(inst, ng, v, evaluator, minimization)?);
    }
    Ok(if nogoods.is_empty() {
        Compatibility::Compatible
    } else {
        Compatibility::Incompatible(nogoods)
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Bound {
    Unbounded,
    /// Accept only candidates strictly cheaper than this.
    Below(Cost),
    /// Accept candidates no more expensive than this.
    AtMost(Cost),
}

pub(crate) struct HexTheory<'g> {
    pub gp: &'g GroundProgram,
    pub evaluator: ExternalEvaluator<'g>,
    pub config: SolverConfig,
    pub flp_needed: bool,
    pub bound: Bound,
    pub learned: HashSet<Nogood>,
    pub stats: SolverStats,
    pub accepted_cost: Option<Cost>,
    last_eval: Option<u64>,
}

fn truth_in(engine: &Engine, atom: AtomId) -> Truth {
    match engine.value(atom_var(atom)) {
        Some(b) => Truth::from_bool(b),
        None => Truth::Unassigned,
    }
}

fn holds(engine: &Engine, l: SignedLiteral) -> bool {
    engine.value(atom_var(l.atom)) == Some(l.positive)
}

impl<'g> HexTheory<'g> {
    pub(crate) fn new(
        gp: &'g GroundProgram,
        evaluator: ExternalEvaluator<'g>,
        config: SolverConfig,
        flp_needed: bool,
    ) -> Self {
        Self {
            gp,
            evaluator,
            config,
            flp_needed,
            bound: Bound::Unbounded,
            learned: HashSet::new(),
            stats: SolverStats::default(),
            accepted_cost: None,
            last_eval: None,
        }
    }

    /// Keeps the nogoods not learned before, in engine form.
    fn fresh(&mut self, nogoods: Vec<Nogood>) -> Vec<Vec<Lit>> {
        let mut out = Vec::new();
        for ng in nogoods {
            let lits = ng.iter().map(lit).collect();
            if self.learned.insert(ng) {
                self.stats.learned_external_nogoods += 1;
            }
            out.push(lits);
        }
        out
    }

    pub(crate) fn cost(&self, engine: &Engine) -> Cost {
        let mut cost = Cost::zero(&self.gp.weak_levels);
        for w in &self.gp.weak {
            if w.body.iter().all(|&l| holds(engine, l)) {
                cost.add(w.level, w.weight);
            }
        }
        cost
    }

    /// Forbids the current candidate over ordinary and replacement atoms.
    pub(crate) fn blocking_nogood(&self, engine: &Engine) -> Vec<Lit> {
        self.gp
            .table
            .ids()
            .filter(|&a| self.gp.table.kind(a) != AtomKind::ReplacementNegative)
            .map(|a| Lit::new(atom_var(a), engine.value(atom_var(a)) == Some(true)))
            .collect()
    }

    /// A nogood excluding every assignment at least as expensive as the
    /// current one. With nonnegative weights, any assignment satisfying the
    /// same weighted weak bodies costs at least as much.
    fn bound_nogood(&self, engine: &Engine) -> Vec<Lit> {
        if self.gp.weak.iter().any(|w| w.weight < 0) {
            return self.blocking_nogood(engine);
        }
        let mut lits: Vec<Lit> = self
            .gp
            .weak
            .iter()
            .filter(|w| w.weight > 0 && w.body.iter().all(|&l| holds(engine, l)))
            .flat_map(|w| w.body.iter().map(|&l| lit(l)))
            .collect();
        lits.sort();
        lits.dedup();
        lits
    }

    fn check_partial(&mut self, engine: &Engine) -> Result<Vec<Vec<Lit>>, SolveError> {
        if !self.config.partial_eval || self.gp.externals.is_empty() {
            return Ok(vec![]);
        }
        let due = match self.last_eval {
            None => true,
            Some(last) => engine.decisions - last >= u64::from(self.config.eval_frequency),
        };
        if !due {
            return Ok(vec![]);
        }
        self.last_eval = Some(engine.decisions);
        let found = partial_nogoods(
            self.gp,
            &self.evaluator,
            |a| truth_in(engine, a),
            self.config.minimization,
        )?;
        let found = found
            .into_iter()
            .filter(|n| !self.learned.contains(n))
            .collect();
        Ok(self.fresh(found))
    }

    fn check_complete(&mut self, engine: &Engine) -> Result<Vec<Vec<Lit>>, SolveError> {
        self.stats.candidates_checked += 1;
        let candidate: BTreeSet<AtomId> = self
            .gp
            .table
            .ids()
            .filter(|&a| engine.value(atom_var(a)) == Some(true))
            .collect();
        if let Compatibility::Incompatible(nogoods) = verify_candidate(
            self.gp,
            &candidate,
            &self.evaluator,
            self.config.minimization,
        )? {
            self.stats.candidates_incompatible += 1;
            return Ok(self.fresh(nogoods));
        }

        let cost = self.cost(engine);
        let rejected = match &self.bound {
            Bound::Unbounded => false,
            Bound::Below(best) => cost >= *best,
            Bound::AtMost(best) => cost > *best,
        };
        if rejected {
            return Ok(vec![self.bound_nogood(engine)]);
        }

        let run = match self.config.flp_mode {
            FlpMode::Explicit => true,
            FlpMode::SkipAuto => self.flp_needed,
            FlpMode::Off => false,
        };
        if run {
            self.stats.flp_checks_run += 1;
            let model: BTreeSet<AtomId> = candidate
                .into_iter()
                .filter(|&a| self.gp.table.kind(a) == AtomKind::Ordinary)
                .collect();
            let reduct = flp_reduct(self.gp, &model, &self.evaluator)?;
            if !is_minimal_model(self.gp, &reduct, &model, &self.evaluator)? {
                self.stats.flp_rejected += 1;
                return Ok(vec![self.blocking_nogood(engine)]);
            }
        } else {
            self.stats.flp_checks_skipped += 1;
        }
        self.accepted_cost = Some(cost);
        Ok(vec![])
    }
}

impl Theory for HexTheory<'_> {
    type Error = SolveError;

    fn check(&mut self, engine: &Engine, complete: bool) -> Result<Vec<Vec<Lit>>, SolveError> {
        if complete {
            self.check_complete(engine)
        } else {
            self.check_partial(engine)
        }
    }
}
