//! FLP-reduct minimality, the dependency graph deciding when it can be
//! skipped, and a brute-force reference semantics.
//!
//! A compatible candidate `M` is an answer set iff no interpretation
//! `J ⊊ M` satisfies the reduct of `M`, i.e. the rules whose bodies hold in
//! `M`, with external atoms re-evaluated under `J`. Facts belong to every
//! such `J`, so only the other true ordinary atoms of `M` are varied.

mod graph;
mod reference;

use std::collections::{BTreeSet, HashMap};

pub use graph::{build_dependency_graph, needs_flp_check, DependencyGraph, Node};
pub use reference::{
    brute_force_answer_sets, brute_force_optimum, ReferenceError, ReferenceOptimum,
};

use crate::external::{ExternalEvaluator, PluginError, SignedLiteral, Truth};
use crate::ground::{AtomId, AtomKind, GroundProgram, GroundRule};
use crate::solver::engine::{Engine, Lit, Theory};

/// Truth of the external atom behind replacement atom `e` when exactly the
/// atoms of `model` are true.
pub(crate) fn external_truth(
    gp: &GroundProgram,
    e: AtomId,
    model: &BTreeSet<AtomId>,
    evaluator: &ExternalEvaluator<'_>,
) -> Result<bool, PluginError> {
    let inst = gp.instance_for(e).expect("replacement atom");
    evaluator
        .evaluate(inst, |a| Truth::from_bool(model.contains(&a)))?
        .as_bool()
        .ok_or_else(|| PluginError {
            instance: inst.to_string(),
            message: "oracle returned unknown on a complete interpretation".into(),
        })
}

fn literal_holds(
    gp: &GroundProgram,
    l: SignedLiteral,
    model: &BTreeSet<AtomId>,
    evaluator: &ExternalEvaluator<'_>,
) -> Result<bool, PluginError> {
    let value = match gp.table.kind(l.atom) {
        AtomKind::Ordinary => model.contains(&l.atom),
        _ => external_truth(gp, l.atom, model, evaluator)?,
    };
    Ok(value == l.positive)
}

fn body_holds(
    gp: &GroundProgram,
    rule: &GroundRule,
    model: &BTreeSet<AtomId>,
    evaluator: &ExternalEvaluator<'_>,
) -> Result<bool, PluginError> {
    for &l in &rule.body {
        if !literal_holds(gp, l, model, evaluator)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The rules of a ground program whose bodies hold under a candidate.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReductProgram {
    /// Indices into `GroundProgram::rules`, ascending.
    pub rules: Vec<usize>,
}

impl ReductProgram {
    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn iter<'g>(&'g self, gp: &'g GroundProgram) -> impl Iterator<Item = &'g GroundRule> + 'g {
        self.rules.iter().map(|&i| &gp.rules[i])
    }
}

/// FLP-reduct of `gp` under the candidate whose true ordinary atoms are
/// `model`. External literals are judged by their oracles, not by guesses.
pub fn flp_reduct(
    gp: &GroundProgram,
    model: &BTreeSet<AtomId>,
    evaluator: &ExternalEvaluator<'_>,
) -> Result<ReductProgram, PluginError> {
    let mut rules = Vec::new();
    for (i, rule) in gp.rules.iter().enumerate() {
        if body_holds(gp, rule, model, evaluator)? {
            rules.push(i);
        }
    }
    Ok(ReductProgram { rules })
}

/// True iff `model` satisfies every rule of `reduct`.
pub fn satisfies(
    gp: &GroundProgram,
    reduct: &ReductProgram,
    model: &BTreeSet<AtomId>,
    evaluator: &ExternalEvaluator<'_>,
) -> Result<bool, PluginError> {
    for rule in reduct.iter(gp) {
        if body_holds(gp, rule, model, evaluator)? && !rule.head.iter().any(|h| model.contains(h)) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn free_atoms(gp: &GroundProgram, model: &BTreeSet<AtomId>) -> Vec<AtomId> {
    model
        .iter()
        .copied()
        .filter(|a| gp.table.kind(*a) == AtomKind::Ordinary && !gp.facts.contains(a))
        .collect()
}

/// Guesses of external atoms in the inner search are checked against their
/// oracles under the interpretation the search settled on.
struct InnerCompatibility<'a, 'g> {
    gp: &'g GroundProgram,
    evaluator: &'a ExternalEvaluator<'g>,
    fixed: BTreeSet<AtomId>,
    free: &'a [AtomId],
    var_of: &'a HashMap<AtomId, u32>,
    instances: &'a [AtomId],
}

impl Theory for InnerCompatibility<'_, '_> {
    type Error = PluginError;

    fn check(&mut self, engine: &Engine, complete: bool) -> Result<Vec<Vec<Lit>>, PluginError> {
        if !complete {
            return Ok(vec![]);
        }
        let mut j = self.fixed.clone();
        j.extend(
            self.free
                .iter()
                .filter(|a| engine.value(self.var_of[a]) == Some(true)),
        );
        let mut nogoods = Vec::new();
        for &e in self.instances {
            let verdict = external_truth(self.gp, e, &j, self.evaluator)?;
            let var = self.var_of[&e];
            if engine.value(var) == Some(verdict) {
                continue;
            }
            let inst = self.gp.instance_for(e).expect("replacement atom");
            let mut ng: Vec<Lit> = inst
                .relevant_input_atoms
                .iter()
                .filter_map(|a| self.var_of.get(a).map(|&v| Lit::new(v, j.contains(a))))
                .collect();
            ng.push(Lit::new(var, !verdict));
            nogoods.push(ng);
        }
        Ok(nogoods)
    }
}

/// Decides whether `model` is a minimal model of `reduct` by searching for
/// a smaller one with the nogood engine: non-fact true atoms are free
/// variables, atoms outside `model` are false, external atoms in reduct
/// bodies are guessed and checked for compatibility.
pub fn is_minimal_model(
    gp: &GroundProgram,
    reduct: &ReductProgram,
    model: &BTreeSet<AtomId>,
    evaluator: &ExternalEvaluator<'_>,
) -> Result<bool, PluginError> {
    let free = free_atoms(gp, model);
    if free.is_empty() {
        return Ok(true);
    }
    let mut var_of: HashMap<AtomId, u32> = HashMap::new();
    for (i, a) in free.iter().enumerate() {
        var_of.insert(*a, i as u32);
    }
    let mut instances = Vec::new();
    for rule in reduct.iter(gp) {
        for l in &rule.body {
            if gp.table.kind(l.atom) != AtomKind::Ordinary && !var_of.contains_key(&l.atom) {
                var_of.insert(l.atom, var_of.len() as u32);
                instances.push(l.atom);
            }
        }
    }
    let fixed: BTreeSet<AtomId> = model
        .iter()
        .copied()
        .filter(|a| gp.facts.contains(a))
        .collect();

    let mut engine = Engine::new(var_of.len() as u32);
    // J must differ from the candidate.
    let all_free: Vec<Lit> = free.iter().map(|a| Lit::new(var_of[a], true)).collect();
    let mut consistent = engine.add_nogood(&all_free);
    'rules: for rule in reduct.iter(gp) {
        let mut ng = Vec::new();
        for l in &rule.body {
            match var_of.get(&l.atom) {
                Some(&v) => ng.push(Lit::new(v, l.positive)),
                // Fixed atoms keep their value from the candidate, under
                // which the body holds.
                None if (model.contains(&l.atom) == l.positive) => {}
                None => continue 'rules,
            }
        }
        for h in &rule.head {
            match var_of.get(h) {
                Some(&v) => ng.push(Lit::new(v, false)),
                None if fixed.contains(h) => continue 'rules,
                None => {}
            }
        }
        consistent &= engine.add_nogood(&ng);
    }
    if !consistent {
        return Ok(true);
    }
    let mut theory = InnerCompatibility {
        gp,
        evaluator,
        fixed,
        free: &free,
        var_of: &var_of,
        instances: &instances,
    };
    Ok(!engine.search(&mut theory)?)
}

/// Reference check of minimality by enumerating every proper subset of the
/// non-fact true atoms.
pub fn is_minimal_model_exhaustive(
    gp: &GroundProgram,
    reduct: &ReductProgram,
    model: &BTreeSet<AtomId>,
    evaluator: &ExternalEvaluator<'_>,
) -> Result<bool, PluginError> {
    let free = free_atoms(gp, model);
    assert!(free.len() < 32, "too many atoms for exhaustive minimality");
    let base: BTreeSet<AtomId> = model
        .iter()
        .copied()
        .filter(|a| gp.facts.contains(a))
        .collect();
    for mask in 0..(1u32 << free.len()) - 1 {
        let mut j = base.clone();
        j.extend(
            free.iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, a)| *a),
        );
        if satisfies(gp, reduct, &j, evaluator)? {
            return Ok(false);
        }
    }
    Ok(true)
}
