use std::collections::{BTreeSet, HashMap, HashSet};

use indexmap::IndexSet;

use super::program::{ExternalInstance, GroundProgram, GroundRule, GroundWeak, InstanceInput};
use super::table::{AtomId, AtomKind};
use super::{Domain, GroundConfig, GroundError};
use crate::external::{
    DependencyTag, Extension, InputKind, InputValue, Inputs, PluginRegistry, SignedLiteral, Truth,
};
use crate::syntax::{
    bound_variables, check_safety, BodyAtom, Literal, OrdinaryAtom, Program, Term,
};

type Subst = HashMap<String, Term>;

fn match_term(pattern: &Term, ground: &Term, s: &mut Subst) -> bool {
    match (pattern, ground) {
        (Term::Var(v), g) => match s.get(v) {
            Some(bound) => bound == g,
            None => {
                s.insert(v.clone(), g.clone());
                true
            }
        },
        (Term::Func(f, args), Term::Func(g, gargs)) => {
            f == g
                && args.len() == gargs.len()
                && args.iter().zip(gargs).all(|(a, b)| match_term(a, b, s))
        }
        (p, g) => p == g,
    }
}

fn match_args(patterns: &[Term], ground: &[Term], s: &mut Subst) -> bool {
    patterns.len() == ground.len()
        && patterns
            .iter()
            .zip(ground)
            .all(|(p, g)| match_term(p, g, s))
}

fn apply(term: &Term, s: &Subst) -> Term {
    match term {
        Term::Var(v) => s.get(v).cloned().unwrap_or_else(|| term.clone()),
        Term::Func(f, args) => Term::Func(f.clone(), args.iter().map(|a| apply(a, s)).collect()),
        _ => term.clone(),
    }
}

fn apply_atom(atom: &OrdinaryAtom, s: &Subst) -> OrdinaryAtom {
    OrdinaryAtom::new(
        atom.predicate.clone(),
        atom.args.iter().map(|a| apply(a, s)).collect(),
    )
}

/// Order in which body literals bind variables: positive ordinary atoms
/// first, then positive external atoms as soon as their inputs are bound.
fn binding_plan(body: &[Literal]) -> Vec<usize> {
    let mut plan: Vec<usize> = body
        .iter()
        .enumerate()
        .filter(|(_, l)| !l.negated && matches!(l.atom, BodyAtom::Ordinary(_)))
        .map(|(i, _)| i)
        .collect();
    let prefix: Vec<Literal> = plan.iter().map(|&i| body[i].clone()).collect();
    let mut bound: BTreeSet<String> = bound_variables(&prefix)
        .into_iter()
        .map(str::to_string)
        .collect();
    let mut pending: Vec<usize> = body
        .iter()
        .enumerate()
        .filter(|(_, l)| !l.negated && matches!(l.atom, BodyAtom::External(_)))
        .map(|(i, _)| i)
        .collect();
    while !pending.is_empty() {
        let ready = pending.iter().position(|&i| match &body[i].atom {
            BodyAtom::External(e) => e.input_vars().iter().all(|v| bound.contains(*v)),
            BodyAtom::Ordinary(_) => unreachable!(),
        });
        // Safety has been checked, so some pending external is always ready.
        let Some(k) = ready else { break };
        let i = pending.remove(k);
        if let BodyAtom::External(e) = &body[i].atom {
            bound.extend(e.output_vars().into_iter().map(str::to_string));
        }
        plan.push(i);
    }
    plan
}

pub(super) struct Instantiator<'a> {
    program: &'a Program,
    registry: &'a PluginRegistry,
    config: &'a GroundConfig,
    rule_plans: Vec<Vec<usize>>,
    weak_plans: Vec<Vec<usize>>,
    domain: BTreeSet<Term>,
    invented: Vec<(Term, String)>,
    possible: IndexSet<OrdinaryAtom>,
    by_predicate: HashMap<String, Vec<usize>>,
    enumerations: HashMap<(String, Vec<Term>), Vec<Vec<Term>>>,
}

impl<'a> Instantiator<'a> {
    pub(super) fn new(
        program: &'a Program,
        registry: &'a PluginRegistry,
        config: &'a GroundConfig,
    ) -> Result<Self, GroundError> {
        for rule in &program.rules {
            check_safety(rule, registry)?;
        }
        for e in program.externals() {
            registry.validate(e)?;
        }
        let mut domain = BTreeSet::new();
        let mut note = |t: &Term| {
            t.visit(&mut |s| {
                if s.is_ground() {
                    domain.insert(s.clone());
                }
            })
        };
        for r in &program.rules {
            r.head.iter().flat_map(|h| &h.args).for_each(&mut note);
        }
        for l in program.body_literals() {
            match &l.atom {
                BodyAtom::Ordinary(a) => a.args.iter().for_each(&mut note),
                BodyAtom::External(e) => {
                    let kinds = &registry.get(&e.name).expect("validated").inputs;
                    e.inputs
                        .iter()
                        .zip(kinds)
                        .filter(|(_, k)| **k == InputKind::Constant)
                        .for_each(|(t, _)| note(t));
                    e.outputs.iter().for_each(&mut note);
                }
            }
        }
        Ok(Self {
            program,
            registry,
            config,
            rule_plans: program
                .rules
                .iter()
                .map(|r| binding_plan(&r.body))
                .collect(),
            weak_plans: program
                .weak_constraints
                .iter()
                .map(|w| binding_plan(&w.body))
                .collect(),
            domain,
            invented: Vec::new(),
            possible: IndexSet::new(),
            by_predicate: HashMap::new(),
            enumerations: HashMap::new(),
        })
    }

    fn add_to_domain(&mut self, term: &Term, source: &str) -> Result<(), GroundError> {
        let mut fresh = Vec::new();
        term.visit(&mut |t| {
            if !self.domain.contains(t) {
                fresh.push(t.clone());
            }
        });
        for t in fresh {
            if self.domain.insert(t.clone()) {
                self.invented.push((t, source.to_string()));
                if self.invented.len() > self.config.max_invention {
                    return Err(GroundError::InventionBudget {
                        origin: source.to_string(),
                        limit: self.config.max_invention,
                    });
                }
            }
        }
        Ok(())
    }

    fn enumerate(&mut self, name: &str, inputs: Vec<Term>) -> Result<Vec<Vec<Term>>, GroundError> {
        let key = (name.to_string(), inputs);
        if let Some(cached) = self.enumerations.get(&key) {
            return Ok(cached.clone());
        }
        let descriptor = self.registry.get(name).expect("validated");
        let tuples = {
            let values = key
                .1
                .iter()
                .zip(&descriptor.inputs)
                .map(|(t, kind)| match kind {
                    InputKind::Constant => InputValue::Constant(t),
                    InputKind::Predicate => {
                        let pred = t.as_str().expect("validated predicate input");
                        let entries = self
                            .by_predicate
                            .get(pred)
                            .into_iter()
                            .flatten()
                            .map(|&i| (self.possible[i].args.as_slice(), Truth::True))
                            .collect();
                        InputValue::Predicate(Extension::new(entries))
                    }
                })
                .collect();
            descriptor
                .source()
                .enumerate(&Inputs::new(values))
                .map_err(|e| GroundError::Plugin {
                    name: name.to_string(),
                    message: e.0,
                })?
        };
        for tuple in &tuples {
            if tuple.len() != descriptor.output_arity {
                return Err(GroundError::Plugin {
                    name: name.to_string(),
                    message: format!(
                        "enumerated a tuple of arity {}, expected {}",
                        tuple.len(),
                        descriptor.output_arity
                    ),
                });
            }
            for t in tuple {
                self.add_to_domain(t, &format!("&{name}"))?;
            }
        }
        self.enumerations.insert(key, tuples.clone());
        Ok(tuples)
    }

    fn bindings(&mut self, body: &[Literal], plan: &[usize]) -> Result<Vec<Subst>, GroundError> {
        let mut out = Vec::new();
        self.extend_bindings(body, plan, Subst::new(), &mut out)?;
        Ok(out)
    }

    fn extend_bindings(
        &mut self,
        body: &[Literal],
        plan: &[usize],
        s: Subst,
        out: &mut Vec<Subst>,
    ) -> Result<(), GroundError> {
        let Some((&next, rest)) = plan.split_first() else {
            out.push(s);
            return Ok(());
        };
        match &body[next].atom {
            BodyAtom::Ordinary(a) => {
                let candidates = self
                    .by_predicate
                    .get(&a.predicate)
                    .cloned()
                    .unwrap_or_default();
                for i in candidates {
                    let mut s2 = s.clone();
                    if match_args(&a.args, &self.possible[i].args, &mut s2) {
                        self.extend_bindings(body, rest, s2, out)?;
                    }
                }
            }
            BodyAtom::External(e) => {
                let outputs: Vec<Term> = e.outputs.iter().map(|t| apply(t, &s)).collect();
                if outputs.iter().all(Term::is_ground) {
                    // Nothing to bind; the guess decides the truth value.
                    return self.extend_bindings(body, rest, s, out);
                }
                let inputs = e.inputs.iter().map(|t| apply(t, &s)).collect();
                for tuple in self.enumerate(&e.name, inputs)? {
                    let mut s2 = s.clone();
                    if match_args(&e.outputs, &tuple, &mut s2) {
                        self.extend_bindings(body, rest, s2, out)?;
                    }
                }
            }
        }
        Ok(())
    }

    fn add_possible(&mut self, atom: OrdinaryAtom) -> bool {
        let (i, fresh) = self.possible.insert_full(atom);
        if fresh {
            let pred = self.possible[i].predicate.clone();
            self.by_predicate.entry(pred).or_default().push(i);
        }
        fresh
    }

    /// Computes the potentially derivable atoms, inventing values along the
    /// way, until nothing new appears.
    pub(super) fn saturate(&mut self) -> Result<(), GroundError> {
        loop {
            let mut derived = Vec::new();
            for (r, rule) in self.program.rules.iter().enumerate() {
                let plan = self.rule_plans[r].clone();
                for s in self.bindings(&rule.body, &plan)? {
                    derived.extend(rule.head.iter().map(|h| apply_atom(h, &s)));
                }
            }
            let mut changed = false;
            for atom in derived {
                if !self.possible.contains(&atom) {
                    for t in &atom.args {
                        self.add_to_domain(t, &atom.predicate)?;
                    }
                    changed |= self.add_possible(atom);
                }
            }
            if !changed {
                return Ok(());
            }
            self.enumerations.clear();
        }
    }

    pub(super) fn domain(self) -> Domain {
        Domain {
            constants: self.domain,
            invented: self.invented,
        }
    }

    /// Emits the ground program over the saturated atom set.
    pub(super) fn emit(mut self) -> Result<(GroundProgram, Domain), GroundError> {
        let mut gp = GroundProgram::default();
        let mut instances: HashMap<(String, Vec<Term>, Vec<Term>), usize> = HashMap::new();
        let mut seen_rules: HashSet<(Vec<AtomId>, Vec<SignedLiteral>)> = HashSet::new();

        for (r, rule) in self.program.rules.iter().enumerate() {
            let plan = self.rule_plans[r].clone();
            for s in self.bindings(&rule.body, &plan)? {
                let head: Vec<AtomId> = rule
                    .head
                    .iter()
                    .map(|h| gp.table.intern_ordinary(&apply_atom(h, &s)))
                    .collect();
                let body = self.ground_body(&rule.body, &s, &mut gp, &mut instances, true);
                let mut key_head = head.clone();
                key_head.sort();
                key_head.dedup();
                let mut key_body = body.clone();
                key_body.sort();
                key_body.dedup();
                if seen_rules.insert((key_head, key_body)) {
                    if head.len() == 1 && body.is_empty() {
                        gp.facts.insert(head[0]);
                    }
                    gp.rules.push(GroundRule { head, body });
                }
            }
        }

        let mut seen_weak = HashSet::new();
        for (w, weak) in self.program.weak_constraints.iter().enumerate() {
            let plan = self.weak_plans[w].clone();
            for s in self.bindings(&weak.body, &plan)? {
                let body = self.ground_body(&weak.body, &s, &mut gp, &mut instances, false);
                let mut key = body.clone();
                key.sort();
                key.dedup();
                if seen_weak.insert((key, weak.weight, weak.level)) {
                    gp.weak.push(GroundWeak {
                        body,
                        weight: weak.weight,
                        level: weak.level,
                    });
                }
            }
        }

        let levels: BTreeSet<i64> = self
            .program
            .weak_constraints
            .iter()
            .map(|w| w.level)
            .collect();
        gp.weak_levels = levels.into_iter().rev().collect();
        self.attach_inputs(&mut gp);
        Ok((gp, self.domain()))
    }

    /// Grounds a body under `s`. Negative literals over atoms that can never
    /// be derived are dropped from rules but kept in weak constraints, whose
    /// identity depends on the literal set.
    fn ground_body(
        &self,
        body: &[Literal],
        s: &Subst,
        gp: &mut GroundProgram,
        instances: &mut HashMap<(String, Vec<Term>, Vec<Term>), usize>,
        simplify: bool,
    ) -> Vec<SignedLiteral> {
        let mut out = Vec::with_capacity(body.len());
        for l in body {
            match &l.atom {
                BodyAtom::Ordinary(a) => {
                    let g = apply_atom(a, s);
                    if l.negated && simplify && !self.possible.contains(&g) {
                        continue;
                    }
                    out.push(SignedLiteral::new(gp.table.intern_ordinary(&g), !l.negated));
                }
                BodyAtom::External(e) => {
                    let inputs: Vec<Term> = e.inputs.iter().map(|t| apply(t, s)).collect();
                    let outputs: Vec<Term> = e.outputs.iter().map(|t| apply(t, s)).collect();
                    let key = (e.name.clone(), inputs, outputs);
                    let idx = match instances.get(&key) {
                        Some(&i) => i,
                        None => {
                            let i = self.new_instance(gp, &key);
                            instances.insert(key, i);
                            i
                        }
                    };
                    out.push(SignedLiteral::new(
                        gp.externals[idx].replacement,
                        !l.negated,
                    ));
                }
            }
        }
        out
    }

    fn new_instance(&self, gp: &mut GroundProgram, key: &(String, Vec<Term>, Vec<Term>)) -> usize {
        let (name, inputs, outputs) = key;
        let descriptor = self.registry.get(name).expect("validated");
        let inputs = inputs
            .iter()
            .zip(&descriptor.inputs)
            .map(|(t, kind)| match kind {
                InputKind::Constant => InstanceInput::Constant(t.clone()),
                InputKind::Predicate => InstanceInput::Predicate {
                    name: t.as_str().expect("validated").to_string(),
                    atoms: Vec::new(),
                    relevant: true,
                },
            })
            .collect();
        let mut inst = ExternalInstance {
            plugin: name.clone(),
            inputs,
            outputs: outputs.clone(),
            replacement: AtomId(0),
            negative: AtomId(0),
            relevant_input_atoms: Vec::new(),
        };
        inst.replacement = gp
            .table
            .intern(&inst.replacement_text("e"), AtomKind::ReplacementPositive);
        inst.negative = gp
            .table
            .intern(&inst.replacement_text("ne"), AtomKind::ReplacementNegative);
        let idx = gp.externals.len();
        gp.guesses.push((inst.replacement, inst.negative));
        gp.instance_of.insert(inst.replacement, idx);
        gp.externals.push(inst);
        idx
    }

    /// Fills in the ground atoms behind each predicate input.
    fn attach_inputs(&self, gp: &mut GroundProgram) {
        let mut by_pred: HashMap<&str, Vec<(AtomId, Vec<Term>)>> = HashMap::new();
        for id in gp.table.ids_of_kind(AtomKind::Ordinary) {
            let atom = gp.table.atom(id).expect("ordinary atoms are structured");
            by_pred
                .entry(atom.predicate.as_str())
                .or_default()
                .push((id, atom.args.clone()));
        }
        for inst in &mut gp.externals {
            let descriptor = self.registry.get(&inst.plugin).expect("validated");
            let mut relevant_atoms = Vec::new();
            for (pos, input) in inst.inputs.iter_mut().enumerate() {
                if let InstanceInput::Predicate {
                    name,
                    atoms,
                    relevant,
                } = input
                {
                    *atoms = by_pred.get(name.as_str()).cloned().unwrap_or_default();
                    *relevant = descriptor.tag(pos) != DependencyTag::Irrelevant;
                    if *relevant {
                        relevant_atoms.extend(atoms.iter().map(|(id, _)| *id));
                    }
                }
            }
            relevant_atoms.sort();
            relevant_atoms.dedup();
            inst.relevant_input_atoms = relevant_atoms;
        }
    }
}
