//! Literal implementation of the answer-set definition, used as a test
//! oracle: ground every rule over the whole domain, enumerate all
//! interpretations of the head atoms, keep the models that are minimal
//! models of their own FLP-reduct.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use indexmap::IndexSet;
use thiserror::Error;

use crate::external::{Extension, InputKind, InputValue, Inputs, PluginRegistry, Truth};
use crate::ground::{compute_domain, GroundError, DEFAULT_MAX_INVENTION};
use crate::solver::Cost;
use crate::syntax::{BodyAtom, Literal, OrdinaryAtom, Program, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReferenceError {
    #[error(transparent)]
    Ground(#[from] GroundError),
    #[error("reference grounding has {atoms} atoms, more than the limit of {limit}")]
    TooManyAtoms { atoms: usize, limit: usize },
    #[error("external atom `{atom}` failed: {message}")]
    Plugin { atom: String, message: String },
}

/// Optimal answer sets with their common cost.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReferenceOptimum {
    pub cost: Cost,
    pub answer_sets: Vec<BTreeSet<String>>,
}

type ExternalKey = (String, Vec<Term>, Vec<Term>);

#[derive(Clone, Copy, Debug)]
enum RefAtom {
    /// Index into the head atoms; `None` for atoms no rule can derive.
    Ordinary(Option<usize>),
    External(usize),
}

type RefBody = Vec<(RefAtom, bool)>;

struct Reference<'r> {
    registry: &'r PluginRegistry,
    atoms: IndexSet<OrdinaryAtom>,
    externals: IndexSet<ExternalKey>,
    rules: Vec<(Vec<usize>, RefBody)>,
    weak: Vec<(RefBody, i64, i64)>,
    levels: Vec<i64>,
    facts: u64,
}

fn substitute(term: &Term, s: &BTreeMap<&str, &Term>) -> Term {
    match term {
        Term::Var(v) => (*s.get(v.as_str()).expect("variable bound")).clone(),
        Term::Func(f, args) => {
            Term::Func(f.clone(), args.iter().map(|a| substitute(a, s)).collect())
        }
        _ => term.clone(),
    }
}

fn substitute_atom(atom: &OrdinaryAtom, s: &BTreeMap<&str, &Term>) -> OrdinaryAtom {
    OrdinaryAtom::new(
        atom.predicate.clone(),
        atom.args.iter().map(|a| substitute(a, s)).collect(),
    )
}

/// Calls `f` with every assignment of `terms` to `vars`.
fn for_each_substitution<'t>(
    vars: &[&'t str],
    terms: &'t [Term],
    f: &mut impl FnMut(&BTreeMap<&'t str, &'t Term>),
) {
    fn go<'t>(
        vars: &[&'t str],
        terms: &'t [Term],
        s: &mut BTreeMap<&'t str, &'t Term>,
        f: &mut impl FnMut(&BTreeMap<&'t str, &'t Term>),
    ) {
        match vars.split_first() {
            None => f(s),
            Some((v, rest)) => {
                for t in terms {
                    s.insert(v, t);
                    go(rest, terms, s, f);
                }
                s.remove(v);
            }
        }
    }
    go(vars, terms, &mut BTreeMap::new(), f)
}

enum GroundLit {
    Ordinary(OrdinaryAtom, bool),
    External(ExternalKey, bool),
}

fn ground_body(body: &[Literal], s: &BTreeMap<&str, &Term>) -> Vec<GroundLit> {
    body.iter()
        .map(|l| match &l.atom {
            BodyAtom::Ordinary(a) => GroundLit::Ordinary(substitute_atom(a, s), !l.negated),
            BodyAtom::External(e) => GroundLit::External(
                (
                    e.name.clone(),
                    e.inputs.iter().map(|t| substitute(t, s)).collect(),
                    e.outputs.iter().map(|t| substitute(t, s)).collect(),
                ),
                !l.negated,
            ),
        })
        .collect()
}

fn mask_bits(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| mask >> i & 1 == 1)
}

impl<'r> Reference<'r> {
    fn build(
        program: &Program,
        registry: &'r PluginRegistry,
        max_atoms: usize,
    ) -> Result<Self, ReferenceError> {
        let domain = compute_domain(program, registry, DEFAULT_MAX_INVENTION)?;
        let terms: Vec<Term> = domain.constants.into_iter().collect();

        let mut ground_rules = Vec::new();
        for rule in &program.rules {
            let vars: Vec<&str> = rule.vars().into_iter().collect();
            for_each_substitution(&vars, &terms, &mut |s| {
                let head: Vec<OrdinaryAtom> =
                    rule.head.iter().map(|h| substitute_atom(h, s)).collect();
                ground_rules.push((head, ground_body(&rule.body, s)));
            });
        }
        let mut ground_weak = Vec::new();
        for weak in &program.weak_constraints {
            let vars: Vec<&str> = weak.vars().into_iter().collect();
            for_each_substitution(&vars, &terms, &mut |s| {
                ground_weak.push((ground_body(&weak.body, s), weak.weight, weak.level));
            });
        }

        let mut atoms = IndexSet::new();
        for (head, _) in &ground_rules {
            atoms.extend(head.iter().cloned());
        }
        let limit = max_atoms.min(63);
        if atoms.len() > limit {
            return Err(ReferenceError::TooManyAtoms {
                atoms: atoms.len(),
                limit,
            });
        }

        let mut externals = IndexSet::new();
        let mut convert = |body: Vec<GroundLit>| -> RefBody {
            body.into_iter()
                .map(|l| match l {
                    GroundLit::Ordinary(a, pos) => (RefAtom::Ordinary(atoms.get_index_of(&a)), pos),
                    GroundLit::External(key, pos) => {
                        (RefAtom::External(externals.insert_full(key).0), pos)
                    }
                })
                .collect()
        };
        let mut facts = 0u64;
        let mut rules = Vec::new();
        for (head, body) in ground_rules {
            let head: Vec<usize> = head
                .iter()
                .map(|h| atoms.get_index_of(h).unwrap())
                .collect();
            if head.len() == 1 && body.is_empty() {
                facts |= 1 << head[0];
            }
            rules.push((head, convert(body)));
        }
        let mut seen = HashSet::new();
        let mut weak = Vec::new();
        for (body, w, l) in ground_weak {
            let mut key: Vec<(bool, String)> = body
                .iter()
                .map(|g| match g {
                    GroundLit::Ordinary(a, pos) => (*pos, a.to_string()),
                    GroundLit::External((n, i, o), pos) => (*pos, format!("&{n}{i:?}{o:?}")),
                })
                .collect();
            key.sort();
            key.dedup();
            if seen.insert((key, w, l)) {
                weak.push((convert(body), w, l));
            }
        }
        let levels: BTreeSet<i64> = program.weak_constraints.iter().map(|w| w.level).collect();
        Ok(Self {
            registry,
            atoms,
            externals,
            rules,
            weak,
            levels: levels.into_iter().rev().collect(),
            facts,
        })
    }

    fn evaluate_externals(&self, mask: u64) -> Result<Vec<bool>, ReferenceError> {
        self.externals
            .iter()
            .map(|(name, inputs, outputs)| {
                let fail = |message: String| ReferenceError::Plugin {
                    atom: format!("&{name}"),
                    message,
                };
                let descriptor = self
                    .registry
                    .get(name)
                    .ok_or_else(|| fail("not registered".into()))?;
                let values = inputs
                    .iter()
                    .zip(&descriptor.inputs)
                    .map(|(t, kind)| match kind {
                        InputKind::Constant => InputValue::Constant(t),
                        InputKind::Predicate => {
                            let pred = t.as_str().unwrap_or_default();
                            InputValue::Predicate(Extension::new(
                                self.atoms
                                    .iter()
                                    .enumerate()
                                    .filter(|(_, a)| a.predicate == pred)
                                    .map(|(i, a)| {
                                        (a.args.as_slice(), Truth::from_bool(mask >> i & 1 == 1))
                                    })
                                    .collect(),
                            ))
                        }
                    })
                    .collect();
                descriptor
                    .source()
                    .evaluate(&Inputs::new(values), outputs)
                    .map_err(|e| fail(e.0))?
                    .as_bool()
                    .ok_or_else(|| fail("unknown verdict on a complete interpretation".into()))
            })
            .collect()
    }

    fn body_holds(body: &RefBody, mask: u64, ext: &[bool]) -> bool {
        body.iter().all(|&(atom, positive)| {
            let value = match atom {
                RefAtom::Ordinary(Some(i)) => mask >> i & 1 == 1,
                RefAtom::Ordinary(None) => false,
                RefAtom::External(i) => ext[i],
            };
            value == positive
        })
    }

    fn head_holds(head: &[usize], mask: u64) -> bool {
        head.iter().any(|&h| mask >> h & 1 == 1)
    }

    fn satisfies(&self, rules: &[usize], mask: u64) -> Result<bool, ReferenceError> {
        let ext = self.evaluate_externals(mask)?;
        Ok(rules.iter().all(|&r| {
            let (head, body) = &self.rules[r];
            !Self::body_holds(body, mask, &ext) || Self::head_holds(head, mask)
        }))
    }

    fn is_answer_set(&self, mask: u64) -> Result<bool, ReferenceError> {
        let all: Vec<usize> = (0..self.rules.len()).collect();
        if !self.satisfies(&all, mask)? {
            return Ok(false);
        }
        let ext = self.evaluate_externals(mask)?;
        let reduct: Vec<usize> = all
            .into_iter()
            .filter(|&r| Self::body_holds(&self.rules[r].1, mask, &ext))
            .collect();
        let free = mask & !self.facts;
        // Every proper subset of the non-fact atoms, facts kept.
        let mut sub = free;
        while sub != 0 {
            sub = (sub - 1) & free;
            if self.satisfies(&reduct, self.facts | sub)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn answer_sets(&self) -> Result<Vec<u64>, ReferenceError> {
        let full = if self.atoms.is_empty() {
            0
        } else {
            u64::MAX >> (64 - self.atoms.len())
        };
        let free = full & !self.facts;
        let mut out = Vec::new();
        let mut sub = free;
        loop {
            if self.is_answer_set(self.facts | sub)? {
                out.push(self.facts | sub);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & free;
        }
        Ok(out)
    }

    fn cost(&self, mask: u64) -> Result<Cost, ReferenceError> {
        let ext = self.evaluate_externals(mask)?;
        let mut cost = Cost::zero(&self.levels);
        for (body, w, l) in &self.weak {
            if Self::body_holds(body, mask, &ext) {
                cost.add(*l, *w);
            }
        }
        Ok(cost)
    }

    fn texts(&self, mask: u64) -> BTreeSet<String> {
        mask_bits(mask).map(|i| self.atoms[i].to_string()).collect()
    }
}

/// All answer sets of `program` as sets of atom texts, found by
/// enumerating every interpretation of at most `max_atoms` head atoms.
pub fn brute_force_answer_sets(
    program: &Program,
    registry: &PluginRegistry,
    max_atoms: usize,
) -> Result<Vec<BTreeSet<String>>, ReferenceError> {
    let r = Reference::build(program, registry, max_atoms)?;
    let mut sets: Vec<BTreeSet<String>> =
        r.answer_sets()?.into_iter().map(|m| r.texts(m)).collect();
    sets.sort();
    Ok(sets)
}

/// The optimal answer sets under the weak constraints, or `None` when there
/// is no answer set.
pub fn brute_force_optimum(
    program: &Program,
    registry: &PluginRegistry,
    max_atoms: usize,
) -> Result<Option<ReferenceOptimum>, ReferenceError> {
    let r = Reference::build(program, registry, max_atoms)?;
    let mut best: Option<ReferenceOptimum> = None;
    for m in r.answer_sets()? {
        let cost = r.cost(m)?;
        match &mut best {
            Some(b) if cost > b.cost => {}
            Some(b) if cost == b.cost => b.answer_sets.push(r.texts(m)),
            _ => {
                best = Some(ReferenceOptimum {
                    cost,
                    answer_sets: vec![r.texts(m)],
                })
            }
        }
    }
    if let Some(b) = &mut best {
        b.answer_sets.sort();
    }
    Ok(best)
}
