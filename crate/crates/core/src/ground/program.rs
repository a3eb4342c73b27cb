use std::collections::{BTreeSet, HashMap};
use std::fmt;

use super::table::{AtomId, AtomKind, AtomTable};
use crate::external::SignedLiteral;
use crate::syntax::{ast::write_args, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InstanceInput {
    Constant(Term),
    Predicate {
        name: String,
        /// Every ground atom of the predicate present in the grounding.
        atoms: Vec<(AtomId, Vec<Term>)>,
        /// False when the plugin tags this position irrelevant.
        relevant: bool,
    },
}

/// A ground external atom `&g[p1,...,pk](c1,...,cl)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExternalInstance {
    pub plugin: String,
    pub inputs: Vec<InstanceInput>,
    pub outputs: Vec<Term>,
    pub replacement: AtomId,
    pub negative: AtomId,
    /// Sorted ids of the ordinary atoms at relevant predicate positions.
    pub relevant_input_atoms: Vec<AtomId>,
}

impl ExternalInstance {
    pub fn input_constants(&self) -> impl Iterator<Item = &Term> {
        self.inputs.iter().filter_map(|i| match i {
            InstanceInput::Constant(t) => Some(t),
            InstanceInput::Predicate { .. } => None,
        })
    }

    pub fn input_predicates(&self) -> impl Iterator<Item = &str> {
        self.inputs.iter().filter_map(|i| match i {
            InstanceInput::Predicate { name, .. } => Some(name.as_str()),
            InstanceInput::Constant(_) => None,
        })
    }

    pub fn is_relevant(&self, atom: AtomId) -> bool {
        self.relevant_input_atoms.binary_search(&atom).is_ok()
    }

    /// Text of the replacement atom, `e_<name>[<inputs>](<outputs>)`.
    pub fn replacement_text(&self, prefix: &str) -> String {
        format!("{prefix}_{}", Signature(self))
    }
}

struct Signature<'a>(&'a ExternalInstance);

impl fmt::Display for Signature<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inst = self.0;
        write!(f, "{}[", inst.plugin)?;
        for (i, input) in inst.inputs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            match input {
                InstanceInput::Constant(t) => write!(f, "{t}")?,
                InstanceInput::Predicate { name, .. } => f.write_str(name)?,
            }
        }
        f.write_str("]")?;
        if !inst.outputs.is_empty() {
            f.write_str("(")?;
            write_args(f, &inst.outputs)?;
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for ExternalInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "&{}", Signature(self))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroundRule {
    pub head: Vec<AtomId>,
    pub body: Vec<SignedLiteral>,
}

impl GroundRule {
    pub fn is_fact(&self) -> bool {
        self.head.len() == 1 && self.body.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroundWeak {
    pub body: Vec<SignedLiteral>,
    pub weight: i64,
    pub level: i64,
}

#[derive(Clone, Debug, Default)]
pub struct GroundProgram {
    pub rules: Vec<GroundRule>,
    /// `(e, ne)` pairs, one per external instance, in instance order.
    pub guesses: Vec<(AtomId, AtomId)>,
    pub externals: Vec<ExternalInstance>,
    pub weak: Vec<GroundWeak>,
    /// Every level used by a weak constraint of the source program, highest
    /// first, whether or not it has ground instances.
    pub weak_levels: Vec<i64>,
    pub table: AtomTable,
    pub facts: BTreeSet<AtomId>,
    pub(crate) instance_of: HashMap<AtomId, usize>,
}

impl GroundProgram {
    /// The external instance whose positive replacement atom is `atom`.
    pub fn instance_for(&self, atom: AtomId) -> Option<&ExternalInstance> {
        self.instance_of.get(&atom).map(|&i| &self.externals[i])
    }

    pub fn instance_index(&self, atom: AtomId) -> Option<usize> {
        self.instance_of.get(&atom).copied()
    }

    pub fn has_disjunction(&self) -> bool {
        self.rules.iter().any(|r| r.head.len() > 1)
    }

    pub fn ordinary_atoms(&self) -> impl Iterator<Item = AtomId> + '_ {
        self.table.ids_of_kind(AtomKind::Ordinary)
    }

    fn write_body(&self, f: &mut fmt::Formatter<'_>, body: &[SignedLiteral]) -> fmt::Result {
        for (i, l) in body.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            if !l.positive {
                f.write_str("not ")?;
            }
            f.write_str(self.table.text(l.atom))?;
        }
        Ok(())
    }
}

/// Debug dump: one statement per line, guesses written as `e | ne.`
impl fmt::Display for GroundProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            for (i, h) in r.head.iter().enumerate() {
                if i > 0 {
                    f.write_str(" | ")?;
                }
                f.write_str(self.table.text(*h))?;
            }
            if !r.body.is_empty() {
                f.write_str(if r.head.is_empty() { ":- " } else { " :- " })?;
                self.write_body(f, &r.body)?;
            }
            writeln!(f, ".")?;
        }
        for (e, ne) in &self.guesses {
            writeln!(f, "{} | {}.", self.table.text(*e), self.table.text(*ne))?;
        }
        for w in &self.weak {
            f.write_str(":~ ")?;
            self.write_body(f, &w.body)?;
            writeln!(f, ". [{}@{}]", w.weight, w.level)?;
        }
        Ok(())
    }
}
