//! Plugin registry, three-valued oracle evaluation, and learning and
//! minimization of input-output nogoods.

mod minimize;
mod nogood;
mod oracle;
mod registry;

use std::cell::Cell;
use std::collections::BTreeMap;

use thiserror::Error;

pub use minimize::{minimize_nogood_deletion, minimize_nogood_quickxplain, MinimizeError};
pub use nogood::{Nogood, NogoodError, SignedLiteral};
pub use oracle::{Extension, ExternalSource, InputValue, Inputs, PluginFailure, Truth, Verdict};
pub use registry::{
    DependencyTag, ExternalAtomError, InputKind, PluginDescriptor, PluginRegistry, RegistryError,
};

use crate::ground::{AtomId, ExternalInstance, InstanceInput};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("external atom `{instance}` failed: {message}")]
pub struct PluginError {
    pub instance: String,
    pub message: String,
}

/// Values of the relevant input atoms of one external instance.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PartialInterpretation {
    values: BTreeMap<AtomId, Truth>,
}

impl PartialInterpretation {
    pub fn new() -> Self {
        Self::default()
    }

    /// Reads the value of every relevant input atom of `instance` from `f`.
    pub fn from_fn(instance: &ExternalInstance, f: impl Fn(AtomId) -> Truth) -> Self {
        let values = instance
            .relevant_input_atoms
            .iter()
            .map(|&a| (a, f(a)))
            .collect();
        Self { values }
    }

    /// All relevant atoms unassigned.
    pub fn unassigned(instance: &ExternalInstance) -> Self {
        Self::from_fn(instance, |_| Truth::Unassigned)
    }

    pub fn set(&mut self, atom: AtomId, value: Truth) -> &mut Self {
        self.values.insert(atom, value);
        self
    }

    /// Missing atoms read as unassigned.
    pub fn get(&self, atom: AtomId) -> Truth {
        self.values.get(&atom).copied().unwrap_or(Truth::Unassigned)
    }

    pub fn iter(&self) -> impl Iterator<Item = (AtomId, Truth)> + '_ {
        self.values.iter().map(|(a, t)| (*a, *t))
    }

    pub fn is_complete(&self) -> bool {
        self.values.values().all(|t| t.is_assigned())
    }
}

/// Evaluates oracles and counts the calls made.
#[derive(Debug)]
pub struct ExternalEvaluator<'a> {
    registry: &'a PluginRegistry,
    calls: Cell<u64>,
}

impl<'a> ExternalEvaluator<'a> {
    pub fn new(registry: &'a PluginRegistry) -> Self {
        Self {
            registry,
            calls: Cell::new(0),
        }
    }

    pub fn registry(&self) -> &'a PluginRegistry {
        self.registry
    }

    pub fn calls(&self) -> u64 {
        self.calls.get()
    }

    /// Queries the oracle of `instance`, reading input atom values from
    /// `truth`. Input atoms the instance does not track are false.
    pub fn evaluate(
        &self,
        instance: &ExternalInstance,
        truth: impl Fn(AtomId) -> Truth,
    ) -> Result<Verdict, PluginError> {
        let fail = |message: String| PluginError {
            instance: instance.to_string(),
            message,
        };
        let descriptor = self
            .registry
            .get(&instance.plugin)
            .ok_or_else(|| fail("plugin not registered".into()))?;
        let values = instance
            .inputs
            .iter()
            .map(|input| match input {
                InstanceInput::Constant(t) => InputValue::Constant(t),
                InstanceInput::Predicate { atoms, .. } => InputValue::Predicate(Extension::new(
                    atoms
                        .iter()
                        .map(|(id, args)| (args.as_slice(), truth(*id)))
                        .collect(),
                )),
            })
            .collect();
        self.calls.set(self.calls.get() + 1);
        descriptor
            .source()
            .evaluate(&Inputs::new(values), &instance.outputs)
            .map_err(|e| fail(e.0))
    }

    /// Validator used by the minimizers: fixes exactly the input literals of
    /// `candidate`, leaves everything else unassigned, and accepts iff the
    /// oracle gives a definite verdict contradicting the replacement literal.
    pub fn certifies(
        &self,
        instance: &ExternalInstance,
        candidate: &[SignedLiteral],
    ) -> Result<bool, PluginError> {
        let Some(repl) = candidate.iter().find(|l| l.atom == instance.replacement) else {
            return Ok(false);
        };
        let verdict = self.evaluate(instance, |a| {
            candidate
                .iter()
                .find(|l| l.atom == a)
                .map_or(Truth::Unassigned, |l| Truth::from_bool(l.positive))
        })?;
        Ok(verdict.as_bool() == Some(!repl.positive))
    }
}

/// Evaluates `instance` under `partial`.
pub fn evaluate_oracle(
    registry: &PluginRegistry,
    instance: &ExternalInstance,
    partial: &PartialInterpretation,
) -> Result<Verdict, PluginError> {
    ExternalEvaluator::new(registry).evaluate(instance, |a| partial.get(a))
}

fn replacement_literal(instance: &ExternalInstance, verdict: bool) -> SignedLiteral {
    // The nogood forbids the guess that disagrees with the oracle.
    SignedLiteral::new(instance.replacement, !verdict)
}

/// Nogood from a two-valued check: every relevant input literal plus the
/// replacement literal signed opposite to the verdict. Returns `None` for an
/// unknown verdict.
pub fn default_learn_nogood(
    instance: &ExternalInstance,
    partial: &PartialInterpretation,
    verdict: Verdict,
) -> Option<Nogood> {
    let verdict = verdict.as_bool()?;
    let inputs = instance
        .relevant_input_atoms
        .iter()
        .map(|&a| SignedLiteral::new(a, partial.get(a) == Truth::True));
    Nogood::new(inputs.chain([replacement_literal(instance, verdict)])).ok()
}

/// Like [`default_learn_nogood`] but keeps only the assigned input atoms.
pub fn learn_partial_nogood(
    instance: &ExternalInstance,
    partial: &PartialInterpretation,
    verdict: Verdict,
) -> Option<Nogood> {
    let verdict = verdict.as_bool()?;
    let inputs = instance
        .relevant_input_atoms
        .iter()
        .filter_map(|&a| match partial.get(a) {
            Truth::True => Some(SignedLiteral::t(a)),
            Truth::False => Some(SignedLiteral::f(a)),
            Truth::Unassigned => None,
        });
    Nogood::new(inputs.chain([replacement_literal(instance, verdict)])).ok()
}
