use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use super::oracle::{ExternalSource, Inputs, PluginFailure, Verdict};
use crate::syntax::{is_identifier, ExternalAtom, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InputKind {
    Predicate,
    Constant,
}

/// Semantic dependency of the oracle on one input position.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum DependencyTag {
    /// The oracle never looks at this input; it contributes no dependency
    /// edges and no literals to learned nogoods.
    Irrelevant,
    Monotone,
    Antimonotone,
    #[default]
    Full,
}

#[derive(Clone)]
pub struct PluginDescriptor {
    pub name: String,
    pub inputs: Vec<InputKind>,
    pub output_arity: usize,
    pub dependency: Vec<DependencyTag>,
    source: Arc<dyn ExternalSource>,
}

impl fmt::Debug for PluginDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PluginDescriptor")
            .field("name", &self.name)
            .field("inputs", &self.inputs)
            .field("output_arity", &self.output_arity)
            .field("dependency", &self.dependency)
            .finish_non_exhaustive()
    }
}

impl PluginDescriptor {
    pub fn new(
        name: impl Into<String>,
        inputs: Vec<InputKind>,
        output_arity: usize,
        source: impl ExternalSource + 'static,
    ) -> Self {
        let dependency = vec![DependencyTag::Full; inputs.len()];
        Self {
            name: name.into(),
            inputs,
            output_arity,
            dependency,
            source: Arc::new(source),
        }
    }

    /// Builds a descriptor from a pair of closures.
    pub fn from_fns<E, G>(
        name: impl Into<String>,
        inputs: Vec<InputKind>,
        output_arity: usize,
        evaluate: E,
        enumerate: G,
    ) -> Self
    where
        E: Fn(&Inputs<'_>, &[Term]) -> Result<Verdict, PluginFailure> + Send + Sync + 'static,
        G: Fn(&Inputs<'_>) -> Result<Vec<Vec<Term>>, PluginFailure> + Send + Sync + 'static,
    {
        Self::new(
            name,
            inputs,
            output_arity,
            FnSource {
                evaluate,
                enumerate,
            },
        )
    }

    /// Replaces the per-position dependency tags.
    ///
    /// # Panics
    /// If the number of tags differs from the number of inputs.
    pub fn with_dependency(mut self, tags: Vec<DependencyTag>) -> Self {
        assert_eq!(tags.len(), self.inputs.len(), "one tag per input position");
        self.dependency = tags;
        self
    }

    pub fn tag(&self, pos: usize) -> DependencyTag {
        self.dependency.get(pos).copied().unwrap_or_default()
    }

    pub fn source(&self) -> &dyn ExternalSource {
        self.source.as_ref()
    }
}

struct FnSource<E, G> {
    evaluate: E,
    enumerate: G,
}

impl<E, G> ExternalSource for FnSource<E, G>
where
    E: Fn(&Inputs<'_>, &[Term]) -> Result<Verdict, PluginFailure> + Send + Sync,
    G: Fn(&Inputs<'_>) -> Result<Vec<Vec<Term>>, PluginFailure> + Send + Sync,
{
    fn evaluate(&self, inputs: &Inputs<'_>, output: &[Term]) -> Result<Verdict, PluginFailure> {
        (self.evaluate)(inputs, output)
    }

    fn enumerate(&self, inputs: &Inputs<'_>) -> Result<Vec<Vec<Term>>, PluginFailure> {
        (self.enumerate)(inputs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegistryError {
    #[error("external predicate `&{0}` is already registered")]
    Duplicate(String),
    #[error("unknown external predicate `&{0}`")]
    NotFound(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExternalAtomError {
    #[error("unknown external predicate `&{0}`")]
    Unknown(String),
    #[error("`&{name}` expects {expected} input(s), found {found}")]
    InputArity {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("`&{name}` expects {expected} output(s), found {found}")]
    OutputArity {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("input {position} of `&{name}` must be a predicate name, found `{found}`")]
    PredicateExpected {
        name: String,
        position: usize,
        found: String,
    },
}

/// Name-indexed set of external predicates. Built before solving and only
/// read afterwards.
#[derive(Clone, Debug, Default)]
pub struct PluginRegistry {
    plugins: BTreeMap<String, PluginDescriptor>,
}

impl PluginRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(&mut self, descriptor: PluginDescriptor) -> Result<(), RegistryError> {
        if self.plugins.contains_key(&descriptor.name) {
            return Err(RegistryError::Duplicate(descriptor.name));
        }
        self.plugins.insert(descriptor.name.clone(), descriptor);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&PluginDescriptor> {
        self.plugins.get(name)
    }

    pub fn resolve(&self, name: &str) -> Result<&PluginDescriptor, RegistryError> {
        self.get(name)
            .ok_or_else(|| RegistryError::NotFound(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.plugins.keys().map(String::as_str)
    }

    /// Checks an external atom against the declared signature of its plugin.
    pub fn validate(&self, atom: &ExternalAtom) -> Result<&PluginDescriptor, ExternalAtomError> {
        let d = self
            .get(&atom.name)
            .ok_or_else(|| ExternalAtomError::Unknown(atom.name.clone()))?;
        if d.inputs.len() != atom.inputs.len() {
            return Err(ExternalAtomError::InputArity {
                name: atom.name.clone(),
                expected: d.inputs.len(),
                found: atom.inputs.len(),
            });
        }
        if d.output_arity != atom.outputs.len() {
            return Err(ExternalAtomError::OutputArity {
                name: atom.name.clone(),
                expected: d.output_arity,
                found: atom.outputs.len(),
            });
        }
        for (position, (kind, term)) in d.inputs.iter().zip(&atom.inputs).enumerate() {
            let names_predicate = matches!(term, Term::Const(s) if is_identifier(s));
            if *kind == InputKind::Predicate && !names_predicate {
                return Err(ExternalAtomError::PredicateExpected {
                    name: atom.name.clone(),
                    position: position + 1,
                    found: term.to_string(),
                });
            }
        }
        Ok(d)
    }
}
