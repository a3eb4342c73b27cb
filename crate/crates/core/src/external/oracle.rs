//! Three-valued oracle queries handed to plugins.

use std::fmt;

use crate::syntax::Term;

/// Value of an atom under a partial assignment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Truth {
    True,
    False,
    Unassigned,
}

impl Truth {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Truth::True
        } else {
            Truth::False
        }
    }

    pub fn is_assigned(self) -> bool {
        self != Truth::Unassigned
    }
}

/// Oracle answer. `Unknown` is only allowed while some relevant input atom is
/// unassigned; a definite verdict must hold in every completion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    True,
    False,
    Unknown,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }

    pub fn as_bool(self) -> Option<bool> {
        match self {
            Verdict::True => Some(true),
            Verdict::False => Some(false),
            Verdict::Unknown => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::True => "true",
            Verdict::False => "false",
            Verdict::Unknown => "unknown",
        })
    }
}

/// The (partial) extension of one input predicate: its ground atoms that may
/// be true, each with its current value. Atoms not listed are false.
#[derive(Clone, Debug, Default)]
pub struct Extension<'a> {
    entries: Vec<(&'a [Term], Truth)>,
}

impl<'a> Extension<'a> {
    pub fn new(entries: Vec<(&'a [Term], Truth)>) -> Self {
        Self { entries }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'a [Term], Truth)> + '_ {
        self.entries.iter().copied()
    }

    pub fn truth_of(&self, args: &[Term]) -> Truth {
        self.entries
            .iter()
            .find(|(a, _)| *a == args)
            .map_or(Truth::False, |(_, t)| *t)
    }

    pub fn count(&self, value: Truth) -> usize {
        self.entries.iter().filter(|(_, t)| *t == value).count()
    }

    /// Argument tuples currently true.
    pub fn true_tuples(&self) -> impl Iterator<Item = &'a [Term]> + '_ {
        self.entries
            .iter()
            .filter(|(_, t)| *t == Truth::True)
            .map(|(a, _)| *a)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Clone, Debug)]
pub enum InputValue<'a> {
    Constant(&'a Term),
    Predicate(Extension<'a>),
}

/// Inputs of a ground external atom, one entry per declared input position.
#[derive(Clone, Debug, Default)]
pub struct Inputs<'a> {
    values: Vec<InputValue<'a>>,
}

impl<'a> Inputs<'a> {
    pub fn new(values: Vec<InputValue<'a>>) -> Self {
        Self { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The constant at `pos`, if that position is constant-kind.
    pub fn constant(&self, pos: usize) -> Option<&'a Term> {
        match self.values.get(pos)? {
            InputValue::Constant(t) => Some(t),
            InputValue::Predicate(_) => None,
        }
    }

    /// The extension at `pos`, if that position is predicate-kind.
    pub fn extension(&self, pos: usize) -> Option<&Extension<'a>> {
        match self.values.get(pos)? {
            InputValue::Predicate(e) => Some(e),
            InputValue::Constant(_) => None,
        }
    }
}

/// Error raised by a plugin while evaluating or enumerating.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PluginFailure(pub String);

impl PluginFailure {
    pub fn new(msg: impl Into<String>) -> Self {
        Self(msg.into())
    }
}

impl fmt::Display for PluginFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Semantics of an external predicate.
///
/// `evaluate` is the three-valued oracle. `enumerate` receives every input
/// extension with all potentially derivable atoms set to true and must return
/// a superset of the output tuples the oracle could accept under any subset of
/// those extensions; it drives value invention during grounding.
pub trait ExternalSource: Send + Sync {
    fn evaluate(&self, inputs: &Inputs<'_>, output: &[Term]) -> Result<Verdict, PluginFailure>;

    fn enumerate(&self, inputs: &Inputs<'_>) -> Result<Vec<Vec<Term>>, PluginFailure>;
}
