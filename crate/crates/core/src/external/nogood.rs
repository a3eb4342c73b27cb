use std::fmt;

use thiserror::Error;

use crate::ground::{AtomId, AtomTable};

/// An atom together with the truth value it has inside a nogood.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedLiteral {
    pub atom: AtomId,
    pub positive: bool,
}

impl SignedLiteral {
    pub fn new(atom: AtomId, positive: bool) -> Self {
        Self { atom, positive }
    }

    pub fn t(atom: AtomId) -> Self {
        Self::new(atom, true)
    }

    pub fn f(atom: AtomId) -> Self {
        Self::new(atom, false)
    }

    pub fn negate(self) -> Self {
        Self::new(self.atom, !self.positive)
    }

    pub fn display<'a>(&self, table: &'a AtomTable) -> impl fmt::Display + 'a {
        let sign = if self.positive { 'T' } else { 'F' };
        let text = table.text(self.atom);
        DisplayWith(move |f: &mut fmt::Formatter<'_>| write!(f, "{sign} {text}"))
    }
}

impl fmt::Display for SignedLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.positive { 'T' } else { 'F' };
        write!(f, "{sign} #{}", self.atom.0)
    }
}

struct DisplayWith<F>(F);

impl<F: Fn(&mut fmt::Formatter<'_>) -> fmt::Result> fmt::Display for DisplayWith<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        (self.0)(f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NogoodError {
    #[error("a nogood must not be empty")]
    Empty,
    #[error("atom #{0} occurs with both signs")]
    Complementary(u32),
}

/// A set of signed literals that no answer set may satisfy together.
/// Literals are kept sorted by atom id.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Nogood {
    literals: Vec<SignedLiteral>,
}

impl Nogood {
    pub fn new(literals: impl IntoIterator<Item = SignedLiteral>) -> Result<Self, NogoodError> {
        let mut literals: Vec<_> = literals.into_iter().collect();
        literals.sort();
        literals.dedup();
        if literals.is_empty() {
            return Err(NogoodError::Empty);
        }
        if let Some(w) = literals.windows(2).find(|w| w[0].atom == w[1].atom) {
            return Err(NogoodError::Complementary(w[0].atom.0));
        }
        Ok(Self { literals })
    }

    pub fn literals(&self) -> &[SignedLiteral] {
        &self.literals
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn contains(&self, lit: SignedLiteral) -> bool {
        self.literals.binary_search(&lit).is_ok()
    }

    pub fn is_subset_of(&self, other: &Nogood) -> bool {
        self.literals.iter().all(|l| other.contains(*l))
    }

    /// The literal on `atom`, if present.
    pub fn literal_on(&self, atom: AtomId) -> Option<SignedLiteral> {
        self.literals.iter().copied().find(|l| l.atom == atom)
    }

    pub fn iter(&self) -> impl Iterator<Item = SignedLiteral> + '_ {
        self.literals.iter().copied()
    }

    pub fn display<'a>(&'a self, table: &'a AtomTable) -> impl fmt::Display + 'a {
        DisplayWith(move |f: &mut fmt::Formatter<'_>| {
            f.write_str("{")?;
            for (i, l) in self.literals.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", l.display(table))?;
            }
            f.write_str("}")
        })
    }
}

impl fmt::Display for Nogood {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, l) in self.literals.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str("}")
    }
}
