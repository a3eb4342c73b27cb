use std::fmt;

use indexmap::IndexMap;

use crate::syntax::OrdinaryAtom;

/// Dense atom identifier; the first interned atom gets id 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AtomId(pub u32);

impl AtomId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for AtomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AtomKind {
    Ordinary,
    /// `e_&g[..](..)`: stands for a ground external atom.
    ReplacementPositive,
    /// `ne_&g[..](..)`: the complementary guess.
    ReplacementNegative,
}

#[derive(Clone, Debug)]
struct Entry {
    kind: AtomKind,
    atom: Option<OrdinaryAtom>,
}

/// Bidirectional map between ground atom text and atom ids.
#[derive(Clone, Debug, Default)]
pub struct AtomTable {
    entries: IndexMap<String, Entry>,
}

impl AtomTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the id of `text`, creating it with `kind` on first use.
    pub fn intern(&mut self, text: &str, kind: AtomKind) -> AtomId {
        if let Some(i) = self.entries.get_index_of(text) {
            debug_assert_eq!(self.entries[i].kind, kind, "kind changed for {text}");
            return AtomId(i as u32 + 1);
        }
        self.entries
            .insert(text.to_string(), Entry { kind, atom: None });
        AtomId(self.entries.len() as u32)
    }

    pub fn intern_ordinary(&mut self, atom: &OrdinaryAtom) -> AtomId {
        let text = atom.to_string();
        let id = self.intern(&text, AtomKind::Ordinary);
        let entry = &mut self.entries[id.index() - 1];
        if entry.atom.is_none() {
            entry.atom = Some(atom.clone());
        }
        id
    }

    pub fn id_of(&self, text: &str) -> Option<AtomId> {
        self.entries
            .get_index_of(text)
            .map(|i| AtomId(i as u32 + 1))
    }

    pub fn text(&self, id: AtomId) -> &str {
        self.entries
            .get_index(id.index() - 1)
            .map(|(k, _)| k.as_str())
            .expect("atom id out of range")
    }

    pub fn kind(&self, id: AtomId) -> AtomKind {
        self.entries[id.index() - 1].kind
    }

    /// Structured form of an ordinary atom.
    pub fn atom(&self, id: AtomId) -> Option<&OrdinaryAtom> {
        self.entries[id.index() - 1].atom.as_ref()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = AtomId> {
        (1..=self.entries.len() as u32).map(AtomId)
    }

    pub fn ids_of_kind(&self, kind: AtomKind) -> impl Iterator<Item = AtomId> + '_ {
        self.ids().filter(move |id| self.kind(*id) == kind)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interning_is_dense_and_idempotent() {
        let mut t = AtomTable::new();
        let a = t.intern("p(a)", AtomKind::Ordinary);
        assert_eq!(a, AtomId(1));
        assert_eq!(t.intern("p(a)", AtomKind::Ordinary), a);
        let b = t.intern("p(b)", AtomKind::Ordinary);
        assert_ne!(a, b);
        assert_eq!(b, AtomId(2));
        assert_eq!(t.text(b), "p(b)");
        assert_eq!(t.id_of("p(a)"), Some(a));
        assert_eq!(t.id_of("p(c)"), None);
    }
}
