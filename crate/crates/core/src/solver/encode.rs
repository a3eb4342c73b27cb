//! Static nogoods of a ground program.
//!
//! Atom `k` maps to engine variable `k - 1`; auxiliary body variables follow.
//! Each rule body with more than one literal gets a variable `b` equivalent
//! to the conjunction of its literals. Per rule: `{b, F h1, .., F hn}`.
//! Per non-fact ordinary atom `a`: `{T a, F b1, .., F bk}` over the bodies
//! of the rules with `a` in the head; for a disjunctive rule the body is
//! extended by the other head atoms being false. Per guess pair:
//! `{F e, F ne}` and `{T e, T ne}`. Facts are asserted at level 0.

use std::collections::HashMap;

use super::engine::Lit;
use crate::external::SignedLiteral;
use crate::ground::{AtomId, AtomKind, GroundProgram};

pub(crate) fn atom_var(atom: AtomId) -> u32 {
    atom.0 - 1
}

pub(crate) fn lit(l: SignedLiteral) -> Lit {
    Lit::new(atom_var(l.atom), l.positive)
}

#[derive(Clone, Debug, Default)]
pub(crate) struct Encoding {
    /// Atom variables come first, then auxiliary body variables.
    pub num_atoms: u32,
    pub num_vars: u32,
    pub nogoods: Vec<Vec<Lit>>,
}

struct Builder {
    next_var: u32,
    nogoods: Vec<Vec<Lit>>,
    conjunctions: HashMap<Vec<SignedLiteral>, Lit>,
}

impl Builder {
    /// A literal equivalent to the conjunction of `lits`, or `None` when
    /// `lits` is empty.
    fn conjunction(&mut self, mut lits: Vec<SignedLiteral>) -> Option<Lit> {
        lits.sort();
        lits.dedup();
        match lits.as_slice() {
            [] => return None,
            [single] => return Some(lit(*single)),
            _ => {}
        }
        if let Some(&b) = self.conjunctions.get(&lits) {
            return Some(b);
        }
        let b = Lit::new(self.next_var, true);
        self.next_var += 1;
        let mut all: Vec<Lit> = lits.iter().map(|&l| lit(l)).collect();
        all.push(!b);
        self.nogoods.push(all);
        for &l in &lits {
            self.nogoods.push(vec![b, !lit(l)]);
        }
        self.conjunctions.insert(lits, b);
        Some(b)
    }
}

pub(crate) fn encode_static_nogoods(gp: &GroundProgram) -> Encoding {
    let num_atoms = gp.table.len() as u32;
    let mut b = Builder {
        next_var: num_atoms,
        nogoods: Vec::new(),
        conjunctions: HashMap::new(),
    };
    let mut support: HashMap<AtomId, Vec<Lit>> = HashMap::new();
    let mut unconditional: Vec<bool> = vec![false; num_atoms as usize + 1];

    for rule in &gp.rules {
        if rule.head.is_empty() {
            b.nogoods.push(rule.body.iter().map(|&l| lit(l)).collect());
            continue;
        }
        let body = b.conjunction(rule.body.clone());
        let mut ng: Vec<Lit> = rule
            .head
            .iter()
            .map(|&h| Lit::new(atom_var(h), false))
            .collect();
        ng.extend(body);
        b.nogoods.push(ng);
        for &h in &rule.head {
            // A disjunctive rule supports `h` only while the other head
            // atoms are false.
            let others = rule
                .head
                .iter()
                .filter(|&&o| o != h)
                .map(|&o| SignedLiteral::f(o));
            let reason = if rule.head.len() == 1 {
                body
            } else {
                b.conjunction(rule.body.iter().copied().chain(others).collect())
            };
            match reason {
                None => unconditional[h.index()] = true,
                Some(r) => support.entry(h).or_default().push(r),
            }
        }
    }

    for a in gp.table.ids_of_kind(AtomKind::Ordinary) {
        if gp.facts.contains(&a) || unconditional[a.index()] {
            continue;
        }
        let mut ng = vec![Lit::new(atom_var(a), true)];
        ng.extend(support.get(&a).into_iter().flatten().map(|&r| !r));
        b.nogoods.push(ng);
    }
    for &a in &gp.facts {
        b.nogoods.push(vec![Lit::new(atom_var(a), false)]);
    }
    for &(e, ne) in &gp.guesses {
        b.nogoods.push(vec![
            Lit::new(atom_var(e), false),
            Lit::new(atom_var(ne), false),
        ]);
        b.nogoods.push(vec![
            Lit::new(atom_var(e), true),
            Lit::new(atom_var(ne), true),
        ]);
    }

    Encoding {
        num_atoms,
        num_vars: b.next_var,
        nogoods: b.nogoods,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::ground::{ground_program, GroundConfig};
    use crate::solver::engine::Engine;
    use crate::syntax::parse_program;

    fn ground(text: &str) -> GroundProgram {
        ground_program(
            &parse_program(text).unwrap(),
            &builtins::registry(),
            &GroundConfig::default(),
        )
        .unwrap()
    }

    fn engine(enc: &Encoding) -> Engine {
        let mut e = Engine::new(enc.num_vars);
        for ng in &enc.nogoods {
            e.add_nogood(ng);
        }
        e
    }

    #[test]
    fn guess_pair_nogoods() {
        let gp = ground("p :- &id[p].");
        let enc = encode_static_nogoods(&gp);
        let (e, ne) = gp.guesses[0];
        let pair: Vec<&Vec<Lit>> = enc
            .nogoods
            .iter()
            .filter(|ng| {
                ng.iter()
                    .all(|l| l.var() == atom_var(e) || l.var() == atom_var(ne))
            })
            .collect();
        assert_eq!(
            pair,
            vec![
                &vec![Lit::new(atom_var(e), false), Lit::new(atom_var(ne), false)],
                &vec![Lit::new(atom_var(e), true), Lit::new(atom_var(ne), true)],
            ]
        );
    }

    #[test]
    fn facts_hold_without_decisions() {
        let gp = ground("a. b. c(x).");
        let mut e = engine(&encode_static_nogoods(&gp));
        assert!(e.propagate().is_none());
        assert!(e.is_complete());
        assert_eq!(e.decisions, 0);
        assert!((0..e.num_vars()).all(|v| e.value(v) == Some(true)));
    }

    #[test]
    fn rule_from_fact_propagates() {
        let gp = ground("q. p :- q.");
        let mut e = engine(&encode_static_nogoods(&gp));
        assert!(e.propagate().is_none());
        let p = gp.table.id_of("p").unwrap();
        assert_eq!(e.value(atom_var(p)), Some(true));
    }

    #[test]
    fn unsupported_atoms_are_false() {
        let gp = ground("x :- not y. y :- not x. z :- y. w :- x. :- x.");
        let mut e = engine(&encode_static_nogoods(&gp));
        assert!(e.propagate().is_none());
        let value = |name: &str| e.value(atom_var(gp.table.id_of(name).unwrap()));
        assert_eq!(value("z"), Some(true));
        assert_eq!(value("w"), Some(false));
    }

    #[test]
    fn shared_bodies_share_a_variable() {
        let gp = ground("d. e. a :- d, e. b :- e, d.");
        let enc = encode_static_nogoods(&gp);
        assert_eq!(enc.num_vars, enc.num_atoms + 1);
    }

    #[test]
    fn disjunctive_support_is_shifted() {
        let gp = ground("a | b.");
        let mut e = engine(&encode_static_nogoods(&gp));
        let a = atom_var(gp.table.id_of("a").unwrap());
        let b = atom_var(gp.table.id_of("b").unwrap());
        assert!(e.propagate().is_none());
        e.add_nogood(&[Lit::new(a, false)]);
        assert!(e.propagate().is_none());
        assert_eq!(e.value(b), Some(false));
    }
}
