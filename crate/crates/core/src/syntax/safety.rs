use std::collections::BTreeSet;

use super::ast::{BodyAtom, Literal, Rule};
use super::{SafetyError, SyntaxError};
use crate::external::PluginRegistry;

/// Variables bound by the body: those in positive ordinary atoms, closed under
/// positive external atoms whose input variables are all bound (their output
/// variables become bound).
pub fn bound_variables(body: &[Literal]) -> BTreeSet<&str> {
    let mut bound = BTreeSet::new();
    for l in body {
        if let (false, BodyAtom::Ordinary(a)) = (l.negated, &l.atom) {
            a.args.iter().for_each(|t| t.collect_vars(&mut bound));
        }
    }
    loop {
        let before = bound.len();
        for l in body {
            if let (false, BodyAtom::External(e)) = (l.negated, &l.atom) {
                if e.input_vars().is_subset(&bound) {
                    bound.extend(e.output_vars());
                }
            }
        }
        if bound.len() == before {
            return bound;
        }
    }
}

pub(crate) fn unsafe_variables(body: &[Literal], all: BTreeSet<&str>) -> Vec<String> {
    let bound = bound_variables(body);
    all.difference(&bound).map(|v| v.to_string()).collect()
}

/// Registry-aware safety check: every external atom must resolve against the
/// registry with matching arities and input kinds, and every variable of the
/// rule must be bound by the safety closure.
pub fn check_safety(rule: &Rule, registry: &PluginRegistry) -> Result<(), SyntaxError> {
    for l in &rule.body {
        if let BodyAtom::External(e) = &l.atom {
            registry.validate(e)?;
        }
    }
    let unsafe_vars = unsafe_variables(&rule.body, rule.vars());
    if unsafe_vars.is_empty() {
        Ok(())
    } else {
        Err(SafetyError::new(rule.to_string(), unsafe_vars).into())
    }
}
