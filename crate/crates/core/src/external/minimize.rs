//! Shrinking input-output nogoods to inclusion-minimal subsets.
//!
//! Both minimizers take a validator deciding whether a candidate literal set
//! still certifies the oracle violation. The result always keeps the
//! replacement literal and is inclusion-minimal provided the validator is
//! monotone (a superset of a valid set is valid), which holds for oracles
//! whose definite verdicts only depend on the fixed literals.

use thiserror::Error;

use super::nogood::{Nogood, SignedLiteral};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MinimizeError<E> {
    #[error("the nogood to minimize does not certify the violation")]
    NotValid,
    #[error("replacement literal {0} is not part of the nogood")]
    MissingReplacement(SignedLiteral),
    #[error(transparent)]
    Validator(E),
}

fn split_replacement<E>(
    nogood: &Nogood,
    replacement: SignedLiteral,
) -> Result<Vec<SignedLiteral>, MinimizeError<E>> {
    if !nogood.contains(replacement) {
        return Err(MinimizeError::MissingReplacement(replacement));
    }
    Ok(nogood.iter().filter(|l| *l != replacement).collect())
}

fn build(lits: impl IntoIterator<Item = SignedLiteral>) -> Nogood {
    Nogood::new(lits).expect("subset of a valid nogood")
}

/// Deletion-based minimization: tries to drop each input literal in ascending
/// atom order and keeps the drop whenever the rest stays valid. Uses one
/// validator call per input literal plus one for the initial check.
pub fn minimize_nogood_deletion<E>(
    nogood: &Nogood,
    replacement: SignedLiteral,
    mut validator: impl FnMut(&[SignedLiteral]) -> Result<bool, E>,
) -> Result<Nogood, MinimizeError<E>> {
    let inputs = split_replacement(nogood, replacement)?;
    if !validator(nogood.literals()).map_err(MinimizeError::Validator)? {
        return Err(MinimizeError::NotValid);
    }
    let mut kept: Vec<SignedLiteral> = inputs.clone();
    kept.push(replacement);
    for lit in inputs {
        let pos = kept.iter().position(|l| *l == lit).unwrap();
        kept.remove(pos);
        if !validator(&kept).map_err(MinimizeError::Validator)? {
            kept.insert(pos, lit);
        }
    }
    Ok(build(kept))
}

/// QuickXplain-style minimization: divide-and-conquer over the input
/// literals, needing O(k log(n/k) + k) validator calls for k necessary among
/// n literals.
pub fn minimize_nogood_quickxplain<E>(
    nogood: &Nogood,
    replacement: SignedLiteral,
    mut validator: impl FnMut(&[SignedLiteral]) -> Result<bool, E>,
) -> Result<Nogood, MinimizeError<E>> {
    let inputs = split_replacement(nogood, replacement)?;
    if !validator(nogood.literals()).map_err(MinimizeError::Validator)? {
        return Err(MinimizeError::NotValid);
    }
    if inputs.is_empty() {
        return Ok(build([replacement]));
    }
    let mut background = vec![replacement];
    let mut found = Vec::new();
    quickxplain(&mut background, true, &inputs, &mut validator, &mut found)
        .map_err(MinimizeError::Validator)?;
    found.push(replacement);
    Ok(build(found))
}

/// Appends to `out` a minimal subset of `candidates` that together with
/// `background` is valid. `background_changed` is false only when the last
/// split added nothing to the background, in which case re-validating it
/// would repeat an earlier call.
fn quickxplain<E>(
    background: &mut Vec<SignedLiteral>,
    background_changed: bool,
    candidates: &[SignedLiteral],
    validator: &mut impl FnMut(&[SignedLiteral]) -> Result<bool, E>,
    out: &mut Vec<SignedLiteral>,
) -> Result<(), E> {
    if background_changed && validator(background)? {
        return Ok(());
    }
    if let [single] = candidates {
        out.push(*single);
        return Ok(());
    }
    let (left, right) = candidates.split_at(candidates.len() / 2);

    let mark = background.len();
    background.extend_from_slice(left);
    let mut from_right = Vec::new();
    quickxplain(
        background,
        !left.is_empty(),
        right,
        validator,
        &mut from_right,
    )?;
    background.truncate(mark);

    background.extend_from_slice(&from_right);
    quickxplain(background, !from_right.is_empty(), left, validator, out)?;
    background.truncate(mark);

    out.extend(from_right);
    Ok(())
}
