//! Reference external predicates.
//!
//! | name      | inputs                | outputs | notes                               |
//! |-----------|-----------------------|---------|-------------------------------------|
//! | `concat`  | constant, constant    | 1       | string concatenation, generative    |
//! | `id`      | predicate             | 0       | true iff the extension is nonempty  |
//! | `diff`    | predicate, predicate  | 1       | `X` in the first, not in the second |
//! | `atLeast` | predicate, integer    | 0       | at least `k` atoms true             |
//! | `first`   | predicate, predicate  | 1       | `X` in the first; second irrelevant |
//! | `head`    | list                  | 1       | first element of `cons/nil` list    |
//! | `tail`    | list                  | 1       | list without its first element      |
//! | `append`  | list, list            | 1       | list concatenation                  |

use crate::external::{
    DependencyTag, Extension, InputKind, Inputs, PluginDescriptor, PluginFailure, PluginRegistry,
    Truth, Verdict,
};
use crate::syntax::Term;

use DependencyTag::{Antimonotone, Full, Irrelevant, Monotone};
use InputKind::{Constant, Predicate};

/// A registry holding every builtin.
pub fn registry() -> PluginRegistry {
    let mut reg = PluginRegistry::new();
    for d in all() {
        reg.register(d).expect("builtin names are distinct");
    }
    reg
}

pub fn all() -> Vec<PluginDescriptor> {
    vec![
        concat(),
        id(),
        diff(),
        at_least(),
        first(),
        head(),
        tail(),
        append(),
    ]
}

fn constant<'a>(inputs: &Inputs<'a>, pos: usize) -> Result<&'a Term, PluginFailure> {
    inputs
        .constant(pos)
        .ok_or_else(|| PluginFailure::new(format!("input {} must be a constant", pos + 1)))
}

fn extension<'i, 'a>(
    inputs: &'i Inputs<'a>,
    pos: usize,
) -> Result<&'i Extension<'a>, PluginFailure> {
    inputs
        .extension(pos)
        .ok_or_else(|| PluginFailure::new(format!("input {} must be a predicate", pos + 1)))
}

fn string<'a>(inputs: &Inputs<'a>, pos: usize) -> Result<&'a str, PluginFailure> {
    let t = constant(inputs, pos)?;
    t.as_str()
        .ok_or_else(|| PluginFailure::new(format!("`{t}` is not a string")))
}

/// Unary tuples of an extension, for outputs ranging over its atoms.
fn unary_tuples(ext: &Extension<'_>) -> Vec<Vec<Term>> {
    ext.iter()
        .filter(|(args, _)| args.len() == 1)
        .map(|(args, _)| args.to_vec())
        .collect()
}

pub fn concat() -> PluginDescriptor {
    fn joined(inputs: &Inputs<'_>) -> Result<String, PluginFailure> {
        Ok(format!("{}{}", string(inputs, 0)?, string(inputs, 1)?))
    }
    PluginDescriptor::from_fns(
        "concat",
        vec![Constant, Constant],
        1,
        |inputs, output| {
            Ok(Verdict::from_bool(
                output[0].as_str() == Some(&joined(inputs)?),
            ))
        },
        |inputs| Ok(vec![vec![Term::Const(joined(inputs)?)]]),
    )
}

/// Three-valued "some atom is true": the minimal cyclic-justification
/// exemplar when used as `p :- &id[p].`
pub fn id() -> PluginDescriptor {
    PluginDescriptor::from_fns(
        "id",
        vec![Predicate],
        0,
        |inputs, _| {
            let ext = extension(inputs, 0)?;
            Ok(if ext.count(Truth::True) > 0 {
                Verdict::True
            } else if ext.count(Truth::Unassigned) == 0 {
                Verdict::False
            } else {
                Verdict::Unknown
            })
        },
        |inputs| {
            let ext = extension(inputs, 0)?;
            Ok(if ext.is_empty() { vec![] } else { vec![vec![]] })
        },
    )
    .with_dependency(vec![Monotone])
}

pub fn diff() -> PluginDescriptor {
    PluginDescriptor::from_fns(
        "diff",
        vec![Predicate, Predicate],
        1,
        |inputs, output| {
            let in_p = extension(inputs, 0)?.truth_of(output);
            let in_q = extension(inputs, 1)?.truth_of(output);
            Ok(match (in_p, in_q) {
                (Truth::True, Truth::False) => Verdict::True,
                (Truth::False, _) | (_, Truth::True) => Verdict::False,
                _ => Verdict::Unknown,
            })
        },
        |inputs| Ok(unary_tuples(extension(inputs, 0)?)),
    )
    .with_dependency(vec![Monotone, Antimonotone])
}

pub fn at_least() -> PluginDescriptor {
    PluginDescriptor::from_fns(
        "atLeast",
        vec![Predicate, Constant],
        0,
        |inputs, _| {
            let ext = extension(inputs, 0)?;
            let k = bound(inputs)?;
            let t = ext.count(Truth::True);
            let u = ext.count(Truth::Unassigned);
            Ok(if t >= k {
                Verdict::True
            } else if t + u < k {
                Verdict::False
            } else {
                Verdict::Unknown
            })
        },
        |inputs| {
            let possible = extension(inputs, 0)?.iter().count();
            Ok(if possible >= bound(inputs)? {
                vec![vec![]]
            } else {
                vec![]
            })
        },
    )
    .with_dependency(vec![Monotone, Full])
}

fn bound(inputs: &Inputs<'_>) -> Result<usize, PluginFailure> {
    match constant(inputs, 1)? {
        Term::Int(k) => Ok((*k).max(0) as usize),
        other => Err(PluginFailure::new(format!("`{other}` is not an integer"))),
    }
}

/// Projection onto the first input; the second input is declared irrelevant.
pub fn first() -> PluginDescriptor {
    PluginDescriptor::from_fns(
        "first",
        vec![Predicate, Predicate],
        1,
        |inputs, output| {
            Ok(match extension(inputs, 0)?.truth_of(output) {
                Truth::True => Verdict::True,
                Truth::False => Verdict::False,
                Truth::Unassigned => Verdict::Unknown,
            })
        },
        |inputs| Ok(unary_tuples(extension(inputs, 0)?)),
    )
    .with_dependency(vec![Monotone, Irrelevant])
}

pub fn nil() -> Term {
    Term::constant("nil")
}

pub fn cons(head: Term, tail: Term) -> Term {
    Term::Func("cons".into(), vec![head, tail])
}

/// Builds the `cons/nil` encoding of `items`.
pub fn list(items: impl IntoIterator<Item = Term, IntoIter: DoubleEndedIterator>) -> Term {
    items.into_iter().rev().fold(nil(), |acc, t| cons(t, acc))
}

/// Splits a list term into its elements.
pub fn list_items(term: &Term) -> Result<Vec<&Term>, PluginFailure> {
    let mut items = Vec::new();
    let mut cur = term;
    loop {
        match cur {
            Term::Const(s) if s == "nil" => return Ok(items),
            Term::Func(f, args) if f == "cons" && args.len() == 2 => {
                items.push(&args[0]);
                cur = &args[1];
            }
            _ => return Err(PluginFailure::new(format!("`{term}` is not a list"))),
        }
    }
}

fn unpack(term: &Term) -> Result<Option<(&Term, &Term)>, PluginFailure> {
    list_items(term)?;
    Ok(match term {
        Term::Func(_, args) => Some((&args[0], &args[1])),
        _ => None,
    })
}

fn list_function(
    name: &'static str,
    arity: usize,
    f: fn(&Inputs<'_>) -> Result<Option<Term>, PluginFailure>,
) -> PluginDescriptor {
    PluginDescriptor::from_fns(
        name,
        vec![Constant; arity],
        1,
        move |inputs, output| Ok(Verdict::from_bool(f(inputs)?.as_ref() == Some(&output[0]))),
        move |inputs| Ok(f(inputs)?.into_iter().map(|t| vec![t]).collect()),
    )
}

pub fn head() -> PluginDescriptor {
    list_function("head", 1, |inputs| {
        Ok(unpack(constant(inputs, 0)?)?.map(|(h, _)| h.clone()))
    })
}

pub fn tail() -> PluginDescriptor {
    list_function("tail", 1, |inputs| {
        Ok(unpack(constant(inputs, 0)?)?.map(|(_, t)| t.clone()))
    })
}

pub fn append() -> PluginDescriptor {
    list_function("append", 2, |inputs| {
        let front = list_items(constant(inputs, 0)?)?;
        let back = constant(inputs, 1)?;
        list_items(back)?;
        Ok(Some(
            front
                .into_iter()
                .rev()
                .fold(back.clone(), |acc, t| cons(t.clone(), acc)),
        ))
    })
}
