//! Abstract syntax of HEX-programs and its printed normal form.

use std::collections::BTreeSet;
use std::fmt;

/// A term: symbolic constant, integer, variable or compound term.
///
/// Symbolic constants keep their character content only; `abc` and `"abc"`
/// denote the same constant and print in bare form whenever that is a valid
/// identifier.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Const(String),
    Int(i64),
    Var(String),
    Func(String, Vec<Term>),
}

impl Term {
    pub fn constant(name: impl Into<String>) -> Self {
        Term::Const(name.into())
    }

    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Const(_) | Term::Int(_) => true,
            Term::Func(_, args) => args.iter().all(Term::is_ground),
        }
    }

    /// Collects the variable names occurring in the term.
    pub fn collect_vars<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Term::Var(v) => {
                out.insert(v);
            }
            Term::Func(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
            Term::Const(_) | Term::Int(_) => {}
        }
    }

    /// Calls `f` on the term and every subterm, outermost first.
    pub fn visit(&self, f: &mut impl FnMut(&Term)) {
        f(self);
        if let Term::Func(_, args) = self {
            args.iter().for_each(|a| a.visit(f));
        }
    }

    /// The string content of a symbolic constant.
    pub fn as_str(&self) -> Option<&str> {
        match self {
            Term::Const(s) => Some(s),
            _ => None,
        }
    }
}

/// True iff `s` can be printed as a bare lowercase identifier.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    s != "not" && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn write_quoted(f: &mut fmt::Formatter<'_>, s: &str) -> fmt::Result {
    f.write_str("\"")?;
    for c in s.chars() {
        match c {
            '"' => f.write_str("\\\"")?,
            '\\' => f.write_str("\\\\")?,
            '\n' => f.write_str("\\n")?,
            c => write!(f, "{c}")?,
        }
    }
    f.write_str("\"")
}

pub(crate) fn write_args(f: &mut fmt::Formatter<'_>, args: &[Term]) -> fmt::Result {
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{a}")?;
    }
    Ok(())
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Const(s) if is_identifier(s) => f.write_str(s),
            Term::Const(s) => write_quoted(f, s),
            Term::Int(n) => write!(f, "{n}"),
            Term::Var(v) => f.write_str(v),
            Term::Func(name, args) => {
                write!(f, "{name}(")?;
                write_args(f, args)?;
                f.write_str(")")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrdinaryAtom {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl OrdinaryAtom {
    pub fn new(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Self {
            predicate: predicate.into(),
            args,
        }
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }
}

impl fmt::Display for OrdinaryAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicate)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            write_args(f, &self.args)?;
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// An external atom `&name[inputs](outputs)`.
///
/// Inputs stay as terms until a plugin signature is known: a bare lowercase
/// identifier at a predicate-kind position names a predicate, anything else is
/// a constant-or-variable input.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExternalAtom {
    pub name: String,
    pub inputs: Vec<Term>,
    pub outputs: Vec<Term>,
}

impl ExternalAtom {
    /// Variables among the inputs. Variables are always constant-kind inputs.
    pub fn input_vars(&self) -> BTreeSet<&str> {
        let mut vars = BTreeSet::new();
        self.inputs.iter().for_each(|t| t.collect_vars(&mut vars));
        vars
    }

    pub fn output_vars(&self) -> BTreeSet<&str> {
        let mut vars = BTreeSet::new();
        self.outputs.iter().for_each(|t| t.collect_vars(&mut vars));
        vars
    }
}

impl fmt::Display for ExternalAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "&{}[", self.name)?;
        write_args(f, &self.inputs)?;
        f.write_str("]")?;
        if !self.outputs.is_empty() {
            f.write_str("(")?;
            write_args(f, &self.outputs)?;
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BodyAtom {
    Ordinary(OrdinaryAtom),
    External(ExternalAtom),
}

impl fmt::Display for BodyAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BodyAtom::Ordinary(a) => a.fmt(f),
            BodyAtom::External(e) => e.fmt(f),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Literal {
    pub atom: BodyAtom,
    pub negated: bool,
}

impl Literal {
    pub fn pos(atom: BodyAtom) -> Self {
        Self {
            atom,
            negated: false,
        }
    }

    pub fn neg(atom: BodyAtom) -> Self {
        Self {
            atom,
            negated: true,
        }
    }

    pub fn vars(&self) -> BTreeSet<&str> {
        let mut vars = BTreeSet::new();
        match &self.atom {
            BodyAtom::Ordinary(a) => a.args.iter().for_each(|t| t.collect_vars(&mut vars)),
            BodyAtom::External(e) => {
                e.inputs.iter().for_each(|t| t.collect_vars(&mut vars));
                e.outputs.iter().for_each(|t| t.collect_vars(&mut vars));
            }
        }
        vars
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("not ")?;
        }
        self.atom.fmt(f)
    }
}

/// A rule. No head atoms make a constraint, two or more a disjunctive rule.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rule {
    pub head: Vec<OrdinaryAtom>,
    pub body: Vec<Literal>,
}

impl Rule {
    pub fn is_fact(&self) -> bool {
        self.head.len() == 1 && self.body.is_empty()
    }

    pub fn is_constraint(&self) -> bool {
        self.head.is_empty()
    }

    pub fn vars(&self) -> BTreeSet<&str> {
        let mut vars = BTreeSet::new();
        for h in &self.head {
            h.args.iter().for_each(|t| t.collect_vars(&mut vars));
        }
        for l in &self.body {
            vars.extend(l.vars());
        }
        vars
    }
}

fn write_body(f: &mut fmt::Formatter<'_>, body: &[Literal]) -> fmt::Result {
    for (i, l) in body.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{l}")?;
    }
    Ok(())
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, h) in self.head.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{h}")?;
        }
        if !self.body.is_empty() {
            if self.head.is_empty() {
                f.write_str(":- ")?;
            } else {
                f.write_str(" :- ")?;
            }
            write_body(f, &self.body)?;
        }
        f.write_str(".")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeakConstraint {
    pub body: Vec<Literal>,
    pub weight: i64,
    pub level: i64,
}

impl WeakConstraint {
    pub fn vars(&self) -> BTreeSet<&str> {
        let mut vars = BTreeSet::new();
        for l in &self.body {
            vars.extend(l.vars());
        }
        vars
    }
}

impl fmt::Display for WeakConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(":~ ")?;
        write_body(f, &self.body)?;
        write!(f, ". [{}@{}]", self.weight, self.level)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Program {
    pub rules: Vec<Rule>,
    pub weak_constraints: Vec<WeakConstraint>,
}

impl Program {
    pub fn is_empty(&self) -> bool {
        self.rules.is_empty() && self.weak_constraints.is_empty()
    }

    pub fn facts(&self) -> impl Iterator<Item = &OrdinaryAtom> {
        self.rules
            .iter()
            .filter(|r| r.is_fact())
            .map(|r| &r.head[0])
    }

    /// Every literal in rule and weak-constraint bodies.
    pub fn body_literals(&self) -> impl Iterator<Item = &Literal> {
        self.rules
            .iter()
            .flat_map(|r| r.body.iter())
            .chain(self.weak_constraints.iter().flat_map(|w| w.body.iter()))
    }

    pub fn externals(&self) -> impl Iterator<Item = &ExternalAtom> {
        self.body_literals().filter_map(|l| match &l.atom {
            BodyAtom::External(e) => Some(e),
            BodyAtom::Ordinary(_) => None,
        })
    }

    pub fn has_disjunction(&self) -> bool {
        self.rules.iter().any(|r| r.head.len() > 1)
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            writeln!(f, "{r}")?;
        }
        for w in &self.weak_constraints {
            writeln!(f, "{w}")?;
        }
        Ok(())
    }
}
