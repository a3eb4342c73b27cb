use std::collections::HashMap;

use super::ast::*;
use super::lexer::{tokenize, Token, TokenKind};
use super::safety::unsafe_variables;
use super::{ParseError, SafetyError, SyntaxError};

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&TokenKind> {
        self.tokens.get(self.pos).map(|t| &t.kind)
    }

    fn location(&self) -> (usize, usize) {
        self.tokens
            .get(self.pos)
            .map_or(self.end, |t| (t.line, t.column))
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let (line, column) = self.location();
        ParseError::new(line, column, message)
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        match self.peek() {
            Some(k) => self.error(format!("expected {expected}, found {k}")),
            None => self.error(format!("expected {expected}, found end of input")),
        }
    }

    fn next(&mut self) -> Option<TokenKind> {
        let t = self.tokens.get(self.pos)?.kind.clone();
        self.pos += 1;
        Some(t)
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek() == Some(kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, kind: &TokenKind) -> Result<(), ParseError> {
        if self.eat(kind) {
            Ok(())
        } else {
            Err(self.unexpected(&kind.to_string()))
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Some(TokenKind::Var(_)) => match self.next() {
                Some(TokenKind::Var(v)) => Ok(Term::Var(v)),
                _ => unreachable!(),
            },
            Some(TokenKind::Int(_)) => match self.next() {
                Some(TokenKind::Int(n)) => Ok(Term::Int(n)),
                _ => unreachable!(),
            },
            Some(TokenKind::Str(_)) => match self.next() {
                Some(TokenKind::Str(s)) => Ok(Term::Const(s)),
                _ => unreachable!(),
            },
            Some(TokenKind::Ident(_)) => {
                let Some(TokenKind::Ident(name)) = self.next() else {
                    unreachable!()
                };
                if self.eat(&TokenKind::LParen) {
                    let args = self.term_list(&TokenKind::RParen)?;
                    if args.is_empty() {
                        return Err(self.error("compound terms need at least one argument"));
                    }
                    Ok(Term::Func(name, args))
                } else {
                    Ok(Term::Const(name))
                }
            }
            _ => Err(self.unexpected("a term")),
        }
    }

    /// Parses `t1, ..., tn` followed by `close`; the list may be empty.
    fn term_list(&mut self, close: &TokenKind) -> Result<Vec<Term>, ParseError> {
        let mut terms = Vec::new();
        if self.eat(close) {
            return Ok(terms);
        }
        loop {
            terms.push(self.term()?);
            if self.eat(close) {
                return Ok(terms);
            }
            self.expect(&TokenKind::Comma)?;
        }
    }

    fn ordinary_atom(&mut self) -> Result<OrdinaryAtom, ParseError> {
        let Some(TokenKind::Ident(predicate)) = self.peek().cloned() else {
            return Err(self.unexpected("an atom"));
        };
        self.pos += 1;
        let mut args = Vec::new();
        if self.eat(&TokenKind::LParen) {
            args = self.term_list(&TokenKind::RParen)?;
            if args.is_empty() {
                return Err(self.error("empty argument list; write nullary atoms without `()`"));
            }
        }
        Ok(OrdinaryAtom { predicate, args })
    }

    fn external_atom(&mut self) -> Result<ExternalAtom, ParseError> {
        self.expect(&TokenKind::Amp)?;
        let Some(TokenKind::Ident(name)) = self.peek().cloned() else {
            return Err(self.unexpected("an external predicate name after `&`"));
        };
        self.pos += 1;
        let mut inputs = Vec::new();
        if self.eat(&TokenKind::LBracket) {
            inputs = self.term_list(&TokenKind::RBracket)?;
        }
        let mut outputs = Vec::new();
        if self.eat(&TokenKind::LParen) {
            outputs = self.term_list(&TokenKind::RParen)?;
        }
        Ok(ExternalAtom {
            name,
            inputs,
            outputs,
        })
    }

    fn literal(&mut self) -> Result<Literal, ParseError> {
        let negated = self.eat(&TokenKind::Not);
        let atom = if self.peek() == Some(&TokenKind::Amp) {
            BodyAtom::External(self.external_atom()?)
        } else {
            BodyAtom::Ordinary(self.ordinary_atom()?)
        };
        Ok(Literal { atom, negated })
    }

    fn body(&mut self) -> Result<Vec<Literal>, ParseError> {
        let mut body = vec![self.literal()?];
        while self.eat(&TokenKind::Comma) {
            body.push(self.literal()?);
        }
        Ok(body)
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        match self.peek() {
            Some(TokenKind::Int(n)) => {
                let n = *n;
                self.pos += 1;
                Ok(n)
            }
            _ => Err(self.unexpected("an integer")),
        }
    }

    fn weak_constraint(&mut self) -> Result<WeakConstraint, ParseError> {
        self.expect(&TokenKind::WeakIf)?;
        let body = self.body()?;
        self.expect(&TokenKind::Dot)?;
        self.expect(&TokenKind::LBracket)?;
        let weight = self.integer()?;
        let mut level = 0;
        if self.eat(&TokenKind::At) {
            let at = self.location();
            level = self.integer()?;
            if level < 0 {
                return Err(ParseError::new(at.0, at.1, "levels must be nonnegative"));
            }
        }
        self.expect(&TokenKind::RBracket)?;
        Ok(WeakConstraint {
            body,
            weight,
            level,
        })
    }

    fn rule(&mut self) -> Result<Rule, ParseError> {
        let mut head = Vec::new();
        if self.peek() != Some(&TokenKind::If) {
            head.push(self.ordinary_atom()?);
            while self.eat(&TokenKind::Bar) {
                head.push(self.ordinary_atom()?);
            }
        }
        let mut body = Vec::new();
        if self.eat(&TokenKind::If) {
            body = self.body()?;
        }
        self.expect(&TokenKind::Dot)?;
        Ok(Rule { head, body })
    }
}

/// Tracks the first arity seen for each predicate.
#[derive(Default)]
struct Arities(HashMap<String, usize>);

impl Arities {
    fn check(&mut self, atom: &OrdinaryAtom, at: (usize, usize)) -> Result<(), ParseError> {
        let arity = *self.0.entry(atom.predicate.clone()).or_insert(atom.arity());
        if arity != atom.arity() {
            return Err(ParseError::new(
                at.0,
                at.1,
                format!(
                    "predicate `{}` used with arity {} but earlier with arity {arity}",
                    atom.predicate,
                    atom.arity()
                ),
            ));
        }
        Ok(())
    }

    fn check_body(&mut self, body: &[Literal], at: (usize, usize)) -> Result<(), ParseError> {
        for l in body {
            if let BodyAtom::Ordinary(a) = &l.atom {
                self.check(a, at)?;
            }
        }
        Ok(())
    }
}

/// Parses program text and checks predicate arities and rule safety.
///
/// External atoms are not resolved here; see [`super::check_safety`] for the
/// registry-aware check performed before grounding.
pub fn parse_program(text: &str) -> Result<Program, SyntaxError> {
    let tokens = tokenize(text)?;
    let end = tokens.last().map_or((1, 1), |t| (t.line, t.column));
    let mut parser = Parser {
        tokens,
        pos: 0,
        end,
    };
    let mut program = Program::default();
    let mut arities = Arities::default();
    while parser.peek().is_some() {
        let at = parser.location();
        if parser.peek() == Some(&TokenKind::WeakIf) {
            let weak = parser.weak_constraint()?;
            arities.check_body(&weak.body, at)?;
            let unsafe_vars = unsafe_variables(&weak.body, weak.vars());
            if !unsafe_vars.is_empty() {
                return Err(SafetyError::new(weak.to_string(), unsafe_vars).into());
            }
            program.weak_constraints.push(weak);
        } else {
            let rule = parser.rule()?;
            for h in &rule.head {
                arities.check(h, at)?;
            }
            arities.check_body(&rule.body, at)?;
            let unsafe_vars = unsafe_variables(&rule.body, rule.vars());
            if !unsafe_vars.is_empty() {
                return Err(SafetyError::new(rule.to_string(), unsafe_vars).into());
            }
            program.rules.push(rule);
        }
    }
    Ok(program)
}

/// Parses a single rule without arity or safety checks.
#[cfg(test)]
pub(crate) fn parse_rule_unchecked(text: &str) -> Result<Rule, ParseError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        end: (1, 1),
    };
    parser.rule()
}
