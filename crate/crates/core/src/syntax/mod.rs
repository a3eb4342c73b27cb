//! Lexing, parsing and safety checking of HEX-program text.

pub mod ast;
pub mod lexer;
mod parser;
mod safety;

use thiserror::Error;

pub use ast::*;
pub use lexer::{tokenize, Token, TokenKind};
pub use parser::parse_program;
pub use safety::{bound_variables, check_safety};

use crate::external::ExternalAtomError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            column,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unsafe variable(s) {} in `{rule}`", .variables.join(", "))]
pub struct SafetyError {
    pub rule: String,
    pub variables: Vec<String>,
}

impl SafetyError {
    pub fn new(rule: String, variables: Vec<String>) -> Self {
        Self { rule, variables }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("syntax error at {0}")]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Safety(#[from] SafetyError),
    #[error(transparent)]
    External(#[from] ExternalAtomError),
}
