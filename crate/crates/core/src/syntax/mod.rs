//! Lexing, parsing and pretty-printing of the sugared surface language.

pub mod ast;
pub mod lexer;
mod parser;
pub mod pretty;

use std::fmt;

pub use ast::*;
pub use parser::{parse_expr, parse_item, parse_program};

/// First syntax error in a source text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
    /// Tokens or productions that would have been accepted here.
    pub expected: Vec<String>,
}

impl ParseError {
    /// True when the error sits at the end of input, i.e. more text might fix it.
    pub fn at_end_of_input(&self) -> bool {
        self.message.contains("end of input") || self.message.contains("unterminated")
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(" or "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}
