//! Text notation for systems, equations, assignments and solution sets.
//!
//! ```text
//! system   := "0" | cycle { "+" cycle }
//! cycle    := "C" "(" INT "," INT ")"
//! equation := lterm { "+" lterm } "=" system
//! lterm    := "(" system ")" "*" VAR [ "^" INT ]
//! VAR      := "X" INT
//! ```
//!
//! Whitespace is insignificant. Periods, counts and variable indices are
//! positive; `0` only denotes the empty system.

mod lexer;
mod parser;
mod print;

use std::collections::BTreeMap;
use std::fmt;

use serde::Deserialize;
use thiserror::Error;

use crate::algebra::{AlgebraError, CycleSet, SolutionSet};
use crate::pipeline::{Equation, EquationError, VarId};
use parser::Parser;

pub use print::{
    expand_bases, print_assignments, print_bases, print_equation, print_equation_json,
    print_solution_set, print_system, print_table, Format,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LangError {
    #[error("syntax error at {pos}: {message}")]
    Syntax { pos: Position, message: String },
    #[error("invalid component C({period},{count}) at {pos}: period and count must be positive")]
    InvalidComponent {
        pos: Position,
        period: u64,
        count: u64,
    },
    #[error("number out of range at {pos}")]
    NumberOutOfRange { pos: Position },
    #[error("invalid variable at {pos}: indices start at 1")]
    InvalidVariable { pos: Position },
    #[error("{var} assigned twice at {pos}")]
    DuplicateVariable { pos: Position, var: VarId },
    #[error("invalid equation at {pos}: {source}")]
    Equation {
        pos: Position,
        source: EquationError,
    },
    #[error("at {pos}: {source}")]
    Algebra { pos: Position, source: AlgebraError },
    #[error("malformed JSON: {message}")]
    Json { message: String },
}

impl LangError {
    fn syntax(pos: Position, message: impl Into<String>) -> Self {
        LangError::Syntax {
            pos,
            message: message.into(),
        }
    }

    /// True when the text is well formed but denotes an invalid value.
    pub fn is_invalid_value(&self) -> bool {
        !matches!(
            self,
            LangError::Syntax { .. } | LangError::DuplicateVariable { .. } | LangError::Json { .. }
        )
    }

    pub fn position(&self) -> Option<Position> {
        match self {
            LangError::Syntax { pos, .. }
            | LangError::InvalidComponent { pos, .. }
            | LangError::NumberOutOfRange { pos }
            | LangError::InvalidVariable { pos }
            | LangError::DuplicateVariable { pos, .. }
            | LangError::Equation { pos, .. }
            | LangError::Algebra { pos, .. } => Some(*pos),
            LangError::Json { .. } => None,
        }
    }

    fn shift_lines(mut self, by: usize) -> Self {
        match &mut self {
            LangError::Syntax { pos, .. }
            | LangError::InvalidComponent { pos, .. }
            | LangError::NumberOutOfRange { pos }
            | LangError::InvalidVariable { pos }
            | LangError::DuplicateVariable { pos, .. }
            | LangError::Equation { pos, .. }
            | LangError::Algebra { pos, .. } => pos.line += by,
            LangError::Json { .. } => {}
        }
        self
    }
}

pub fn parse_system(text: &str) -> Result<CycleSet, LangError> {
    let mut p = Parser::new(text)?;
    let s = p.system()?;
    p.finish()?;
    Ok(s)
}

pub fn parse_equation(text: &str) -> Result<Equation, LangError> {
    let mut p = Parser::new(text)?;
    let eq = p.equation()?;
    p.finish()?;
    Ok(eq)
}

/// Arithmetic expression over systems: `+`, `*`, `^`, parentheses and
/// integer literals (`k` is `C(1,k)`).
pub fn parse_expr(text: &str) -> Result<CycleSet, LangError> {
    let mut p = Parser::new(text)?;
    let s = p.expr()?;
    p.finish()?;
    Ok(s)
}

/// `X1 = C(2,1); X2 = 0`
pub fn parse_assignment(text: &str) -> Result<BTreeMap<VarId, CycleSet>, LangError> {
    let mut p = Parser::new(text)?;
    let a = p.assignment()?;
    p.finish()?;
    Ok(a)
}

/// One system per non-blank line.
pub fn parse_solution_set(text: &str) -> Result<SolutionSet, LangError> {
    let mut out = SolutionSet::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        out.insert(parse_system(line).map_err(|e| e.shift_lines(i))?);
    }
    Ok(out)
}

pub fn parse_solution_set_json(text: &str) -> Result<SolutionSet, LangError> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Doc {
        solutions: Vec<CycleSet>,
    }
    let doc: Doc = serde_json::from_str(text).map_err(json_error)?;
    Ok(doc.solutions.into_iter().collect())
}

pub fn parse_equation_json(text: &str) -> Result<Equation, LangError> {
    serde_json::from_str(text).map_err(json_error)
}

fn json_error(e: serde_json::Error) -> LangError {
    LangError::Json {
        message: e.to_string(),
    }
}
