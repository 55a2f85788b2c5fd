//! A small expression language for motives.
//!
//! ```text
//! expr   := term ('+' term)*
//! term   := factor ('*' twist)*
//! factor := ident | '?' ident | builtin '(' args ')' | '(' expr ')'
//! twist  := 'L' ('^' nat)? | nat | '(' polynomial ')'
//! ```
//!
//! Builtins: `P(n)`, `Q(n)`, `Gr(k,n)`, `K3`, `Hilb2(S)`, `PB(e,r)`,
//! `Bl(ambient,center,c)`, `Fib(e,k)`, `Prod(a,b)`; integer arguments also
//! accept `codim(e,f,r)`. Identifiers resolve against the atlas registry.

mod lexer;
mod parser;
mod printer;

use std::fmt;

use thiserror::Error;

use crate::atlas::Atlas;
use crate::motive::{MotiveAtom, MotiveExpr, Tag};
use crate::tate::TatePolynomial;

pub use parser::{parse, parse_polynomial, parse_source, NodeSpan, SourceExpr};
pub use printer::print;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    UnknownIdentifier,
    Arity,
    /// A builtin rejected its (well-formed) arguments.
    Eval,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParseErrorKind::Syntax => "syntax error",
            ParseErrorKind::UnknownIdentifier => "unknown identifier",
            ParseErrorKind::Arity => "arity error",
            ParseErrorKind::Eval => "evaluation error",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at line {line}, column {column}: {message}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub message: String,
    pub line: usize,
    pub column: usize,
    pub start: usize,
    pub end: usize,
}

impl ParseError {
    pub(crate) fn at(src: &str, kind: ParseErrorKind, start: usize, end: usize, message: impl Into<String>) -> Self {
        let before = &src[..start.min(src.len())];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        Self {
            kind,
            message: message.into(),
            line,
            column,
            start,
            end,
        }
    }

    /// The offending line with a caret marker under the span.
    pub fn render(&self, src: &str) -> String {
        let text = src.lines().nth(self.line - 1).unwrap_or("");
        let width = src[self.start.min(src.len())..self.end.min(src.len())]
            .chars()
            .count()
            .max(1);
        format!(
            "{self}\n  {text}\n  {}{}",
            " ".repeat(self.column - 1),
            "^".repeat(width)
        )
    }
}

/// Whether `name` can be written as a bare identifier.
pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    chars.next().is_some_and(lexer::is_ident_start) && chars.all(lexer::is_ident_continue) && name != "L"
}

/// Name of the smooth ample divisor `Hilb^2_{Q'}(Y)` in the default context.
pub const HILB_DIVISOR: &str = "Hilb2QY";

/// Atlas with the standard entries plus the threefold divisor in `Hilb^2(K3)`.
pub fn default_atlas() -> crate::error::Result<Atlas> {
    let atlas = Atlas::standard()?;
    atlas.registry().ensure(
        MotiveAtom::new(HILB_DIVISOR, 3)
            .with_tag(Tag::SmoothProjective)
            .with_tag(Tag::TorsionFree),
    )?;
    Ok(atlas)
}

/// Shorthand for tests and callers that only need the tree.
pub fn parse_with_default(text: &str) -> crate::error::Result<MotiveExpr> {
    let atlas = default_atlas()?;
    Ok(parse(text, &atlas)?)
}

pub(crate) fn render_twist(p: &TatePolynomial) -> String {
    let monomial = p.terms().count() == 1 && p.terms().all(|(_, c)| *c == 1u32.into());
    if monomial {
        match p.low_degree() {
            Some(0) => "1".to_owned(),
            Some(1) => "L".to_owned(),
            Some(k) => format!("L^{k}"),
            None => unreachable!("monomial has a term"),
        }
    } else {
        format!("({p})")
    }
}
