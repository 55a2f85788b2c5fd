use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::lexer::{tokenize, Tok, Token};
use super::{ParseError, ParseErrorKind};
use crate::atlas::Atlas;
use crate::error::Error;
use crate::formulas::{blow_up, codim_rank_leq, kunneth, p_fibration, projective_bundle};
use crate::motive::{AtomKind, MotiveExpr};
use crate::tate::TatePolynomial;

/// Where a constructor or atom came from in the source text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeSpan {
    pub label: String,
    pub start: usize,
    pub end: usize,
}

/// Parsed text with its tree and the span of every atom and builtin call.
#[derive(Debug, Clone)]
pub struct SourceExpr {
    pub text: String,
    pub expr: MotiveExpr,
    pub spans: Vec<NodeSpan>,
}

pub fn parse(text: &str, atlas: &Atlas) -> Result<MotiveExpr, ParseError> {
    parse_source(text, atlas).map(|s| s.expr)
}

pub fn parse_source(text: &str, atlas: &Atlas) -> Result<SourceExpr, ParseError> {
    let mut p = Parser::new(text, Some(atlas))?;
    let expr = p.expr()?;
    p.expect_eof()?;
    Ok(SourceExpr {
        text: text.to_owned(),
        expr,
        spans: p.spans,
    })
}

/// Parses `1 + 2L + 2L^2`-style polynomial text.
pub fn parse_polynomial(text: &str) -> Result<TatePolynomial, ParseError> {
    let mut p = Parser::new(text, None)?;
    let poly = p.polynomial()?;
    p.expect_eof()?;
    Ok(poly)
}

enum Arg {
    Expr(MotiveExpr),
    Int(u32),
}

/// Arguments of a call with their source spans.
type Args = Vec<(Arg, usize, usize)>;

struct Parser<'a> {
    src: &'a str,
    toks: Vec<Token>,
    pos: usize,
    atlas: Option<&'a Atlas>,
    spans: Vec<NodeSpan>,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, atlas: Option<&'a Atlas>) -> Result<Self, ParseError> {
        Ok(Self {
            src,
            toks: tokenize(src)?,
            pos: 0,
            atlas,
            spans: Vec::new(),
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.pos + offset).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, kind: ParseErrorKind, start: usize, end: usize, msg: impl Into<String>) -> ParseError {
        ParseError::at(self.src, kind, start, end, msg)
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        let t = &self.toks[self.pos];
        self.err(
            ParseErrorKind::Syntax,
            t.start,
            t.end,
            format!("expected {wanted}, found {}", t.tok.describe()),
        )
    }

    fn expect(&mut self, tok: Tok, wanted: &str) -> Result<Token, ParseError> {
        if *self.peek() == tok {
            Ok(self.bump())
        } else {
            Err(self.unexpected(wanted))
        }
    }

    fn expect_eof(&self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Eof => Ok(()),
            _ => Err(self.unexpected("end of input")),
        }
    }

    fn atlas(&self) -> &'a Atlas {
        self.atlas.expect("expression parsing needs an atlas")
    }

    fn expr(&mut self) -> Result<MotiveExpr, ParseError> {
        let mut items = vec![self.term()?];
        while *self.peek() == Tok::Plus {
            self.bump();
            items.push(self.term()?);
        }
        Ok(if items.len() == 1 {
            items.pop().expect("one item")
        } else {
            MotiveExpr::Sum(items)
        })
    }

    fn term(&mut self) -> Result<MotiveExpr, ParseError> {
        let mut e = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            let start = self.toks[self.pos].start;
            let twist = self.twist()?;
            if twist.is_zero() {
                let end = self.toks[self.pos.saturating_sub(1)].end;
                return Err(self.err(ParseErrorKind::Syntax, start, end, "tensor with the zero polynomial"));
            }
            e = e.twist(twist);
        }
        Ok(e)
    }

    fn twist(&mut self) -> Result<TatePolynomial, ParseError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let p = self.polynomial()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(p)
            }
            Tok::Ident(ref s) if s == "L" => self.lefschetz_power().map(TatePolynomial::lefschetz),
            Tok::Nat(n) => {
                self.bump();
                Ok(TatePolynomial::monomial(0, n))
            }
            _ => Err(self.unexpected("`L`, `L^k`, a number or a parenthesized polynomial")),
        }
    }

    /// `L` or `L^k`, returning `k`.
    fn lefschetz_power(&mut self) -> Result<u32, ParseError> {
        self.bump();
        if *self.peek() != Tok::Caret {
            return Ok(1);
        }
        self.bump();
        self.small_nat()
    }

    fn small_nat(&mut self) -> Result<u32, ParseError> {
        let t = self.bump();
        match t.tok {
            Tok::Nat(n) => n
                .to_u32()
                .ok_or_else(|| self.err(ParseErrorKind::Syntax, t.start, t.end, "number too large")),
            other => Err(self.err(
                ParseErrorKind::Syntax,
                t.start,
                t.end,
                format!("expected a number, found {}", other.describe()),
            )),
        }
    }

    fn polynomial(&mut self) -> Result<TatePolynomial, ParseError> {
        let mut p = self.poly_term()?;
        while *self.peek() == Tok::Plus {
            self.bump();
            p += &self.poly_term()?;
        }
        Ok(p)
    }

    fn poly_term(&mut self) -> Result<TatePolynomial, ParseError> {
        let coeff = match self.peek().clone() {
            Tok::Nat(n) => {
                self.bump();
                if *self.peek() == Tok::Star {
                    self.bump();
                    if !matches!(self.peek(), Tok::Ident(s) if s == "L") {
                        return Err(self.unexpected("`L` after `*`"));
                    }
                }
                Some(n)
            }
            _ => None,
        };
        let exponent = match self.peek() {
            Tok::Ident(s) if s == "L" => Some(self.lefschetz_power()?),
            _ => None,
        };
        match (coeff, exponent) {
            (None, None) => Err(self.unexpected("a polynomial term")),
            (c, e) => Ok(TatePolynomial::monomial(
                e.unwrap_or(0),
                c.unwrap_or_else(|| BigUint::from(1u32)),
            )),
        }
    }

    fn factor(&mut self) -> Result<MotiveExpr, ParseError> {
        let t = self.toks[self.pos].clone();
        match t.tok {
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Question => {
                self.bump();
                let name_tok = self.bump();
                let Tok::Ident(name) = name_tok.tok else {
                    return Err(self.err(
                        ParseErrorKind::Syntax,
                        name_tok.start,
                        name_tok.end,
                        "expected a name after `?`",
                    ));
                };
                if let Some(atom) = self.atlas().registry().get(&name) {
                    if atom.kind == AtomKind::Known {
                        return Err(self.err(
                            ParseErrorKind::Syntax,
                            t.start,
                            name_tok.end,
                            format!("`{name}` is a registered atom, not an unknown"),
                        ));
                    }
                }
                self.spans.push(NodeSpan {
                    label: format!("?{name}"),
                    start: t.start,
                    end: name_tok.end,
                });
                Ok(MotiveExpr::Unknown(name))
            }
            Tok::Ident(name) => {
                if *self.peek_at(1) == Tok::LParen {
                    self.builtin(&name, t.start)
                } else if name == "K3" && !self.atlas().registry().contains("K3") {
                    self.bump();
                    self.builtin_k3(t.start, t.end)
                } else if name == "L" {
                    Err(self.err(ParseErrorKind::Syntax, t.start, t.end, "`L` can only appear after `*`"))
                } else {
                    self.bump();
                    let atom = self.atlas().registry().get(&name).ok_or_else(|| {
                        self.err(
                            ParseErrorKind::UnknownIdentifier,
                            t.start,
                            t.end,
                            format!("`{name}` is not registered"),
                        )
                    })?;
                    self.spans.push(NodeSpan {
                        label: name.clone(),
                        start: t.start,
                        end: t.end,
                    });
                    Ok(match atom.kind {
                        AtomKind::Known => MotiveExpr::Atom(name),
                        AtomKind::Unknown => MotiveExpr::Unknown(name),
                    })
                }
            }
            _ => Err(self.unexpected("an expression")),
        }
    }

    fn builtin_k3(&mut self, start: usize, end: usize) -> Result<MotiveExpr, ParseError> {
        let entry = self.atlas().k3().map_err(|e| self.eval_err(start, end, e))?;
        self.spans.push(NodeSpan {
            label: "K3".into(),
            start,
            end,
        });
        Ok(MotiveExpr::atom(entry.name()))
    }

    fn args(&mut self) -> Result<(Args, usize), ParseError> {
        self.expect(Tok::LParen, "`(`")?;
        let mut args = Vec::new();
        if *self.peek() != Tok::RParen {
            loop {
                let start = self.toks[self.pos].start;
                let arg = self.arg()?;
                let end = self.toks[self.pos.saturating_sub(1)].end;
                args.push((arg, start, end));
                if *self.peek() == Tok::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        let close = self.expect(Tok::RParen, "`,` or `)`")?;
        Ok((args, close.end))
    }

    fn arg(&mut self) -> Result<Arg, ParseError> {
        match self.peek() {
            Tok::Nat(_) => Ok(Arg::Int(self.small_nat()?)),
            Tok::Ident(s) if s == "codim" && *self.peek_at(1) == Tok::LParen => {
                let start = self.toks[self.pos].start;
                self.bump();
                let (args, end) = self.args()?;
                let ints = self.ints("codim", &args, 3, start, end)?;
                codim_rank_leq(ints[0], ints[1], ints[2])
                    .map(Arg::Int)
                    .map_err(|e| self.err(ParseErrorKind::Arity, start, end, e.to_string()))
            }
            _ => Ok(Arg::Expr(self.expr()?)),
        }
    }

    fn ints(
        &self,
        name: &str,
        args: &[(Arg, usize, usize)],
        n: usize,
        start: usize,
        end: usize,
    ) -> Result<Vec<u32>, ParseError> {
        if args.len() != n {
            return Err(self.err(
                ParseErrorKind::Arity,
                start,
                end,
                format!("{name} takes {n} integer argument(s), got {}", args.len()),
            ));
        }
        args.iter()
            .map(|(a, s, e)| match a {
                Arg::Int(v) => Ok(*v),
                Arg::Expr(_) => Err(self.err(ParseErrorKind::Arity, *s, *e, format!("{name} expects an integer here"))),
            })
            .collect()
    }

    fn eval_err(&self, start: usize, end: usize, e: Error) -> ParseError {
        self.err(ParseErrorKind::Eval, start, end, e.to_string())
    }

    fn builtin(&mut self, name: &str, start: usize) -> Result<MotiveExpr, ParseError> {
        self.bump();
        let (args, end) = self.args()?;
        let arity = |n: usize, shape: &str| -> Result<(), ParseError> {
            if args.len() == n {
                Ok(())
            } else {
                Err(self.err(
                    ParseErrorKind::Arity,
                    start,
                    end,
                    format!("{name}({shape}) takes {n} argument(s), got {}", args.len()),
                ))
            }
        };
        let expr_at = |i: usize| -> Result<&MotiveExpr, ParseError> {
            match &args[i] {
                (Arg::Expr(e), _, _) => Ok(e),
                (Arg::Int(_), s, e) => Err(self.err(
                    ParseErrorKind::Arity,
                    *s,
                    *e,
                    format!("{name} expects an expression here"),
                )),
            }
        };
        let int_at = |i: usize| -> Result<u32, ParseError> {
            match &args[i] {
                (Arg::Int(v), _, _) => Ok(*v),
                (Arg::Expr(_), s, e) => {
                    Err(self.err(ParseErrorKind::Arity, *s, *e, format!("{name} expects an integer here")))
                }
            }
        };
        let range = |ok: bool, msg: &str| -> Result<(), ParseError> {
            if ok {
                Ok(())
            } else {
                Err(self.err(ParseErrorKind::Arity, start, end, msg.to_owned()))
            }
        };
        let atlas = self.atlas();
        let registry = atlas.registry();
        let eval = |r: crate::error::Result<MotiveExpr>| r.map_err(|e| self.eval_err(start, end, e));
        let atlas_atom = |r: crate::error::Result<std::sync::Arc<crate::atlas::AtlasEntry>>| {
            r.map(|e| MotiveExpr::atom(e.name()))
                .map_err(|e| self.eval_err(start, end, e))
        };

        let expr = match name {
            "P" => {
                arity(1, "n")?;
                atlas_atom(atlas.projective_space(int_at(0)?))?
            }
            "Q" => {
                arity(1, "n")?;
                let n = int_at(0)?;
                range(n >= 1, "Q(n) needs n >= 1")?;
                atlas_atom(atlas.quadric(n))?
            }
            "Gr" => {
                arity(2, "k, n")?;
                let (k, n) = (int_at(0)?, int_at(1)?);
                range(k >= 1 && k < n, "Gr(k, n) needs 1 <= k < n")?;
                atlas_atom(atlas.grassmannian(k, n))?
            }
            "K3" => {
                arity(0, "")?;
                return self.builtin_k3(start, end);
            }
            "Hilb2" => {
                arity(1, "S")?;
                let surface = match expr_at(0)? {
                    MotiveExpr::Atom(s) => atlas
                        .get(s)
                        .ok_or_else(|| self.eval_err(start, end, Error::MissingRealization(s.clone())))?,
                    _ => return Err(self.err(ParseErrorKind::Arity, start, end, "Hilb2 takes a single surface atom")),
                };
                atlas_atom(atlas.hilb2(&surface))?
            }
            "PB" => {
                arity(2, "e, r")?;
                let r = int_at(1)?;
                range(r >= 1, "PB rank must be >= 1")?;
                eval(projective_bundle(expr_at(0)?, r))?
            }
            "Fib" => {
                arity(2, "e, k")?;
                p_fibration(expr_at(0)?, int_at(1)?)
            }
            "Bl" => {
                arity(3, "ambient, center, c")?;
                let c = int_at(2)?;
                range(c >= 2, "Bl codimension must be >= 2")?;
                eval(blow_up(registry, expr_at(0)?, expr_at(1)?, c))?
            }
            "Prod" => {
                arity(2, "a, b")?;
                eval(kunneth(registry, expr_at(0)?, expr_at(1)?))?
            }
            "codim" => {
                return Err(self.err(
                    ParseErrorKind::Syntax,
                    start,
                    end,
                    "codim(...) is a number, not a motive",
                ));
            }
            other => {
                return Err(self.err(
                    ParseErrorKind::UnknownIdentifier,
                    start,
                    start + other.len(),
                    format!("`{other}` is not a constructor"),
                ))
            }
        };
        self.spans.push(NodeSpan {
            label: name.to_owned(),
            start,
            end,
        });
        Ok(expr)
    }
}
