//! Parser for the polynomial expression grammar shared by the CLI, the
//! scenario files and all report witnesses.
//!
//! Grammar: integers, rationals `p/q`, identifiers `[A-Za-z][A-Za-z0-9_]*`,
//! operators `+ - * ^`, unary minus, parentheses. `*` is mandatory between
//! factors; `^` binds tighter than `*` binds tighter than `+`/`-`. The `/`
//! of a rational is part of the literal, not an operator.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::sync::Arc;

use crate::poly::{Poly, VarTable};

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum ExprError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier `{name}` at byte {pos}")]
    UnknownIdent { pos: usize, name: String },
    #[error("rational with zero denominator at byte {pos}")]
    ZeroDenominator { pos: usize },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ExprError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\r' | '\n' => i += 1,
            '+' => {
                out.push((i, Tok::Plus));
                i += 1;
            }
            '-' => {
                out.push((i, Tok::Minus));
                i += 1;
            }
            '*' => {
                out.push((i, Tok::Star));
                i += 1;
            }
            '^' => {
                out.push((i, Tok::Caret));
                i += 1;
            }
            '/' => {
                out.push((i, Tok::Slash));
                i += 1;
            }
            '(' => {
                out.push((i, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((i, Tok::RParen));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = src[start..i].parse().unwrap();
                out.push((start, Tok::Int(n)));
            }
            'A'..='Z' | 'a'..='z' => {
                let start = i;
                i += 1;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((start, Tok::Ident(src[start..i].to_string())));
            }
            _ => {
                return Err(ExprError::Syntax {
                    pos: i,
                    msg: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    vars: &'a Arc<VarTable>,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, t: &Tok, what: &str) -> Result<(), ExprError> {
        if self.peek() == Some(t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(ExprError::Syntax {
                pos: self.here(),
                msg: format!("expected {what}"),
            })
        }
    }

    // expr := term (('+'|'-') term)*
    fn expr(&mut self) -> Result<Poly, ExprError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    // term := factor ('*' factor)*
    fn term(&mut self) -> Result<Poly, ExprError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    // factor := '-' factor | base ('^' nat)?
    fn factor(&mut self) -> Result<Poly, ExprError> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            return Ok(self.factor()?.neg());
        }
        let base = self.base()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let pos = self.here();
            match self.bump() {
                Some(Tok::Int(n)) => {
                    let exp = u32::try_from(&n).map_err(|_| ExprError::Syntax {
                        pos,
                        msg: "exponent out of range".into(),
                    })?;
                    Ok(base.pow(exp))
                }
                _ => Err(ExprError::Syntax {
                    pos,
                    msg: "expected a non-negative integer exponent".into(),
                }),
            }
        } else {
            Ok(base)
        }
    }

    // base := number | ident | '(' expr ')'
    fn base(&mut self) -> Result<Poly, ExprError> {
        let pos = self.here();
        match self.bump() {
            Some(Tok::Int(n)) => {
                // rational literal p/q
                if self.peek() == Some(&Tok::Slash) {
                    self.pos += 1;
                    let dpos = self.here();
                    match self.bump() {
                        Some(Tok::Int(d)) => {
                            if d.is_zero() {
                                return Err(ExprError::ZeroDenominator { pos: dpos });
                            }
                            Ok(Poly::constant(self.vars, BigRational::new(n, d)))
                        }
                        _ => Err(ExprError::Syntax {
                            pos: dpos,
                            msg: "expected integer denominator".into(),
                        }),
                    }
                } else {
                    Ok(Poly::constant(self.vars, BigRational::from_integer(n)))
                }
            }
            Some(Tok::Ident(name)) => Poly::var(self.vars, &name)
                .map_err(|_| ExprError::UnknownIdent { pos, name }),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(e)
            }
            _ => Err(ExprError::Syntax {
                pos,
                msg: "expected a number, identifier or `(`".into(),
            }),
        }
    }
}

/// Parse `src` into a canonical [`Poly`] over `vars`.
pub fn parse_poly(src: &str, vars: &Arc<VarTable>) -> Result<Poly, ExprError> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        vars,
        end: src.len(),
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(ExprError::Syntax {
            pos: p.here(),
            msg: "trailing input".into(),
        });
    }
    Ok(e)
}
