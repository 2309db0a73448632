//! Text form of polynomials.
//!
//! Grammar:
//!
//! ```text
//! expr   := ['+' | '-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' uint)?
//! atom   := int ['/' int] | var | '(' expr ')'
//! ```
//!
//! `int '/' int` is a rational coefficient literal; any other use of `/` is
//! rejected. Juxtaposition (`2x`, `x y`) is a syntax error.

use std::sync::Arc;

use num::bigint::BigInt;
use num::traits::Zero;

use crate::error::{AlgebraError, Result};
use crate::field::Field;
use crate::poly::Polynomial;
use crate::ring::PolyRing;

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
    End,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn tokenize(text: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut line, mut col) = (1usize, 1usize);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '^' => Some(Tok::Caret),
            '/' => Some(Tok::Slash),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Spanned {
                tok,
                line: l0,
                column: c0,
            });
            i += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Spanned {
                tok: Tok::Int(s.parse().expect("digits")),
                line: l0,
                column: c0,
            });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Spanned {
                tok: Tok::Ident(s),
                line: l0,
                column: c0,
            });
            continue;
        }
        return Err(AlgebraError::Syntax {
            line: l0,
            column: c0,
            message: format!("unexpected character `{c}`"),
        });
    }
    out.push(Spanned {
        tok: Tok::End,
        line,
        column: col,
    });
    Ok(out)
}

struct Parser<'a, F: Field> {
    toks: Vec<Spanned>,
    pos: usize,
    ring: &'a Arc<PolyRing>,
    _field: std::marker::PhantomData<F>,
}

impl<'a, F: Field> Parser<'a, F> {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, at: &Spanned, message: impl Into<String>) -> AlgebraError {
        AlgebraError::Syntax {
            line: at.line,
            column: at.column,
            message: message.into(),
        }
    }

    fn expr(&mut self) -> Result<Polynomial<F>> {
        let mut negate = false;
        match self.peek().tok {
            Tok::Plus => {
                self.bump();
            }
            Tok::Minus => {
                self.bump();
                negate = true;
            }
            _ => {}
        }
        let mut acc = self.term()?;
        if negate {
            acc = -acc;
        }
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.checked_add(&t)?;
                }
                Tok::Minus => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.checked_sub(&t)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial<F>> {
        let mut acc = self.factor()?;
        loop {
            let next = self.peek().clone();
            match next.tok {
                Tok::Star => {
                    self.bump();
                    let f = self.factor()?;
                    acc = acc.checked_mul(&f)?;
                }
                Tok::Slash => {
                    return Err(AlgebraError::Division {
                        line: next.line,
                        column: next.column,
                    })
                }
                Tok::Int(_) | Tok::Ident(_) | Tok::LParen => {
                    return Err(self.error(&next, "implicit multiplication is not allowed; use `*`"))
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Polynomial<F>> {
        let base = self.atom()?;
        if self.peek().tok == Tok::Caret {
            self.bump();
            let t = self.bump();
            match &t.tok {
                Tok::Int(n) => {
                    let e: u32 = u32::try_from(n)
                        .map_err(|_| self.error(&t, "exponent too large"))?;
                    return base.checked_pow(e);
                }
                _ => return Err(self.error(&t, "expected a nonnegative integer exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial<F>> {
        let t = self.bump();
        match t.tok {
            Tok::Int(n) => {
                if self.peek().tok == Tok::Slash {
                    let slash = self.bump();
                    let d = self.bump();
                    return match &d.tok {
                        Tok::Int(den) => {
                            if den.is_zero() {
                                return Err(self.error(&d, "zero denominator"));
                            }
                            let c = F::from_fraction(&n, den).ok_or_else(|| {
                                self.error(&d, "denominator vanishes in the coefficient field")
                            })?;
                            Ok(Polynomial::constant(self.ring, c))
                        }
                        _ => Err(AlgebraError::Division {
                            line: slash.line,
                            column: slash.column,
                        }),
                    };
                }
                Ok(Polynomial::constant(self.ring, F::from_bigint(&n)))
            }
            Tok::Ident(name) => match self.ring.var_index(&name) {
                Some(i) => Ok(Polynomial::var(self.ring, i)),
                None => Err(AlgebraError::UnknownVariable {
                    name,
                    line: t.line,
                    column: t.column,
                }),
            },
            Tok::LParen => {
                let e = self.expr()?;
                let close = self.bump();
                if close.tok != Tok::RParen {
                    return Err(self.error(&close, "expected `)`"));
                }
                Ok(e)
            }
            Tok::Slash => Err(AlgebraError::Division {
                line: t.line,
                column: t.column,
            }),
            Tok::End => Err(self.error(&t, "unexpected end of input")),
            ref other => Err(self.error(&t, format!("unexpected token {other:?}"))),
        }
    }
}

/// Parse a polynomial in `ring`.
pub fn parse_polynomial<F: Field>(text: &str, ring: &Arc<PolyRing>) -> Result<Polynomial<F>> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        ring,
        _field: std::marker::PhantomData,
    };
    let out = p.expr()?;
    let t = p.peek().clone();
    match t.tok {
        Tok::End => Ok(out),
        Tok::Slash => Err(AlgebraError::Division {
            line: t.line,
            column: t.column,
        }),
        Tok::RParen => Err(p.error(&t, "unbalanced `)`")),
        _ => Err(p.error(&t, "unexpected trailing input")),
    }
}

/// Parse a list of polynomials.
pub fn parse_polynomials<F: Field, S: AsRef<str>>(
    texts: &[S],
    ring: &Arc<PolyRing>,
) -> Result<Vec<Polynomial<F>>> {
    texts.iter().map(|t| parse_polynomial(t.as_ref(), ring)).collect()
}

/// Canonical text form; `parse_polynomial` inverts it.
pub fn format_polynomial<F: Field>(p: &Polynomial<F>) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let ring = p.ring();
    let mut out = String::new();
    for (k, (m, c)) in p.terms().iter().enumerate() {
        let neg = c.is_negative();
        let abs = if neg { -c.clone() } else { c.clone() };
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else if neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let mut factors: Vec<String> = Vec::new();
        if m.is_one() || !abs.is_one() {
            factors.push(abs.to_string());
        }
        for (i, e) in m.exponents().enumerate() {
            match e {
                0 => {}
                1 => factors.push(ring.var_name(i).to_string()),
                _ => factors.push(format!("{}^{}", ring.var_name(i), e)),
            }
        }
        out.push_str(&factors.join("*"));
    }
    out
}
