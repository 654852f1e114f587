//! Recursive-descent parser for the expression grammar:
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := factor (('*' | '/') factor)*
//! factor   := '-' factor | power
//! power    := atom ('^' int)?
//! atom     := rational | ident | func '(' expr ')' | '(' expr ')'
//! rational := int ('/' posint)?
//! ```
//!
//! A literal `p/q` is only read as one rational when it opens a term and is
//! not the base of a power, so `x/2/3` and `8/2^2` keep their usual meaning.
//! There is no implicit multiplication: `2ae` is rejected.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::ast::{Expr, Func};
use super::ExprError;
use crate::numfield::Rational;

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

fn tokenize(text: &str) -> Result<Vec<(Token, usize)>, ExprError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        let tok = match b {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Token::Plus,
            b'-' => Token::Minus,
            b'*' => Token::Star,
            b'/' => Token::Slash,
            b'^' => Token::Caret,
            b'(' => Token::LParen,
            b')' => Token::RParen,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n = text[start..i].parse().expect("digits");
                out.push((Token::Number(n), start));
                continue;
            }
            b'a'..=b'z' | b'A'..=b'Z' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Token::Ident(text[start..i].to_string()), start));
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(ExprError::syntax(start, format!("unexpected character '{ch}'")));
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Token::End, text.len()));
    Ok(out)
}

fn function_named(name: &str) -> Option<Func> {
    match name {
        "sin" => Some(Func::Sin),
        "cos" => Some(Func::Cos),
        "sqrt" => Some(Func::Sqrt),
        _ => None,
    }
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos].0
    }

    fn peek_at(&self, ahead: usize) -> &Token {
        let idx = (self.pos + ahead).min(self.tokens.len() - 1);
        &self.tokens[idx].0
    }

    fn offset(&self) -> usize {
        self.tokens[self.pos].1
    }

    fn bump(&mut self) -> Token {
        let tok = self.tokens[self.pos].0.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        tok
    }

    fn expect(&mut self, tok: Token, what: &str) -> Result<(), ExprError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(ExprError::syntax(self.offset(), format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Token::Plus => {
                    self.bump();
                    lhs = lhs.add(self.term()?);
                }
                Token::Minus => {
                    self.bump();
                    lhs = lhs.sub(self.term()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.factor(true)?;
        loop {
            match self.peek() {
                Token::Star => {
                    self.bump();
                    lhs = lhs.mul(self.factor(false)?);
                }
                Token::Slash => {
                    self.bump();
                    lhs = lhs.div(self.factor(false)?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self, term_start: bool) -> Result<Expr, ExprError> {
        if *self.peek() == Token::Minus {
            self.bump();
            return Ok(self.factor(term_start)?.neg());
        }
        let base = self.atom(term_start)?;
        if *self.peek() != Token::Caret {
            return Ok(base);
        }
        self.bump();
        let negative = if *self.peek() == Token::Minus {
            self.bump();
            true
        } else {
            false
        };
        let at = self.offset();
        match self.bump() {
            Token::Number(n) => {
                let k = n.to_i64().ok_or_else(|| ExprError::syntax(at, "exponent out of range"))?;
                Ok(base.pow(if negative { -k } else { k }))
            }
            _ => Err(ExprError::syntax(at, "expected integer exponent")),
        }
    }

    fn atom(&mut self, term_start: bool) -> Result<Expr, ExprError> {
        let at = self.offset();
        match self.bump() {
            Token::Number(n) => {
                let fraction = term_start
                    && *self.peek() == Token::Slash
                    && matches!(self.peek_at(1), Token::Number(d) if !d.is_zero())
                    && *self.peek_at(2) != Token::Caret;
                if fraction {
                    self.bump();
                    let Token::Number(d) = self.bump() else { unreachable!() };
                    Ok(Expr::Const(Rational::new(n, d)))
                } else {
                    Ok(Expr::Const(Rational::from_integer(n)))
                }
            }
            Token::Ident(name) => {
                if *self.peek() == Token::LParen {
                    let f =
                        function_named(&name).ok_or(ExprError::UnknownFunction { name: name.clone(), offset: at })?;
                    self.bump();
                    let arg = self.expr()?;
                    self.expect(Token::RParen, "')'")?;
                    Ok(Expr::apply(f, arg))
                } else if function_named(&name).is_some() {
                    Err(ExprError::syntax(self.offset(), format!("expected '(' after {name}")))
                } else {
                    Ok(Expr::Var(name))
                }
            }
            Token::LParen => {
                let inner = self.expr()?;
                self.expect(Token::RParen, "')'")?;
                Ok(inner)
            }
            Token::End => Err(ExprError::syntax(at, "unexpected end of input")),
            _ => Err(ExprError::syntax(at, "expected a number, a name or '('")),
        }
    }
}

/// Parses `text` into an expression tree.
pub fn parse(text: &str) -> Result<Expr, ExprError> {
    let mut p = Parser { tokens: tokenize(text)?, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Token::End {
        return Err(ExprError::syntax(p.offset(), "expected an operator"));
    }
    Ok(e)
}
