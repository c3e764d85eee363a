//! Recursive-descent parser for the ASCII formula syntax.
//!
//! ```text
//! formula := disj ( "->" formula )?          right associative, loosest
//! disj    := conj ( "|" conj )*
//! conj    := unary ( "&" unary )*
//! unary   := "~" unary | atom
//! atom    := ident | "bot" | "(" formula ")"
//! ident   := [a-z][a-zA-Z0-9_]*              except "bot"
//! ```

use std::fmt;

use thiserror::Error;

use super::formula::{and, imp, neg, or, Formula};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("syntax error at byte {offset}: expected {}, found {found}", expected.join(" or "))]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<&'static str>,
    pub found: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Bot,
    Not,
    And,
    Or,
    Arrow,
    LParen,
    RParen,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Bot => f.write_str("`bot`"),
            Tok::Not => f.write_str("`~`"),
            Tok::And => f.write_str("`&`"),
            Tok::Or => f.write_str("`|`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

const ATOM_START: [&str; 4] = ["identifier", "`bot`", "`~`", "`(`"];

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    tok: Tok,
    tok_start: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Self, ParseError> {
        let mut p = Parser {
            src,
            pos: 0,
            tok: Tok::Eof,
            tok_start: 0,
        };
        p.bump()?;
        Ok(p)
    }

    fn bump(&mut self) -> Result<(), ParseError> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        self.tok_start = self.pos;
        let Some(&c) = bytes.get(self.pos) else {
            self.tok = Tok::Eof;
            return Ok(());
        };
        let single = |t| (t, 1);
        let (tok, len) = match c {
            b'~' => single(Tok::Not),
            b'&' => single(Tok::And),
            b'|' => single(Tok::Or),
            b'(' => single(Tok::LParen),
            b')' => single(Tok::RParen),
            b'-' if bytes.get(self.pos + 1) == Some(&b'>') => (Tok::Arrow, 2),
            b'a'..=b'z' => {
                let end = bytes[self.pos..]
                    .iter()
                    .position(|b| !(b.is_ascii_alphanumeric() || *b == b'_'))
                    .map_or(bytes.len(), |k| self.pos + k);
                let word = &self.src[self.pos..end];
                let tok = if word == "bot" {
                    Tok::Bot
                } else {
                    Tok::Ident(word.to_owned())
                };
                (tok, end - self.pos)
            }
            _ => {
                let ch = self.src[self.pos..].chars().next().unwrap_or('?');
                return Err(ParseError {
                    offset: self.pos,
                    expected: vec!["a token"],
                    found: format!("`{ch}`"),
                });
            }
        };
        self.tok = tok;
        self.pos += len;
        Ok(())
    }

    fn error(&self, expected: &[&'static str]) -> ParseError {
        ParseError {
            offset: self.tok_start,
            expected: expected.to_vec(),
            found: self.tok.to_string(),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disj()?;
        if self.tok == Tok::Arrow {
            self.bump()?;
            let rhs = self.formula()?;
            return Ok(imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disj(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conj()?;
        while self.tok == Tok::Or {
            self.bump()?;
            lhs = or(lhs, self.conj()?);
        }
        Ok(lhs)
    }

    fn conj(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.tok == Tok::And {
            self.bump()?;
            lhs = and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match std::mem::replace(&mut self.tok, Tok::Eof) {
            Tok::Not => {
                self.bump()?;
                Ok(neg(self.unary()?))
            }
            Tok::Ident(name) => {
                self.bump()?;
                Ok(Formula::Var(name))
            }
            Tok::Bot => {
                self.bump()?;
                Ok(Formula::Bot)
            }
            Tok::LParen => {
                self.bump()?;
                let inner = self.formula()?;
                if self.tok != Tok::RParen {
                    return Err(self.error(&["`)`", "`->`", "`|`", "`&`"]));
                }
                self.bump()?;
                Ok(inner)
            }
            other => {
                self.tok = other;
                Err(self.error(&ATOM_START))
            }
        }
    }
}

pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text)?;
    let f = p.formula()?;
    if p.tok != Tok::Eof {
        return Err(p.error(&["end of input", "`->`", "`|`", "`&`"]));
    }
    Ok(f)
}
