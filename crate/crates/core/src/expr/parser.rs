//! Recursive-descent parser for the expression language:
//!
//! ```text
//! expr     := term (("+"|"-") term)*
//! term     := factor (("*"|"/") factor)*
//! factor   := ["-"] atom ["^" exponent]
//! exponent := ["-"] integer | "n" | "(" expr ")"
//! atom     := rational | "n" | "omega" | "(" expr ")"
//!           | "series" "(" "n" "," expr ")" | "product" "(" "n" "," expr ")"
//!           | "sqrt" "(" expr ")"
//! rational := integer ["/" positive-integer]
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use super::ast::Expr;
use crate::rational::Rat;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    /// Byte offset into the input.
    pub position: usize,
    pub expected: Vec<&'static str>,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at position {}: expected {}, found {}",
            self.position,
            self.expected.join(" or "),
            self.found
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "'{n}'"),
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::Sym(c) => write!(f, "'{c}'"),
            Tok::End => write!(f, "end of input"),
        }
    }
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n = src[start..i].parse().expect("digits");
            out.push((start, Tok::Int(n)));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push((start, Tok::Ident(src[start..i].to_string())));
        } else if "+-*/^(),".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            let found = src[i..].chars().next().expect("nonempty");
            return Err(ParseError {
                position: i,
                expected: vec!["token"],
                found: format!("'{found}'"),
            });
        }
    }
    out.push((src.len(), Tok::End));
    Ok(out)
}

const ATOM_START: &[&str] = &["number", "'n'", "'omega'", "'('", "'series'", "'product'", "'sqrt'"];

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    binders: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&'static str]) -> ParseError {
        ParseError {
            position: self.toks[self.pos].0,
            expected: expected.to_vec(),
            found: self.peek().to_string(),
        }
    }

    fn expect_sym(&mut self, c: char, name: &'static str) -> Result<(), ParseError> {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&[name]))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Sym('+') => {
                    self.bump();
                    lhs = Expr::add(lhs, self.term()?);
                }
                Tok::Sym('-') => {
                    self.bump();
                    lhs = Expr::sub(lhs, self.term()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Tok::Sym('*') => {
                    self.bump();
                    lhs = Expr::mul(lhs, self.factor()?);
                }
                Tok::Sym('/') => {
                    self.bump();
                    lhs = Expr::div(lhs, self.factor()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let negate = *self.peek() == Tok::Sym('-');
        if negate {
            self.bump();
        }
        let mut base = self.atom()?;
        if *self.peek() == Tok::Sym('^') {
            self.bump();
            base = Expr::pow(base, self.exponent()?);
        }
        Ok(if negate { Expr::neg(base) } else { base })
    }

    fn exponent(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Sym('-') => {
                self.bump();
                match self.bump() {
                    Tok::Int(k) => Ok(Expr::neg(Expr::Lit(Rat::int(k)))),
                    _ => {
                        self.pos -= 1;
                        Err(self.error(&["integer"]))
                    }
                }
            }
            Tok::Int(k) => {
                self.bump();
                Ok(Expr::Lit(Rat::int(k)))
            }
            Tok::Ident(s) if s == "n" => self.index(),
            Tok::Sym('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect_sym(')', "')'")?;
                Ok(e)
            }
            _ => Err(self.error(&["integer", "'n'", "'('"])),
        }
    }

    fn index(&mut self) -> Result<Expr, ParseError> {
        if self.binders == 0 {
            return Err(ParseError {
                found: "'n' outside series or product".to_string(),
                ..self.error(&["number", "'omega'", "'('"])
            });
        }
        self.bump();
        Ok(Expr::Index)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                if *self.peek() == Tok::Sym('/') {
                    if let Tok::Int(d) = self.peek_at(1).clone() {
                        self.bump();
                        if d.is_zero() {
                            return Err(self.error(&["positive integer"]));
                        }
                        self.bump();
                        return Ok(Expr::Lit(Rat::new(n, d).expect("nonzero")));
                    }
                }
                Ok(Expr::Lit(Rat::int(n)))
            }
            Tok::Sym('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect_sym(')', "')'")?;
                Ok(e)
            }
            Tok::Ident(s) => match s.as_str() {
                "n" => self.index(),
                "omega" => {
                    self.bump();
                    Ok(Expr::Omega)
                }
                "series" | "product" => {
                    self.bump();
                    self.expect_sym('(', "'('")?;
                    if *self.peek() != Tok::Ident("n".into()) {
                        return Err(self.error(&["'n'"]));
                    }
                    self.bump();
                    self.expect_sym(',', "','")?;
                    self.binders += 1;
                    let term = self.expr()?;
                    self.binders -= 1;
                    self.expect_sym(')', "')'")?;
                    Ok(if s == "series" {
                        Expr::series(term)
                    } else {
                        Expr::product(term)
                    })
                }
                "sqrt" => {
                    self.bump();
                    self.expect_sym('(', "'('")?;
                    let e = self.expr()?;
                    self.expect_sym(')', "')'")?;
                    Ok(Expr::sqrt(e))
                }
                _ => Err(self.error(ATOM_START)),
            },
            _ => Err(self.error(ATOM_START)),
        }
    }
}

pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        toks: tokenize(src)?,
        pos: 0,
        binders: 0,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.error(&["operator", "end of input"]));
    }
    Ok(e)
}
