//! Text grammar for polynomials.
//!
//! ```text
//! expr   := sign? term (('+' | '-') term)*
//! term   := factor ('*'? factor)*
//! factor := ('+' | '-') factor | atom ('^' integer)?
//! atom   := integer ('/' integer)? | identifier | '(' expr ')'
//! ```
//!
//! Whitespace is ignored. `3/2*x^2*y - z + 1`, `2x y^3` and `x - z*(y - z^3)^2` all parse.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{AlgebraError, MultiPoly, Scalar, VarList};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Lexed {
    tok: Tok,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Lexed>, AlgebraError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push(Lexed { tok: Tok::Num(digits.parse().unwrap()), column });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Lexed { tok: Tok::Ident(chars[start..i].iter().collect()), column });
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' | '\u{2212}' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            other => {
                return Err(AlgebraError::Parse {
                    column,
                    message: format!("unexpected character '{other}'"),
                })
            }
        };
        out.push(Lexed { tok, column });
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Lexed>,
    pos: usize,
    vars: &'a VarList,
    end_column: usize,
}

type Poly = MultiPoly<BigRational>;

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|l| &l.tok)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_column, |l| l.column)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, AlgebraError> {
        Err(AlgebraError::Parse { column: self.column(), message: message.into() })
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|l| l.tok.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Poly, AlgebraError> {
        let mut acc = Poly::zero(self.vars.clone());
        let mut negate = false;
        match self.peek() {
            Some(Tok::Plus) => {
                self.bump();
            }
            Some(Tok::Minus) => {
                self.bump();
                negate = true;
            }
            _ => {}
        }
        loop {
            let t = self.term()?;
            acc = if negate { &acc - &t } else { &acc + &t };
            match self.peek() {
                Some(Tok::Plus) => negate = false,
                Some(Tok::Minus) => negate = true,
                _ => return Ok(acc),
            }
            self.bump();
        }
    }

    fn term(&mut self) -> Result<Poly, AlgebraError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                }
                Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {}
                _ => return Ok(acc),
            }
            let f = self.factor()?;
            acc = &acc * &f;
        }
    }

    fn factor(&mut self) -> Result<Poly, AlgebraError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                return Ok(-self.factor()?);
            }
            Some(Tok::Plus) => {
                self.bump();
                return self.factor();
            }
            _ => {}
        }
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            let exp = match self.bump() {
                Some(Tok::Num(n)) => n,
                _ => {
                    self.pos -= 1;
                    return self.err("expected a nonnegative integer exponent");
                }
            };
            let e: u32 = match u32::try_from(&exp) {
                Ok(e) => e,
                Err(_) => {
                    self.pos -= 1;
                    return self.err("exponent too large");
                }
            };
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly, AlgebraError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.bump();
                let mut value = BigRational::from_integer(n);
                if self.peek() == Some(&Tok::Slash) {
                    self.bump();
                    match self.bump() {
                        Some(Tok::Num(d)) if !d.is_zero() => {
                            value /= BigRational::from_integer(d);
                        }
                        Some(Tok::Num(_)) => {
                            self.pos -= 1;
                            return self.err("division by zero");
                        }
                        _ => {
                            self.pos -= 1;
                            return self.err("expected an integer denominator");
                        }
                    }
                }
                Ok(Poly::constant(self.vars.clone(), value))
            }
            Some(Tok::Ident(name)) => match self.vars.iter().position(|v| *v == name) {
                Some(i) => {
                    self.bump();
                    Ok(Poly::var(self.vars.clone(), i))
                }
                None => self.err(format!("unknown variable '{name}'")),
            },
            Some(Tok::LParen) => {
                self.bump();
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected ')'");
                }
                self.bump();
                Ok(inner)
            }
            Some(_) => self.err("expected a number, variable or '('"),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses `text` as a polynomial over the given variables.
pub fn parse_poly(text: &str, vars: &VarList) -> Result<MultiPoly<BigRational>, AlgebraError> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(AlgebraError::Parse { column: 1, message: "empty polynomial".into() });
    }
    let mut p = Parser { toks, pos: 0, vars, end_column: text.chars().count() + 1 };
    let poly = p.expr()?;
    if p.pos < p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(poly)
}

/// Parses and converts coefficients with `f` (e.g. to integers after checking integrality).
pub fn parse_poly_with<C: Scalar>(
    text: &str,
    vars: &VarList,
    f: impl Fn(&BigRational) -> C,
) -> Result<MultiPoly<C>, AlgebraError> {
    Ok(parse_poly(text, vars)?.map_coeffs(f))
}
