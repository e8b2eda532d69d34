use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::context::VariableContext;
use super::polynomial::Polynomial;
use super::Rational;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
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

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(n) => format!("'{n}'"),
        Tok::Ident(s) => format!("'{s}'"),
        Tok::Plus => "'+'".into(),
        Tok::Minus => "'-'".into(),
        Tok::Star => "'*'".into(),
        Tok::Caret => "'^'".into(),
        Tok::Slash => "'/'".into(),
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
        Tok::End => "end of input".into(),
    }
}

fn err(column: usize, message: impl Into<String>) -> Error {
    Error::Parse { column, message: message.into() }
}

fn tokenize(s: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push((Tok::Num(text.parse().expect("digits")), col));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
            continue;
        }
        let t = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '/' => Tok::Slash,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ => return Err(err(col, format!("unexpected character '{c}'"))),
        };
        out.push((t, col));
        i += 1;
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    ctx: &'a Arc<VariableContext>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn col(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = match self.peek() {
            Tok::Minus => {
                self.bump();
                -self.term()?
            }
            Tok::Plus => {
                self.bump();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = &acc * &self.factor()?;
                }
                Tok::Ident(_) | Tok::Num(_) | Tok::LParen => {
                    return Err(err(
                        self.col(),
                        format!("unexpected token {} (implicit multiplication is not allowed; use '*')", describe(self.peek())),
                    ));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Polynomial> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(-self.factor()?);
        }
        let base = self.atom()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let col = self.col();
            match self.bump() {
                Tok::Num(n) => {
                    let e = n.to_u32().ok_or_else(|| err(col, "exponent too large"))?;
                    Ok(base.pow(e))
                }
                t => Err(err(col, format!("expected a non-negative integer exponent, found {}", describe(&t)))),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Polynomial> {
        let col = self.col();
        match self.bump() {
            Tok::Num(n) => {
                if *self.peek() == Tok::Slash {
                    self.bump();
                    let dcol = self.col();
                    match self.bump() {
                        Tok::Num(d) if !d.is_zero() => Ok(Polynomial::constant(self.ctx, Rational::new(n, d))),
                        Tok::Num(_) => Err(err(dcol, "zero denominator")),
                        t => Err(err(dcol, format!("expected a denominator, found {}", describe(&t)))),
                    }
                } else {
                    Ok(Polynomial::constant(self.ctx, Rational::from_integer(n)))
                }
            }
            Tok::Ident(name) => match self.ctx.index_of(&name) {
                Some(i) => Ok(Polynomial::var(self.ctx, i)),
                None => Err(err(col, format!("unknown variable '{name}'"))),
            },
            Tok::LParen => {
                let inner = self.expr()?;
                let c = self.col();
                match self.bump() {
                    Tok::RParen => Ok(inner),
                    t => Err(err(c, format!("expected ')', found {}", describe(&t)))),
                }
            }
            t => Err(err(col, format!("unexpected token {}", describe(&t)))),
        }
    }
}

/// Parses a polynomial over the variables of `ctx`.
pub fn parse_polynomial(ctx: &Arc<VariableContext>, s: &str) -> Result<Polynomial> {
    let toks = tokenize(s)?;
    let mut p = Parser { toks, pos: 0, ctx };
    if *p.peek() == Tok::End {
        return Err(err(1, "empty polynomial"));
    }
    let out = p.expr()?;
    match p.peek() {
        Tok::End => Ok(out),
        t => Err(err(p.col(), format!("unexpected token {}", describe(t)))),
    }
}

/// Parses `[-]int[/uint]`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let bad = || err(1, format!("invalid rational '{s}'"));
    let (n, d) = match body.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (body, None),
    };
    if n.is_empty() || !n.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let mut num: BigInt = n.parse().map_err(|_| bad())?;
    if neg {
        num = -num;
    }
    let den: BigInt = match d {
        None => BigInt::from(1),
        Some(d) => {
            if d.is_empty() || !d.chars().all(|c| c.is_ascii_digit()) {
                return Err(bad());
            }
            d.parse().map_err(|_| bad())?
        }
    };
    if den.is_zero() {
        return Err(err(1, format!("zero denominator in '{s}'")));
    }
    Ok(Rational::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> Arc<VariableContext> {
        VariableContext::new(&["x", "y", "z"]).unwrap()
    }

    #[test]
    fn parses_and_prints() {
        let c = ctx();
        let p = parse_polynomial(&c, "2/3*x^2*y - y + (x+1)^2").unwrap();
        assert_eq!(p.to_string(), "2/3*x^2*y + x^2 + 2*x - y + 1");
        let q = parse_polynomial(&c, &p.to_string()).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn rejects_implicit_multiplication() {
        let e = parse_polynomial(&ctx(), "x y").unwrap_err();
        match e {
            Error::Parse { column, message } => {
                assert_eq!(column, 3);
                assert!(message.contains("'y'"));
            }
            _ => panic!("wrong error"),
        }
        assert!(parse_polynomial(&ctx(), "2x").is_err());
        assert!(parse_polynomial(&ctx(), "1.5*x").is_err());
        assert!(parse_polynomial(&ctx(), "q").is_err());
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("-3/6").unwrap(), Rational::new((-1).into(), 2.into()));
        assert!(parse_rational("1.0").is_err());
        assert!(parse_rational("1/0").is_err());
    }
}
