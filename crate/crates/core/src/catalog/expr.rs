//! Exact closed forms as token trees, with a small text grammar:
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary ('*' unary)*
//! unary := '-' unary | '+' unary | atom
//! atom  := number | 'i' | 'eps' | 'sqrt' digits | 'sqrt' '(' expr ')' | '(' expr ')'
//! ```
//!
//! `√` and `ε` are accepted for `sqrt` and `eps`, `−` for `-`. Square roots
//! use the principal branch.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expr {
    Int(i64),
    Dec(f64),
    I,
    /// The sign parameter of a family, `±1`.
    Eps,
    Sqrt(Box<Expr>),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn eval(&self, eps: Option<i8>) -> Result<Complex64> {
        Ok(match self {
            Expr::Int(n) => Complex64::new(*n as f64, 0.0),
            Expr::Dec(x) => Complex64::new(*x, 0.0),
            Expr::I => Complex64::i(),
            Expr::Eps => match eps {
                Some(e) => Complex64::new(f64::from(e), 0.0),
                None => return Err(Error::Parse("expression uses eps but no sign was given".into())),
            },
            Expr::Sqrt(e) => {
                // a signed zero from negation would put sqrt(-3) on the wrong branch
                let z = e.eval(eps)?;
                Complex64::new(z.re, if z.im == 0.0 { 0.0 } else { z.im }).sqrt()
            }
            Expr::Neg(e) => -e.eval(eps)?,
            Expr::Add(a, b) => a.eval(eps)? + b.eval(eps)?,
            Expr::Sub(a, b) => a.eval(eps)? - b.eval(eps)?,
            Expr::Mul(a, b) => a.eval(eps)? * b.eval(eps)?,
        })
    }

    pub fn uses_eps(&self) -> bool {
        match self {
            Expr::Eps => true,
            Expr::Int(_) | Expr::Dec(_) | Expr::I => false,
            Expr::Sqrt(e) | Expr::Neg(e) => e.uses_eps(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => a.uses_eps() || b.uses_eps(),
        }
    }

    /// Replaces `eps` by the literal sign.
    pub fn with_eps(&self, eps: i8) -> Expr {
        let sub = |e: &Expr| Box::new(e.with_eps(eps));
        match self {
            Expr::Eps => Expr::Int(i64::from(eps)),
            Expr::Int(_) | Expr::Dec(_) | Expr::I => self.clone(),
            Expr::Sqrt(e) => Expr::Sqrt(sub(e)),
            Expr::Neg(e) => Expr::Neg(sub(e)),
            Expr::Add(a, b) => Expr::Add(sub(a), sub(b)),
            Expr::Sub(a, b) => Expr::Sub(sub(a), sub(b)),
            Expr::Mul(a, b) => Expr::Mul(sub(a), sub(b)),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) => 2,
            Expr::Neg(_) => 3,
            _ => 4,
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |f: &mut fmt::Formatter<'_>, e: &Expr, min: u8| {
            if e.precedence() < min {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        match self {
            Expr::Int(n) if *n < 0 => write!(f, "({n})"),
            Expr::Int(n) => write!(f, "{n}"),
            Expr::Dec(x) if *x < 0.0 => write!(f, "({x:?})"),
            Expr::Dec(x) => write!(f, "{x:?}"),
            Expr::I => write!(f, "i"),
            Expr::Eps => write!(f, "eps"),
            Expr::Sqrt(e) => match **e {
                Expr::Int(n) if n >= 0 => write!(f, "sqrt{n}"),
                _ => write!(f, "sqrt({e})"),
            },
            Expr::Neg(e) => {
                write!(f, "-")?;
                wrap(f, e, 4)
            }
            Expr::Add(a, b) => {
                wrap(f, a, 1)?;
                write!(f, "+")?;
                wrap(f, b, 2)
            }
            Expr::Sub(a, b) => {
                wrap(f, a, 1)?;
                write!(f, "-")?;
                wrap(f, b, 2)
            }
            Expr::Mul(a, b) => {
                wrap(f, a, 2)?;
                write!(f, "*")?;
                wrap(f, b, 3)
            }
        }
    }
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    src: &'a str,
}

impl Parser<'_> {
    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse(format!("{msg} at position {} in {:?}", self.pos, self.src)))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat_word(&mut self, w: &str) -> bool {
        let n = w.chars().count();
        if self.chars.len() >= self.pos + n && self.chars[self.pos..self.pos + n].iter().copied().eq(w.chars()) {
            self.pos += n;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some('-') => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.atom(),
        }
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit() || c == '.') {
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        if text.contains('.') {
            match text.parse::<f64>() {
                Ok(x) => Ok(Expr::Dec(x)),
                Err(_) => self.err("malformed decimal"),
            }
        } else {
            match text.parse::<i64>() {
                Ok(n) => Ok(Expr::Int(n)),
                Err(_) => self.err("malformed integer"),
            }
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let atom = match self.peek() {
            None => return self.err("unexpected end of input"),
            Some(c) if c.is_ascii_digit() || c == '.' => self.number()?,
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                e
            }
            _ if self.eat_word("sqrt") || self.eat_word("√") => {
                let arg = match self.peek() {
                    Some(c) if c.is_ascii_digit() => self.number()?,
                    Some('(') => self.atom()?,
                    _ => return self.err("sqrt needs digits or a parenthesized argument"),
                };
                Expr::Sqrt(Box::new(arg))
            }
            _ if self.eat_word("eps") || self.eat_word("ε") => Expr::Eps,
            Some('i') => {
                self.pos += 1;
                Expr::I
            }
            Some(c) => return self.err(&format!("unexpected character {c:?}")),
        };
        if matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '(' || c == '√') {
            return self.err("implicit multiplication is not supported; use '*'");
        }
        Ok(atom)
    }
}

pub fn parse_expr(src: &str) -> Result<Expr> {
    let chars: Vec<char> = src
        .chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| if c == '−' { '-' } else { c })
        .collect();
    let mut p = Parser { chars, pos: 0, src };
    let e = p.expr()?;
    if p.pos != p.chars.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// A critical value typed on the command line: either the exact grammar
/// above or a decimal pair `re,im`.
pub fn parse_lambda(src: &str) -> Result<Complex64> {
    if let Some((re, im)) = src.split_once(',') {
        let parse = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("expected a decimal pair re,im, got {src:?}")))
        };
        return Ok(Complex64::new(parse(re)?, parse(im)?));
    }
    parse_expr(src)?.eval(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(src: &str, want: Complex64) {
        let got = parse_lambda(src).unwrap();
        assert!((got - want).norm() < 1e-12, "{src}: {got} vs {want}");
    }

    #[test]
    fn grammar_examples() {
        let s2 = 2f64.sqrt();
        let s5 = 5f64.sqrt();
        close("-sqrt5+2*i*sqrt2", Complex64::new(-s5, 2.0 * s2));
        close("1+2*i", Complex64::new(1.0, 2.0));
        close("−2 + i*√3", Complex64::new(-2.0, 3f64.sqrt()));
        close("(sqrt3+i*sqrt2)*(sqrt2-i)", Complex64::new(3f64.sqrt(), s2) * Complex64::new(s2, -1.0));
        close("sqrt(5-2*sqrt5)", Complex64::new((5.0 - 2.0 * s5).sqrt(), 0.0));
        close("3.942,1.209", Complex64::new(3.942, 1.209));
        close("3.942+1.209*i", Complex64::new(3.942, 1.209));
        close("sqrt(-3)", Complex64::new(0.0, 3f64.sqrt()));
    }

    #[test]
    fn eps_substitution() {
        let e = parse_expr("1+eps*sqrt5").unwrap();
        assert!(e.uses_eps());
        assert!(e.eval(None).is_err());
        let v = e.eval(Some(-1)).unwrap();
        assert!((v.re - (1.0 - 5f64.sqrt())).abs() < 1e-15);
        assert_eq!(e.with_eps(-1).eval(None).unwrap(), v);
    }

    #[test]
    fn display_round_trips() {
        for src in ["-sqrt5+2*i*sqrt2", "1+eps*sqrt5-i*sqrt(9-2*eps*sqrt5)", "-(sqrt3+i*sqrt2)*(sqrt2-i)", "2-(3-4)", "3.5*i"] {
            let e = parse_expr(src).unwrap();
            let again = parse_expr(&e.to_string()).unwrap();
            assert_eq!(e, again, "{src} -> {e}");
        }
    }

    #[test]
    fn rejects_bad_input() {
        for src in ["", "2i", "1+", "sqrt", "(1", "1)", "x", "1,", "sqrt5sqrt5"] {
            assert!(parse_lambda(src).is_err(), "{src}");
        }
    }
}
