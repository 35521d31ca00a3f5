//! Tiny exact expression language for closed-form table coefficients.
//!
//! Grammar: sums and products of integer literals and named variables, with
//! `/`, integer powers `^k` and parentheses. Evaluation is generic over
//! [`Scalar`], so rational inputs give exact results.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::Error;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Int(i64),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr, Error> {
        let mut p = Parser { s: src.as_bytes(), pos: 0 };
        let e = p.sum()?;
        p.skip_ws();
        if p.pos != p.s.len() {
            return Err(p.err("trailing input"));
        }
        Ok(e)
    }

    pub fn eval<S: Scalar>(&self, var: &dyn Fn(&str) -> Option<S>) -> Result<S, Error> {
        Ok(match self {
            Expr::Int(v) => S::from_i64(*v),
            Expr::Var(name) => var(name).ok_or_else(|| Error::Parse(format!("unknown variable `{name}`")))?,
            Expr::Neg(e) => -e.eval(var)?,
            Expr::Add(a, b) => a.eval(var)? + b.eval(var)?,
            Expr::Sub(a, b) => a.eval(var)? - b.eval(var)?,
            Expr::Mul(a, b) => a.eval(var)? * b.eval(var)?,
            Expr::Div(a, b) => a.eval(var)?.checked_div(&b.eval(var)?)?,
            Expr::Pow(e, k) => {
                let base = e.eval(var)?;
                let mut acc = S::one();
                for _ in 0..*k {
                    acc = acc * base.clone();
                }
                acc
            }
        })
    }

    /// Names of all variables, in first-use order, without repeats.
    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect(&self, out: &mut Vec<String>) {
        match self {
            Expr::Int(_) => {}
            Expr::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Expr::Neg(e) | Expr::Pow(e, _) => e.collect(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.collect(out);
                b.collect(out);
            }
        }
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at byte {} of `{}`", self.pos, String::from_utf8_lossy(self.s)))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn sum(&mut self) -> Result<Expr, Error> {
        let mut lhs = self.product()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.product()?;
            lhs = if c == b'+' { Expr::Add(lhs.into(), rhs.into()) } else { Expr::Sub(lhs.into(), rhs.into()) };
        }
        Ok(lhs)
    }

    fn product(&mut self) -> Result<Expr, Error> {
        let mut lhs = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = if c == b'*' { Expr::Mul(lhs.into(), rhs.into()) } else { Expr::Div(lhs.into(), rhs.into()) };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, Error> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(Expr::Neg(self.unary()?.into()))
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, Error> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let k: u32 = core::str::from_utf8(&self.s[start..self.pos])
                .ok()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| self.err("expected integer exponent"))?;
            return Ok(Expr::Pow(base.into(), k));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, Error> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.sum()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let t = core::str::from_utf8(&self.s[start..self.pos]).expect("ascii");
                t.parse().map(Expr::Int).map_err(|_| self.err("integer literal too large"))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_') {
                    self.pos += 1;
                }
                Ok(Expr::Var(core::str::from_utf8(&self.s[start..self.pos]).expect("ascii").to_string()))
            }
            _ => Err(self.err("expected a number, variable or `(`")),
        }
    }
}
