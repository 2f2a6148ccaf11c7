//! Expression language for closed-form scalar fields.
//!
//! Grammar (whitespace insignificant):
//!
//! ```text
//! expr     := term (("+" | "-") term)*
//! term     := unary (("*" | "/") unary)*
//! unary    := "-" unary | power
//! power    := primary ("^" exponent)?
//! exponent := "-"? INTEGER | "(" "-"? INTEGER ")"
//! primary  := NUMBER | VARIABLE | FUNC "(" expr ")" | "(" expr ")"
//! FUNC     := sqrt | exp | ln | sin | cos
//! ```
//!
//! `^` binds tighter than unary minus, so `-z^2` is `-(z^2)`. The set of
//! admissible variables is chosen by the caller.

use std::fmt;

use thiserror::Error;

use crate::jet::{Axis, Jet, JetError};

/// Parse failure with the byte offset of the offending token.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at position {position}: expected {}", expected.join(" or "))]
pub struct ParseError {
    pub position: usize,
    pub expected: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sqrt,
    Exp,
    Ln,
    Sin,
    Cos,
}

impl Func {
    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sqrt" => Func::Sqrt,
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            _ => return None,
        })
    }

    fn name(self) -> &'static str {
        match self {
            Func::Sqrt => "sqrt",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sin => "sin",
            Func::Cos => "cos",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(Axis),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Call(Func, Box<Expr>),
}

fn var_name(a: Axis) -> &'static str {
    match a {
        Axis::X => "x",
        Axis::Y => "y",
        Axis::Z => "z",
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::Var(a) => f.write_str(var_name(*a)),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, n) => write!(f, "({a}^({n}))"),
            Expr::Call(func, e) => write!(f, "{}({e})", func.name()),
        }
    }
}

impl Expr {
    /// Evaluates on coordinate jets `(x, y, z)`.
    pub fn eval(&self, seeds: &[Jet; 3]) -> Result<Jet, JetError> {
        Ok(match self {
            Expr::Num(v) => Jet::constant(*v),
            Expr::Var(a) => seeds[*a as usize],
            Expr::Neg(e) => -e.eval(seeds)?,
            Expr::Add(a, b) => a.eval(seeds)? + b.eval(seeds)?,
            Expr::Sub(a, b) => a.eval(seeds)? - b.eval(seeds)?,
            Expr::Mul(a, b) => a.eval(seeds)? * b.eval(seeds)?,
            Expr::Div(a, b) => a.eval(seeds)?.checked_div(&b.eval(seeds)?)?,
            Expr::Pow(a, n) => a.eval(seeds)?.powi(*n)?,
            Expr::Call(func, e) => {
                let u = e.eval(seeds)?;
                match func {
                    Func::Sqrt => u.sqrt()?,
                    Func::Exp => u.exp()?,
                    Func::Ln => u.ln()?,
                    Func::Sin => u.sin(),
                    Func::Cos => u.cos(),
                }
            }
        })
    }

    /// Plain value at a point.
    pub fn value_at(&self, p: [f64; 3]) -> Result<f64, JetError> {
        let seeds = p.map(Jet::constant);
        self.eval(&seeds).map(|j| j.value())
    }

    fn is_zero(&self) -> bool {
        matches!(self, Expr::Num(v) if *v == 0.0)
    }

    fn is_one(&self) -> bool {
        matches!(self, Expr::Num(v) if *v == 1.0)
    }

    /// Variables referenced by the expression.
    pub fn uses(&self, axis: Axis) -> bool {
        match self {
            Expr::Num(_) => false,
            Expr::Var(a) => *a == axis,
            Expr::Neg(e) | Expr::Pow(e, _) | Expr::Call(_, e) => e.uses(axis),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.uses(axis) || b.uses(axis)
            }
        }
    }

    /// Symbolic partial derivative, with zero and one folded away.
    pub fn derivative(&self, axis: Axis) -> Expr {
        match self {
            Expr::Num(_) => Expr::Num(0.0),
            Expr::Var(a) => Expr::Num(if *a == axis { 1.0 } else { 0.0 }),
            Expr::Neg(e) => neg(e.derivative(axis)),
            Expr::Add(a, b) => add(a.derivative(axis), b.derivative(axis)),
            Expr::Sub(a, b) => sub(a.derivative(axis), b.derivative(axis)),
            Expr::Mul(a, b) => add(
                mul(a.derivative(axis), (**b).clone()),
                mul((**a).clone(), b.derivative(axis)),
            ),
            Expr::Div(a, b) => {
                // (a' b - a b') / b^2
                let num = sub(
                    mul(a.derivative(axis), (**b).clone()),
                    mul((**a).clone(), b.derivative(axis)),
                );
                if num.is_zero() {
                    Expr::Num(0.0)
                } else {
                    Expr::Div(Box::new(num), Box::new(Expr::Pow(b.clone(), 2)))
                }
            }
            Expr::Pow(a, n) => {
                let outer = match n - 1 {
                    0 => Expr::Num(1.0),
                    1 => (**a).clone(),
                    m => Expr::Pow(a.clone(), m),
                };
                mul(mul(Expr::Num(f64::from(*n)), outer), a.derivative(axis))
            }
            Expr::Call(func, e) => {
                let inner = e.derivative(axis);
                let outer = match func {
                    Func::Sqrt => Expr::Div(
                        Box::new(Expr::Num(0.5)),
                        Box::new(self.clone()),
                    ),
                    Func::Exp => self.clone(),
                    Func::Ln => Expr::Div(Box::new(Expr::Num(1.0)), e.clone()),
                    Func::Sin => Expr::Call(Func::Cos, e.clone()),
                    Func::Cos => neg(Expr::Call(Func::Sin, e.clone())),
                };
                mul(outer, inner)
            }
        }
    }
}

fn neg(e: Expr) -> Expr {
    match e {
        Expr::Num(v) => Expr::Num(-v),
        other => Expr::Neg(Box::new(other)),
    }
}

fn add(a: Expr, b: Expr) -> Expr {
    if a.is_zero() {
        b
    } else if b.is_zero() {
        a
    } else {
        Expr::Add(Box::new(a), Box::new(b))
    }
}

fn sub(a: Expr, b: Expr) -> Expr {
    if b.is_zero() {
        a
    } else if a.is_zero() {
        neg(b)
    } else {
        Expr::Sub(Box::new(a), Box::new(b))
    }
}

fn mul(a: Expr, b: Expr) -> Expr {
    if a.is_zero() || b.is_zero() {
        Expr::Num(0.0)
    } else if a.is_one() {
        b
    } else if b.is_one() {
        a
    } else {
        Expr::Mul(Box::new(a), Box::new(b))
    }
}

/// Parses `text` admitting only the variables in `vars`.
pub fn parse(text: &str, vars: &[Axis]) -> Result<Expr, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, vars };
    p.skip_ws();
    if p.at_end() {
        return Err(p.error(&["expression"]));
    }
    let e = p.expr()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.error(&["operator", "end of input"]));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a [Axis],
}

impl Parser<'_> {
    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        ParseError { position: self.pos, expected: expected.iter().map(|s| s.to_string()).collect() }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            let s = format!("'{}'", c as char);
            Err(self.error(&[s.as_str()]))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat(b'/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat(b'-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if self.eat(b'^') {
            let n = self.exponent()?;
            return Ok(Expr::Pow(Box::new(base), n));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<i32, ParseError> {
        let paren = self.eat(b'(');
        let negative = self.eat(b'-');
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos || matches!(self.peek(), Some(b'.') | Some(b'e') | Some(b'E')) {
            self.pos = start;
            return Err(self.error(&["integer exponent"]));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or_default();
        let magnitude: i32 = digits.parse().map_err(|_| ParseError {
            position: start,
            expected: vec!["integer exponent fitting in 32 bits".into()],
        })?;
        if paren {
            self.expect(b')')?;
        }
        Ok(if negative { -magnitude } else { magnitude })
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => self.identifier(),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            _ => Err(self.error(&["number", "variable", "function", "'('"])),
        }
    }

    fn number(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while matches!(p.peek(), Some(c) if c.is_ascii_digit()) {
                p.pos += 1;
            }
            p.pos - s
        };
        let mut n = digits(self);
        if self.peek() == Some(b'.') {
            self.pos += 1;
            n += digits(self);
        }
        if n == 0 {
            self.pos = start;
            return Err(self.error(&["number"]));
        }
        if matches!(self.peek(), Some(b'e') | Some(b'E')) {
            let mark = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some(b'+') | Some(b'-')) {
                self.pos += 1;
            }
            if digits(self) == 0 {
                self.pos = mark;
                return Err(self.error(&["exponent digits"]));
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or_default();
        text.parse::<f64>()
            .map(Expr::Num)
            .map_err(|_| ParseError { position: start, expected: vec!["number".into()] })
    }

    fn identifier(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or_default();
        if let Some(func) = Func::from_name(name) {
            self.expect(b'(')?;
            let arg = self.expr()?;
            self.expect(b')')?;
            return Ok(Expr::Call(func, Box::new(arg)));
        }
        for &a in self.vars {
            if name == var_name(a) {
                return Ok(Expr::Var(a));
            }
        }
        let mut expected: Vec<String> = self.vars.iter().map(|a| format!("variable {}", var_name(*a))).collect();
        expected.push("function sqrt, exp, ln, sin or cos".into());
        Err(ParseError { position: start, expected })
    }
}
