//! A small integer/rational expression language for catalog formulas:
//! `+ - * / % ^`, comparisons, `&&`, parentheses and named variables.

use std::collections::BTreeMap;

use num_rational::Rational64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::CatalogError;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Value {
    Num(Rational64),
    Bool(bool),
}

pub type Env = BTreeMap<String, Rational64>;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(i64),
    Ident(String),
    Op(&'static str),
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<Tok>, CatalogError> {
    let bad = |msg: String| CatalogError::Formula { formula: src.to_string(), reason: msg };
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    const OPS: [&str; 13] = ["==", "!=", "<=", ">=", "&&", "<", ">", "+", "-", "*", "/", "%", "^"];
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Tok::Num(s.parse().map_err(|_| bad(format!("number `{s}` out of range")))?));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if c == '(' {
            out.push(Tok::LParen);
            i += 1;
        } else if c == ')' {
            out.push(Tok::RParen);
            i += 1;
        } else {
            let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
            let op = OPS.iter().find(|op| rest.starts_with(**op)).ok_or_else(|| bad(format!("unexpected `{c}`")))?;
            out.push(Tok::Op(op));
            i += op.chars().count();
        }
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<Tok>,
    pos: usize,
    env: &'a Env,
}

impl<'a> Parser<'a> {
    fn err(&self, reason: impl Into<String>) -> CatalogError {
        CatalogError::Formula { formula: self.src.to_string(), reason: reason.into() }
    }

    fn peek_op(&self) -> Option<&'static str> {
        match self.toks.get(self.pos) {
            Some(Tok::Op(op)) => Some(op),
            _ => None,
        }
    }

    fn num(&self, v: Value) -> Result<Rational64, CatalogError> {
        match v {
            Value::Num(q) => Ok(q),
            Value::Bool(_) => Err(self.err("expected a number, found a condition")),
        }
    }

    fn conj(&mut self) -> Result<Value, CatalogError> {
        let mut lhs = self.cmp()?;
        while self.peek_op() == Some("&&") {
            self.pos += 1;
            let rhs = self.cmp()?;
            lhs = match (lhs, rhs) {
                (Value::Bool(a), Value::Bool(b)) => Value::Bool(a && b),
                _ => return Err(self.err("`&&` needs conditions on both sides")),
            };
        }
        Ok(lhs)
    }

    fn cmp(&mut self) -> Result<Value, CatalogError> {
        let lhs = self.sum()?;
        let op = match self.peek_op() {
            Some(op @ ("==" | "!=" | "<=" | ">=" | "<" | ">")) => op,
            _ => return Ok(lhs),
        };
        self.pos += 1;
        let rhs = self.sum()?;
        let (a, b) = (self.num(lhs)?, self.num(rhs)?);
        Ok(Value::Bool(match op {
            "==" => a == b,
            "!=" => a != b,
            "<=" => a <= b,
            ">=" => a >= b,
            "<" => a < b,
            _ => a > b,
        }))
    }

    fn sum(&mut self) -> Result<Value, CatalogError> {
        let mut acc = self.term()?;
        while let Some(op @ ("+" | "-")) = self.peek_op() {
            self.pos += 1;
            let rhs = self.term()?;
            let (a, b) = (self.num(acc)?, self.num(rhs)?);
            acc = Value::Num(if op == "+" { a + b } else { a - b });
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Value, CatalogError> {
        let mut acc = self.unary()?;
        while let Some(op @ ("*" | "/" | "%")) = self.peek_op() {
            self.pos += 1;
            let rhs = self.unary()?;
            let (a, b) = (self.num(acc)?, self.num(rhs)?);
            acc = Value::Num(match op {
                "*" => a * b,
                _ if b.is_zero() => return Err(self.err("division by zero")),
                "/" => a / b,
                _ => {
                    if !a.is_integer() || !b.is_integer() {
                        return Err(self.err("`%` needs integers"));
                    }
                    Rational64::from_integer(a.to_integer().rem_euclid(b.to_integer()))
                }
            });
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Value, CatalogError> {
        if self.peek_op() == Some("-") {
            self.pos += 1;
            let v = self.unary()?;
            return Ok(Value::Num(-self.num(v)?));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Value, CatalogError> {
        let base = self.atom()?;
        if self.peek_op() != Some("^") {
            return Ok(base);
        }
        self.pos += 1;
        let exp = self.unary()?;
        let (b, e) = (self.num(base)?, self.num(exp)?);
        if !e.is_integer() || e.is_negative() {
            return Err(self.err("exponent must be a non-negative integer"));
        }
        let e = e.to_integer().to_u32().ok_or_else(|| self.err("exponent too large"))?;
        Ok(Value::Num((0..e).fold(Rational64::one(), |acc, _| acc * b)))
    }

    fn atom(&mut self) -> Result<Value, CatalogError> {
        let tok = self.toks.get(self.pos).cloned().ok_or_else(|| self.err("unexpected end of formula"))?;
        self.pos += 1;
        match tok {
            Tok::Num(n) => Ok(Value::Num(Rational64::from_integer(n))),
            Tok::Ident(name) => self
                .env
                .get(&name)
                .map(|v| Value::Num(*v))
                .ok_or_else(|| CatalogError::UnboundVariable { formula: self.src.to_string(), name }),
            Tok::LParen => {
                let v = self.conj()?;
                match self.toks.get(self.pos) {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(v)
                    }
                    _ => Err(self.err("missing `)`")),
                }
            }
            other => Err(self.err(format!("unexpected token {other:?}"))),
        }
    }
}

/// Evaluates `src` with variables bound by `env`.
pub fn evaluate(src: &str, env: &Env) -> Result<Value, CatalogError> {
    let toks = tokenize(src)?;
    let mut p = Parser { src, toks, pos: 0, env };
    let v = p.conj()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}

pub fn evaluate_number(src: &str, env: &Env) -> Result<Rational64, CatalogError> {
    match evaluate(src, env)? {
        Value::Num(q) => Ok(q),
        Value::Bool(_) => Err(CatalogError::Formula { formula: src.into(), reason: "expected a number".into() }),
    }
}

pub fn evaluate_integer(src: &str, env: &Env) -> Result<i64, CatalogError> {
    let q = evaluate_number(src, env)?;
    if !q.is_integer() {
        return Err(CatalogError::Formula { formula: src.into(), reason: format!("value {q} is not an integer") });
    }
    Ok(q.to_integer())
}

pub fn evaluate_condition(src: &str, env: &Env) -> Result<bool, CatalogError> {
    match evaluate(src, env)? {
        Value::Bool(b) => Ok(b),
        Value::Num(_) => Err(CatalogError::Formula { formula: src.into(), reason: "expected a condition".into() }),
    }
}

/// Expands a coefficient pattern such as `1,2*,1,1` to `rank` entries; an
/// item ending in `*` repeats to fill the remaining length.
pub fn expand_pattern(pattern: &str, rank: usize, env: &Env) -> Result<Vec<i64>, CatalogError> {
    let items: Vec<&str> = pattern.split(',').map(str::trim).collect();
    let repeats = items.iter().filter(|s| s.ends_with('*')).count();
    let bad = |reason: String| CatalogError::Formula { formula: pattern.into(), reason };
    if repeats > 1 {
        return Err(bad("at most one repeated item".into()));
    }
    let fixed = items.len() - repeats;
    if fixed > rank || (repeats == 0 && fixed != rank) {
        return Err(bad(format!("pattern does not fit rank {rank}")));
    }
    let mut out = Vec::with_capacity(rank);
    for item in items {
        if let Some(body) = item.strip_suffix('*') {
            let v = evaluate_integer(body, env)?;
            out.extend(std::iter::repeat_n(v, rank - fixed));
        } else {
            out.push(evaluate_integer(item, env)?);
        }
    }
    Ok(out)
}
