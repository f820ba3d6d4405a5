//! Number specs accepted on the command line:
//! `N`, `sqrt(P/Q)` (or `sqrt(P)`) and `(P+sqrt(D))/Q` (or `(P-sqrt(D))/Q`).
//! Whitespace anywhere is ignored.

use std::fmt;

use anth_core::{QuadraticSurd, Rational};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Input {
    Integer(BigInt),
    SqrtRatio(Rational),
    Surd(QuadraticSurd),
}

impl Input {
    /// `N` and `sqrt(N)` both name `sqrt(N)`.
    pub fn as_sqrt_ratio(&self) -> Option<Rational> {
        match self {
            Input::Integer(n) => Some(Rational::from_integer(n.clone())),
            Input::SqrtRatio(r) => Some(r.clone()),
            Input::Surd(_) => None,
        }
    }
}

impl fmt::Display for Input {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Input::Integer(n) => write!(f, "sqrt({n})"),
            Input::SqrtRatio(r) => write!(f, "sqrt({r})"),
            Input::Surd(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Debug, thiserror::Error)]
#[error("cannot parse {input:?}: {reason}")]
pub struct ParseError {
    pub input: String,
    pub reason: String,
}

fn int(s: &str, what: &str) -> Result<BigInt, String> {
    let digits = s.strip_prefix('+').unwrap_or(s);
    let body = digits.strip_prefix('-').unwrap_or(digits);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("{what} {s:?} is not an integer"));
    }
    digits
        .parse()
        .map_err(|_| format!("{what} {s:?} is not an integer"))
}

fn natural(s: &str, what: &str) -> Result<BigInt, String> {
    let n = int(s, what)?;
    if n.is_negative() {
        return Err(format!("{what} must not be negative"));
    }
    Ok(n)
}

fn parse_inner(s: &str) -> Result<Input, String> {
    if let Some(arg) = s.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
        let (p, q) = arg.split_once('/').unwrap_or((arg, "1"));
        let p = natural(p, "numerator")?;
        let q = natural(q, "denominator")?;
        if q.is_zero() {
            return Err("zero denominator".into());
        }
        let r = Rational::new(p, q);
        return Ok(if r.is_integer() {
            Input::Integer(r.to_integer())
        } else {
            Input::SqrtRatio(r)
        });
    }
    if let Some(rest) = s.strip_prefix('(') {
        let (num, q) = rest.rsplit_once(")/").ok_or("expected (P+sqrt(D))/Q")?;
        let (p, root, sign) = match num.find("+sqrt(").or_else(|| num.find("-sqrt(")) {
            Some(i) => (&num[..i], &num[i + 1..], &num[i..i + 1]),
            None => return Err("expected (P+sqrt(D))/Q".into()),
        };
        let d = root
            .strip_prefix("sqrt(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or("expected sqrt(D)")?;
        let p = if p.is_empty() {
            BigInt::zero()
        } else {
            int(p, "P")?
        };
        let d = natural(d, "D")?;
        let q = int(q, "Q")?;
        if q.is_zero() {
            return Err("zero denominator".into());
        }
        // (p - sqrt d)/q = (-p + sqrt d)/(-q)
        let (p, q) = if sign == "-" { (-p, -q) } else { (p, q) };
        return QuadraticSurd::new(p, d, q)
            .map(Input::Surd)
            .map_err(|e| e.to_string());
    }
    natural(s, "N").map(Input::Integer)
}

pub fn parse_input(raw: &str) -> Result<Input, ParseError> {
    let s: String = raw.chars().filter(|c| !c.is_whitespace()).collect();
    parse_inner(&s).map_err(|reason| ParseError {
        input: raw.to_string(),
        reason,
    })
}
