//! Parsing of command-line style inputs: target expressions and K ranges.
//!
//! A target is a plain number (`-3`, `10.25`, `1e3`) or a sum of rational
//! and `√2` terms, so the attained boundary values can be typed exactly:
//! `1 - 2*sqrt(2)`, `2+3sqrt2`, `-√2`.

use std::f64::consts::SQRT_2;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::reduction::Target;

/// Longer inputs are rejected before tokenizing.
pub const MAX_INPUT_LEN: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InputError {
    #[error("empty input")]
    Empty,
    #[error("input longer than {MAX_INPUT_LEN} bytes")]
    TooLong,
    #[error("unexpected character {ch:?} at byte {pos}")]
    UnexpectedChar { ch: char, pos: usize },
    #[error("malformed number {0:?}")]
    BadNumber(String),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("expected {expected} at byte {pos}")]
    Expected { expected: &'static str, pos: usize },
    #[error("value is not finite")]
    NotFinite,
    #[error("{0:?} is not an integer")]
    NotInteger(String),
    #[error("malformed K range {0:?}; expected A..B with A <= B")]
    BadRange(String),
}

/// A parsed target together with the text it came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetExpr {
    pub text: String,
    /// Rational part `p` of `p + q·√2`.
    pub rational: f64,
    /// Coefficient `q` of `√2`.
    pub sqrt2_coeff: f64,
    /// Set when the text is a bare integer literal.
    pub integer: Option<i64>,
}

impl TargetExpr {
    pub fn value(&self) -> f64 {
        if self.sqrt2_coeff == 0.0 {
            self.rational
        } else {
            self.rational + self.sqrt2_coeff * SQRT_2
        }
    }

    pub fn to_target(&self, integer_mode: bool) -> Result<Target, InputError> {
        if integer_mode {
            self.integer.map(Target::Integer).ok_or_else(|| InputError::NotInteger(self.text.clone()))
        } else {
            Target::real(self.value()).map_err(|_| InputError::NotFinite)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(String),
    Sqrt2,
    Plus,
    Minus,
    Star,
}

fn tokenize(s: &str) -> Result<Vec<(usize, Token)>, InputError> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < s.len() {
        let rest = &s[i..];
        let ch = rest.chars().next().expect("in bounds");
        match ch {
            c if c.is_whitespace() => i += c.len_utf8(),
            '+' => {
                out.push((i, Token::Plus));
                i += 1;
            }
            '-' => {
                out.push((i, Token::Minus));
                i += 1;
            }
            '*' => {
                out.push((i, Token::Star));
                i += 1;
            }
            '√' => {
                let after = &rest['√'.len_utf8()..];
                if after.starts_with('2') {
                    out.push((i, Token::Sqrt2));
                    i += '√'.len_utf8() + 1;
                } else {
                    return Err(InputError::Expected { expected: "2 after √", pos: i });
                }
            }
            's' => {
                let len = ["sqrt(2)", "sqrt2"]
                    .iter()
                    .find(|w| rest.starts_with(*w))
                    .map(|w| w.len())
                    .ok_or(InputError::Expected { expected: "sqrt(2)", pos: i })?;
                out.push((i, Token::Sqrt2));
                i += len;
            }
            c if c.is_ascii_digit() || c == '.' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                out.push((start, Token::Number(s[start..i].to_string())));
            }
            other => return Err(InputError::UnexpectedChar { ch: other, pos: i }),
        }
    }
    Ok(out)
}

fn parse_number(lexeme: &str) -> Result<f64, InputError> {
    let v: f64 = lexeme.parse().map_err(|_| InputError::BadNumber(lexeme.to_string()))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(InputError::NotFinite)
    }
}

fn is_integer_literal(text: &str) -> Option<i64> {
    let t = text.trim();
    let digits = t.strip_prefix('-').or_else(|| t.strip_prefix('+')).unwrap_or(t);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    t.parse().ok()
}

/// Parse `term (('+' | '-') term)*`, where a term is an optionally signed
/// number, `√2`, or `number [*] √2`.
pub fn parse_target(text: &str) -> Result<TargetExpr, InputError> {
    if text.len() > MAX_INPUT_LEN {
        return Err(InputError::TooLong);
    }
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Err(InputError::Empty);
    }
    let mut rational = 0.0;
    let mut sqrt2_coeff = 0.0;
    let mut pos = 0;
    let mut first = true;
    while pos < tokens.len() {
        let mut sign = 1.0;
        // binary operator between terms, or a leading sign on the first one
        match tokens[pos].1 {
            Token::Plus => pos += 1,
            Token::Minus => {
                sign = -1.0;
                pos += 1;
            }
            _ if first => {}
            _ => return Err(InputError::Expected { expected: "+ or -", pos: tokens[pos].0 }),
        }
        first = false;
        let (at, tok) = tokens.get(pos).ok_or(InputError::UnexpectedEnd)?;
        match tok {
            Token::Sqrt2 => {
                sqrt2_coeff += sign;
                pos += 1;
            }
            Token::Number(lexeme) => {
                let v = sign * parse_number(lexeme)?;
                pos += 1;
                match tokens.get(pos).map(|t| &t.1) {
                    Some(Token::Star) => match tokens.get(pos + 1) {
                        Some((_, Token::Sqrt2)) => {
                            sqrt2_coeff += v;
                            pos += 2;
                        }
                        Some((p, _)) => return Err(InputError::Expected { expected: "sqrt(2)", pos: *p }),
                        None => return Err(InputError::UnexpectedEnd),
                    },
                    Some(Token::Sqrt2) => {
                        sqrt2_coeff += v;
                        pos += 1;
                    }
                    _ => rational += v,
                }
            }
            _ => return Err(InputError::Expected { expected: "a number or sqrt(2)", pos: *at }),
        }
    }
    if !(rational.is_finite() && sqrt2_coeff.is_finite()) {
        return Err(InputError::NotFinite);
    }
    let expr = TargetExpr { text: text.to_string(), rational, sqrt2_coeff, integer: is_integer_literal(text) };
    if !expr.value().is_finite() {
        return Err(InputError::NotFinite);
    }
    Ok(expr)
}

/// Parse an inclusive `A..B` (or `A..=B`) range of integers with `A <= B`.
pub fn parse_k_range(text: &str) -> Result<RangeInclusive<i64>, InputError> {
    if text.len() > MAX_INPUT_LEN {
        return Err(InputError::TooLong);
    }
    let bad = || InputError::BadRange(text.to_string());
    let (lo, hi) = text.trim().split_once("..").ok_or_else(bad)?;
    let hi = hi.strip_prefix('=').unwrap_or(hi);
    let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok(lo..=hi)
}
