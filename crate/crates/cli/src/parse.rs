//! Surface syntax for operators, elements and points.
//!
//! Operators are expressions over integers, `x`, `S`, `+ - * / ^` and
//! parentheses, evaluated in the Ore algebra (`S*x = (x+1)*S`). Division is
//! only by `S`-free expressions and means right multiplication by the
//! inverse. Points are rational literals or `root(<poly>)` with an optional
//! `+ n` / `- n`.

use std::fmt;

use num_traits::ToPrimitive;
use precint::field::{AlgebraicPoint, Field, Poly, Rational, RationalFunction};
use precint::ore::OreOperator;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// 0-based character offset into the input.
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at column {}: {}", self.pos + 1, self.msg)
    }
}

impl std::error::Error for ParseError {}

type PResult<T> = Result<T, ParseError>;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(u64),
    X,
    S,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> PResult<Vec<(usize, Tok)>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let tok = match c {
            ' ' | '\t' | '\n' => {
                i += 1;
                continue;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let n = text.parse().map_err(|_| ParseError {
                    pos: start,
                    msg: format!("integer {text} is too large"),
                })?;
                out.push((start, Tok::Int(n)));
                continue;
            }
            'x' => Tok::X,
            'S' => Tok::S,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            other => {
                return Err(ParseError {
                    pos: i,
                    msg: format!("unexpected character '{other}'"),
                })
            }
        };
        out.push((i, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn error<T>(&self, msg: impl Into<String>) -> PResult<T> {
        Err(ParseError {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn expr(&mut self) -> PResult<OreOperator> {
        let mut acc = self.term()?;
        while let Some(op) = self.peek().cloned() {
            match op {
                Tok::Plus => {
                    self.at += 1;
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.at += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> PResult<OreOperator> {
        let mut acc = self.unary()?;
        while let Some(op) = self.peek().cloned() {
            match op {
                Tok::Star => {
                    self.at += 1;
                    acc = acc.mul(&self.unary()?);
                }
                Tok::Slash => {
                    let pos = self.pos();
                    self.at += 1;
                    let rhs = self.unary()?;
                    if rhs.order().unwrap_or(0) > 0 {
                        return Err(ParseError {
                            pos,
                            msg: "S may not appear in a denominator".into(),
                        });
                    }
                    let inv = rhs.coeff(0).inverse().ok_or(ParseError {
                        pos,
                        msg: "division by zero".into(),
                    })?;
                    acc = acc.mul(&OreOperator::monomial(inv, 0));
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> PResult<OreOperator> {
        if self.peek() == Some(&Tok::Minus) {
            self.at += 1;
            let inner = self.unary()?;
            return Ok(OreOperator::zero().sub(&inner));
        }
        if self.peek() == Some(&Tok::Plus) {
            self.at += 1;
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> PResult<OreOperator> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.at += 1;
        let Some(Tok::Int(e)) = self.peek().cloned() else {
            return self.error("exponent must be a nonnegative integer");
        };
        if e > 1000 {
            return self.error("exponent too large");
        }
        self.at += 1;
        let mut acc = OreOperator::monomial(RationalFunction::one(), 0);
        for _ in 0..e {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> PResult<OreOperator> {
        let Some(tok) = self.peek().cloned() else {
            return self.error("unexpected end of input");
        };
        self.at += 1;
        match tok {
            Tok::Int(n) => Ok(OreOperator::monomial(
                RationalFunction::constant(Rational::from_integer(n.into())),
                0,
            )),
            Tok::X => Ok(OreOperator::monomial(RationalFunction::var(), 0)),
            Tok::S => Ok(OreOperator::shift()),
            Tok::LParen => {
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.error("expected ')'");
                }
                self.at += 1;
                Ok(inner)
            }
            _ => {
                self.at -= 1;
                self.error("expected a number, 'x', 'S' or '('")
            }
        }
    }
}

fn parse_with_offset(src: &str, offset: usize) -> PResult<OreOperator> {
    let toks = tokenize(src).map_err(|e| ParseError {
        pos: e.pos + offset,
        ..e
    })?;
    let toks = toks.into_iter().map(|(p, t)| (p + offset, t)).collect();
    let mut p = Parser {
        toks,
        at: 0,
        end: offset + src.chars().count(),
    };
    let out = p.expr()?;
    if p.peek().is_some() {
        return p.error("unexpected trailing input");
    }
    Ok(out)
}

/// Parse an operator or element expression.
pub fn parse_operator(src: &str) -> PResult<OreOperator> {
    parse_with_offset(src, 0)
}

/// Parse an `S`-free expression as a rational function.
pub fn parse_rational_function(src: &str) -> PResult<RationalFunction> {
    let op = parse_operator(src)?;
    if op.order().unwrap_or(0) > 0 {
        return Err(ParseError {
            pos: 0,
            msg: "expected an expression without S".into(),
        });
    }
    Ok(op.coeff(0))
}

fn parse_polynomial(src: &str, offset: usize) -> PResult<Poly<Rational>> {
    let op = parse_with_offset(src, offset)?;
    let f = op.coeff(0);
    if op.order().unwrap_or(0) > 0 || !f.is_polynomial() {
        return Err(ParseError {
            pos: offset,
            msg: "expected a polynomial in x".into(),
        });
    }
    Ok(f.num().clone())
}

/// Parse a point: a rational literal such as `-3` or `1/2`, or
/// `root(x^2 - 2)` optionally followed by `+ n` or `- n`.
pub fn parse_point(src: &str) -> PResult<AlgebraicPoint> {
    let lead = src.len() - src.trim_start().len();
    let body = src.trim();
    if let Some(rest) = body.strip_prefix("root") {
        let open = lead + 4 + (rest.len() - rest.trim_start().len());
        let rest = rest.trim_start();
        if !rest.starts_with('(') {
            return Err(ParseError {
                pos: open,
                msg: "expected '(' after root".into(),
            });
        }
        let close = matching_paren(rest).ok_or(ParseError {
            pos: open,
            msg: "unbalanced parentheses".into(),
        })?;
        let inner = &rest[1..close];
        let poly = parse_polynomial(inner, open + 1)?;
        let tail = &rest[close + 1..];
        let tail_pos = open + close + 1;
        let shift = parse_shift(tail, tail_pos)?;
        return AlgebraicPoint::root_of(&poly, shift).map_err(|e| ParseError {
            pos: lead,
            msg: e.to_string(),
        });
    }
    let f = parse_rational_function(body).map_err(|e| ParseError {
        pos: e.pos + lead,
        ..e
    })?;
    if !f.is_constant() {
        return Err(ParseError {
            pos: lead,
            msg: "a point is a rational number or root(<polynomial>)".into(),
        });
    }
    let c = f.num().coeff(0);
    if c.floor().to_integer().to_i64().is_none() {
        return Err(ParseError {
            pos: lead,
            msg: "point out of range".into(),
        });
    }
    Ok(AlgebraicPoint::rational(&c))
}

fn matching_paren(s: &str) -> Option<usize> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

fn parse_shift(tail: &str, pos: usize) -> PResult<i64> {
    let t = tail.trim();
    if t.is_empty() {
        return Ok(0);
    }
    let err = || ParseError {
        pos: pos + (tail.len() - tail.trim_start().len()),
        msg: "expected '+ n' or '- n' after root(...)".into(),
    };
    let (sign, digits) = match t.chars().next() {
        Some('+') => (1, t[1..].trim()),
        Some('-') => (-1, t[1..].trim()),
        _ => return Err(err()),
    };
    let n: i64 = digits.parse().map_err(|_| err())?;
    Ok(sign * n)
}

/// Orbit key from a flag value: `Z`, a point such as `root(x^2-2)`, or a
/// polynomial such as `x^2 - 2`.
pub fn parse_orbit_key(src: &str) -> PResult<String> {
    let s = src.trim();
    if s == "Z" {
        return Ok("Z".into());
    }
    if let Ok(pt) = parse_point(s) {
        return Ok(pt.orbit_key());
    }
    let poly = parse_polynomial(s, 0)?;
    AlgebraicPoint::root_of(&poly, 0)
        .map(|p| p.orbit_key())
        .map_err(|e| ParseError {
            pos: 0,
            msg: e.to_string(),
        })
}

/// `ORBIT=R` for `--right-bound`.
pub fn parse_bound(src: &str) -> PResult<(String, i64)> {
    let eq = src.rfind('=').ok_or(ParseError {
        pos: 0,
        msg: "expected ORBIT=R".into(),
    })?;
    let key = parse_orbit_key(&src[..eq])?;
    let r = src[eq + 1..].trim().parse().map_err(|_| ParseError {
        pos: eq + 1,
        msg: "right bound must be an integer".into(),
    })?;
    Ok((key, r))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn operators() {
        let l = parse_operator("(x+2)^2 + x*S^2 + (x+2)*S^3").unwrap();
        assert_eq!(l.to_string(), "(4 + 4*x + x^2) + x*S^2 + (2 + x)*S^3");
        // S*x = (x+1)*S.
        assert_eq!(parse_operator("S*x").unwrap(), parse_operator("(x+1)*S").unwrap());
        assert_eq!(parse_operator("S/x").unwrap(), parse_operator("1/(x+1)*S").unwrap());
        assert_eq!(parse_operator("-S").unwrap().to_string(), "-S");
    }

    #[test]
    fn operator_errors() {
        assert_eq!(parse_operator("x + 1/S").unwrap_err().pos, 5);
        assert_eq!(parse_operator("x + y").unwrap_err().pos, 4);
        assert_eq!(parse_operator("(x + 1").unwrap_err().pos, 6);
        assert!(parse_operator("x^-1").is_err());
        assert!(parse_operator("1/(x-x)").is_err());
    }

    #[test]
    fn points() {
        assert_eq!(parse_point("-2").unwrap(), AlgebraicPoint::integer(-2));
        assert_eq!(parse_point("1/2").unwrap().to_string(), "1/2");
        let r = parse_point("root(x^2 - 2) + 1").unwrap();
        assert_eq!(r.offset(), 1);
        assert_eq!(r.orbit_key(), "-2 + x^2");
        assert_eq!(parse_point(" root(x^2-2)-3").unwrap().offset(), -3);
        let e = parse_point("root(x^2 - 1)").unwrap_err();
        assert!(e.msg.contains("reducible"), "{e}");
        assert!(parse_point("x").is_err());
        assert_eq!(parse_point("root(x^2 + y)").unwrap_err().pos, 11);
    }

    #[test]
    fn bounds() {
        assert_eq!(parse_bound("Z=0").unwrap(), ("Z".into(), 0));
        assert_eq!(parse_bound("x^2-2=3").unwrap(), ("-2 + x^2".into(), 3));
        assert_eq!(parse_bound("root(x^2-2)=-1").unwrap(), ("-2 + x^2".into(), -1));
        assert!(parse_bound("Z").is_err());
    }
}
