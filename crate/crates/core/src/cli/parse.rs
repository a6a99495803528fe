//! Insertion grammar: an optional `tau_<k>` prefix followed by a sum of
//! terms, each a product of an optional rational coefficient and powers of
//! `h` and `xi`. Examples: `h^2*xi^3`, `tau_4 xi`, `2*h*xi - 1/2*xi^2`, `1`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::corealg::model::ModelSpec;
use crate::corealg::rational::Rational;
use crate::corealg::ring::{normalize, Generator, RingExpr};
use crate::qlocal::Insertion;

/// Exponents above this are rejected before any ring arithmetic happens.
pub const MAX_EXPONENT: u32 = 1000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("exponent at position {position} is out of range (max {MAX_EXPONENT})")]
    ExponentOutOfRange { position: usize },
    #[error("{0}")]
    Ring(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedInsertion {
    pub insertion: Insertion,
    pub warnings: Vec<String>,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(s.as_bytes()) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            position: self.pos,
            message: message.into(),
        })
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a number");
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("digits parse as an integer"))
    }

    fn exponent(&mut self) -> Result<u32, ParseError> {
        self.skip_ws();
        let position = self.pos;
        let n = self.integer()?;
        match u32::try_from(&n) {
            Ok(e) if e <= MAX_EXPONENT => Ok(e),
            _ => Err(ParseError::ExponentOutOfRange { position }),
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }
}

fn term(lx: &mut Lexer) -> Result<(Rational, Vec<(Generator, u32)>), ParseError> {
    let mut coeff = Rational::one();
    let mut factors = Vec::new();
    let mut first = true;
    loop {
        if !first {
            match lx.peek() {
                Some(b'*') => {
                    lx.pos += 1;
                }
                Some(c) if c.is_ascii_alphanumeric() => {}
                _ => break,
            }
        }
        match lx.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = lx.integer()?;
                let mut q = Rational::from_integer(n);
                if lx.peek() == Some(b'/') {
                    lx.pos += 1;
                    let d = lx.integer()?;
                    if d.is_zero() {
                        return lx.err("zero denominator");
                    }
                    q /= Rational::from_integer(d);
                }
                coeff *= q;
            }
            Some(b'x') if lx.eat("xi") => {
                let e = if lx.eat("^") { lx.exponent()? } else { 1 };
                factors.push((Generator::Xi, e));
            }
            Some(b'h') => {
                lx.pos += 1;
                let e = if lx.eat("^") { lx.exponent()? } else { 1 };
                factors.push((Generator::H, e));
            }
            Some(_) => return lx.err("expected a number, `h` or `xi`"),
            None => return lx.err("unexpected end of input"),
        }
        first = false;
    }
    Ok((coeff, factors))
}

/// Parses one insertion in the flop model of rank `r`.
pub fn parse_insertion(text: &str, r: u32) -> Result<ParsedInsertion, ParseError> {
    parse_in_model(text, ModelSpec::flop(r))
}

/// Same grammar in any local model; the `h`, `xi` generators must exist there.
pub fn parse_in_model(text: &str, model: ModelSpec) -> Result<ParsedInsertion, ParseError> {
    let mut lx = Lexer {
        src: text.as_bytes(),
        pos: 0,
    };
    let mut k = 0;
    if lx.eat("tau_") {
        k = lx.exponent()?;
        lx.eat("*");
    }
    let mut expr = RingExpr::default();
    let mut sign = Rational::one();
    if lx.eat("-") {
        sign = -sign;
    } else {
        lx.eat("+");
    }
    loop {
        let (c, f) = term(&mut lx)?;
        expr.terms.push((c * &sign, f));
        if lx.eat("+") {
            sign = Rational::one();
        } else if lx.eat("-") {
            sign = -Rational::one();
        } else {
            break;
        }
    }
    if !lx.at_end() {
        return lx.err("unexpected trailing input");
    }
    let cls = normalize(&expr, model).map_err(|e| ParseError::Ring(e.to_string()))?;
    let mut warnings = Vec::new();
    if cls.is_zero() {
        warnings.push(format!(
            "insertion `{}` is zero in the cohomology of {model}",
            text.trim()
        ));
    }
    Ok(ParsedInsertion {
        insertion: Insertion::new(k, cls),
        warnings,
    })
}

/// Comma-separated list of insertions.
pub fn parse_insertions(
    text: &str,
    model: ModelSpec,
) -> Result<(Vec<Insertion>, Vec<String>), ParseError> {
    let mut out = Vec::new();
    let mut warnings = Vec::new();
    let mut offset = 0;
    for piece in text.split(',') {
        let p = parse_in_model(piece, model).map_err(|e| match e {
            ParseError::Syntax { position, message } => ParseError::Syntax {
                position: position + offset,
                message,
            },
            ParseError::ExponentOutOfRange { position } => ParseError::ExponentOutOfRange {
                position: position + offset,
            },
            other => other,
        })?;
        out.push(p.insertion);
        warnings.extend(p.warnings);
        offset += piece.len() + 1;
    }
    Ok((out, warnings))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corealg::rational::{rat, ratio};
    use crate::corealg::ring::CohClass;

    #[test]
    fn basic() {
        let m = ModelSpec::flop(2);
        let p = parse_insertion("h^2*xi^3", 2).unwrap();
        assert_eq!(p.insertion, Insertion::new(0, CohClass::monomial(m, 2, 3)));
        let p = parse_insertion("tau_4 xi", 2).unwrap();
        assert_eq!(p.insertion, Insertion::new(4, CohClass::monomial(m, 0, 1)));
        assert_eq!(
            parse_insertion("1", 2).unwrap().insertion.cls,
            CohClass::one(m)
        );
    }

    #[test]
    fn sums() {
        let m = ModelSpec::flop(2);
        let p = parse_insertion("2*h*xi - 1/2 xi^2", 2).unwrap();
        let want = &CohClass::monomial(m, 1, 1).scale(&rat(2))
            - &CohClass::monomial(m, 0, 2).scale(&ratio(1, 2));
        assert_eq!(p.insertion.cls, want);
        let x = parse_insertion("-h + xi", 2).unwrap().insertion.cls;
        assert_eq!(
            x,
            &CohClass::monomial(m, 0, 1) - &CohClass::monomial(m, 1, 0)
        );
    }

    #[test]
    fn zero_warns() {
        let p = parse_insertion("h^5", 2).unwrap();
        assert!(p.insertion.cls.is_zero());
        assert_eq!(p.warnings.len(), 1);
    }

    #[test]
    fn errors() {
        assert_eq!(
            parse_insertion("h^2*q", 2),
            Err(ParseError::Syntax {
                position: 4,
                message: "expected a number, `h` or `xi`".into()
            })
        );
        assert!(matches!(
            parse_insertion("h^99999999999", 2),
            Err(ParseError::ExponentOutOfRange { position: 2 })
        ));
        assert!(matches!(
            parse_insertion("", 2),
            Err(ParseError::Syntax { .. })
        ));
        assert!(matches!(
            parse_insertions("h,,xi", ModelSpec::flop(2)),
            Err(ParseError::Syntax { position: 2, .. })
        ));
    }

    #[test]
    fn display_round_trip() {
        for s in ["tau_4 xi", "3*h*xi^3 - 3*h^2*xi^2", "-1/2*h", "1", "0"] {
            let p = parse_insertion(s, 2).unwrap().insertion;
            assert_eq!(parse_insertion(&p.to_string(), 2).unwrap().insertion, p);
        }
    }
}
