//! Textual polynomials: signed sums of terms `coef*var^exp*...` with
//! coefficients `p` or `p/q`.

use std::fmt;

use jetnorm_core::polyalg::{Jet, Monomial};
use jetnorm_core::scalar::{self, Scalar};
use num_traits::One;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolyErrorKind {
    Syntax(String),
    UnknownVariable(String),
    NonRational(String),
}

/// A parse failure at a byte offset into the polynomial text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyError {
    pub offset: usize,
    pub kind: PolyErrorKind,
}

impl fmt::Display for PolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            PolyErrorKind::Syntax(m) => write!(f, "syntax error: {m}"),
            PolyErrorKind::UnknownVariable(v) => write!(f, "unknown variable `{v}`"),
            PolyErrorKind::NonRational(t) => {
                write!(f, "coefficient `{t}` is not a rational of the form p or p/q")
            }
        }
    }
}

impl std::error::Error for PolyError {}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    names: &'a [String],
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<u8> {
        self.src.as_bytes().get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t' | b'\n' | b'\r')) {
            self.pos += 1;
        }
    }

    fn err<T>(&self, offset: usize, kind: PolyErrorKind) -> Result<T, PolyError> {
        Err(PolyError { offset, kind })
    }

    fn syntax<T>(&self, msg: &str) -> Result<T, PolyError> {
        let found = match self.peek() {
            Some(_) => {
                let c = self.src[self.pos..].chars().next().expect("in bounds");
                format!("`{c}`")
            }
            None => "end of input".to_string(),
        };
        self.err(self.pos, PolyErrorKind::Syntax(format!("expected {msg}, found {found}")))
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn number(&mut self) -> Result<Scalar, PolyError> {
        let start = self.pos;
        self.digits();
        if matches!(self.peek(), Some(b'.' | b'e' | b'E')) {
            while matches!(self.peek(), Some(b'0'..=b'9' | b'.' | b'e' | b'E' | b'+' | b'-')) {
                self.pos += 1;
            }
            return self.err(start, PolyErrorKind::NonRational(self.src[start..self.pos].into()));
        }
        if self.peek() == Some(b'/') {
            self.pos += 1;
            if self.digits().is_empty() {
                return self.syntax("a denominator");
            }
            if matches!(self.peek(), Some(b'.' | b'e' | b'E')) {
                while matches!(self.peek(), Some(b'0'..=b'9' | b'.' | b'e' | b'E')) {
                    self.pos += 1;
                }
                return self.err(start, PolyErrorKind::NonRational(self.src[start..self.pos].into()));
            }
        }
        let text = &self.src[start..self.pos];
        match scalar::parse(text) {
            Some(s) => Ok(s),
            None => self.err(
                start,
                PolyErrorKind::Syntax(format!("`{text}` has a zero denominator")),
            ),
        }
    }

    fn ident(&mut self) -> &'a str {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    /// `factor (* factor)*`, returning coefficient and exponent vector.
    fn term(&mut self) -> Result<(Scalar, Vec<u16>), PolyError> {
        let mut coef = Scalar::one();
        let mut exps = vec![0u16; self.names.len()];
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'0'..=b'9') => coef *= self.number()?,
                Some(b'.') => {
                    let start = self.pos;
                    self.pos += 1;
                    self.digits();
                    return self.err(start, PolyErrorKind::NonRational(self.src[start..self.pos].into()));
                }
                Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                    let start = self.pos;
                    let name = self.ident();
                    let Some(i) = self.names.iter().position(|n| n == name) else {
                        return self.err(start, PolyErrorKind::UnknownVariable(name.into()));
                    };
                    self.skip_ws();
                    let mut e: u32 = 1;
                    if self.peek() == Some(b'^') {
                        self.pos += 1;
                        self.skip_ws();
                        let at = self.pos;
                        let d = self.digits();
                        if d.is_empty() {
                            return self.syntax("an exponent");
                        }
                        e = match d.parse::<u16>() {
                            Ok(v) => u32::from(v),
                            Err(_) => {
                                return self.err(at, PolyErrorKind::Syntax(format!("exponent `{d}` is too large")))
                            }
                        };
                    }
                    let total = u32::from(exps[i]) + e;
                    exps[i] = u16::try_from(total).map_err(|_| PolyError {
                        offset: start,
                        kind: PolyErrorKind::Syntax("exponent is too large".into()),
                    })?;
                }
                _ => return self.syntax("a coefficient or a variable"),
            }
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                return Ok((coef, exps));
            }
        }
    }

    fn polynomial(&mut self, order: u32) -> Result<Jet, PolyError> {
        let mut jet = Jet::zero(self.names.len(), order);
        self.skip_ws();
        let mut sign = Scalar::one();
        match self.peek() {
            Some(b'-') => {
                sign = -sign;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        loop {
            let (c, exps) = self.term()?;
            jet.add_term(Monomial::new(&exps), sign * c);
            self.skip_ws();
            match self.peek() {
                None => return Ok(jet),
                Some(b'+') => sign = Scalar::one(),
                Some(b'-') => sign = -Scalar::one(),
                _ => return self.syntax("`+`, `-` or end of input"),
            }
            self.pos += 1;
        }
    }
}

/// Parses `text` as a polynomial in `names`, truncated above degree `order`.
pub fn parse_polynomial(text: &str, names: &[String], order: u32) -> Result<Jet, PolyError> {
    let mut p = Parser { src: text, pos: 0, names };
    p.polynomial(order)
}

/// Canonical text of a jet; parses back to the same jet.
pub fn print_polynomial(f: &Jet, names: &[String]) -> String {
    f.to_text(names)
}

/// Parses a rational `p` or `p/q`, rejecting decimals.
pub fn parse_rational(text: &str) -> Result<Scalar, PolyError> {
    scalar::parse(text).ok_or_else(|| PolyError {
        offset: 0,
        kind: PolyErrorKind::NonRational(text.into()),
    })
}

pub fn format_rational(x: &Scalar) -> String {
    scalar::format(x)
}

/// Whether `f` has no term of degree other than one.
pub fn is_homogeneous_linear(f: &Jet) -> bool {
    f.terms().all(|(m, _)| m.degree() == 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use jetnorm_core::scalar::{frac, int};

    fn xyz() -> Vec<String> {
        ["x", "y", "z"].iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn single_negated_variable() {
        let f = parse_polynomial("-z", &xyz(), 3).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f.coeff(&Monomial::var(3, 2)), int(-1));
    }

    #[test]
    fn two_term_polynomial() {
        let f = parse_polynomial("x - 1/2*y^2", &xyz(), 3).unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f.coeff(&Monomial::var(3, 0)), int(1));
        assert_eq!(f.coeff(&Monomial::new(&[0, 2, 0])), frac(-1, 2));
    }

    #[test]
    fn trailing_operator_is_positioned() {
        let e = parse_polynomial("x + ", &xyz(), 3).unwrap_err();
        assert_eq!(e.offset, 4);
        assert!(matches!(e.kind, PolyErrorKind::Syntax(_)));
    }

    #[test]
    fn decimals_and_unknown_names() {
        let e = parse_polynomial("1.5*x", &xyz(), 3).unwrap_err();
        assert_eq!(e.kind, PolyErrorKind::NonRational("1.5".into()));
        let e = parse_polynomial("x + w", &xyz(), 3).unwrap_err();
        assert_eq!((e.offset, e.kind), (4, PolyErrorKind::UnknownVariable("w".into())));
    }

    #[test]
    fn truncation_and_zero_denominator() {
        let f = parse_polynomial("x + y^4", &xyz(), 3).unwrap();
        assert_eq!(f.len(), 1);
        assert!(parse_polynomial("1/0*x", &xyz(), 3).is_err());
        assert!(parse_polynomial("0", &xyz(), 3).unwrap().is_zero());
    }
}
