//! Class literals.
//!
//! ```text
//! literal   := terms | bracket | brace | "0"
//! terms     := term ( term | ".." term )*
//! term      := sign? coeff? basis           (a missing sign means +)
//! coeff     := digits ( "/" digits )?
//! basis     := "H" | "S" | "F" | "E" digits
//! bracket   := "[" coeff ";" coeff ( "," coeff )* "]"      rational, b-convention
//! brace     := "{" "s" ":" coeff "," "f" ":" coeff "," "c" ":" "[" coeff-list "]" "}"
//! ```
//!
//! `c E_i .. c E_j` expands to `c E_i + c E_{i+1} + .. + c E_j`. Repeated
//! basis elements add up. Missing entries are zero. Fractions are accepted only
//! by [`parse_cohomology`].

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::lattice::{Class, CohomologyClass, Manifold, RationalClass, RuledClass};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("column {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("E{index} exceeds k = {k}")]
    IndexOutOfRange { index: usize, k: usize },
    #[error("{basis} is not a basis element on a {kind} manifold")]
    WrongBasis { basis: char, kind: &'static str },
    #[error("coefficient {0} is not an integer")]
    NotIntegral(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Basis {
    H,
    S,
    F,
    E(usize),
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(s: &'a str) -> Self {
        Lexer {
            src: s.as_bytes(),
            pos: 0,
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            pos: self.pos + 1,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
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
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn digits(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).ok()?;
        s.parse().ok()
    }

    /// Unsigned number `p` or `p/q`; whitespace is not allowed inside.
    fn unsigned(&mut self) -> Result<Option<BigRational>, ParseError> {
        self.skip_ws();
        let Some(p) = self.digits() else {
            return Ok(None);
        };
        if self.src.get(self.pos) == Some(&b'/') {
            self.pos += 1;
            let Some(q) = self.digits() else {
                return self.err("expected denominator");
            };
            if q.is_zero() {
                return self.err("zero denominator");
            }
            return Ok(Some(BigRational::new(p, q)));
        }
        Ok(Some(BigRational::from_integer(p)))
    }

    fn signed(&mut self) -> Result<BigRational, ParseError> {
        let neg = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        match self.unsigned()? {
            Some(v) if neg => Ok(-v),
            Some(v) => Ok(v),
            None => self.err("expected a number"),
        }
    }

    fn basis(&mut self) -> Result<Option<Basis>, ParseError> {
        let b = match self.peek() {
            Some(b'H') => Basis::H,
            Some(b'S') => Basis::S,
            Some(b'F') => Basis::F,
            Some(b'E') => {
                self.pos += 1;
                let Some(i) = self.digits() else {
                    return self.err("expected an index after E");
                };
                let i: usize = match i.try_into() {
                    Ok(v) if v >= 1 => v,
                    _ => return self.err("E index must be a positive integer"),
                };
                return Ok(Some(Basis::E(i)));
            }
            _ => return Ok(None),
        };
        self.pos += 1;
        Ok(Some(b))
    }

    fn list(&mut self, close: u8) -> Result<Vec<BigRational>, ParseError> {
        let mut out = Vec::new();
        if self.eat(close) {
            return Ok(out);
        }
        loop {
            out.push(self.signed()?);
            if self.eat(close) {
                return Ok(out);
            }
            self.expect(b',')?;
        }
    }
}

type Terms = Vec<(BigRational, Basis)>;

fn parse_terms(lx: &mut Lexer<'_>) -> Result<Terms, ParseError> {
    let mut terms: Terms = Vec::new();
    loop {
        if lx.at_end() {
            break;
        }
        if lx.peek() == Some(b'.') {
            let range_pos = lx.pos;
            if lx.src.get(lx.pos + 1) != Some(&b'.') {
                return lx.err("expected '..'");
            }
            lx.pos += 2;
            let Some((c0, Basis::E(i))) = terms.last().cloned() else {
                lx.pos = range_pos;
                return lx.err("'..' must follow an E term");
            };
            let end_pos = lx.pos;
            let (c1, b1) = term(lx)?;
            let Basis::E(j) = b1 else {
                lx.pos = end_pos;
                return lx.err("'..' must end with an E term");
            };
            if c1 != c0 {
                lx.pos = end_pos;
                return lx.err("both ends of '..' need the same coefficient");
            }
            if j <= i {
                lx.pos = end_pos;
                return lx.err("'..' needs an increasing index range");
            }
            terms.extend((i + 1..=j).map(|t| (c0.clone(), Basis::E(t))));
            continue;
        }
        terms.push(term(lx)?);
    }
    if terms.is_empty() {
        return lx.err("empty literal");
    }
    Ok(terms)
}

fn term(lx: &mut Lexer<'_>) -> Result<(BigRational, Basis), ParseError> {
    let neg = if lx.eat(b'-') {
        true
    } else {
        lx.eat(b'+');
        false
    };
    let coeff = lx.unsigned()?.unwrap_or_else(BigRational::one);
    let Some(basis) = lx.basis()? else {
        return lx.err("expected H, S, F or E<index>");
    };
    Ok((if neg { -coeff } else { coeff }, basis))
}

fn assemble(terms: Terms, m: &Manifold) -> Result<CohomologyClass, ParseError> {
    let k = m.k();
    match m {
        Manifold::Rational { .. } => {
            let mut a = BigRational::zero();
            let mut b = vec![BigRational::zero(); k];
            for (c, basis) in terms {
                match basis {
                    Basis::H => a += c,
                    Basis::E(i) if i <= k => b[i - 1] -= c,
                    Basis::E(i) => return Err(ParseError::IndexOutOfRange { index: i, k }),
                    Basis::S => return Err(wrong('S', m)),
                    Basis::F => return Err(wrong('F', m)),
                }
            }
            Ok(Class::Rational(RationalClass::new(a, b)))
        }
        Manifold::Ruled { .. } => {
            let mut s = BigRational::zero();
            let mut f = BigRational::zero();
            let mut c = vec![BigRational::zero(); k];
            for (v, basis) in terms {
                match basis {
                    Basis::S => s += v,
                    Basis::F => f += v,
                    Basis::E(i) if i <= k => c[i - 1] += v,
                    Basis::E(i) => return Err(ParseError::IndexOutOfRange { index: i, k }),
                    Basis::H => return Err(wrong('H', m)),
                }
            }
            Ok(Class::Ruled(RuledClass::new(s, f, c)))
        }
    }
}

fn wrong(basis: char, m: &Manifold) -> ParseError {
    ParseError::WrongBasis {
        basis,
        kind: m.kind_name(),
    }
}

fn pad(mut v: Vec<BigRational>, k: usize) -> Result<Vec<BigRational>, ParseError> {
    if v.len() > k {
        return Err(ParseError::IndexOutOfRange { index: v.len(), k });
    }
    v.resize(k, BigRational::zero());
    Ok(v)
}

/// Parses a literal with rational coefficients.
pub fn parse_cohomology(lit: &str, m: &Manifold) -> Result<CohomologyClass, ParseError> {
    let mut lx = Lexer::new(lit);
    let out = match lx.peek() {
        Some(b'[') => {
            lx.pos += 1;
            let a = lx.signed()?;
            let b = if lx.eat(b';') {
                lx.list(b']')?
            } else {
                lx.expect(b']')?;
                vec![]
            };
            if !matches!(m, Manifold::Rational { .. }) {
                return Err(wrong('H', m));
            }
            Class::Rational(RationalClass::new(a, pad(b, m.k())?))
        }
        Some(b'{') => {
            lx.pos += 1;
            let key = |lx: &mut Lexer<'_>, name: u8| -> Result<(), ParseError> {
                lx.expect(name)?;
                lx.expect(b':')
            };
            key(&mut lx, b's')?;
            let s = lx.signed()?;
            lx.expect(b',')?;
            key(&mut lx, b'f')?;
            let f = lx.signed()?;
            lx.expect(b',')?;
            key(&mut lx, b'c')?;
            lx.expect(b'[')?;
            let c = lx.list(b']')?;
            lx.expect(b'}')?;
            if !matches!(m, Manifold::Ruled { .. }) {
                return Err(wrong('S', m));
            }
            Class::Ruled(RuledClass::new(s, f, pad(c, m.k())?))
        }
        Some(b'0') if lit.trim() == "0" => {
            lx.pos = lit.len();
            Class::zero(m).to_rational()
        }
        _ => {
            let terms = parse_terms(&mut lx)?;
            assemble(terms, m)?
        }
    };
    if !lx.at_end() {
        return lx.err("unexpected trailing input");
    }
    Ok(out)
}

fn integral(v: &BigRational) -> Result<BigInt, ParseError> {
    if v.is_integer() {
        Ok(v.to_integer())
    } else {
        Err(ParseError::NotIntegral(v.to_string()))
    }
}

fn integral_all(v: &[BigRational]) -> Result<Vec<BigInt>, ParseError> {
    v.iter().map(integral).collect()
}

/// Parses an integral class literal.
pub fn parse_class(lit: &str, m: &Manifold) -> Result<Class, ParseError> {
    Ok(match parse_cohomology(lit, m)? {
        Class::Rational(r) => {
            Class::Rational(RationalClass::new(integral(&r.a)?, integral_all(&r.b)?))
        }
        Class::Ruled(r) => Class::Ruled(RuledClass::new(
            integral(&r.s)?,
            integral(&r.f)?,
            integral_all(&r.c)?,
        )),
    })
}

struct TermWriter {
    out: String,
}

impl TermWriter {
    fn push<T: fmt::Display + Signed + One + PartialEq>(&mut self, c: &T, basis: &str) {
        if c.is_zero() {
            return;
        }
        let first = self.out.is_empty();
        if !first {
            self.out.push(' ');
        }
        if c.is_negative() {
            self.out.push('-');
        } else if !first {
            self.out.push('+');
        }
        let mag = c.abs();
        if !mag.is_one() {
            self.out.push_str(&mag.to_string());
        }
        self.out.push_str(basis);
    }

    fn finish(self) -> String {
        if self.out.is_empty() {
            "0".to_string()
        } else {
            self.out
        }
    }
}

fn format_generic<T>(a: &Class<T>) -> String
where
    T: fmt::Display + Signed + One + PartialEq + Clone,
{
    let mut w = TermWriter { out: String::new() };
    match a {
        Class::Rational(r) => {
            w.push(&r.a, "H");
            for (i, b) in r.b.iter().enumerate() {
                w.push(&-b.clone(), &format!("E{}", i + 1));
            }
        }
        Class::Ruled(r) => {
            w.push(&r.s, "S");
            w.push(&r.f, "F");
            for (i, c) in r.c.iter().enumerate() {
                w.push(c, &format!("E{}", i + 1));
            }
        }
    }
    w.finish()
}

/// Term-form literal, e.g. `3H -2E1 -2E2` or `-2F +E1 -E4`; `0` for zero.
pub fn format_class(a: &Class) -> String {
    format_generic(a)
}

pub fn format_cohomology(a: &CohomologyClass) -> String {
    format_generic(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(k: usize) -> Manifold {
        Manifold::rational(k)
    }

    #[test]
    fn term_form() {
        let a = parse_class("3H -2E1 -2E2", &rat(2)).unwrap();
        assert_eq!(a, Class::Rational(RationalClass::from_i64(3, &[2, 2])));
        let a = parse_class("6H -2E1 .. -2E9 -2E10", &rat(10)).unwrap();
        assert_eq!(a, Class::Rational(RationalClass::from_i64(6, &[2; 10])));
        let a = parse_class("-H+2E1", &rat(3)).unwrap();
        assert_eq!(a, Class::Rational(RationalClass::from_i64(-1, &[-2, 0, 0])));
        let a = parse_class("E1 + E1", &rat(1)).unwrap();
        assert_eq!(a, Class::Rational(RationalClass::from_i64(0, &[-2])));
    }

    #[test]
    fn bracket_forms() {
        let a = parse_class("[6; 2,2,2,2,2,2,2,2,2,2]", &rat(10)).unwrap();
        assert_eq!(a, Class::Rational(RationalClass::from_i64(6, &[2; 10])));
        let a = parse_class("[1; 2]", &rat(3)).unwrap();
        assert_eq!(a, Class::Rational(RationalClass::from_i64(1, &[2, 0, 0])));
        let m = Manifold::ruled(1, 4).unwrap();
        let a = parse_class("{s:0, f:-2, c:[1,1,1,-1]}", &m).unwrap();
        assert_eq!(a, Class::Ruled(RuledClass::from_i64(0, -2, &[1, 1, 1, -1])));
        let b = parse_class("-2F +E1 +E2 +E3 -E4", &m).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn errors() {
        assert_eq!(
            parse_class("E11", &rat(10)),
            Err(ParseError::IndexOutOfRange { index: 11, k: 10 })
        );
        assert!(matches!(
            parse_class("3H -2X1", &rat(2)),
            Err(ParseError::Syntax { pos: 6, .. })
        ));
        assert!(matches!(
            parse_class("1/2H", &rat(1)),
            Err(ParseError::NotIntegral(_))
        ));
        assert!(matches!(
            parse_class("H", &Manifold::ruled(1, 1).unwrap()),
            Err(ParseError::WrongBasis { .. })
        ));
        assert!(parse_class("-2E1 .. -3E4", &rat(4)).is_err());
        assert!(parse_class("", &rat(4)).is_err());
        assert!(parse_class("[1; 1, 1]", &rat(1)).is_err());
    }

    #[test]
    fn cohomology_fractions() {
        let w = parse_cohomology("3H -1/10E1 -1/10E2", &rat(2)).unwrap();
        let Class::Rational(r) = &w else { panic!() };
        assert_eq!(r.b[0], BigRational::new(1.into(), 10.into()));
        assert_eq!(
            parse_cohomology(&format_cohomology(&w), &rat(2)).unwrap(),
            w
        );
    }

    #[test]
    fn format_round_trip() {
        let m = Manifold::ruled(2, 4).unwrap();
        for a in [
            Class::Rational(RationalClass::from_i64(3, &[2, 0, -1])),
            Class::Rational(RationalClass::from_i64(0, &[0, 0])),
            Class::Ruled(RuledClass::from_i64(1, -2, &[1, 1, 0, -3])),
        ] {
            let m = if a.kind_name() == "rational" {
                rat(a.k())
            } else {
                m
            };
            let s = format_class(&a);
            assert_eq!(parse_class(&s, &m).unwrap(), a, "{s}");
        }
        assert_eq!(
            format_class(&Class::Rational(RationalClass::from_i64(3, &[2, 0, -1]))),
            "3H -2E1 +E3"
        );
    }
}
