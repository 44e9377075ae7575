//! Text form of series.
//!
//! ```text
//! expr     := ['-'] term (('+'|'-') term)* [('+') 'O(' order ')']
//! term     := coeff ('*'? VAR ('^' exponent)?)? | VAR ('^' exponent)?
//! coeff    := INT ('/' POSINT)?
//! exponent := INT | '(' INT '/' POSINT ')'
//! order    := '1' | VAR ('^' exponent)?
//! ```
//!
//! `VAR` is a single letter. Output lists terms by descending exponent and
//! round-trips through the parser for rational coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Exponent, Poly, PuiseuxSeries};
use crate::error::{Error, Result};
use crate::scalar::{Field, Rational};

/// Grammar summary shown in usage errors.
pub const GRAMMAR: &str = "expr := term (('+'|'-') term)* ; term := coeff ('*'? VAR ('^' exponent)?)? | VAR ('^' exponent)? ; \
coeff := INT ('/' POSINT)? ; exponent := INT | '(' INT '/' POSINT ')' ; VAR := single letter ; optional trailing '+ O(VAR^exponent)'";

/// Result of [`ParsedSeries::parse`]: a polynomial when the text is one.
#[derive(Clone, Debug)]
pub enum ParsedSeries<K> {
    Poly(Poly<K>),
    Series(PuiseuxSeries<K>),
}

impl<K: Field> ParsedSeries<K> {
    pub fn parse(text: &str, default_var: char) -> Result<Self> {
        let s = parse_series(text, default_var)?;
        Ok(match Poly::new(s.clone()) {
            Ok(p) => ParsedSeries::Poly(p),
            Err(_) => ParsedSeries::Series(s),
        })
    }

    pub fn into_series(self) -> PuiseuxSeries<K> {
        match self {
            ParsedSeries::Poly(p) => p.into_series(),
            ParsedSeries::Series(s) => s,
        }
    }
}

/// Parse a series; `default_var` labels constant-only input.
pub fn parse_series<K: Field>(text: &str, default_var: char) -> Result<PuiseuxSeries<K>> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
        var: None,
    };
    let (terms, trunc) = p.expr()?;
    let var = p.var.unwrap_or(default_var);
    let mut ram: i64 = 1;
    for (e, _) in &terms {
        ram = ram.lcm(e.denom());
    }
    if let Some(t) = trunc {
        ram = ram.lcm(t.denom());
    }
    let num = |e: Exponent| (e * Exponent::from(ram)).to_integer();
    Ok(PuiseuxSeries::from_terms(
        var,
        ram as u32,
        terms
            .into_iter()
            .map(|(e, c)| (num(e), K::from_rational(c))),
        trunc.map(num),
    ))
}

/// Parse a polynomial.
pub fn parse_poly<K: Field>(text: &str, default_var: char) -> Result<Poly<K>> {
    Poly::new(parse_series(text, default_var)?).map_err(|e| Error::Parse {
        pos: 0,
        msg: e.to_string(),
    })
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    var: Option<char>,
}

type Terms = Vec<(Exponent, Rational)>;

impl Parser {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn at_order_term(&mut self) -> bool {
        self.peek() == Some('O') && self.chars.get(self.pos + 1) == Some(&'(')
    }

    fn expr(&mut self) -> Result<(Terms, Option<Exponent>)> {
        let mut terms = Vec::new();
        let mut trunc = None;
        if self.peek().is_none() {
            return self.err("empty input");
        }
        let mut negative = self.eat('-');
        if !negative && self.at_order_term() {
            trunc = Some(self.order_term()?);
        } else {
            loop {
                let (e, mut c) = self.term()?;
                if negative {
                    c = -c;
                }
                terms.push((e, c));
                match self.peek() {
                    None => break,
                    Some('+') => {
                        self.pos += 1;
                        negative = false;
                        if self.at_order_term() {
                            trunc = Some(self.order_term()?);
                            break;
                        }
                    }
                    Some('-') => {
                        self.pos += 1;
                        negative = true;
                    }
                    Some(c) => return self.err(format!("unexpected '{c}'")),
                }
            }
        }
        if let Some(c) = self.peek() {
            return self.err(format!("unexpected '{c}' after the order term"));
        }
        Ok((terms, trunc))
    }

    fn order_term(&mut self) -> Result<Exponent> {
        self.pos += 1;
        self.expect('(')?;
        let e = if self.peek() == Some('1') {
            self.pos += 1;
            Exponent::zero()
        } else {
            self.variable()?;
            self.power()?
        };
        self.expect(')')?;
        Ok(e)
    }

    fn term(&mut self) -> Result<(Exponent, Rational)> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let coeff = self.coeff()?;
                let star = self.eat('*');
                if star || self.peek().is_some_and(char::is_alphabetic) {
                    self.variable()?;
                    Ok((self.power()?, coeff))
                } else {
                    Ok((Exponent::zero(), coeff))
                }
            }
            Some(c) if c.is_alphabetic() => {
                self.variable()?;
                Ok((self.power()?, Rational::one()))
            }
            Some(c) => self.err(format!("expected a term, found '{c}'")),
            None => self.err("expected a term"),
        }
    }

    fn variable(&mut self) -> Result<()> {
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_alphabetic() => {
                self.pos += 1;
                if self
                    .chars
                    .get(self.pos)
                    .is_some_and(|c| c.is_alphanumeric())
                {
                    self.pos = start;
                    return self.err("variables are single letters");
                }
                match self.var {
                    Some(v) if v != c => {
                        self.pos = start;
                        self.err(format!("second variable '{c}' (already using '{v}')"))
                    }
                    _ => {
                        self.var = Some(c);
                        Ok(())
                    }
                }
            }
            _ => self.err("expected a variable"),
        }
    }

    fn power(&mut self) -> Result<Exponent> {
        if !self.eat('^') {
            return Ok(Exponent::one());
        }
        if self.eat('(') {
            let n = self.small_int(true)?;
            self.expect('/')?;
            let d = self.small_int(false)?;
            self.expect(')')?;
            Ok(Exponent::new(n, d))
        } else {
            Ok(Exponent::from(self.small_int(true)?))
        }
    }

    fn digits(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(char::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn small_int(&mut self, signed: bool) -> Result<i64> {
        let neg = signed && self.eat('-');
        let start = self.pos;
        let v: i64 = match self.digits()?.parse() {
            Ok(v) => v,
            Err(_) => {
                self.pos = start;
                return self.err("exponent out of range");
            }
        };
        if !signed && v == 0 {
            self.pos = start;
            return self.err("denominator must be positive");
        }
        Ok(if neg { -v } else { v })
    }

    fn coeff(&mut self) -> Result<Rational> {
        let n: BigInt = self.digits()?.parse().expect("digits");
        if self.peek() == Some('/') {
            self.pos += 1;
            let start = self.pos;
            let d: BigInt = self.digits()?.parse().expect("digits");
            if d.is_zero() {
                self.pos = start;
                return self.err("denominator must be positive");
            }
            return Ok(Rational::new(n, d));
        }
        Ok(Rational::from_integer(n))
    }
}

fn fmt_exponent(e: Exponent) -> String {
    if e.is_integer() {
        e.to_integer().to_string()
    } else {
        format!("({}/{})", e.numer(), e.denom())
    }
}

fn fmt_monomial(var: char, e: Exponent) -> String {
    if e.is_zero() {
        String::new()
    } else if e.is_one() {
        var.to_string()
    } else {
        format!("{var}^{}", fmt_exponent(e))
    }
}

impl<K: Field> fmt::Display for PuiseuxSeries<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (e, c) in self.exponent_terms().rev() {
            let c = c.normalized();
            let mono = fmt_monomial(self.var, e);
            let (neg, mag) = match c.as_rational() {
                Some(q) => (q.is_negative(), q.abs().to_string()),
                None => (false, c.to_string()),
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if mono.is_empty() {
                out.push_str(&mag);
            } else if mag == "1" {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{mag}*{mono}"));
            }
        }
        if let Some(t) = self.truncation() {
            let order = if t.is_zero() {
                "O(1)".to_string()
            } else {
                format!("O({})", fmt_monomial(self.var, t))
            };
            if out.is_empty() {
                out = order;
            } else {
                out.push_str(" + ");
                out.push_str(&order);
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Cyclotomic;

    type S = PuiseuxSeries<Cyclotomic>;

    fn parse(t: &str) -> Result<S> {
        parse_series(t, 'z')
    }

    #[test]
    fn polynomial_input() {
        let p: Poly<Cyclotomic> = parse_poly("z^3 + 2*z - 1", 'z').unwrap();
        assert_eq!(p.coeff(3), Cyclotomic::from_int(1));
        assert_eq!(p.coeff(1), Cyclotomic::from_int(2));
        assert_eq!(p.coeff(0), Cyclotomic::from_int(-1));
        assert_eq!(p.to_string(), "z^3 + 2*z - 1");
    }

    #[test]
    fn fractional_input() {
        let s = parse("-3/2*x^(-5/3)").unwrap();
        assert_eq!(s.var(), 'x');
        assert_eq!(s.ramification(), 3);
        assert_eq!(s.num_terms(), 1);
        assert_eq!(s.coeff(Exponent::new(-5, 3)), Cyclotomic::from_ratio(-3, 2));
        assert_eq!(s.to_string(), "-3/2*x^(-5/3)");
    }

    #[test]
    fn zero_denominator_is_rejected() {
        assert!(matches!(parse("x^(1/0)"), Err(Error::Parse { pos: 5, .. })));
        assert!(matches!(parse("1/0"), Err(Error::Parse { .. })));
    }

    #[test]
    fn malformed_inputs() {
        for bad in [
            "",
            "x +",
            "x y",
            "x^",
            "2**x",
            "x + y",
            "xy",
            "x^(1/2",
            "O(x^2) + x",
        ] {
            assert!(parse(bad).is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn order_terms() {
        let s = parse("1 + z + O(z^2)").unwrap();
        assert_eq!(s.truncation(), Some(Exponent::from(2)));
        assert_eq!(s.to_string(), "z + 1 + O(z^2)");
        let u = parse("O(z^(3/2))").unwrap();
        assert_eq!(u.num_terms(), 0);
        assert_eq!(u.ramification(), 2);
        assert_eq!(parse("2 + O(1)").unwrap().to_string(), "O(1)");
    }

    #[test]
    fn implicit_multiplication_and_spacing() {
        assert_eq!(parse("2z").unwrap(), parse("2 * z ^ 1").unwrap());
        assert_eq!(parse("x^-2").unwrap().to_string(), "x^-2");
        assert_eq!(parse("7").unwrap().var(), 'z');
    }

    #[test]
    fn round_trip_on_canonical_text() {
        for t in [
            "z^3 + 2*z - 1",
            "-3/2*x^(-5/3)",
            "x^(3/2) - 1/4*x^-1",
            "1/4 - t^(-5/2)",
            "0",
            "s^2 - s + O(s^(7/3))",
        ] {
            assert_eq!(parse(t).unwrap().to_string(), t);
        }
    }

    #[test]
    fn cyclotomic_coefficients_print_in_parentheses() {
        let s = S::monomial('z', Cyclotomic::root_of_unity(3, 1), Exponent::new(-5, 3));
        assert_eq!(s.to_string(), "(E(3))*z^(-5/3)");
    }
}
