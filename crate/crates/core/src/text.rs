//! Textual and JSON forms of elements and polynomials.
//!
//! Grammar: terms `coef`, `coef*x^k`, `coef x^k`, `x^k`, separated by `+`
//! or `-`. A `-` (leading or separating) multiplies the term by `ε`.
//! Coefficient literals are unsigned except inside parentheses and after
//! `^`:
//!
//! * rationals `3`, `3/2`; phases `@1/3`; table entries `#2`;
//! * tuples `(1,-1/2)` for OAG values and levels, or a signed scalar in a
//!   rank-one or field setting;
//! * extension elements `u^γ` with `u` a base literal and `γ` a level.
//!   Over Krasner extensions a bare rational or tuple is a level; over
//!   other extensions a bare literal is a base element at level zero.

use std::sync::Arc;

use serde_json::{json, Value};

use crate::algebra::phase::normalize_angle;
use crate::algebra::{Elem, Idyll};
use crate::error::{Error, Result};
use crate::oag::{parse_rational, OagValue};
use crate::poly::Polynomial;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
enum Lit<S> {
    Num(S),
    Tuple(Vec<S>),
    Phase(S),
    Idx(u32),
}

struct Parser<'a> {
    src: &'a str,
    chars: Vec<(usize, char)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, chars: src.char_indices().collect(), pos: 0 }
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or(self.src.len(), |(o, _)| *o)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.offset(), msg: msg.into() })
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|(_, c)| *c)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        self.pos += 1;
        c
    }

    fn ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn at_end(&mut self) -> bool {
        self.ws();
        self.pos >= self.chars.len()
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &'a str {
        let start = self.offset();
        while self.peek().is_some_and(&f) {
            self.pos += 1;
        }
        &self.src[start..self.offset()]
    }

    fn uint(&mut self) -> Result<usize> {
        self.ws();
        let t = self.take_while(|c| c.is_ascii_digit());
        if t.is_empty() {
            return self.err("expected a non-negative integer");
        }
        t.parse().or_else(|_| self.err("integer out of range"))
    }

    fn rational<S: Scalar>(&mut self, signed: bool) -> Result<S> {
        self.ws();
        let start = self.offset();
        let t = self.take_while(|c| c.is_ascii_digit() || c == '/' || (signed && (c == '-' || c == '+')));
        if t.is_empty() {
            return self.err("expected a rational number");
        }
        parse_rational(t).map_err(|_| Error::Parse { pos: start, msg: format!("invalid rational '{t}'") })
    }

    fn tuple<S: Scalar>(&mut self) -> Result<Vec<S>> {
        let mut out = Vec::new();
        if self.eat(')') {
            return Ok(out);
        }
        loop {
            out.push(self.rational(true)?);
            if self.eat(')') {
                return Ok(out);
            }
            if !self.eat(',') {
                return self.err("expected ',' or ')'");
            }
        }
    }

    fn literal<S: Scalar>(&mut self) -> Result<Lit<S>> {
        self.ws();
        match self.peek() {
            Some('@') => {
                self.bump();
                Ok(Lit::Phase(self.rational(true)?))
            }
            Some('#') => {
                self.bump();
                Ok(Lit::Idx(self.uint()? as u32))
            }
            Some('(') => {
                self.bump();
                Ok(Lit::Tuple(self.tuple()?))
            }
            Some(c) if c.is_ascii_digit() => Ok(Lit::Num(self.rational(false)?)),
            _ => self.err("expected a coefficient"),
        }
    }

    fn level<S: Scalar>(&mut self) -> Result<OagValue<S>> {
        if self.eat('(') {
            Ok(OagValue::Finite(self.tuple()?))
        } else {
            Ok(OagValue::scalar(self.rational(true)?))
        }
    }

    /// An unsigned element literal, with an optional `^level`.
    fn element<S: Scalar>(&mut self, idyll: &Idyll<S>) -> Result<Elem<S>> {
        let start = self.offset();
        let lit = self.literal()?;
        let level = if self.eat('^') { Some(self.level()?) } else { None };
        interpret(idyll, lit, level).map_err(|e| match e {
            Error::Parse { msg, .. } => Error::Parse { pos: start, msg },
            other => Error::Parse { pos: start, msg: other.to_string() },
        })
    }

    fn monomial(&mut self) -> Result<usize> {
        if !self.eat('x') {
            return self.err("expected 'x'");
        }
        if self.eat('^') {
            self.uint()
        } else {
            Ok(1)
        }
    }

    fn term<S: Scalar>(&mut self, idyll: &Idyll<S>) -> Result<(usize, Elem<S>)> {
        self.ws();
        if self.peek() == Some('x') {
            return Ok((self.monomial()?, idyll.one()));
        }
        let c = self.element(idyll)?;
        self.ws();
        if self.eat('*') || self.peek() == Some('x') {
            Ok((self.monomial()?, c))
        } else {
            Ok((0, c))
        }
    }
}

fn bad<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { pos: 0, msg: msg.into() })
}

fn small_int<S: Scalar>(q: &S) -> Result<i64> {
    if !q.is_integral() {
        return bad(format!("{q} is not an integer"));
    }
    q.to_string().parse().or_else(|_| bad(format!("{q} is out of range")))
}

fn interpret<S: Scalar>(idyll: &Idyll<S>, lit: Lit<S>, level: Option<OagValue<S>>) -> Result<Elem<S>> {
    let single = |lit: &Lit<S>| -> Option<S> {
        match lit {
            Lit::Num(q) => Some(q.clone()),
            Lit::Tuple(v) if v.len() == 1 => Some(v[0].clone()),
            _ => None,
        }
    };
    if let Idyll::Extension(e) = idyll {
        let (unit, level) = match level {
            Some(l) => (interpret(&e.base, lit, None)?, l),
            None if *e.base == Idyll::Krasner => {
                let v = match lit {
                    Lit::Num(q) => OagValue::scalar(q),
                    Lit::Tuple(v) => OagValue::Finite(v),
                    _ => return bad("expected a level"),
                };
                (Elem::One, v)
            }
            None => (interpret(&e.base, lit, None)?, OagValue::zero(e.rank)),
        };
        if unit.is_zero() {
            return Ok(Elem::Zero);
        }
        if level.rank() != Some(e.rank) {
            return bad(format!("level {level} does not have rank {}", e.rank));
        }
        return Ok(Elem::ext(unit, level));
    }
    if level.is_some() {
        return bad(format!("levels are not allowed in {}", idyll.name()));
    }
    let q = single(&lit);
    let is = |v: i64| q.as_ref().is_some_and(|q| *q == S::from_int(v));
    let zero = q.as_ref().is_some_and(|q| q.is_zero());
    if zero && !matches!(idyll, Idyll::Oag(_)) {
        return Ok(Elem::Zero);
    }
    Ok(match idyll {
        Idyll::Krasner if is(1) => Elem::One,
        Idyll::Sign | Idyll::RegularPartialField if is(1) => Elem::Sign(1),
        Idyll::Sign | Idyll::RegularPartialField if is(-1) => Elem::Sign(-1),
        Idyll::Phase => match lit {
            Lit::Phase(t) => Elem::Phase(normalize_angle(&t)),
            _ if is(1) => Elem::Phase(S::zero()),
            _ => return bad("expected a phase '@θ'"),
        },
        Idyll::Rationals if q.is_some() => Elem::Rat(q.unwrap()),
        Idyll::PrimeField(p) if q.is_some() => {
            let r = small_int(q.as_ref().unwrap())?.rem_euclid(*p as i64) as u64;
            if r == 0 {
                Elem::Zero
            } else {
                Elem::Mod(r)
            }
        }
        Idyll::Quotient(h) if q.is_some() => {
            let r = small_int(q.as_ref().unwrap())?.rem_euclid(h.prime() as i64) as u64;
            if r == 0 {
                Elem::Zero
            } else {
                Elem::Mod(h.canonical(r))
            }
        }
        Idyll::Oag(n) => {
            let v = match lit {
                Lit::Num(q) => OagValue::scalar(q),
                Lit::Tuple(v) => OagValue::Finite(v),
                _ => return bad("expected an OAG value"),
            };
            if v.rank() != Some(*n) {
                return bad(format!("value {v} does not have rank {n}"));
            }
            Elem::Val(v)
        }
        Idyll::Custom(t) => match lit {
            Lit::Idx(i) if (i as usize) < t.size() => {
                if i == 0 {
                    Elem::Zero
                } else {
                    Elem::Idx(i)
                }
            }
            _ => return bad(format!("expected '#i' with i < {}", t.size())),
        },
        _ => return bad(format!("literal is not an element of {}", idyll.name())),
    })
}

/// Parses an element literal, optionally preceded by `-` (which multiplies
/// by `ε`).
pub fn parse_elem<S: Scalar>(text: &str, idyll: &Idyll<S>) -> Result<Elem<S>> {
    let mut p = Parser::new(text);
    let neg = if p.eat('-') {
        true
    } else {
        p.eat('+');
        false
    };
    let x = p.element(idyll)?;
    if !p.at_end() {
        return p.err("trailing input");
    }
    if neg {
        idyll.neg(&x)
    } else {
        Ok(x)
    }
}

pub fn parse_poly<S: Scalar>(text: &str, idyll: Arc<Idyll<S>>) -> Result<Polynomial<S>> {
    let mut p = Parser::new(text);
    let mut terms = Vec::new();
    let mut neg = if p.eat('-') {
        true
    } else {
        p.eat('+');
        false
    };
    loop {
        let (k, c) = p.term(&idyll)?;
        let c = if neg { idyll.neg(&c)? } else { c };
        if terms.iter().any(|(j, _)| *j == k) {
            return Err(Error::Purity(k));
        }
        terms.push((k, c));
        if p.at_end() {
            break;
        }
        neg = if p.eat('-') {
            true
        } else if p.eat('+') {
            false
        } else {
            return p.err("expected '+' or '-'");
        };
    }
    Polynomial::new(idyll, terms)
}

fn format_scalar<S: Scalar>(q: &S) -> String {
    q.to_string()
}

fn format_level<S: Scalar>(v: &OagValue<S>) -> String {
    match v.coords() {
        Some([x]) => format_scalar(x),
        _ => v.to_string(),
    }
}

/// Prints an element so that [`parse_elem`] reads it back.
pub fn format_elem<S: Scalar>(x: &Elem<S>, idyll: &Idyll<S>) -> String {
    match (idyll, x) {
        (_, Elem::Zero) => "0".into(),
        (Idyll::Extension(e), Elem::Ext { unit, level }) => {
            if *e.base == Idyll::Krasner {
                match level.coords() {
                    Some([q]) if !q.is_negative() => format_scalar(q),
                    _ => level.to_string(),
                }
            } else {
                format!("{}^{}", format_elem(unit, &e.base), format_level(level))
            }
        }
        (Idyll::Oag(_), Elem::Val(v)) => match v.coords() {
            Some([q]) if !q.is_negative() => format_scalar(q),
            _ => v.to_string(),
        },
        (Idyll::Phase, Elem::Phase(t)) => format!("@{}", format_scalar(t)),
        (Idyll::Rationals, Elem::Rat(q)) => format_scalar(q),
        _ => x.to_string(),
    }
}

/// Prints a polynomial in the input grammar, ascending degree.
pub fn format_poly<S: Scalar>(f: &Polynomial<S>) -> String {
    if f.is_zero() {
        return "0".into();
    }
    let idyll = f.idyll();
    let one = idyll.one();
    let one_str = format_elem(&one, idyll);
    let mut out = String::new();
    for (n, (k, c)) in f.terms().iter().enumerate() {
        let mono = match k {
            0 => String::new(),
            1 => "x".into(),
            _ => format!("x^{k}"),
        };
        let cs = format_elem(c, idyll);
        let term = if *k == 0 {
            cs
        } else if one_str == "1" && *c == one {
            mono
        } else if one_str == "1" && cs == "-1" && idyll.neg(&one).is_ok_and(|m| m == *c) {
            format!("-{mono}")
        } else {
            format!("{cs}*{mono}")
        };
        if n == 0 {
            out.push_str(&term);
        } else if let Some(rest) = term.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&term);
        }
    }
    out
}

/// `{"idyll": ..., "terms": [{"deg": k, "coef": "..."}]}`.
pub fn poly_to_json<S: Scalar>(f: &Polynomial<S>) -> Value {
    let terms: Vec<Value> =
        f.terms().iter().map(|(k, c)| json!({"deg": k, "coef": format_elem(c, f.idyll())})).collect();
    json!({"idyll": f.idyll().name(), "terms": terms})
}

pub fn poly_from_json<S: Scalar>(v: &Value) -> Result<Polynomial<S>> {
    let bad = |m: &str| Error::Parse { pos: 0, msg: m.to_string() };
    let name = v.get("idyll").and_then(Value::as_str).ok_or_else(|| bad("missing 'idyll'"))?;
    let idyll = Arc::new(Idyll::from_name(name)?);
    let terms = v.get("terms").and_then(Value::as_array).ok_or_else(|| bad("missing 'terms'"))?;
    let mut out = Vec::new();
    for t in terms {
        let k = t.get("deg").and_then(Value::as_u64).ok_or_else(|| bad("term without 'deg'"))?;
        let c = t.get("coef").and_then(Value::as_str).ok_or_else(|| bad("term without 'coef'"))?;
        out.push((k as usize, parse_elem(c, &idyll)?));
    }
    Polynomial::new(idyll, out)
}

/// Rational literal helper for callers outside the parser.
pub fn parse_scalar<S: Scalar>(text: &str) -> Result<S> {
    parse_rational(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn idyll(name: &str) -> Arc<Idyll<Q>> {
        Arc::new(Idyll::from_name(name).unwrap())
    }

    #[test]
    fn sign_polynomial() {
        let f = parse_poly("1 - x + x^2", idyll("sign")).unwrap();
        assert_eq!(f.dense(), vec![Elem::Sign(1), Elem::Sign(-1), Elem::Sign(1)]);
        assert_eq!(f.to_string(), "1 - x + x^2");
    }

    #[test]
    fn tropical_polynomial() {
        let f = parse_poly("2 + 1*x + 0*x^2 + 0*x^3", idyll("trop")).unwrap();
        assert_eq!(f.coeff(0), Elem::ext(Elem::One, OagValue::from_ints(&[2])));
        assert_eq!(f.to_string(), "2 + 1*x + 0*x^2 + 0*x^3");
        let g = parse_poly("2+1x+0x^2", idyll("trop")).unwrap();
        assert_eq!(g.degree(), Some(2));
    }

    #[test]
    fn duplicate_degree_is_impure() {
        assert_eq!(parse_poly("x + x", idyll("sign")).unwrap_err(), Error::Purity(1));
    }

    #[test]
    fn extension_literals() {
        let tr = idyll("trop-real");
        let f = parse_poly("1 - x + 1^1*x^2", tr.clone()).unwrap();
        assert_eq!(f.coeff(1), Elem::ext(Elem::Sign(-1), OagValue::zero(1)));
        assert_eq!(f.coeff(2), Elem::ext(Elem::Sign(1), OagValue::from_ints(&[1])));
        let x = parse_elem("-1^3/2", &tr).unwrap();
        assert_eq!(x, Elem::ext(Elem::Sign(-1), OagValue::scalar(Q::from_ratio(3, 2))));
        assert_eq!(format_elem(&x, &tr), "-1^3/2");
        let y = parse_elem("1^-1", &tr).unwrap();
        assert_eq!(y, Elem::ext(Elem::Sign(1), OagValue::from_ints(&[-1])));
        let t2 = idyll("trop:rank-2");
        let z = parse_elem("(3,3)", &t2).unwrap();
        assert_eq!(format_elem(&z, &t2), "(3,3)");
    }

    #[test]
    fn round_trips() {
        for (name, text) in [
            ("field:Q", "72 - 6*x - 7*x^2 + x^3"),
            ("field:Q", "-1/2 + 3/4*x^5"),
            ("trop", "(-1) + 3/2*x"),
            ("trop-real", "-1^(-1) + 1^2*x^3"),
            ("oag:rank-2", "(0,1) + (-1,2)*x"),
            ("phase", "@0 + @1/3*x + @2/3*x^2"),
            ("field:GF(5)", "3 + 4*x"),
            ("krasner", "1 + x^3"),
        ] {
            let b = idyll(name);
            let f = parse_poly(text, b.clone()).unwrap();
            let g = parse_poly(&f.to_string(), b.clone()).unwrap();
            assert_eq!(f, g, "{name}: {text} -> {f}");
            let h = poly_from_json(&poly_to_json(&f)).unwrap();
            assert_eq!(f, h);
        }
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_poly("1 + ? x", idyll("sign")).unwrap_err();
        assert!(matches!(e, Error::Parse { pos: 4, .. }), "{e:?}");
        assert!(parse_poly("2", idyll("sign")).is_err());
        assert!(parse_poly("1^2", idyll("sign")).is_err());
    }
}
