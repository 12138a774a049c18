//! Ordered abelian groups `(Q^n, ≤_lex)` extended by an absorbing
//! `Infinity`, used as value groups of valuations and tropical extensions.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{structural, Error, Result};
use crate::scalar::Scalar;

/// An element of `Q^n ∪ {∞}` with the lexicographic order.
///
/// The derived `Ord` agrees with the lexicographic order whenever both
/// operands have the same rank, and puts `Infinity` above everything. Use
/// [`OagValue::try_cmp`] where mixing ranks must be rejected.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OagValue<S> {
    Finite(Vec<S>),
    Infinity,
}

/// The value group `Q^rank` itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ValueGroup {
    pub rank: usize,
}

impl ValueGroup {
    pub fn new(rank: usize) -> Self {
        ValueGroup { rank }
    }

    pub fn zero<S: Scalar>(&self) -> OagValue<S> {
        OagValue::zero(self.rank)
    }

    /// Builds a finite value, rejecting coordinate vectors of the wrong length.
    pub fn value<S: Scalar>(&self, coords: Vec<S>) -> Result<OagValue<S>> {
        if coords.len() != self.rank {
            return structural(format!("value of rank {} in a group of rank {}", coords.len(), self.rank));
        }
        Ok(OagValue::Finite(coords))
    }

    pub fn contains<S: Scalar>(&self, v: &OagValue<S>) -> bool {
        match v {
            OagValue::Finite(c) => c.len() == self.rank,
            OagValue::Infinity => true,
        }
    }
}

impl<S: Scalar> OagValue<S> {
    pub fn zero(rank: usize) -> Self {
        OagValue::Finite(vec![S::zero(); rank])
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        OagValue::Finite(coords.iter().map(|&c| S::from_int(c)).collect())
    }

    pub fn scalar(q: S) -> Self {
        OagValue::Finite(vec![q])
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, OagValue::Infinity)
    }

    pub fn coords(&self) -> Option<&[S]> {
        match self {
            OagValue::Finite(c) => Some(c),
            OagValue::Infinity => None,
        }
    }

    /// Rank of a finite value; `None` for infinity.
    pub fn rank(&self) -> Option<usize> {
        self.coords().map(|c| c.len())
    }

    fn same_rank(&self, other: &Self) -> Result<()> {
        match (self.rank(), other.rank()) {
            (Some(a), Some(b)) if a != b => structural(format!("rank mismatch: {a} vs {b}")),
            _ => Ok(()),
        }
    }

    /// Componentwise sum; infinity absorbs.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_rank(other)?;
        Ok(match (self, other) {
            (OagValue::Finite(a), OagValue::Finite(b)) => {
                OagValue::Finite(a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect())
            }
            _ => OagValue::Infinity,
        })
    }

    pub fn neg(&self) -> Result<Self> {
        match self {
            OagValue::Finite(a) => Ok(OagValue::Finite(a.iter().map(|x| -x.clone()).collect())),
            OagValue::Infinity => structural("infinity has no additive inverse"),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg()?)
    }

    /// `k · self` for an integer `k`.
    pub fn times(&self, k: i64) -> Self {
        match self {
            OagValue::Finite(a) => {
                let k = S::from_int(k);
                OagValue::Finite(a.iter().map(|x| x.clone() * k.clone()).collect())
            }
            OagValue::Infinity => OagValue::Infinity,
        }
    }

    /// Lexicographic comparison; infinity is the maximum.
    pub fn try_cmp(&self, other: &Self) -> Result<Ordering> {
        self.same_rank(other)?;
        Ok(self.cmp(other))
    }

    /// Splits off the most significant coordinate: `(γ_1, (γ_2, …, γ_n))`.
    ///
    /// Infinity maps to `(None, Infinity)`.
    pub fn project_head(&self) -> Result<(Option<S>, OagValue<S>)> {
        match self {
            OagValue::Infinity => Ok((None, OagValue::Infinity)),
            OagValue::Finite(c) if c.is_empty() => structural("rank-0 value has no head"),
            OagValue::Finite(c) => Ok((Some(c[0].clone()), OagValue::Finite(c[1..].to_vec()))),
        }
    }

    /// Inverse of [`project_head`](Self::project_head).
    pub fn with_head(head: S, tail: &OagValue<S>) -> Self {
        match tail {
            OagValue::Finite(t) => {
                let mut c = Vec::with_capacity(t.len() + 1);
                c.push(head);
                c.extend(t.iter().cloned());
                OagValue::Finite(c)
            }
            OagValue::Infinity => OagValue::Infinity,
        }
    }

    /// Parses `(q1,q2,...)`, a bare rational (rank one), or `inf`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t == "inf" || t == "∞" {
            return Ok(OagValue::Infinity);
        }
        let inner = match t.strip_prefix('(') {
            Some(rest) => {
                rest.strip_suffix(')').ok_or_else(|| Error::Parse { pos: t.len(), msg: "missing ')'".into() })?
            }
            None => t,
        };
        if inner.trim().is_empty() {
            return Ok(OagValue::Finite(Vec::new()));
        }
        inner.split(',').map(|c| parse_rational::<S>(c.trim())).collect::<Result<Vec<_>>>().map(OagValue::Finite)
    }
}

pub(crate) fn parse_rational<S: Scalar>(text: &str) -> Result<S> {
    let t = text.trim();
    let bad = || Error::Parse { pos: 0, msg: format!("invalid rational '{text}'") };
    if t.is_empty() || t.chars().any(|c| !(c.is_ascii_digit() || c == '/' || c == '-' || c == '+')) {
        return Err(bad());
    }
    let t = t.strip_prefix('+').unwrap_or(t);
    if let Some((n, d)) = t.split_once('/') {
        if d.trim().trim_start_matches('+').chars().all(|c| c == '0') {
            return Err(bad());
        }
        let n: S = n.parse().map_err(|_| bad())?;
        let d: S = d.parse().map_err(|_| bad())?;
        Ok(n / d)
    } else {
        t.parse().map_err(|_| bad())
    }
}

impl<S: Scalar> fmt::Display for OagValue<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OagValue::Infinity => write!(f, "inf"),
            OagValue::Finite(c) => {
                write!(f, "(")?;
                for (i, x) in c.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type V = OagValue<BigRational>;

    #[test]
    fn addition() {
        assert_eq!(V::from_ints(&[1, 2]).add(&V::from_ints(&[3, 4])).unwrap(), V::from_ints(&[4, 6]));
        assert_eq!(V::from_ints(&[0, 0]).add(&V::from_ints(&[5, -1])).unwrap(), V::from_ints(&[5, -1]));
        assert_eq!(V::Infinity.add(&V::from_ints(&[1, 1])).unwrap(), V::Infinity);
    }

    #[test]
    fn rank_mismatch_is_structural() {
        let err = V::from_ints(&[1]).add(&V::from_ints(&[1, 2])).unwrap_err();
        assert!(matches!(err, Error::Structural(_)));
        assert!(V::from_ints(&[1]).try_cmp(&V::from_ints(&[1, 2])).is_err());
    }

    #[test]
    fn lexicographic_order() {
        assert_eq!(V::from_ints(&[1, 5]).try_cmp(&V::from_ints(&[2, 0])).unwrap(), Ordering::Less);
        assert_eq!(V::from_ints(&[1, 1]).try_cmp(&V::from_ints(&[1, 2])).unwrap(), Ordering::Less);
        assert_eq!(V::from_ints(&[3]).try_cmp(&V::Infinity).unwrap(), Ordering::Less);
    }

    #[test]
    fn head_and_tail() {
        let (h, t) = V::from_ints(&[1, 1]).project_head().unwrap();
        assert_eq!(h, Some(BigRational::from_int(1)));
        assert_eq!(t, V::from_ints(&[1]));
        let (h, t) = V::from_ints(&[0]).project_head().unwrap();
        assert_eq!(h, Some(BigRational::from_int(0)));
        assert_eq!(t, V::from_ints(&[]));
        let (h, t) = V::from_ints(&[-2, 3, 5]).project_head().unwrap();
        assert_eq!(h, Some(BigRational::from_int(-2)));
        assert_eq!(t, V::from_ints(&[3, 5]));
        assert_eq!(V::Infinity.project_head().unwrap(), (None, V::Infinity));
    }

    #[test]
    fn parse_and_print() {
        let v = V::parse("(1/2, -3)").unwrap();
        assert_eq!(v, V::Finite(vec![BigRational::from_ratio(1, 2), BigRational::from_int(-3)]));
        assert_eq!(v.to_string(), "(1/2,-3)");
        assert_eq!(V::parse("inf").unwrap(), V::Infinity);
        assert_eq!(V::parse("7").unwrap(), V::from_ints(&[7]));
        assert!(V::parse("(1/0)").is_err());
        assert!(V::parse("(a)").is_err());
    }

    #[test]
    fn group_validates_rank() {
        let g = ValueGroup::new(2);
        assert!(g.value(vec![BigRational::from_int(1)]).is_err());
        assert_eq!(g.zero::<BigRational>(), V::from_ints(&[0, 0]));
    }
}
