//! Idylls: a pointed monoid together with a null ideal of formal sums.
//!
//! [`Idyll`] is a closed catalog of the idylls this crate computes with
//! (Krasner, signs, phases, the regular partial field, `Q`, `GF(p)`,
//! quotient hyperfields, OAG idylls, tropical extensions) plus an escape
//! hatch for user tables. Elements of every catalog member share the
//! tagged union [`Elem`]; passing an element of one idyll to another is a
//! structural error.

pub mod axioms;
pub mod phase;
pub mod quotient;
pub mod table;
pub mod valuation;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{structural, unsupported, Error, Result};
use crate::extension::Extension;
use crate::oag::OagValue;
use crate::scalar::Scalar;

pub use quotient::QuotientHyperfield;
pub use table::FiniteIdyll;

/// An element of the underlying monoid of some idyll.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Elem<S> {
    Zero,
    /// The unit of the Krasner idyll.
    One,
    /// `±1` in the sign idyll or the regular partial field.
    Sign(i8),
    /// `e^{2πiθ}` with `θ ∈ [0, 1)`.
    Phase(S),
    /// A nonzero rational.
    Rat(S),
    /// A nonzero residue mod `p`, or the canonical representative of a class
    /// in a quotient hyperfield.
    Mod(u64),
    /// A finite element of an OAG idyll.
    Val(OagValue<S>),
    /// `unit · t^level` in a tropical extension.
    Ext {
        unit: Box<Elem<S>>,
        level: OagValue<S>,
    },
    /// Index into a user table.
    Idx(u32),
    /// Element of a fibre product.
    Pair(Box<Elem<S>>, Box<Elem<S>>),
}

impl<S> Elem<S> {
    pub fn is_zero(&self) -> bool {
        matches!(self, Elem::Zero)
    }

    pub fn ext(unit: Elem<S>, level: OagValue<S>) -> Self {
        Elem::Ext { unit: Box::new(unit), level }
    }
}

impl<S: Scalar> fmt::Display for Elem<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::Zero => write!(f, "0"),
            Elem::One => write!(f, "1"),
            Elem::Sign(s) => write!(f, "{s}"),
            Elem::Phase(t) => write!(f, "@{t}"),
            Elem::Rat(q) => write!(f, "{q}"),
            Elem::Mod(r) => write!(f, "{r}"),
            Elem::Val(v) => match v.coords() {
                Some([x]) if !x.is_negative() => write!(f, "{x}"),
                _ => write!(f, "{v}"),
            },
            Elem::Ext { unit, level } => match level.coords() {
                Some([x]) if !x.is_negative() => write!(f, "{unit}^{x}"),
                _ => write!(f, "{unit}^{level}"),
            },
            Elem::Idx(i) => write!(f, "#{i}"),
            Elem::Pair(a, b) => write!(f, "<{a},{b}>"),
        }
    }
}

/// A finite multiset of monoid elements, i.e. an element of `N[B•]`.
/// Zeros are dropped on construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FormalSum<S> {
    terms: Vec<Elem<S>>,
}

impl<S: Scalar> FormalSum<S> {
    pub fn new(terms: impl IntoIterator<Item = Elem<S>>) -> Self {
        let mut terms: Vec<Elem<S>> = terms.into_iter().filter(|t| !t.is_zero()).collect();
        terms.sort();
        FormalSum { terms }
    }

    pub fn empty() -> Self {
        FormalSum { terms: Vec::new() }
    }

    pub fn terms(&self) -> &[Elem<S>] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn plus(&self, other: &FormalSum<S>) -> FormalSum<S> {
        FormalSum::new(self.terms.iter().chain(other.terms.iter()).cloned())
    }

    pub fn with(&self, x: Elem<S>) -> FormalSum<S> {
        FormalSum::new(self.terms.iter().cloned().chain(std::iter::once(x)))
    }
}

impl<S: Scalar> FromIterator<Elem<S>> for FormalSum<S> {
    fn from_iter<I: IntoIterator<Item = Elem<S>>>(iter: I) -> Self {
        FormalSum::new(iter)
    }
}

impl<S: Scalar> fmt::Display for FormalSum<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "(empty sum)");
        }
        let parts: Vec<String> = self.terms.iter().map(|t| t.to_string()).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// The sum set `a ⊞ b = {c : a + b − c ∈ N}`.
///
/// In tropical extensions the sum of two cancelling elements of valuation
/// `γ` contains every element of valuation `> γ`; that infinite part is
/// kept as a predicate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SumSet<S> {
    Finite(BTreeSet<Elem<S>>),
    /// `core ∪ {x : v(x) > above}` (the zero element included).
    Layered {
        core: BTreeSet<Elem<S>>,
        above: OagValue<S>,
    },
}

impl<S: Scalar> SumSet<S> {
    pub fn core(&self) -> &BTreeSet<Elem<S>> {
        match self {
            SumSet::Finite(s) => s,
            SumSet::Layered { core, .. } => core,
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            SumSet::Finite(s) => s.is_empty(),
            SumSet::Layered { .. } => false,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, SumSet::Finite(_))
    }

    /// First element in the canonical element order.
    pub fn first(&self) -> Option<Elem<S>> {
        match self {
            SumSet::Finite(s) => s.iter().next().cloned(),
            SumSet::Layered { core, .. } => Some(core.iter().next().cloned().unwrap_or(Elem::Zero)),
        }
    }

    /// Membership; `valuation` is the valuation of `x` in the ambient idyll
    /// (only consulted for layered sets).
    pub fn contains_with(&self, x: &Elem<S>, valuation: &OagValue<S>) -> bool {
        match self {
            SumSet::Finite(s) => s.contains(x),
            SumSet::Layered { core, above } => core.contains(x) || valuation > above,
        }
    }
}

/// The catalog of idylls.
#[derive(Clone)]
pub enum Idyll<S> {
    /// `K = {0, 1}` with null ideal `N[K•] \ {1}`.
    Krasner,
    /// `S = R / R_{>0}`.
    Sign,
    /// `P = C / R_{>0}`.
    Phase,
    /// The regular partial field `F_1^± = {0, ±1} ⊂ Z`.
    RegularPartialField,
    /// The field `Q`.
    Rationals,
    /// The field `GF(p)`.
    PrimeField(u64),
    Quotient(Arc<QuotientHyperfield>),
    /// `(Q^rank, ≤_lex)^idyll`.
    Oag(usize),
    Extension(Extension<S>),
    /// Fibre product of two idylls over `K`: elements are pairs of nonzero
    /// elements, and a sum is null iff both projections are.
    FiberProduct(Arc<Idyll<S>>, Arc<Idyll<S>>),
    Custom(Arc<FiniteIdyll>),
}

impl<S: Scalar> fmt::Debug for Idyll<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Idyll({})", self.name())
    }
}

impl<S: Scalar> PartialEq for Idyll<S> {
    fn eq(&self, other: &Self) -> bool {
        use Idyll::*;
        match (self, other) {
            (Krasner, Krasner) | (Sign, Sign) | (Phase, Phase) => true,
            (RegularPartialField, RegularPartialField) | (Rationals, Rationals) => true,
            (PrimeField(p), PrimeField(q)) => p == q,
            (Quotient(a), Quotient(b)) => a == b,
            (Oag(a), Oag(b)) => a == b,
            (Extension(a), Extension(b)) => a == b,
            (FiberProduct(a1, a2), FiberProduct(b1, b2)) => a1 == b1 && a2 == b2,
            (Custom(a), Custom(b)) => Arc::ptr_eq(a, b),
            _ => false,
        }
    }
}

impl<S: Scalar> Idyll<S> {
    pub fn quotient(p: u64, subgroup: &[u64]) -> Result<Self> {
        Ok(Idyll::Quotient(Arc::new(QuotientHyperfield::new(p, subgroup)?)))
    }

    pub fn prime_field(p: u64) -> Result<Self> {
        if !valuation::is_prime(p) {
            return structural(format!("GF({p}): {p} is not prime"));
        }
        Ok(Idyll::PrimeField(p))
    }

    /// Split extension `base[Q^rank]`.
    pub fn split_extension(base: Idyll<S>, rank: usize) -> Self {
        Idyll::Extension(Extension::split(Arc::new(base), rank))
    }

    /// `T = K[Q]`.
    pub fn tropical() -> Self {
        Self::split_extension(Idyll::Krasner, 1)
    }

    /// `T_n = K[Q^n]`.
    pub fn tropical_rank(rank: usize) -> Self {
        Self::split_extension(Idyll::Krasner, rank)
    }

    /// `TR = S[Q]`.
    pub fn tropical_real() -> Self {
        Self::split_extension(Idyll::Sign, 1)
    }

    pub fn tropical_real_rank(rank: usize) -> Self {
        Self::split_extension(Idyll::Sign, rank)
    }

    /// Name as accepted by the command line.
    pub fn name(&self) -> String {
        match self {
            Idyll::Krasner => "krasner".into(),
            Idyll::Sign => "sign".into(),
            Idyll::Phase => "phase".into(),
            Idyll::RegularPartialField => "f1pm".into(),
            Idyll::Rationals => "field:Q".into(),
            Idyll::PrimeField(p) => format!("field:GF({p})"),
            Idyll::Quotient(q) => q.name(),
            Idyll::Oag(n) => format!("oag:rank-{n}"),
            Idyll::Extension(e) => e.name(),
            Idyll::FiberProduct(a, b) => format!("fiber:{}x{}", a.name(), b.name()),
            Idyll::Custom(t) => format!("custom:{}", t.name),
        }
    }

    pub fn as_extension(&self) -> Option<&Extension<S>> {
        match self {
            Idyll::Extension(e) => Some(e),
            _ => None,
        }
    }

    pub fn contains(&self, x: &Elem<S>) -> bool {
        match (self, x) {
            (_, Elem::Zero) => true,
            (Idyll::Krasner, Elem::One) => true,
            (Idyll::Sign | Idyll::RegularPartialField, Elem::Sign(s)) => *s == 1 || *s == -1,
            (Idyll::Phase, Elem::Phase(t)) => !t.is_negative() && *t < S::one(),
            (Idyll::Rationals, Elem::Rat(q)) => !q.is_zero(),
            (Idyll::PrimeField(p), Elem::Mod(r)) => *r > 0 && r < p,
            (Idyll::Quotient(q), Elem::Mod(r)) => *r > 0 && q.is_canonical(*r),
            (Idyll::Oag(n), Elem::Val(v)) => v.rank() == Some(*n),
            (Idyll::Extension(e), Elem::Ext { unit, level }) => {
                !unit.is_zero() && level.rank() == Some(e.rank) && e.base.contains(unit)
            }
            (Idyll::FiberProduct(a, b), Elem::Pair(x, y)) => {
                !x.is_zero() && !y.is_zero() && a.contains(x) && b.contains(y)
            }
            (Idyll::Custom(t), Elem::Idx(i)) => (*i as usize) < t.size() && *i != 0,
            _ => false,
        }
    }

    pub fn check(&self, x: &Elem<S>) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            structural(format!("{x} is not an element of {}", self.name()))
        }
    }

    pub fn check_sum(&self, s: &FormalSum<S>) -> Result<()> {
        s.terms().iter().try_for_each(|x| self.check(x))
    }

    pub fn zero(&self) -> Elem<S> {
        Elem::Zero
    }

    pub fn one(&self) -> Elem<S> {
        match self {
            Idyll::Krasner => Elem::One,
            Idyll::Sign | Idyll::RegularPartialField => Elem::Sign(1),
            Idyll::Phase => Elem::Phase(S::zero()),
            Idyll::Rationals => Elem::Rat(S::one()),
            Idyll::PrimeField(_) | Idyll::Quotient(_) => Elem::Mod(1),
            Idyll::Oag(n) => Elem::Val(OagValue::zero(*n)),
            Idyll::Extension(e) => e.one(),
            Idyll::FiberProduct(a, b) => Elem::Pair(Box::new(a.one()), Box::new(b.one())),
            Idyll::Custom(_) => Elem::Idx(1),
        }
    }

    /// The distinguished `ε` with `ε² = 1` and `1 + ε` null.
    pub fn epsilon(&self) -> Result<Elem<S>> {
        Ok(match self {
            Idyll::Krasner => Elem::One,
            Idyll::Sign | Idyll::RegularPartialField => Elem::Sign(-1),
            Idyll::Phase => Elem::Phase(S::from_ratio(1, 2)),
            Idyll::Rationals => Elem::Rat(-S::one()),
            Idyll::PrimeField(p) => Elem::Mod(p - 1),
            Idyll::Quotient(q) => Elem::Mod(q.canonical(q.prime() - 1)),
            Idyll::Oag(n) => Elem::Val(OagValue::zero(*n)),
            Idyll::Extension(e) => Elem::ext(e.base.epsilon()?, OagValue::zero(e.rank)),
            Idyll::FiberProduct(a, b) => Elem::Pair(Box::new(a.epsilon()?), Box::new(b.epsilon()?)),
            Idyll::Custom(t) => match t.epsilon {
                Some(e) => Elem::Idx(e),
                None => return structural(format!("{} has no epsilon", self.name())),
            },
        })
    }

    /// `ε · x`, the additive inverse.
    pub fn neg(&self, x: &Elem<S>) -> Result<Elem<S>> {
        self.mul(&self.epsilon()?, x)
    }

    pub fn mul(&self, a: &Elem<S>, b: &Elem<S>) -> Result<Elem<S>> {
        self.check(a)?;
        self.check(b)?;
        self.mul_unchecked(a, b)
    }

    fn mul_unchecked(&self, a: &Elem<S>, b: &Elem<S>) -> Result<Elem<S>> {
        if a.is_zero() || b.is_zero() {
            return Ok(Elem::Zero);
        }
        Ok(match (self, a, b) {
            (Idyll::Krasner, _, _) => Elem::One,
            (Idyll::Sign | Idyll::RegularPartialField, Elem::Sign(x), Elem::Sign(y)) => Elem::Sign(x * y),
            (Idyll::Phase, Elem::Phase(x), Elem::Phase(y)) => Elem::Phase((x.clone() + y.clone()).fract_part()),
            (Idyll::Rationals, Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x.clone() * y.clone()),
            (Idyll::PrimeField(p), Elem::Mod(x), Elem::Mod(y)) => Elem::Mod(x * y % p),
            (Idyll::Quotient(q), Elem::Mod(x), Elem::Mod(y)) => Elem::Mod(q.mul(*x, *y)),
            (Idyll::Oag(_), Elem::Val(x), Elem::Val(y)) => Elem::Val(x.add(y)?),
            (Idyll::Extension(e), _, _) => e.mul(a, b)?,
            (Idyll::FiberProduct(p, q), Elem::Pair(a1, a2), Elem::Pair(b1, b2)) => {
                Elem::Pair(Box::new(p.mul(a1, b1)?), Box::new(q.mul(a2, b2)?))
            }
            (Idyll::Custom(t), Elem::Idx(x), Elem::Idx(y)) => Elem::Idx(t.mul[*x as usize][*y as usize]),
            _ => return structural(format!("cannot multiply {a} and {b} in {}", self.name())),
        })
    }

    /// Multiplicative inverse of a unit.
    pub fn inv(&self, a: &Elem<S>) -> Result<Elem<S>> {
        self.check(a)?;
        Ok(match (self, a) {
            (_, Elem::Zero) => return structural("zero is not invertible"),
            (Idyll::Krasner, _) => Elem::One,
            (Idyll::Sign | Idyll::RegularPartialField, Elem::Sign(s)) => Elem::Sign(*s),
            (Idyll::Phase, Elem::Phase(t)) => Elem::Phase((S::one() - t.clone()).fract_part()),
            (Idyll::Rationals, Elem::Rat(q)) => Elem::Rat(S::one() / q.clone()),
            (Idyll::PrimeField(p), Elem::Mod(r)) => Elem::Mod(quotient::mod_pow(*r, p - 2, *p)),
            (Idyll::Quotient(q), Elem::Mod(r)) => Elem::Mod(q.inv(*r)),
            (Idyll::Oag(_), Elem::Val(v)) => Elem::Val(v.neg()?),
            (Idyll::Extension(e), _) => e.inv(a)?,
            (Idyll::FiberProduct(p, q), Elem::Pair(x, y)) => Elem::Pair(Box::new(p.inv(x)?), Box::new(q.inv(y)?)),
            (Idyll::Custom(t), Elem::Idx(x)) => {
                let row = &t.mul[*x as usize];
                match row.iter().position(|&y| y == 1) {
                    Some(i) => Elem::Idx(i as u32),
                    None => return structural(format!("#{x} has no inverse in {}", self.name())),
                }
            }
            _ => return structural(format!("cannot invert {a} in {}", self.name())),
        })
    }

    pub fn pow(&self, a: &Elem<S>, k: usize) -> Result<Elem<S>> {
        let mut acc = self.one();
        for _ in 0..k {
            acc = self.mul(&acc, a)?;
        }
        Ok(acc)
    }

    /// Membership of a formal sum in the null ideal.
    pub fn is_null(&self, s: &FormalSum<S>) -> Result<bool> {
        self.check_sum(s)?;
        let terms = s.terms();
        Ok(match self {
            Idyll::Krasner => terms.len() != 1,
            Idyll::Sign => terms.is_empty() || (terms.contains(&Elem::Sign(1)) && terms.contains(&Elem::Sign(-1))),
            Idyll::RegularPartialField => {
                terms.iter().filter(|t| **t == Elem::Sign(1)).count()
                    == terms.iter().filter(|t| **t == Elem::Sign(-1)).count()
            }
            Idyll::Phase => {
                let angles: Vec<S> = terms
                    .iter()
                    .map(|t| match t {
                        Elem::Phase(a) => a.clone(),
                        _ => unreachable!("checked"),
                    })
                    .collect();
                phase::is_null_phase(&angles)
            }
            Idyll::Rationals => terms
                .iter()
                .map(|t| match t {
                    Elem::Rat(q) => q.clone(),
                    _ => unreachable!("checked"),
                })
                .fold(S::zero(), |a, b| a + b)
                .is_zero(),
            Idyll::PrimeField(p) => terms.iter().map(|t| mod_of(t)).fold(0u64, |a, b| (a + b) % p) == 0,
            Idyll::Quotient(q) => q.is_null(&terms.iter().map(mod_of).collect::<Vec<_>>()),
            Idyll::Oag(_) => {
                let vals: Vec<&OagValue<S>> = terms
                    .iter()
                    .map(|t| match t {
                        Elem::Val(v) => v,
                        _ => unreachable!("checked"),
                    })
                    .collect();
                min_repeats(&vals)
            }
            Idyll::Extension(e) => e.is_null_unchecked(s)?,
            Idyll::FiberProduct(a, b) => {
                let (mut left, mut right) = (Vec::new(), Vec::new());
                for t in terms {
                    if let Elem::Pair(x, y) = t {
                        left.push((**x).clone());
                        right.push((**y).clone());
                    }
                }
                a.is_null(&FormalSum::new(left))? && b.is_null(&FormalSum::new(right))?
            }
            Idyll::Custom(t) => {
                let idx: Vec<u32> = terms
                    .iter()
                    .map(|x| match x {
                        Elem::Idx(i) => *i,
                        _ => unreachable!("checked"),
                    })
                    .collect();
                (t.null)(&idx)
            }
        })
    }

    /// Whether `x ≼ a + b`, i.e. `a + b + ε x` is null.
    pub fn in_sum(&self, x: &Elem<S>, a: &Elem<S>, b: &Elem<S>) -> Result<bool> {
        let ex = self.neg(x)?;
        self.is_null(&FormalSum::new([a.clone(), b.clone(), ex]))
    }

    /// `a ⊞ b`, by closed form where one is known and by scanning the
    /// carrier for other finite idylls.
    pub fn sum_set(&self, a: &Elem<S>, b: &Elem<S>) -> Result<SumSet<S>> {
        self.check(a)?;
        self.check(b)?;
        let one = |x: Elem<S>| SumSet::Finite(BTreeSet::from([x]));
        Ok(match self {
            _ if a.is_zero() && b.is_zero() => one(Elem::Zero),
            Idyll::Krasner | Idyll::Sign if a.is_zero() => one(b.clone()),
            Idyll::Krasner | Idyll::Sign if b.is_zero() => one(a.clone()),
            Idyll::Krasner => SumSet::Finite(BTreeSet::from([Elem::Zero, Elem::One])),
            Idyll::Sign if a == b => one(a.clone()),
            Idyll::Sign => SumSet::Finite(BTreeSet::from([Elem::Zero, Elem::Sign(1), Elem::Sign(-1)])),
            Idyll::Rationals => {
                let v = |x: &Elem<S>| match x {
                    Elem::Rat(q) => q.clone(),
                    _ => S::zero(),
                };
                let s = v(a) + v(b);
                one(if s.is_zero() { Elem::Zero } else { Elem::Rat(s) })
            }
            Idyll::PrimeField(p) => {
                let s = (mod_of(a) + mod_of(b)) % p;
                one(if s == 0 { Elem::Zero } else { Elem::Mod(s) })
            }
            Idyll::Oag(n) => {
                let (va, vb) = (oag_value(a), oag_value(b));
                match va.cmp(&vb) {
                    std::cmp::Ordering::Less => one(a.clone()),
                    std::cmp::Ordering::Greater => one(b.clone()),
                    std::cmp::Ordering::Equal => {
                        debug_assert_eq!(va.rank(), Some(*n));
                        SumSet::Layered { core: BTreeSet::from([Elem::Zero, a.clone()]), above: va }
                    }
                }
            }
            Idyll::Extension(e) => e.sum_set(a, b)?,
            Idyll::Phase => return unsupported("sum sets in the phase idyll are not computed"),
            _ => match self.elements() {
                Some(all) => {
                    let mut out = BTreeSet::new();
                    for c in all {
                        if self.in_sum(&c, a, b)? {
                            out.insert(c);
                        }
                    }
                    SumSet::Finite(out)
                }
                None => return unsupported(format!("sum sets in {}", self.name())),
            },
        })
    }

    /// All elements (zero first) of a finite idyll.
    pub fn elements(&self) -> Option<Vec<Elem<S>>> {
        let mut out = vec![Elem::Zero];
        out.extend(self.units()?);
        Some(out)
    }

    /// All nonzero elements of a finite idyll.
    pub fn units(&self) -> Option<Vec<Elem<S>>> {
        Some(match self {
            Idyll::Krasner => vec![Elem::One],
            Idyll::Sign | Idyll::RegularPartialField => vec![Elem::Sign(-1), Elem::Sign(1)],
            Idyll::PrimeField(p) => (1..*p).map(Elem::Mod).collect(),
            Idyll::Quotient(q) => q.classes().iter().map(|&r| Elem::Mod(r)).collect(),
            Idyll::FiberProduct(a, b) => {
                let (ua, ub) = (a.units()?, b.units()?);
                let mut out = Vec::new();
                for x in &ua {
                    for y in &ub {
                        out.push(Elem::Pair(Box::new(x.clone()), Box::new(y.clone())));
                    }
                }
                out
            }
            Idyll::Custom(t) => (1..t.size() as u32).map(Elem::Idx).collect(),
            _ => return None,
        })
    }

    pub fn is_finite(&self) -> bool {
        self.units().is_some()
    }

    /// A deterministic finite sample of elements used by the axiom harness
    /// for infinite idylls (the whole carrier for finite ones).
    pub fn sample_elements(&self) -> Vec<Elem<S>> {
        if let Some(all) = self.elements() {
            return all;
        }
        let mut out = vec![Elem::Zero];
        match self {
            Idyll::Phase => {
                out.extend((0..12).map(|k| Elem::Phase(S::from_ratio(k, 12))));
            }
            Idyll::Rationals => {
                for (n, d) in [(1, 1), (-1, 1), (2, 1), (-2, 1), (1, 2), (-1, 2), (3, 1), (-3, 2)] {
                    out.push(Elem::Rat(S::from_ratio(n, d)));
                }
            }
            Idyll::Oag(n) => {
                for v in small_values::<S>(*n) {
                    out.push(Elem::Val(v));
                }
            }
            Idyll::Extension(e) => {
                let units = e.base.sample_elements().into_iter().filter(|u| !u.is_zero()).take(4);
                let units: Vec<_> = units.collect();
                for v in small_values::<S>(e.rank) {
                    for u in &units {
                        out.push(Elem::ext(u.clone(), v.clone()));
                    }
                }
            }
            _ => {}
        }
        out
    }

    /// Every pair of elements has a nonempty sum set.
    pub fn is_whole(&self) -> bool {
        match self {
            Idyll::Krasner | Idyll::Sign | Idyll::Phase | Idyll::Rationals => true,
            Idyll::PrimeField(_) | Idyll::Quotient(_) | Idyll::Oag(_) => true,
            Idyll::RegularPartialField | Idyll::FiberProduct(..) => false,
            Idyll::Extension(e) => e.base.is_whole(),
            Idyll::Custom(t) => t.whole,
        }
    }

    /// Fields, hyperfields and their tropical extensions. For these, `a` is
    /// a root of `f` iff `f(a)` is null.
    pub fn is_pasture_backed(&self) -> bool {
        match self {
            Idyll::Krasner | Idyll::Sign | Idyll::Phase | Idyll::Rationals => true,
            Idyll::PrimeField(_) | Idyll::Quotient(_) | Idyll::Oag(_) => true,
            Idyll::RegularPartialField | Idyll::FiberProduct(..) => false,
            Idyll::Extension(e) => e.base.is_pasture_backed(),
            Idyll::Custom(t) => t.pasture,
        }
    }

    /// Hyperfield bases are the pasture-backed whole ones.
    pub fn is_hyperfield(&self) -> bool {
        self.is_whole() && self.is_pasture_backed()
    }

    /// Valuation in the sense of the ambient value group: the level for
    /// extension elements, the value itself for OAG idylls.
    pub fn valuation(&self, x: &Elem<S>) -> Result<OagValue<S>> {
        self.check(x)?;
        match (self, x) {
            (_, Elem::Zero) => Ok(OagValue::Infinity),
            (Idyll::Oag(_), Elem::Val(v)) => Ok(v.clone()),
            (Idyll::Extension(_), Elem::Ext { level, .. }) => Ok(level.clone()),
            _ => unsupported(format!("{} has no value group", self.name())),
        }
    }

    /// For an OAG idyll: the isomorphic split extension `K[Q^n]`.
    pub fn oag_as_extension(&self) -> Option<Idyll<S>> {
        match self {
            Idyll::Oag(n) => Some(Idyll::tropical_rank(*n)),
            _ => None,
        }
    }

    /// Looks up a catalog idyll by its command-line name.
    pub fn from_name(name: &str) -> Result<Self> {
        let n = name.trim();
        let bad = || Error::Parse { pos: 0, msg: format!("unknown idyll '{n}'") };
        let parse_rank =
            |s: &str| -> Result<usize> { s.strip_prefix("rank-").and_then(|r| r.parse().ok()).ok_or_else(bad) };
        Ok(match n {
            "krasner" | "K" => Idyll::Krasner,
            "sign" | "S" => Idyll::Sign,
            "phase" | "P" => Idyll::Phase,
            "f1pm" => Idyll::RegularPartialField,
            "field:Q" => Idyll::Rationals,
            "trop" | "T" => Idyll::tropical(),
            "trop-real" | "TR" => Idyll::tropical_real(),
            _ => {
                if let Some(rest) = n.strip_prefix("field:GF(") {
                    let p = rest.strip_suffix(')').and_then(|p| p.parse().ok()).ok_or_else(bad)?;
                    Idyll::prime_field(p)?
                } else if let Some(rest) = n.strip_prefix("quot:GF(") {
                    let (p, g) = rest.split_once(")/").ok_or_else(bad)?;
                    let p: u64 = p.parse().map_err(|_| bad())?;
                    let g = g.strip_prefix('{').and_then(|g| g.strip_suffix('}')).ok_or_else(bad)?;
                    let g: Vec<u64> = g
                        .split(',')
                        .map(|x| x.trim().parse::<u64>())
                        .collect::<std::result::Result<_, _>>()
                        .map_err(|_| bad())?;
                    Idyll::quotient(p, &g)?
                } else if let Some(r) = n.strip_prefix("oag:") {
                    Idyll::Oag(parse_rank(r)?)
                } else if let Some(r) = n.strip_prefix("trop-real:") {
                    Idyll::tropical_real_rank(parse_rank(r)?)
                } else if let Some(r) = n.strip_prefix("trop:") {
                    Idyll::tropical_rank(parse_rank(r)?)
                } else if let Some(rest) = n.strip_prefix("ext:") {
                    let (base, rank) = rest.rsplit_once(':').ok_or_else(bad)?;
                    let rank: usize = rank.strip_prefix("rank-").unwrap_or(rank).parse().map_err(|_| bad())?;
                    Idyll::split_extension(Idyll::from_name(base)?, rank)
                } else {
                    return Err(bad());
                }
            }
        })
    }
}

fn mod_of<S>(x: &Elem<S>) -> u64 {
    match x {
        Elem::Mod(r) => *r,
        _ => 0,
    }
}

fn oag_value<S: Scalar>(x: &Elem<S>) -> OagValue<S> {
    match x {
        Elem::Val(v) => v.clone(),
        _ => OagValue::Infinity,
    }
}

/// Whether the minimum of a nonempty list of values occurs at least twice
/// (empty lists count as null).
pub(crate) fn min_repeats<S: Scalar>(vals: &[&OagValue<S>]) -> bool {
    let Some(min) = vals.iter().min() else {
        return true;
    };
    vals.iter().filter(|v| *v == min).count() >= 2
}

fn small_values<S: Scalar>(rank: usize) -> Vec<OagValue<S>> {
    let base = [S::zero(), S::one(), -S::one(), S::from_ratio(1, 2)];
    let mut out = vec![Vec::new()];
    for _ in 0..rank {
        let mut next = Vec::new();
        for prefix in &out {
            for b in &base {
                let mut v: Vec<S> = prefix.clone();
                v.push(b.clone());
                next.push(v);
            }
        }
        out = next;
        if out.len() > 16 {
            out.truncate(16);
        }
    }
    out.into_iter().map(OagValue::Finite).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;
    type I = Idyll<Q>;

    fn sum(xs: &[Elem<Q>]) -> FormalSum<Q> {
        FormalSum::new(xs.to_vec())
    }

    fn val(x: i64) -> Elem<Q> {
        Elem::Val(OagValue::from_ints(&[x]))
    }

    #[test]
    fn sign_null_sums() {
        let s = I::Sign;
        assert!(s.is_null(&sum(&[Elem::Sign(1), Elem::Sign(-1), Elem::Sign(1)])).unwrap());
        assert!(!s.is_null(&sum(&[Elem::Sign(1), Elem::Sign(1)])).unwrap());
        assert!(s.is_null(&FormalSum::empty()).unwrap());
    }

    #[test]
    fn krasner_null_sums() {
        let k = I::Krasner;
        assert!(!k.is_null(&sum(&[Elem::One])).unwrap());
        assert!(k.is_null(&sum(&[Elem::One, Elem::One])).unwrap());
        assert!(k.is_null(&sum(&[Elem::One, Elem::One, Elem::One])).unwrap());
    }

    #[test]
    fn oag_null_sums() {
        let t = I::Oag(1);
        assert!(t.is_null(&sum(&[val(0), val(0), val(1)])).unwrap());
        assert!(!t.is_null(&sum(&[val(0), val(1), val(2)])).unwrap());
    }

    #[test]
    fn rational_null_sums() {
        let q = I::Rationals;
        let r = |n: i64| Elem::Rat(Q::from_int(n));
        assert!(q.is_null(&sum(&[r(2), r(3), r(-5)])).unwrap());
        assert!(!q.is_null(&sum(&[r(2), r(3)])).unwrap());
    }

    #[test]
    fn zeros_are_dropped() {
        let s = sum(&[Elem::Zero, Elem::One, Elem::Zero]);
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn foreign_elements_are_structural_errors() {
        let err = I::Sign.is_null(&sum(&[Elem::One])).unwrap_err();
        assert!(matches!(err, Error::Structural(_)));
        assert!(I::Krasner.mul(&Elem::Sign(1), &Elem::One).is_err());
    }

    #[test]
    fn sign_sum_sets() {
        let s = I::Sign;
        let set = s.sum_set(&Elem::Sign(1), &Elem::Sign(-1)).unwrap();
        assert_eq!(set.core().len(), 3);
        let set = s.sum_set(&Elem::Sign(1), &Elem::Sign(1)).unwrap();
        assert_eq!(set, SumSet::Finite(BTreeSet::from([Elem::Sign(1)])));
    }

    #[test]
    fn oag_sum_sets() {
        let t = I::Oag(1);
        assert_eq!(t.sum_set(&val(0), &val(1)).unwrap(), SumSet::Finite(BTreeSet::from([val(0)])));
        let s = t.sum_set(&val(2), &val(2)).unwrap();
        assert!(s.contains_with(&val(5), &OagValue::from_ints(&[5])));
        assert!(s.contains_with(&val(2), &OagValue::from_ints(&[2])));
        assert!(!s.contains_with(&val(1), &OagValue::from_ints(&[1])));
    }

    #[test]
    fn phase_has_no_sum_sets() {
        let p = I::Phase;
        let e = p.sum_set(&p.one(), &p.one()).unwrap_err();
        assert!(matches!(e, Error::Unsupported(_)));
    }

    #[test]
    fn quotient_catalog() {
        let q = I::quotient(5, &[1, 4]).unwrap();
        assert_eq!(q.elements().unwrap().len(), 3);
        let k = I::quotient(3, &[1, 2]).unwrap();
        assert_eq!(k.elements().unwrap().len(), 2);
        let f = I::quotient(3, &[1]).unwrap();
        assert_eq!(f.elements().unwrap().len(), 3);
        // GF(3)/{1} behaves like GF(3)
        let gf3 = I::PrimeField(3);
        for a in [1u64, 2] {
            for b in [1u64, 2] {
                assert_eq!(
                    f.sum_set(&Elem::Mod(a), &Elem::Mod(b)).unwrap(),
                    gf3.sum_set(&Elem::Mod(a), &Elem::Mod(b)).unwrap()
                );
            }
        }
    }

    #[test]
    fn names_round_trip() {
        for name in [
            "krasner",
            "sign",
            "phase",
            "f1pm",
            "field:Q",
            "field:GF(7)",
            "quot:GF(5)/{1,4}",
            "oag:rank-2",
            "trop",
            "trop:rank-2",
            "trop-real",
            "trop-real:rank-2",
        ] {
            let i = I::from_name(name).unwrap();
            assert_eq!(I::from_name(&i.name()).unwrap(), i, "{name}");
        }
        assert_eq!(I::from_name("ext:sign:1").unwrap(), I::tropical_real());
        assert!(I::from_name("field:GF(6)").is_err());
        assert!(I::from_name("nonsense").is_err());
    }

    #[test]
    fn partial_field_is_not_whole() {
        let f = I::RegularPartialField;
        assert!(f.sum_set(&Elem::Sign(1), &Elem::Sign(1)).unwrap().is_empty());
        assert!(!f.is_whole());
    }
}
