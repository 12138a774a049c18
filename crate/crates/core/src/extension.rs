//! Tropical extensions `1 → B^× → C^× → Γ → 1` with `Γ = (Q^n, ≤_lex)`.
//!
//! An element of `C^×` is a pair `(u, γ)` of a unit of the base and a level.
//! Multiplication is twisted by a normalized 2-cocycle `σ: Γ × Γ → B^×`;
//! the split extension `B[Γ]` has `σ = 1`. A sum is null iff the sum of its
//! minimal-valuation terms, moved to level zero, is null in `B`.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use crate::algebra::{Elem, FormalSum, Idyll, SumSet};
use crate::error::{precondition, structural, unsupported, Result};
use crate::oag::OagValue;
use crate::scalar::Scalar;

pub type CocycleFn<S> = Arc<dyn Fn(&OagValue<S>, &OagValue<S>) -> Elem<S> + Send + Sync>;

#[derive(Clone)]
pub enum Cocycle<S> {
    Split,
    /// An explicit 2-cocycle with values in the base units.
    Twisted {
        name: String,
        sigma: CocycleFn<S>,
    },
}

impl<S> fmt::Debug for Cocycle<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cocycle::Split => write!(f, "Split"),
            Cocycle::Twisted { name, .. } => write!(f, "Twisted({name})"),
        }
    }
}

#[derive(Clone)]
pub struct Extension<S> {
    pub base: Arc<Idyll<S>>,
    pub rank: usize,
    pub cocycle: Cocycle<S>,
}

impl<S: Scalar> fmt::Debug for Extension<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Extension({})", self.name())
    }
}

impl<S: Scalar> PartialEq for Extension<S> {
    fn eq(&self, other: &Self) -> bool {
        let same_cocycle = match (&self.cocycle, &other.cocycle) {
            (Cocycle::Split, Cocycle::Split) => true,
            (Cocycle::Twisted { name: a, .. }, Cocycle::Twisted { name: b, .. }) => a == b,
            _ => false,
        };
        same_cocycle && self.rank == other.rank && self.base == other.base
    }
}

impl<S: Scalar> Extension<S> {
    pub fn split(base: Arc<Idyll<S>>, rank: usize) -> Self {
        Extension { base, rank, cocycle: Cocycle::Split }
    }

    pub fn twisted(base: Arc<Idyll<S>>, rank: usize, name: impl Into<String>, sigma: CocycleFn<S>) -> Self {
        Extension { base, rank, cocycle: Cocycle::Twisted { name: name.into(), sigma } }
    }

    pub fn is_split(&self) -> bool {
        matches!(self.cocycle, Cocycle::Split)
    }

    pub fn name(&self) -> String {
        let base = self.base.name();
        let plain = match (base.as_str(), self.rank) {
            ("krasner", 1) => "trop".to_string(),
            ("krasner", n) => format!("trop:rank-{n}"),
            ("sign", 1) => "trop-real".to_string(),
            ("sign", n) => format!("trop-real:rank-{n}"),
            (b, n) => format!("ext:{b}:{n}"),
        };
        match &self.cocycle {
            Cocycle::Split => plain,
            Cocycle::Twisted { name, .. } => format!("{plain}~{name}"),
        }
    }

    pub fn one(&self) -> Elem<S> {
        Elem::ext(self.base.one(), OagValue::zero(self.rank))
    }

    /// `1^γ`, the representative of level `γ` used for normalization.
    pub fn unit_at(&self, level: OagValue<S>) -> Elem<S> {
        Elem::ext(self.base.one(), level)
    }

    /// Embeds a base element at level zero.
    pub fn embed(&self, b: &Elem<S>) -> Elem<S> {
        if b.is_zero() {
            Elem::Zero
        } else {
            Elem::ext(b.clone(), OagValue::zero(self.rank))
        }
    }

    fn sigma(&self, a: &OagValue<S>, b: &OagValue<S>) -> Elem<S> {
        match &self.cocycle {
            Cocycle::Split => self.base.one(),
            Cocycle::Twisted { sigma, .. } => sigma(a, b),
        }
    }

    fn parts<'a>(&self, x: &'a Elem<S>) -> Result<(&'a Elem<S>, &'a OagValue<S>)> {
        match x {
            Elem::Ext { unit, level } => Ok((unit, level)),
            _ => structural(format!("{x} is not a unit of {}", self.name())),
        }
    }

    pub(crate) fn mul(&self, a: &Elem<S>, b: &Elem<S>) -> Result<Elem<S>> {
        let (u, g) = self.parts(a)?;
        let (w, h) = self.parts(b)?;
        let unit = self.base.mul(&self.base.mul(u, w)?, &self.sigma(g, h))?;
        Ok(Elem::ext(unit, g.add(h)?))
    }

    pub(crate) fn inv(&self, a: &Elem<S>) -> Result<Elem<S>> {
        let (u, g) = self.parts(a)?;
        let minus = g.neg()?;
        let s = self.base.inv(&self.sigma(g, &minus))?;
        Ok(Elem::ext(self.base.mul(&self.base.inv(u)?, &s)?, minus))
    }

    /// `v(a)`; `∞` for zero.
    pub fn valuation(&self, a: &Elem<S>) -> OagValue<S> {
        match a {
            Elem::Ext { level, .. } => level.clone(),
            _ => OagValue::Infinity,
        }
    }

    /// Leading coefficient: the unit of `a` tagged with its level.
    pub fn lc(&self, a: &Elem<S>) -> Result<(Elem<S>, OagValue<S>)> {
        match a {
            Elem::Zero => Ok((Elem::Zero, OagValue::Infinity)),
            _ => self.parts(a).map(|(u, g)| (u.clone(), g.clone())),
        }
    }

    /// Moves `x` to level zero by dividing by `rep` (which must share its
    /// level) and returns the resulting base unit.
    pub fn normalize(&self, x: &Elem<S>, rep: &Elem<S>) -> Result<Elem<S>> {
        if x.is_zero() {
            return Ok(Elem::Zero);
        }
        let y = self.mul(x, &self.inv(rep)?)?;
        let (u, g) = self.parts(&y)?;
        if *g != OagValue::zero(self.rank) {
            return structural(format!("{x} is not at the level of {rep}"));
        }
        Ok(u.clone())
    }

    pub(crate) fn is_null_unchecked(&self, s: &FormalSum<S>) -> Result<bool> {
        let Some(min) = s.terms().iter().map(|t| self.valuation(t)).min() else {
            return Ok(true);
        };
        self.is_null_with_rep(s, &self.unit_at(min))
    }

    /// The null test, normalizing the minimal terms by a caller-chosen
    /// representative of the minimal level.
    pub fn is_null_with_rep(&self, s: &FormalSum<S>, rep: &Elem<S>) -> Result<bool> {
        let min = self.valuation(rep);
        let mut units = Vec::new();
        for t in s.terms() {
            if self.valuation(t) == min {
                units.push(self.normalize(t, rep)?);
            }
        }
        self.base.is_null(&FormalSum::new(units))
    }

    /// Evaluation at `t = 0` on the valuation ring.
    pub fn ev0(&self, a: &Elem<S>) -> Result<Elem<S>> {
        match a {
            Elem::Zero => Ok(Elem::Zero),
            _ => {
                let (u, g) = self.parts(a)?;
                let zero = OagValue::zero(self.rank);
                match g.cmp(&zero) {
                    std::cmp::Ordering::Less => precondition(format!("ev0 of {a}: negative valuation")),
                    std::cmp::Ordering::Equal => Ok(u.clone()),
                    std::cmp::Ordering::Greater => Ok(Elem::Zero),
                }
            }
        }
    }

    /// `a ⊞ b` from the base sum sets:
    /// `v(a) < v(b)` gives the level-`v(a)` part of `a ⊞ 0`; equal levels
    /// give the level-`γ` part of the base sum, plus everything above `γ`
    /// when the base sum contains zero.
    pub(crate) fn sum_set(&self, a: &Elem<S>, b: &Elem<S>) -> Result<SumSet<S>> {
        let (va, vb) = (self.valuation(a), self.valuation(b));
        let (lo, hi) = if va <= vb { (a, b) } else { (b, a) };
        let (u, g) = self.parts(lo)?;
        let rep = self.unit_at(g.clone());
        let other = if va == vb { self.normalize(hi, &rep)? } else { Elem::Zero };
        let base = self.base.sum_set(u, &other)?;
        let SumSet::Finite(base) = base else {
            return unsupported(format!("sum sets in {} over an infinite-layered base", self.name()));
        };
        let mut core = BTreeSet::new();
        let mut has_zero = false;
        for c in base {
            if c.is_zero() {
                has_zero = true;
                core.insert(Elem::Zero);
            } else {
                core.insert(self.mul(&self.embed(&c), &rep)?);
            }
        }
        Ok(if has_zero { SumSet::Layered { core, above: g.clone() } } else { SumSet::Finite(core) })
    }

    /// The layered hypersum `y ⊞ z`; requires a hyperfield base.
    pub fn layering_hypersum(&self, y: &Elem<S>, z: &Elem<S>) -> Result<SumSet<S>> {
        if !self.base.is_hyperfield() {
            return precondition(format!("{} is not a hyperfield", self.base.name()));
        }
        let c = Idyll::Extension(self.clone());
        c.sum_set(y, z)
    }
}

/// Violations found by [`check_extension_axioms`]; empty means pass.
pub type AxiomReport = Vec<String>;

fn sample_levels<S: Scalar>(rank: usize, rng: &mut StdRng) -> OagValue<S> {
    const GRID: [(i64, i64); 7] = [(0, 1), (1, 1), (-1, 1), (1, 2), (2, 1), (-3, 2), (0, 1)];
    OagValue::Finite(
        (0..rank)
            .map(|_| {
                let (n, d) = GRID[rng.gen_range(0..GRID.len())];
                S::from_ratio(n, d)
            })
            .collect(),
    )
}

/// Randomized check of the extension axioms on `samples` rounds: exactness
/// of `1 → B^× → C^× → Γ → 1` (cocycle identities, associativity,
/// inverses), fullness on level-zero sums, the minimal-terms rule, and for
/// hyperfield bases agreement between the layered hypersum and the null
/// ideal.
pub fn check_extension_axioms<S: Scalar>(ext: &Extension<S>, samples: usize) -> Result<AxiomReport> {
    let Some(units) = ext.base.units() else {
        return precondition(format!("{} is not finite", ext.base.name()));
    };
    let c = Idyll::Extension(ext.clone());
    let mut rng = StdRng::seed_from_u64(0x5eed_0001);
    let mut out = Vec::new();
    let mut report = |msg: String| {
        if out.len() < 50 {
            out.push(msg);
        }
    };
    let zero = OagValue::zero(ext.rank);
    let b_one = ext.base.one();
    let elem = |rng: &mut StdRng| Elem::ext(units.choose(rng).unwrap().clone(), sample_levels::<S>(ext.rank, rng));

    for _ in 0..samples {
        let (x, y, z) = (elem(&mut rng), elem(&mut rng), elem(&mut rng));
        let (g, h, k) = (ext.valuation(&x), ext.valuation(&y), ext.valuation(&z));

        // exactness
        if ext.sigma(&zero, &g) != b_one || ext.sigma(&g, &zero) != b_one {
            report(format!("exactness: sigma not normalized at {g}"));
        }
        let lhs = ext.base.mul(&ext.sigma(&g, &h), &ext.sigma(&g.add(&h)?, &k))?;
        let rhs = ext.base.mul(&ext.sigma(&h, &k), &ext.sigma(&g, &h.add(&k)?))?;
        if lhs != rhs {
            report(format!("exactness: cocycle identity fails at ({g}, {h}, {k})"));
        }
        let xy = c.mul(&x, &y)?;
        if c.mul(&xy, &z)? != c.mul(&x, &c.mul(&y, &z)?)? {
            report(format!("exactness: ({x}·{y})·{z} ≠ {x}·({y}·{z})"));
        }
        if ext.valuation(&xy) != g.add(&h)? {
            report(format!("exactness: v({x}·{y}) ≠ v({x}) + v({y})"));
        }
        if c.mul(&x, &c.inv(&x)?)? != ext.one() || c.mul(&c.one(), &x)? != x {
            report(format!("exactness: {x} has no two-sided inverse"));
        }
        let (u, w) = (units.choose(&mut rng).unwrap(), units.choose(&mut rng).unwrap());
        if c.mul(&ext.embed(u), &ext.embed(w))? != ext.embed(&ext.base.mul(u, w)?) {
            report(format!("exactness: B^× does not embed at level zero ({u}, {w})"));
        }

        // fullness
        let len = rng.gen_range(0..=4);
        let base_terms: Vec<Elem<S>> = (0..len).map(|_| units.choose(&mut rng).unwrap().clone()).collect();
        let lifted = FormalSum::new(base_terms.iter().map(|b| ext.embed(b)));
        if c.is_null(&lifted)? != ext.base.is_null(&FormalSum::new(base_terms.clone()))? {
            report(format!("fullness: level-zero sum {lifted} disagrees with the base"));
        }

        // minimal-terms rule
        let s = FormalSum::new((0..rng.gen_range(1..=4)).map(|_| elem(&mut rng)));
        let min = s.terms().iter().map(|t| ext.valuation(t)).min().unwrap();
        let bump = OagValue::Finite((0..ext.rank).map(|i| if i == 0 { S::one() } else { S::zero() }).collect());
        let higher = Elem::ext(units.choose(&mut rng).unwrap().clone(), min.add(&bump)?);
        if c.is_null(&s)? != c.is_null(&s.with(higher.clone()))? {
            report(format!("minimal terms: appending {higher} changes nullity of {s}"));
        }

        // layered hypersum
        if ext.base.is_hyperfield() {
            let (y, z) = if rng.gen_bool(0.5) {
                (x.clone(), Elem::ext(units.choose(&mut rng).unwrap().clone(), g.clone()))
            } else {
                (x.clone(), y.clone())
            };
            let set = ext.layering_hypersum(&y, &z)?;
            let mut cands = vec![Elem::Zero, elem(&mut rng)];
            for lvl in [ext.valuation(&y), ext.valuation(&z)] {
                for u in &units {
                    cands.push(Elem::ext(u.clone(), lvl.clone()));
                    cands.push(Elem::ext(u.clone(), lvl.add(&bump)?));
                }
            }
            for x in cands {
                let member = set.contains_with(&x, &ext.valuation(&x));
                if member != c.in_sum(&x, &y, &z)? {
                    report(format!("hypersum: membership of {x} in {y} ⊞ {z} disagrees with the null ideal"));
                }
            }
        }
    }
    Ok(out)
}

/// Sums whose nullity differs between the extension and the product
/// idyll `B × K[Q^n]` under `u·t^γ ↦ (u, t^γ)`, on `samples` random sums
/// of two to four terms.
pub fn product_differences<S: Scalar>(ext: &Extension<S>, samples: usize) -> Result<Vec<String>> {
    let Some(units) = ext.base.units() else {
        return precondition(format!("{} is not finite", ext.base.name()));
    };
    let c = Idyll::Extension(ext.clone());
    let trop = Arc::new(Idyll::tropical_rank(ext.rank));
    let prod = Idyll::FiberProduct(ext.base.clone(), trop);
    let pair = |x: &Elem<S>| match x {
        Elem::Ext { unit, level } => Elem::Pair(unit.clone(), Box::new(Elem::ext(Elem::One, level.clone()))),
        other => other.clone(),
    };
    let mut rng = StdRng::seed_from_u64(0x5eed_0002);
    let mut out = Vec::new();
    for _ in 0..samples {
        let len = rng.gen_range(2..=4);
        let s = FormalSum::new(
            (0..len)
                .map(|_| Elem::ext(units.choose(&mut rng).unwrap().clone(), sample_levels::<S>(ext.rank, &mut rng))),
        );
        let image = FormalSum::new(s.terms().iter().map(pair));
        if c.is_null(&s)? != prod.is_null(&image)? {
            out.push(format!("{s}"));
        }
    }
    Ok(out)
}

/// The Krasner extension `K[Q^n]` is the OAG idyll of rank `n`; these maps
/// realize the identification.
pub fn oag_to_tropical<S: Scalar>(x: &Elem<S>) -> Result<Elem<S>> {
    match x {
        Elem::Zero => Ok(Elem::Zero),
        Elem::Val(v) => Ok(Elem::ext(Elem::One, v.clone())),
        _ => structural(format!("{x} is not an OAG element")),
    }
}

pub fn tropical_to_oag<S: Scalar>(x: &Elem<S>) -> Result<Elem<S>> {
    match x {
        Elem::Zero => Ok(Elem::Zero),
        Elem::Ext { unit, level } if **unit == Elem::One => Ok(Elem::Val(level.clone())),
        _ => structural(format!("{x} is not an element of a Krasner extension")),
    }
}

/// Rewrites an element of `B[Q^n]` (`n ≥ 1`, split) as an element of
/// `B[Q^{n−1}][Q]`: the head coordinate becomes the outer level. For
/// `n = 1` the inner idyll is `B` itself.
pub fn split_head<S: Scalar>(ext: &Extension<S>, x: &Elem<S>) -> Result<(Elem<S>, Option<S>)> {
    if !ext.is_split() {
        return unsupported("head splitting of a twisted extension");
    }
    match x {
        Elem::Zero => Ok((Elem::Zero, None)),
        Elem::Ext { unit, level } => {
            let (head, tail) = level.project_head()?;
            let inner = if ext.rank == 1 { (**unit).clone() } else { Elem::ext((**unit).clone(), tail) };
            Ok((inner, head))
        }
        _ => structural(format!("{x} is not in {}", ext.name())),
    }
}

/// The idyll `B[Q^{n−1}]` targeted by [`split_head`].
pub fn head_inner<S: Scalar>(ext: &Extension<S>) -> Idyll<S> {
    if ext.rank == 1 {
        (*ext.base).clone()
    } else {
        Idyll::Extension(Extension::split(ext.base.clone(), ext.rank - 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn tr() -> Idyll<Q> {
        Idyll::tropical_real()
    }

    fn e(u: i8, n: i64, d: i64) -> Elem<Q> {
        Elem::ext(Elem::Sign(u), OagValue::scalar(Q::from_ratio(n, d)))
    }

    fn k(n: i64) -> Elem<Q> {
        Elem::ext(Elem::One, OagValue::from_ints(&[n]))
    }

    #[test]
    fn split_multiplication() {
        let c = tr();
        assert_eq!(c.mul(&e(1, 1, 1), &e(-1, 2, 1)).unwrap(), e(-1, 3, 1));
        assert_eq!(c.mul(&e(1, 1, 1), &Elem::Zero).unwrap(), Elem::Zero);
        let t = Idyll::<Q>::tropical();
        assert_eq!(t.mul(&k(0), &k(5)).unwrap(), k(5));
    }

    #[test]
    fn valuation_and_leading_coefficient() {
        let Idyll::Extension(x) = tr() else { unreachable!() };
        assert_eq!(x.valuation(&e(-1, 3, 2)), OagValue::scalar(Q::from_ratio(3, 2)));
        assert_eq!(x.valuation(&Elem::Zero), OagValue::Infinity);
        assert_eq!(x.lc(&e(-1, 3, 2)).unwrap(), (Elem::Sign(-1), OagValue::scalar(Q::from_ratio(3, 2))));
    }

    #[test]
    fn null_sums() {
        let c = tr();
        assert!(c.is_null(&FormalSum::new([e(1, 1, 1), e(-1, 1, 1), e(1, 2, 1)])).unwrap());
        assert!(!c.is_null(&FormalSum::new([e(1, 0, 1), e(1, 0, 1), e(-1, 1, 1)])).unwrap());
        let t = Idyll::<Q>::tropical();
        assert!(t.is_null(&FormalSum::new([k(0), k(0), k(1)])).unwrap());
    }

    #[test]
    fn evaluation_at_zero() {
        let Idyll::Extension(x) = tr() else { unreachable!() };
        assert_eq!(x.ev0(&e(-1, 0, 1)).unwrap(), Elem::Sign(-1));
        assert_eq!(x.ev0(&e(1, 2, 1)).unwrap(), Elem::Zero);
        assert_eq!(x.ev0(&Elem::Zero).unwrap(), Elem::Zero);
        assert!(x.ev0(&e(1, -1, 1)).is_err());
    }

    #[test]
    fn hypersum_cases() {
        let Idyll::Extension(x) = tr() else { unreachable!() };
        let h1 = x.layering_hypersum(&e(1, 0, 1), &e(1, 1, 1)).unwrap();
        assert_eq!(h1, SumSet::Finite(BTreeSet::from([e(1, 0, 1)])));
        let h3 = x.layering_hypersum(&e(1, 0, 1), &e(1, 0, 1)).unwrap();
        assert_eq!(h3, SumSet::Finite(BTreeSet::from([e(1, 0, 1)])));
        let h4 = x.layering_hypersum(&e(1, 0, 1), &e(-1, 0, 1)).unwrap();
        let SumSet::Layered { core, above } = &h4 else { panic!("{h4:?}") };
        assert!(core.contains(&Elem::Zero));
        assert_eq!(above, &OagValue::zero(1));
        assert!(h4.contains_with(&e(-1, 1, 2), &OagValue::scalar(Q::from_ratio(1, 2))));
        assert!(!h4.contains_with(&e(-1, -1, 2), &OagValue::scalar(Q::from_ratio(-1, 2))));
    }

    #[test]
    fn axioms_hold_for_split_extensions() {
        for c in [tr(), Idyll::tropical(), Idyll::tropical_real_rank(2)] {
            let Idyll::Extension(x) = c else { unreachable!() };
            assert_eq!(check_extension_axioms(&x, 200).unwrap(), Vec::<String>::new(), "{}", x.name());
        }
    }

    #[test]
    fn broken_cocycle_is_detected() {
        let sigma: CocycleFn<Q> =
            Arc::new(|a: &OagValue<Q>, b: &OagValue<Q>| if a < b { Elem::Sign(-1) } else { Elem::Sign(1) });
        let x = Extension::twisted(Arc::new(Idyll::Sign), 1, "broken", sigma);
        let report = check_extension_axioms(&x, 200).unwrap();
        assert!(report.iter().any(|v| v.starts_with("exactness")), "{report:?}");
    }

    #[test]
    fn coboundary_cocycle_passes() {
        // σ(a, b) = φ(a)φ(b)φ(a+b)^{-1} with φ(γ) = (−1)^{⌊γ⌋}
        fn phi(g: &OagValue<Q>) -> i8 {
            let x = g.coords().unwrap()[0].floor().to_integer();
            if x.clone() % 2 == 0.into() {
                1
            } else {
                -1
            }
        }
        let sigma: CocycleFn<Q> =
            Arc::new(|a: &OagValue<Q>, b: &OagValue<Q>| Elem::Sign(phi(a) * phi(b) * phi(&a.add(b).unwrap())));
        let x = Extension::twisted(Arc::new(Idyll::Sign), 1, "floor-parity", sigma);
        assert_eq!(check_extension_axioms(&x, 300).unwrap(), Vec::<String>::new());
    }

    #[test]
    fn representative_choice_does_not_matter() {
        let Idyll::Extension(x) = tr() else { unreachable!() };
        let s = FormalSum::new([e(1, 1, 1), e(-1, 1, 1), e(1, 2, 1)]);
        let a = x.is_null_with_rep(&s, &e(1, 1, 1)).unwrap();
        let b = x.is_null_with_rep(&s, &e(-1, 1, 1)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn head_splitting() {
        let Idyll::Extension(x) = Idyll::<Q>::tropical_rank(2) else { unreachable!() };
        let a = Elem::ext(Elem::One, OagValue::from_ints(&[1, 3]));
        let (inner, head) = split_head(&x, &a).unwrap();
        assert_eq!(head, Some(Q::from_int(1)));
        assert_eq!(inner, k(3));
        assert_eq!(head_inner(&x), Idyll::tropical());
    }

    #[test]
    fn differs_from_product() {
        let Idyll::Extension(ext) = tr() else { unreachable!() };
        let diffs = product_differences(&ext, 300).unwrap();
        assert!(!diffs.is_empty());
        let Idyll::Extension(kt) = Idyll::<Q>::tropical() else { unreachable!() };
        assert!(product_differences(&kt, 300).unwrap().is_empty());
    }
}
