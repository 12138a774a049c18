//! Pure polynomials over an idyll.

use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::algebra::valuation::{padic_valuation, sign_of_rational};
use crate::algebra::{Elem, FormalSum, Idyll};
use crate::error::{precondition, structural, Error, Result};
use crate::scalar::Scalar;

/// A sparse polynomial with at most one nonzero coefficient per degree.
#[derive(Clone)]
pub struct Polynomial<S> {
    idyll: Arc<Idyll<S>>,
    terms: BTreeMap<usize, Elem<S>>,
}

impl<S: Scalar> PartialEq for Polynomial<S> {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && (Arc::ptr_eq(&self.idyll, &other.idyll) || self.idyll == other.idyll)
    }
}

impl<S: Scalar> Eq for Polynomial<S> {}

impl<S: Scalar> Hash for Polynomial<S> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl<S: Scalar> fmt::Debug for Polynomial<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[{}]({})", self.idyll.name(), self)
    }
}

impl<S: Scalar> fmt::Display for Polynomial<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::text::format_poly(self))
    }
}

impl<S: Scalar> Polynomial<S> {
    /// Builds a polynomial from `(degree, coefficient)` pairs. Zero
    /// coefficients are dropped; a repeated degree is a purity error.
    pub fn new(idyll: Arc<Idyll<S>>, terms: impl IntoIterator<Item = (usize, Elem<S>)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        let mut seen = std::collections::BTreeSet::new();
        for (k, c) in terms {
            idyll.check(&c)?;
            if !seen.insert(k) {
                return Err(Error::Purity(k));
            }
            if !c.is_zero() {
                map.insert(k, c);
            }
        }
        Ok(Polynomial { idyll, terms: map })
    }

    /// From the dense coefficient list `c_0, c_1, …`.
    pub fn from_coeffs(idyll: Arc<Idyll<S>>, coeffs: Vec<Elem<S>>) -> Result<Self> {
        Self::new(idyll, coeffs.into_iter().enumerate())
    }

    pub fn zero(idyll: Arc<Idyll<S>>) -> Self {
        Polynomial { idyll, terms: BTreeMap::new() }
    }

    pub fn idyll(&self) -> &Arc<Idyll<S>> {
        &self.idyll
    }

    pub fn terms(&self) -> &BTreeMap<usize, Elem<S>> {
        &self.terms
    }

    pub fn coeff(&self, i: usize) -> Elem<S> {
        self.terms.get(&i).cloned().unwrap_or(Elem::Zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().next_back().copied()
    }

    /// Lowest degree in the support.
    pub fn min_degree(&self) -> Option<usize> {
        self.terms.keys().next().copied()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.terms.keys().copied()
    }

    /// `c_0, …, c_deg`.
    pub fn dense(&self) -> Vec<Elem<S>> {
        match self.degree() {
            None => Vec::new(),
            Some(n) => (0..=n).map(|i| self.coeff(i)).collect(),
        }
    }

    /// `f(x) / x^k`; requires the `k` lowest coefficients to vanish.
    pub fn shift_down(&self, k: usize) -> Result<Self> {
        if self.min_degree().is_some_and(|m| m < k) {
            return precondition(format!("x^{k} does not divide {self}"));
        }
        Ok(Polynomial {
            idyll: self.idyll.clone(),
            terms: self.terms.iter().map(|(i, c)| (i - k, c.clone())).collect(),
        })
    }

    /// `x^k f(x)`.
    pub fn shift_up(&self, k: usize) -> Self {
        Polynomial { idyll: self.idyll.clone(), terms: self.terms.iter().map(|(i, c)| (i + k, c.clone())).collect() }
    }

    /// Keeps only the listed degrees.
    pub fn restrict(&self, degrees: &[usize]) -> Self {
        Polynomial {
            idyll: self.idyll.clone(),
            terms: self.terms.iter().filter(|(i, _)| degrees.contains(i)).map(|(i, c)| (*i, c.clone())).collect(),
        }
    }

    /// The formal sum `Σ c_i a^i`, not collapsed.
    pub fn eval_sum(&self, a: &Elem<S>) -> Result<FormalSum<S>> {
        self.idyll.check(a)?;
        let mut out = Vec::with_capacity(self.terms.len());
        let mut power = self.idyll.one();
        let mut k = 0;
        for (i, c) in &self.terms {
            while k < *i {
                power = self.idyll.mul(&power, a)?;
                k += 1;
            }
            out.push(self.idyll.mul(c, &power)?);
        }
        Ok(FormalSum::new(out))
    }

    /// `f(cx)` for a unit `c`.
    pub fn monomial_substitute(&self, c: &Elem<S>) -> Result<Self> {
        if c.is_zero() {
            return precondition("monomial substitution by zero");
        }
        self.idyll.check(c)?;
        let terms = self
            .terms
            .iter()
            .map(|(i, b)| Ok((*i, self.idyll.mul(b, &self.idyll.pow(c, *i)?)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.idyll.clone(), terms)
    }

    /// `c · f(x)`.
    pub fn scale(&self, c: &Elem<S>) -> Result<Self> {
        let terms = self.terms.iter().map(|(i, b)| Ok((*i, self.idyll.mul(c, b)?))).collect::<Result<Vec<_>>>()?;
        Self::new(self.idyll.clone(), terms)
    }

    /// Applies `phi` coefficientwise, landing in `target`.
    pub fn map_coeffs(&self, target: Arc<Idyll<S>>, phi: impl Fn(&Elem<S>) -> Result<Elem<S>>) -> Result<Self> {
        let terms = self.terms.iter().map(|(i, c)| Ok((*i, phi(c)?))).collect::<Result<Vec<_>>>()?;
        Self::new(target, terms)
    }
}

/// Whether `f ≼ (x − a) g`, i.e. `c_i − d_{i−1} + a d_i` is null for every
/// `i` (coefficients padded with zeros).
pub fn factor_check<S: Scalar>(f: &Polynomial<S>, a: &Elem<S>, g: &Polynomial<S>) -> Result<bool> {
    if f.idyll() != g.idyll() {
        return structural(format!("{} and {} live over different idylls", f, g));
    }
    let b = f.idyll();
    b.check(a)?;
    let eps = b.epsilon()?;
    let top = f.degree().map_or(0, |n| n).max(g.degree().map_or(0, |m| m + 1));
    for i in 0..=top {
        let prev = if i == 0 { Elem::Zero } else { g.coeff(i - 1) };
        let s = FormalSum::new([f.coeff(i), b.mul(&eps, &prev)?, b.mul(a, &g.coeff(i))?]);
        if !b.is_null(&s)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The sign sequence of a rational polynomial as a polynomial over `S`.
pub fn sign_of_poly<S: Scalar>(f: &Polynomial<S>) -> Result<Polynomial<S>> {
    expect_rational(f)?;
    f.map_coeffs(Arc::new(Idyll::Sign), |c| Ok(sign_of_rational(rational(c))))
}

/// Coefficientwise `p`-adic valuation, landing in `T = K[Q]`.
pub fn trop_of_rational<S: Scalar>(f: &Polynomial<S>, p: u64) -> Result<Polynomial<S>> {
    expect_rational(f)?;
    f.map_coeffs(Arc::new(Idyll::tropical()), |c| Ok(Elem::ext(Elem::One, padic_valuation(rational(c), p)?)))
}

/// Coefficientwise `(sign, v_p)`, landing in `TR = S[Q]`.
pub fn trop_real_of_rational<S: Scalar>(f: &Polynomial<S>, p: u64) -> Result<Polynomial<S>> {
    expect_rational(f)?;
    f.map_coeffs(Arc::new(Idyll::tropical_real()), |c| {
        let q = rational(c);
        Ok(Elem::ext(sign_of_rational(q), padic_valuation(q, p)?))
    })
}

/// Rational polynomial from integer coefficients `c_0, c_1, …`.
pub fn rational_poly<S: Scalar>(coeffs: &[i64]) -> Polynomial<S> {
    let q = Arc::new(Idyll::Rationals);
    let terms =
        coeffs.iter().enumerate().map(|(i, &c)| (i, if c == 0 { Elem::Zero } else { Elem::Rat(S::from_int(c)) }));
    Polynomial::new(q, terms).expect("rational coefficients")
}

fn expect_rational<S: Scalar>(f: &Polynomial<S>) -> Result<()> {
    match **f.idyll() {
        Idyll::Rationals => Ok(()),
        _ => structural(format!("expected a polynomial over Q, got one over {}", f.idyll().name())),
    }
}

fn rational<S>(c: &Elem<S>) -> &S {
    match c {
        Elem::Rat(q) => q,
        _ => unreachable!("nonzero rational coefficient"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn sign(cs: &[i8]) -> Polynomial<Q> {
        let s = Arc::new(Idyll::Sign);
        Polynomial::from_coeffs(s, cs.iter().map(|&c| if c == 0 { Elem::Zero } else { Elem::Sign(c) }).collect())
            .unwrap()
    }

    fn krasner(support: &[usize]) -> Polynomial<Q> {
        Polynomial::new(Arc::new(Idyll::Krasner), support.iter().map(|&i| (i, Elem::One))).unwrap()
    }

    #[test]
    fn evaluation() {
        let f = sign(&[1, -1, 1]);
        let s = f.eval_sum(&Elem::Sign(-1)).unwrap();
        assert_eq!(s.terms(), &[Elem::Sign(1), Elem::Sign(1), Elem::Sign(1)]);
        let g = krasner(&[0, 1]);
        assert_eq!(g.eval_sum(&Elem::One).unwrap().len(), 2);
        let h = sign(&[1, 1]);
        assert!(Idyll::Sign.is_null(&h.eval_sum(&Elem::Sign(-1)).unwrap()).unwrap());
    }

    #[test]
    fn substitution() {
        assert_eq!(sign(&[1, 1, 1]).monomial_substitute(&Elem::Sign(-1)).unwrap(), sign(&[1, -1, 1]));
        let f = sign(&[1, 0, -1, 1]);
        assert_eq!(f.monomial_substitute(&Elem::Sign(1)).unwrap(), f);
        assert!(f.monomial_substitute(&Elem::Zero).is_err());
    }

    #[test]
    fn factorization_checks() {
        assert!(factor_check(&krasner(&[0, 3]), &Elem::One, &krasner(&[0, 1, 2])).unwrap());
        let f = sign(&[1, -1, 1, -1, -1, -1, 1]);
        let g = sign(&[1, -1, 1, -1, -1, 1]);
        assert!(factor_check(&f, &Elem::Sign(-1), &g).unwrap());
        assert!(!factor_check(&sign(&[1, 1]), &Elem::Sign(1), &sign(&[1])).unwrap());
    }

    #[test]
    fn purity() {
        let s = Arc::new(Idyll::<Q>::Sign);
        let err = Polynomial::new(s, [(1, Elem::Sign(1)), (1, Elem::Sign(1))]).unwrap_err();
        assert_eq!(err, Error::Purity(1));
    }

    #[test]
    fn rational_morphisms() {
        let f = rational_poly::<Q>(&[72, -6, -7, 1]);
        assert_eq!(sign_of_poly(&f).unwrap(), sign(&[1, -1, -1, 1]));
        let t2 = trop_of_rational(&f, 2).unwrap();
        let levels: Vec<String> = t2.dense().iter().map(|c| c.to_string()).collect();
        assert_eq!(levels, ["1^3", "1^1", "1^0", "1^0"]);
    }
}
