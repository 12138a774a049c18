//! Lifting a factorization of the initial form to the extension.

use std::sync::Arc;

use super::{expect_extension, multiplicity, FactorizationChain};
use crate::algebra::{Elem, Idyll};
use crate::error::{precondition, Error, Result};
use crate::extension::Extension;
use crate::newton::initial_form_at;
use crate::oag::OagValue;
use crate::poly::{factor_check, Polynomial};
use crate::scalar::Scalar;

fn level_of<S: Scalar>(e: &Extension<S>, x: &Elem<S>) -> OagValue<S> {
    e.valuation(x)
}

/// `D_r ∈ D_{r−1} − F_r`, the first element in the canonical order.
fn staircase<S: Scalar>(c: &Idyll<S>, prev: &Elem<S>, fr: &Elem<S>) -> Result<Elem<S>> {
    let eps = c.epsilon()?;
    let set = c.sum_set(&c.mul(&eps, fr)?, prev)?;
    set.first().ok_or_else(|| Error::Precondition(format!("{prev} − {fr} is empty")))
}

/// Given `N = In_a f` (normalized to the base) and `g` over the base with
/// `N ≼ (x − 1) g`, builds `g̃` over the extension with `f ≼ (x − a) g̃`
/// and `In_a g̃ = g`.
///
/// After the substitution `F = c⁻¹ f(ax)` the coefficients of level zero
/// occupy `[i0, i1]`. On `[i0, i1)` the quotient is `g` itself; to the left
/// each `D_r` is taken from `D_{r−1} − F_r`, and to the right the quotient
/// is divided out from the top, `D_r ∈ F_{r+1} + D_{r+1}`. Runs of zeros of
/// `g` inside `[i0, i1)` that fall over a positive-level coefficient are
/// refilled by the left rule. Every free choice takes the first element of
/// the sum set.
pub fn lift_factorization<S: Scalar>(f: &Polynomial<S>, a: &Elem<S>, g: &Polynomial<S>) -> Result<Polynomial<S>> {
    let e = expect_extension(f)?;
    if !e.base.is_whole() {
        return precondition(format!("lifting needs a whole base; {} is not", e.base.name()));
    }
    if f.is_zero() || a.is_zero() {
        return precondition("lifting needs a nonzero polynomial and a nonzero root");
    }
    let c_idyll = f.idyll().clone();
    let cc = &*c_idyll;
    cc.check(a)?;
    if **g.idyll() != *e.base {
        return Err(Error::Structural(format!("{g} is not over {}", e.base.name())));
    }
    let init = initial_form_at(f, a)?;
    let n_poly = init.to_base()?;
    let base_one = e.base.one();
    if !factor_check(&n_poly, &base_one, g)? {
        return precondition(format!("{n_poly} ≼ (x − 1)({g}) fails"));
    }
    let c = e.unit_at(init.level.clone());
    let big = f.monomial_substitute(a)?.scale(&cc.inv(&c)?)?;
    let fc = big.dense();
    let n = fc.len() - 1;
    let zero = OagValue::zero(e.rank);
    let lev: Vec<OagValue<S>> = fc.iter().map(|x| level_of(e, x)).collect();
    let i0 = (0..=n).find(|i| lev[*i] == zero).unwrap();
    let i1 = (0..=n).rev().find(|i| lev[*i] == zero).unwrap();

    let mut d = vec![Elem::Zero; n];
    let prev = |d: &Vec<Elem<S>>, r: usize| if r == 0 { Elem::Zero } else { d[r - 1].clone() };
    for r in 0..i0 {
        d[r] = staircase(cc, &prev(&d, r), &fc[r])?;
    }
    let eps = cc.epsilon()?;
    for r in i0..i1 {
        d[r] = e.embed(&g.coeff(r));
        if d[r].is_zero() {
            let terms = [fc[r].clone(), cc.mul(&eps, &prev(&d, r))?];
            if !cc.is_null(&crate::algebra::FormalSum::new(terms))? {
                d[r] = staircase(cc, &prev(&d, r), &fc[r])?;
            }
        }
    }
    for r in (i1..n).rev() {
        let above = if r + 1 == n { Elem::Zero } else { d[r + 1].clone() };
        let set = cc.sum_set(&fc[r + 1], &above)?;
        d[r] = set.first().ok_or_else(|| Error::Precondition(format!("{} + {above} is empty", fc[r + 1])))?;
    }

    let big_g = Polynomial::from_coeffs(c_idyll.clone(), d)?;
    let ai = cc.inv(a)?;
    let lifted = big_g.monomial_substitute(&ai)?.scale(&cc.mul(&ai, &c)?)?;
    if !factor_check(f, a, &lifted)? {
        return Err(Error::Mismatch(format!("lifted quotient {lifted} does not divide {f}")));
    }
    let back = initial_form_at(&lifted, a)?.normalize(&cc.mul(&c, &ai)?)?;
    if back != *g {
        return Err(Error::Mismatch(format!("initial form of the lift is {back}, not {g}")));
    }
    Ok(lifted)
}

/// Repeatedly lifts an optimal base quotient of the current initial form,
/// giving a chain of length `mult_a(f)`.
pub fn lift_chain<S: Scalar>(f: &Polynomial<S>, a: &Elem<S>) -> Result<FactorizationChain<S>> {
    let e = expect_extension(f)?;
    let base = Arc::clone(&e.base);
    let mut cur = f.clone();
    let mut quotients = Vec::new();
    loop {
        let n = initial_form_at(&cur, a)?.to_base()?;
        debug_assert!(*n.idyll() == base);
        let (m, chain) = multiplicity(&n, &base.one())?;
        if m == 0 {
            break;
        }
        let next = lift_factorization(&cur, a, &chain.quotients[0])?;
        quotients.push(next.clone());
        cur = next;
    }
    Ok(FactorizationChain { root: a.clone(), quotients })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mult::multiplicity;
    use crate::text::{parse_elem, parse_poly};
    use num_rational::BigRational;

    type Q = BigRational;

    fn poly(name: &str, text: &str) -> Polynomial<Q> {
        parse_poly(text, Arc::new(Idyll::from_name(name).unwrap())).unwrap()
    }

    #[test]
    fn lifts_tropical_quotient() {
        let f = poly("trop", "2 + 1*x + 0*x^2 + 0*x^3");
        let a = parse_elem("1", f.idyll()).unwrap();
        let g = poly("krasner", "1 + x");
        let lifted = lift_factorization(&f, &a, &g).unwrap();
        assert!(factor_check(&f, &a, &lifted).unwrap());
        let chain = lift_chain(&f, &a).unwrap();
        assert_eq!(chain.len(), 2);
        assert!(chain.verify(&f).unwrap());
    }

    #[test]
    fn lifts_catalan() {
        let f = poly("trop-real", "1 - x + 1^1*x^2");
        for at in ["1", "1^-1"] {
            let a = parse_elem(at, f.idyll()).unwrap();
            let chain = lift_chain(&f, &a).unwrap();
            assert_eq!(chain.len(), 1);
            assert!(chain.verify(&f).unwrap());
        }
    }

    #[test]
    fn middle_zero_run_over_positive_level() {
        let f = poly("trop", "0 + 0*x + 1*x^2 + 0*x^3 + 0*x^4");
        let a = parse_elem("0", f.idyll()).unwrap();
        let n = initial_form_at(&f, &a).unwrap().to_base().unwrap();
        assert_eq!(n, poly("krasner", "1 + x + x^3 + x^4"));
        let g = poly("krasner", "1 + x^3");
        assert!(factor_check(&n, &Elem::One, &g).unwrap());
        let lifted = lift_factorization(&f, &a, &g).unwrap();
        assert!(factor_check(&f, &a, &lifted).unwrap());
    }

    #[test]
    fn rank_two_chain() {
        let f = poly("trop:rank-2", "(3,3) + (2,2)*x + (1,1)*x^2 + (0,1)*x^3 + (0,0)*x^4");
        let a = parse_elem("(1,1)", f.idyll()).unwrap();
        let chain = lift_chain(&f, &a).unwrap();
        assert_eq!(chain.len(), multiplicity(&f, &a).unwrap().0);
        assert!(chain.verify(&f).unwrap());
    }

    #[test]
    fn rejects_non_quotients() {
        let f = poly("trop", "2 + 1*x + 0*x^2 + 0*x^3");
        let a = parse_elem("1", f.idyll()).unwrap();
        let g = poly("krasner", "x^2");
        assert!(matches!(lift_factorization(&f, &a, &g), Err(Error::Precondition(_))));
    }
}
