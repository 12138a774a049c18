//! Explicit quotients for the Krasner and sign idylls and for `T`.

use super::lift_factorization;
use crate::algebra::{Elem, Idyll};
use crate::error::{precondition, structural, Result};
use crate::newton::initial_form_at;
use crate::poly::Polynomial;
use crate::scalar::Scalar;

/// `x^m + x^{m+1} + … + x^{n−1}` for `f` over `K` with lowest degree `m`
/// and degree `n > m`.
pub fn krasner_quotient<S: Scalar>(f: &Polynomial<S>) -> Result<Polynomial<S>> {
    if **f.idyll() != Idyll::Krasner {
        return structural(format!("{f} is not over the Krasner idyll"));
    }
    match (f.min_degree(), f.degree()) {
        (Some(m), Some(n)) if m < n => Polynomial::new(f.idyll().clone(), (m..n).map(|i| (i, Elem::One))),
        _ => precondition(format!("{f} has no root at 1")),
    }
}

fn signs<S: Scalar>(f: &Polynomial<S>) -> Result<(usize, Vec<i8>)> {
    if **f.idyll() != Idyll::Sign {
        return structural(format!("{f} is not over the sign idyll"));
    }
    let Some(m) = f.min_degree() else {
        return precondition("the zero polynomial");
    };
    let s = f.dense()[m..]
        .iter()
        .map(|c| match c {
            Elem::Sign(s) => *s,
            _ => 0,
        })
        .collect();
    Ok((m, s))
}

fn from_signs<S: Scalar>(f: &Polynomial<S>, m: usize, s: &[i8]) -> Result<Polynomial<S>> {
    let terms = s.iter().enumerate().filter(|(_, x)| **x != 0).map(|(i, x)| (i + m, Elem::Sign(*x)));
    Polynomial::new(f.idyll().clone(), terms)
}

fn no_gaps(s: &[i8]) -> Result<()> {
    if s.contains(&0) {
        return precondition("the rule needs a polynomial without intermediate zeros");
    }
    Ok(())
}

/// Quotient by `x + 1` over `S` for a polynomial without intermediate
/// zeros: with `i0` the first index where `s_{i0} = s_{i0+1}`, keep
/// `s_0, …, s_{i0}` and shift the rest down by one.
pub fn sign_negative_quotient<S: Scalar>(f: &Polynomial<S>) -> Result<Polynomial<S>> {
    let (m, s) = signs(f)?;
    no_gaps(&s)?;
    let Some(i0) = (0..s.len().saturating_sub(1)).find(|&i| s[i] == s[i + 1]) else {
        return precondition(format!("{f} has no root at −1"));
    };
    let q: Vec<i8> = (0..s.len() - 1).map(|i| if i <= i0 { s[i] } else { s[i + 1] }).collect();
    from_signs(f, m, &q)
}

/// Quotient by `x − 1` over `S` for a polynomial without intermediate
/// zeros: with `i0` the first index where `s_{i0} ≠ s_{i0+1}`, negate
/// `s_0, …, s_{i0}` and shift the rest down by one.
pub fn sign_positive_quotient<S: Scalar>(f: &Polynomial<S>) -> Result<Polynomial<S>> {
    let (m, s) = signs(f)?;
    no_gaps(&s)?;
    let Some(i0) = (0..s.len().saturating_sub(1)).find(|&i| s[i] != s[i + 1]) else {
        return precondition(format!("{f} has no root at 1"));
    };
    let q: Vec<i8> = (0..s.len() - 1).map(|i| if i <= i0 { -s[i] } else { s[i + 1] }).collect();
    from_signs(f, m, &q)
}

/// Quotient by `x − 1` over `S`, intermediate zeros allowed: `−s_0` up to
/// the first sign change `k`, then `s_{j(i)}` with `j(i)` the next nonzero
/// index after `i`.
pub fn sign_positive_quotient_general<S: Scalar>(f: &Polynomial<S>) -> Result<Polynomial<S>> {
    let (m, s) = signs(f)?;
    let Some(k) = s.iter().position(|x| *x == -s[0]) else {
        return precondition(format!("{f} has no root at 1"));
    };
    let next = |i: usize| s[i + 1..].iter().copied().find(|x| *x != 0).unwrap();
    let q: Vec<i8> = (0..s.len() - 1).map(|i| if i < k { -s[0] } else { next(i) }).collect();
    from_signs(f, m, &q)
}

/// Quotient by `x − a` over a tropical extension with Krasner base: the
/// support-width quotient of the initial form, lifted.
pub fn tropical_quotient<S: Scalar>(f: &Polynomial<S>, a: &Elem<S>) -> Result<Polynomial<S>> {
    let n = initial_form_at(f, a)?.to_base()?;
    let g = krasner_quotient(&n)?;
    lift_factorization(f, a, &g)
}
