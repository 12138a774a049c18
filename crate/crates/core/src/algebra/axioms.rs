//! Axiom harness for idylls.
//!
//! Finite idylls are checked exhaustively; infinite catalog members are
//! checked on [`Idyll::sample_elements`].

use std::collections::BTreeSet;

use crate::algebra::{Elem, FormalSum, Idyll, SumSet};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Pool size used for sums over infinite idylls.
const SAMPLE_POOL: usize = 10;

/// All multisets of size `len` drawn from `pool` (as index-sorted vectors).
fn multisets<T: Clone>(pool: &[T], len: usize) -> Vec<Vec<T>> {
    fn go<T: Clone>(pool: &[T], start: usize, left: usize, cur: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..pool.len() {
            cur.push(pool[i].clone());
            go(pool, i, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(pool, 0, len, &mut Vec::new(), &mut out);
    out
}

/// Checks the group of units, existence and uniqueness of `ε`, properness of
/// the null ideal, its closure under sums and unit multiples (for sums of
/// length up to `max_len`), and consistency of sum sets with the null ideal.
/// Returns the list of violations; an empty list means pass.
pub fn check_idyll_axioms<S: Scalar>(b: &Idyll<S>, max_len: usize) -> Vec<String> {
    let mut out = Vec::new();
    if let Err(e) = run(b, max_len, &mut out) {
        out.push(format!("error: {e}"));
    }
    out
}

fn run<S: Scalar>(b: &Idyll<S>, max_len: usize, out: &mut Vec<String>) -> Result<()> {
    let finite = b.is_finite();
    let elems = b.sample_elements();
    let units: Vec<Elem<S>> = elems.iter().filter(|x| !x.is_zero()).cloned().collect();
    let one = b.one();

    if one.is_zero() {
        out.push("zero equals one".into());
    }

    // units form an abelian group, zero absorbs
    for x in &units {
        if b.mul(x, &Elem::Zero)? != Elem::Zero {
            out.push(format!("zero does not absorb {x}"));
        }
        if b.mul(&one, x)? != *x {
            out.push(format!("one is not neutral for {x}"));
        }
        match b.inv(x) {
            Ok(y) if b.mul(x, &y)? == one => {}
            _ => out.push(format!("{x} has no inverse")),
        }
        for y in &units {
            let xy = b.mul(x, y)?;
            if xy.is_zero() {
                out.push(format!("units not closed: {x}·{y} = 0"));
            }
            if xy != b.mul(y, x)? {
                out.push(format!("not commutative at ({x}, {y})"));
            }
            for z in units.iter().take(if finite { usize::MAX } else { 4 }) {
                if b.mul(&xy, z)? != b.mul(x, &b.mul(y, z)?)? {
                    out.push(format!("not associative at ({x}, {y}, {z})"));
                }
            }
        }
    }

    // ε
    let epsilon = match b.epsilon() {
        Ok(e) => Some(e),
        Err(Error::Structural(_)) => {
            out.push("no epsilon".into());
            None
        }
        Err(e) => return Err(e),
    };
    let is_eps = |e: &Elem<S>| -> Result<bool> {
        Ok(b.mul(e, e)? == one && b.is_null(&FormalSum::new([one.clone(), e.clone()]))?)
    };
    if let Some(eps) = &epsilon {
        if !is_eps(eps)? {
            out.push(format!("epsilon mismatch: {eps} fails ε² = 1 or 1 + ε null"));
        }
        for e in &units {
            if e != eps && is_eps(e)? {
                out.push(format!("epsilon not unique: {e} also qualifies"));
            }
        }
    }

    // properness
    if !b.is_null(&FormalSum::empty())? {
        out.push("empty sum is not null".into());
    }
    for x in &units {
        if b.is_null(&FormalSum::new([x.clone()]))? {
            out.push(format!("improper: singleton {x} is null"));
        }
    }

    // ideal closure
    let pool: Vec<Elem<S>> = if finite { units.clone() } else { units.iter().take(SAMPLE_POOL).cloned().collect() };
    let mut sums: Vec<(FormalSum<S>, bool)> = Vec::new();
    for len in 0..=max_len {
        for m in multisets(&pool, len) {
            let s = FormalSum::new(m);
            let null = b.is_null(&s)?;
            sums.push((s, null));
        }
    }
    for (s, null) in &sums {
        for x in &pool {
            let xs = FormalSum::new(s.terms().iter().map(|t| b.mul(x, t)).collect::<Result<Vec<_>>>()?);
            if b.is_null(&xs)? != *null {
                out.push(format!("ideal: nullity of {s} changes under multiplication by {x}"));
            }
        }
    }
    let nulls: Vec<&FormalSum<S>> = sums.iter().filter(|(_, n)| *n).map(|(s, _)| s).collect();
    for s in &nulls {
        for t in &nulls {
            if s.len() + t.len() <= max_len && !b.is_null(&s.plus(t))? {
                out.push(format!("ideal: ({s}) + ({t}) is not null"));
            }
        }
    }

    // sum sets agree with the null ideal
    if epsilon.is_some() {
        for x in &elems {
            for y in &elems {
                let set = match b.sum_set(x, y) {
                    Ok(s) => s,
                    Err(Error::Unsupported(_)) => continue,
                    Err(e) => return Err(e),
                };
                let found: BTreeSet<Elem<S>> = match (&set, finite) {
                    (SumSet::Finite(s), _) => s.clone(),
                    _ => BTreeSet::new(),
                };
                for c in &elems {
                    let member = match &set {
                        SumSet::Finite(_) => found.contains(c),
                        SumSet::Layered { .. } => set.contains_with(c, &b.valuation(c)?),
                    };
                    if member != b.in_sum(c, x, y)? {
                        out.push(format!("sum set {x} ⊞ {y} disagrees with the null ideal at {c}"));
                    }
                }
            }
        }
    }
    Ok(())
}
