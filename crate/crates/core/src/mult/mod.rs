//! Roots and multiplicities: factorization search, closed forms, lifting
//! of factorizations along tropical extensions, and the degree bound.

pub mod lift;
pub mod rules;
mod search;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::algebra::{Elem, Idyll};
use crate::error::{precondition, structural, unsupported, Error, Result};
use crate::extension::{oag_to_tropical, tropical_to_oag, Extension};
use crate::newton::{initial_form_at, initial_form_head, newton_polygon, NewtonPolygon};
use crate::oag::OagValue;
use crate::poly::Polynomial;
use crate::scalar::Scalar;
use crate::text::{format_elem, poly_to_json};

pub use lift::{lift_chain, lift_factorization};

use search::Searcher;

/// Default node budget of the factorization search.
pub const DEFAULT_SEARCH_CAP: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Search,
    Closed,
    /// Runs both and fails on disagreement.
    Both,
}

impl FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "search" => Ok(Engine::Search),
            "closed" => Ok(Engine::Closed),
            "both" => Ok(Engine::Both),
            _ => Err(Error::Parse { pos: 0, msg: format!("unknown engine '{s}'") }),
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Search => "search",
            Engine::Closed => "closed",
            Engine::Both => "both",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub cap: usize,
}

impl SearchConfig {
    pub fn with_cap(cap: usize) -> Self {
        SearchConfig { cap }
    }

    /// The cap from `IDYLL_SEARCH_CAP`, or the default.
    pub fn from_env() -> Self {
        let cap = std::env::var("IDYLL_SEARCH_CAP").ok().and_then(|v| v.trim().parse().ok());
        SearchConfig { cap: cap.unwrap_or(DEFAULT_SEARCH_CAP) }
    }
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self::from_env()
    }
}

/// `f ≼ (x − a) g_0`, `g_0 ≼ (x − a) g_1`, ….
#[derive(Debug, Clone, PartialEq)]
pub struct FactorizationChain<S: Scalar> {
    pub root: Elem<S>,
    pub quotients: Vec<Polynomial<S>>,
}

impl<S: Scalar> FactorizationChain<S> {
    pub fn len(&self) -> usize {
        self.quotients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quotients.is_empty()
    }

    /// Checks every link with `factor_check` and the degree pattern.
    pub fn verify(&self, f: &Polynomial<S>) -> Result<bool> {
        let mut prev = f;
        for g in &self.quotients {
            let deg_ok = match (prev.degree(), g.degree()) {
                (Some(n), Some(m)) => m + 1 == n,
                _ => false,
            };
            if !deg_ok || !crate::poly::factor_check(prev, &self.root, g)? {
                return Ok(false);
            }
            prev = g;
        }
        Ok(true)
    }

    pub fn to_json(&self, f: &Polynomial<S>) -> Value {
        json!({
            "idyll": f.idyll().name(),
            "polynomial": poly_to_json(f),
            "root": format_elem(&self.root, f.idyll()),
            "multiplicity": self.len(),
            "quotients": self.quotients.iter().map(poly_to_json).collect::<Vec<_>>(),
        })
    }
}

fn nonzero<S: Scalar>(f: &Polynomial<S>) -> Result<()> {
    if f.is_zero() {
        return precondition("the zero polynomial has every element as a root");
    }
    Ok(())
}

/// Whether `a` is a root of `f`.
pub fn is_root<S: Scalar>(f: &Polynomial<S>, a: &Elem<S>) -> Result<bool> {
    let b = f.idyll();
    b.check(a)?;
    if a.is_zero() {
        return Ok(f.coeff(0).is_zero());
    }
    if b.is_pasture_backed() {
        return b.is_null(&f.eval_sum(a)?);
    }
    Ok(!divide_once(f, a)?.is_empty())
}

fn with_krasner_ext<S: Scalar>(f: &Polynomial<S>, a: &Elem<S>) -> Result<Option<(Polynomial<S>, Elem<S>)>> {
    match f.idyll().oag_as_extension() {
        Some(c) => {
            let g = f.map_coeffs(Arc::new(c), oag_to_tropical)?;
            Ok(Some((g, oag_to_tropical(a)?)))
        }
        None => Ok(None),
    }
}

fn back_to_oag<S: Scalar>(target: &Arc<Idyll<S>>, g: &Polynomial<S>) -> Result<Polynomial<S>> {
    g.map_coeffs(target.clone(), tropical_to_oag)
}

/// `g(x) ↦ a^{-k} g(a^{-1} x)`, undoing the substitution `x ↦ ax` for the
/// `k`-th quotient of a chain.
fn unsubstitute<S: Scalar>(g: &Polynomial<S>, a: &Elem<S>, k: usize) -> Result<Polynomial<S>> {
    let c = g.idyll();
    let ai = c.inv(a)?;
    let scaled = g.monomial_substitute(&ai)?;
    scaled.scale(&c.pow(&ai, k)?)
}

/// Every quotient `g` with `f ≼ (x − a) g`.
///
/// Over a tropical extension the quotient set is usually infinite; the
/// quotients returned are those whose levels (after the substitution
/// `x ↦ ax`) lie on the grid of levels of `f(ax)`, their midpoints and one
/// level above the top.
pub fn divide_once<S: Scalar>(f: &Polynomial<S>, a: &Elem<S>) -> Result<Vec<Polynomial<S>>> {
    nonzero(f)?;
    let b = f.idyll();
    b.check(a)?;
    let cap = SearchConfig::from_env().cap;
    if let Some((g, at)) = with_krasner_ext(f, a)? {
        return divide_once(&g, &at)?.iter().map(|q| back_to_oag(b, q)).collect();
    }
    if a.is_zero() || !matches!(**b, Idyll::Extension(_)) {
        let mut s = Searcher::plain(b.clone(), a.clone(), cap)?;
        return s.quotients(f);
    }
    let big = f.monomial_substitute(a)?;
    let mut s = Searcher::graded(b.clone(), cap)?;
    s.quotients(&big)?.iter().map(|q| unsubstitute(q, a, 1)).collect()
}

/// The multiplicity of `a` as a root of `f` together with a witness chain,
/// using the cap from the environment.
pub fn multiplicity<S: Scalar>(f: &Polynomial<S>, a: &Elem<S>) -> Result<(usize, FactorizationChain<S>)> {
    multiplicity_with(f, a, &SearchConfig::from_env())
}

pub fn multiplicity_with<S: Scalar>(
    f: &Polynomial<S>,
    a: &Elem<S>,
    cfg: &SearchConfig,
) -> Result<(usize, FactorizationChain<S>)> {
    let (m, chain, _) = run_search(f, a, cfg.cap, false)?;
    Ok((m, chain))
}

/// The longest chain found within `cap` nodes; the flag says whether the
/// search ran to completion (so that the count is exact).
pub fn search_lower_bound<S: Scalar>(f: &Polynomial<S>, a: &Elem<S>, cap: usize) -> Result<(usize, bool)> {
    let (m, _, exact) = run_search(f, a, cap, true)?;
    Ok((m, exact))
}

fn run_search<S: Scalar>(
    f: &Polynomial<S>,
    a: &Elem<S>,
    cap: usize,
    truncate: bool,
) -> Result<(usize, FactorizationChain<S>, bool)> {
    nonzero(f)?;
    let b = f.idyll();
    b.check(a)?;
    if a.is_zero() {
        let m = f.min_degree().unwrap_or(0);
        let quotients = (1..=m).map(|k| f.shift_down(k)).collect::<Result<Vec<_>>>()?;
        return Ok((m, FactorizationChain { root: a.clone(), quotients }, true));
    }
    if let Some((g, at)) = with_krasner_ext(f, a)? {
        let (m, chain, exact) = run_search(&g, &at, cap, truncate)?;
        let quotients = chain.quotients.iter().map(|q| back_to_oag(b, q)).collect::<Result<_>>()?;
        return Ok((m, FactorizationChain { root: a.clone(), quotients }, exact));
    }
    let graded = matches!(**b, Idyll::Extension(_));
    let (mut s, p) = if graded {
        (Searcher::graded(b.clone(), cap)?, f.monomial_substitute(a)?)
    } else {
        (Searcher::plain(b.clone(), a.clone(), cap)?, f.clone())
    };
    if truncate {
        s = s.truncating();
    }
    let (m, raw) = s.chain(&p)?;
    let quotients = if graded {
        raw.iter().enumerate().map(|(k, q)| unsubstitute(q, a, k + 1)).collect::<Result<_>>()?
    } else {
        raw
    };
    Ok((m, FactorizationChain { root: a.clone(), quotients }, !s.truncated))
}

fn sign_changes(signs: impl Iterator<Item = i8>) -> usize {
    let mut prev = 0i8;
    let mut n = 0;
    for s in signs.filter(|s| *s != 0) {
        if prev != 0 && s != prev {
            n += 1;
        }
        prev = s;
    }
    n
}

fn sign_of<S>(x: &Elem<S>) -> i8 {
    match x {
        Elem::Sign(s) => *s,
        _ => 0,
    }
}

/// The multiplicity by closed-form rules: support width over `K`, sign
/// changes over `S`, edge widths over `T`, and the initial form for other
/// tropical extensions (one head coordinate at a time for split extensions
/// of higher rank).
pub fn mult_closed_form<S: Scalar>(f: &Polynomial<S>, a: &Elem<S>) -> Result<usize> {
    nonzero(f)?;
    let b = f.idyll();
    b.check(a)?;
    if a.is_zero() {
        return Ok(f.min_degree().unwrap_or(0));
    }
    if let Some((g, at)) = with_krasner_ext(f, a)? {
        return mult_closed_form(&g, &at);
    }
    match &**b {
        Idyll::Krasner => Ok(f.degree().unwrap() - f.min_degree().unwrap()),
        Idyll::Sign => {
            let s = sign_of(a);
            Ok(sign_changes(f.terms().iter().map(|(i, c)| sign_of(c) * if i % 2 == 1 { s } else { 1 })))
        }
        Idyll::Extension(e) => extension_closed_form(e, f, a),
        _ => unsupported(format!("no closed-form multiplicity over {}", b.name())),
    }
}

fn extension_closed_form<S: Scalar>(e: &Extension<S>, f: &Polynomial<S>, a: &Elem<S>) -> Result<usize> {
    if e.rank == 1 && *e.base == Idyll::Krasner && e.is_split() {
        let gamma = e.valuation(a);
        let slope = -gamma.coords().unwrap()[0].clone();
        return Ok(newton_polygon(f)?.edge_width(&slope));
    }
    if e.rank >= 2 && e.is_split() {
        let big = f.monomial_substitute(a)?;
        let head = initial_form_head(&big, &S::zero())?;
        let inner = head.idyll().clone();
        let one = inner.one();
        return mult_closed_form(&head, &one);
    }
    let n = initial_form_at(f, a)?.to_base()?;
    mult_closed_form(&n, &e.base.one())
}

pub fn mult_with_engine<S: Scalar>(f: &Polynomial<S>, a: &Elem<S>, engine: Engine) -> Result<usize> {
    match engine {
        Engine::Search => Ok(multiplicity(f, a)?.0),
        Engine::Closed => mult_closed_form(f, a),
        Engine::Both => {
            let s = multiplicity(f, a)?.0;
            let c = mult_closed_form(f, a)?;
            if s != c {
                return Err(Error::Mismatch(format!(
                    "search gives {s} and the closed form gives {c} for {f} at {}",
                    format_elem(a, f.idyll())
                )));
            }
            Ok(s)
        }
    }
}

/// Levels `γ` at which the minimum of `v(c_i) + iγ` is attained at least
/// twice, found one coordinate at a time.
fn candidate_levels<S: Scalar>(points: &[(usize, Vec<S>)]) -> Result<Vec<Vec<S>>> {
    if points.len() < 2 {
        return Ok(Vec::new());
    }
    if points[0].1.is_empty() {
        return Ok(vec![Vec::new()]);
    }
    let np = NewtonPolygon::from_points(points.iter().map(|(i, v)| (*i, v[0].clone())).collect())?;
    let mut out = Vec::new();
    for slope in np.slopes() {
        let g = -slope;
        let w = |i: usize, v: &[S]| v[0].clone() + g.clone() * S::from_int(i as i64);
        let min = points.iter().map(|(i, v)| w(*i, v)).min().unwrap();
        let tail: Vec<_> = points.iter().filter(|(i, v)| w(*i, v) == min).map(|(i, v)| (*i, v[1..].to_vec())).collect();
        for mut rest in candidate_levels(&tail)? {
            rest.insert(0, g.clone());
            out.push(rest);
        }
    }
    Ok(out)
}

/// A finite set containing every root of `f`: zero when the constant term
/// vanishes, plus all units of a finite idyll, or for an extension with a
/// finite base every `u^γ` with `γ` on a Newton polygon edge.
pub fn root_candidates<S: Scalar>(f: &Polynomial<S>) -> Result<Vec<Elem<S>>> {
    nonzero(f)?;
    let b = f.idyll();
    if let Some(c) = b.oag_as_extension() {
        let g = f.map_coeffs(Arc::new(c), oag_to_tropical)?;
        return root_candidates(&g)?.iter().map(tropical_to_oag).collect();
    }
    let mut out = Vec::new();
    if f.coeff(0).is_zero() {
        out.push(Elem::Zero);
    }
    if let Some(units) = b.units() {
        out.extend(units);
        return Ok(out);
    }
    let Idyll::Extension(e) = &**b else {
        return unsupported(format!("root candidates over {}", b.name()));
    };
    let Some(units) = e.base.units() else {
        return unsupported(format!("root candidates over {}: infinite base", b.name()));
    };
    let points = f
        .terms()
        .iter()
        .map(|(i, c)| {
            Ok((*i, e.valuation(c).coords().map(|x| x.to_vec()).ok_or(Error::Structural("zero term".into()))?))
        })
        .collect::<Result<Vec<_>>>()?;
    let levels: BTreeSet<Vec<S>> = candidate_levels(&points)?.into_iter().collect();
    for l in levels {
        for u in &units {
            out.push(Elem::ext(u.clone(), OagValue::Finite(l.clone())));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegreeBoundReport<S: Scalar> {
    pub sum: usize,
    pub degree: usize,
    pub pass: bool,
    /// Candidates with nonzero multiplicity.
    pub roots: Vec<(Elem<S>, usize)>,
}

impl<S: Scalar> DegreeBoundReport<S> {
    pub fn to_json(&self, idyll: &Idyll<S>) -> Value {
        json!({
            "sum": self.sum,
            "degree": self.degree,
            "pass": self.pass,
            "roots": self.roots.iter().map(|(a, m)| json!({"root": format_elem(a, idyll), "multiplicity": m})).collect::<Vec<_>>(),
        })
    }
}

/// `Σ_a mult_a(f) ≤ deg f` over the root candidates of `f`.
pub fn degree_bound_check<S: Scalar>(f: &Polynomial<S>, engine: Engine) -> Result<DegreeBoundReport<S>> {
    let degree = f.degree().ok_or_else(|| Error::Precondition("degree of the zero polynomial".into()))?;
    let mut roots = Vec::new();
    let mut sum = 0;
    for a in root_candidates(f)? {
        let m = mult_with_engine(f, &a, engine)?;
        if m > 0 {
            sum += m;
            roots.push((a, m));
        }
    }
    Ok(DegreeBoundReport { sum, degree, pass: sum <= degree, roots })
}

pub(crate) fn expect_extension<S: Scalar>(f: &Polynomial<S>) -> Result<&Extension<S>> {
    match f.idyll().as_extension() {
        Some(e) => Ok(e),
        None => structural(format!("{} is not a tropical extension", f.idyll().name())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::{parse_elem, parse_poly};
    use num_rational::BigRational;

    type Q = BigRational;

    fn poly(name: &str, text: &str) -> Polynomial<Q> {
        parse_poly(text, Arc::new(Idyll::from_name(name).unwrap())).unwrap()
    }

    fn elem(f: &Polynomial<Q>, text: &str) -> Elem<Q> {
        parse_elem(text, f.idyll()).unwrap()
    }

    fn both(f: &Polynomial<Q>, a: &str) -> usize {
        let a = elem(f, a);
        let (m, chain) = multiplicity(f, &a).unwrap();
        assert!(chain.verify(f).unwrap(), "chain for {f}");
        assert_eq!(chain.len(), m);
        assert_eq!(mult_closed_form(f, &a).unwrap(), m, "{f}");
        m
    }

    #[test]
    fn descartes_signs() {
        let f = poly("sign", "1 - x - x^2 + x^3");
        assert_eq!(both(&f, "1"), 2);
        assert_eq!(both(&f, "-1"), 1);
    }

    #[test]
    fn tropical_double_root() {
        let f = poly("trop", "2 + 1*x + 0*x^2 + 0*x^3");
        assert_eq!(both(&f, "1"), 2);
        assert_eq!(both(&f, "0"), 1);
        assert_eq!(both(&f, "2"), 0);
        let qs = divide_once(&f, &elem(&f, "1")).unwrap();
        assert!(qs.contains(&poly("trop", "1 + 0*x + 0*x^2")));
    }

    #[test]
    fn krasner_width() {
        let f = poly("krasner", "x^2 + x^5");
        assert_eq!(both(&f, "1"), 3);
        assert_eq!(multiplicity(&f, &Elem::Zero).unwrap().0, 2);
        assert!(divide_once(&poly("krasner", "1 + x^3"), &Elem::One)
            .unwrap()
            .contains(&poly("krasner", "1 + x + x^2")));
    }

    #[test]
    fn sign_without_positive_root() {
        let f = poly("sign", "1 + x");
        assert!(divide_once(&f, &Elem::Sign(1)).unwrap().is_empty());
        assert!(!is_root(&f, &Elem::Sign(1)).unwrap());
        assert!(is_root(&f, &Elem::Sign(-1)).unwrap());
    }

    #[test]
    fn catalan_roots() {
        let f = poly("trop-real", "1 - x + 1^1*x^2");
        assert_eq!(both(&f, "1"), 1);
        assert_eq!(both(&f, "1^-1"), 1);
        assert_eq!(both(&f, "-1"), 0);
    }

    #[test]
    fn rank_two_example() {
        let f = poly("trop:rank-2", "(3,3) + (2,2)*x + (1,1)*x^2 + (0,1)*x^3 + (0,0)*x^4");
        assert_eq!(both(&f, "(1,1)"), 2);
        let g = poly("oag:rank-2", "(3,3) + (2,2)*x + (1,1)*x^2 + (0,1)*x^3 + (0,0)*x^4");
        assert_eq!(both(&g, "(1,1)"), 2);
    }

    #[test]
    fn candidates_and_degree_bound() {
        let f = poly("trop", "2 + 1*x + 0*x^2 + 0*x^3 + 2*x^4 + 1*x^5");
        let r = degree_bound_check(&f, Engine::Both).unwrap();
        assert_eq!((r.sum, r.degree, r.pass), (5, 5, true));
        let g = poly("trop", "3 + 1*x + 0*x^2 + 0*x^3");
        let levels: Vec<_> = root_candidates(&g).unwrap().iter().map(|a| a.to_string()).collect();
        assert_eq!(levels.len(), 3);
        let k = poly("krasner", "x + x^2");
        let r = degree_bound_check(&k, Engine::Both).unwrap();
        assert_eq!((r.sum, r.pass), (2, true));
    }

    #[test]
    fn rationals_divide_exactly() {
        let f = crate::poly::rational_poly::<Q>(&[72, -6, -7, 1]);
        let at = |n: i64| multiplicity(&f, &Elem::Rat(Q::from_int(n))).unwrap().0;
        assert_eq!((at(-3), at(4), at(6), at(3)), (1, 1, 1, 0));
        let sq = crate::poly::rational_poly::<Q>(&[9, -6, 1]);
        assert_eq!(multiplicity(&sq, &Elem::Rat(Q::from_int(3))).unwrap().0, 2);
    }

    #[test]
    fn cap_is_reported() {
        let f = poly("trop-real", "1 - x + x^2 - x^3 + x^4 - x^5");
        let err = multiplicity_with(&f, &elem(&f, "1"), &SearchConfig::with_cap(3)).unwrap_err();
        assert_eq!(err, Error::Resource { cap: 3 });
        let (m, exact) = search_lower_bound(&f, &elem(&f, "1"), 3).unwrap();
        assert!(!exact && m <= 5);
    }
}
