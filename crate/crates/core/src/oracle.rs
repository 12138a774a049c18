//! Brute-force reference implementations. They only use `factor_check`
//! and the null test, never sum sets, so they are independent of the
//! search in [`crate::mult`].

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use rand::SeedableRng;
use serde_json::{json, Value};

use crate::algebra::{Elem, FormalSum, Idyll};
use crate::error::{precondition, unsupported, Error, Result};
use crate::gen::{random_poly, GenConfig};
use crate::mult::{mult_closed_form, multiplicity, root_candidates};
use crate::oag::OagValue;
use crate::poly::{factor_check, Polynomial};
use crate::scalar::Scalar;
use crate::text::{format_elem, parse_elem, parse_poly};

/// Largest number of coefficient vectors enumerated per division.
pub const ENUMERATION_LIMIT: usize = 2_000_000;

pub const DEFAULT_MAX_DEGREE: usize = 7;

fn finite_elements<S: Scalar>(f: &Polynomial<S>) -> Result<Vec<Elem<S>>> {
    match f.idyll().elements() {
        Some(e) => Ok(e),
        None => unsupported(format!("{} is not finite", f.idyll().name())),
    }
}

fn all_quotients<S: Scalar>(f: &Polynomial<S>, a: &Elem<S>, elems: &[Elem<S>]) -> Result<Vec<Polynomial<S>>> {
    let Some(n) = f.degree() else {
        return precondition("the zero polynomial");
    };
    if n == 0 {
        return Ok(Vec::new());
    }
    let total = (elems.len() as f64).powi(n as i32);
    if total > ENUMERATION_LIMIT as f64 {
        return Err(Error::Resource { cap: ENUMERATION_LIMIT });
    }
    let mut idx = vec![0usize; n];
    let mut out = Vec::new();
    loop {
        if !elems[idx[n - 1]].is_zero() {
            let g = Polynomial::from_coeffs(f.idyll().clone(), idx.iter().map(|k| elems[*k].clone()).collect())?;
            if factor_check(f, a, &g)? {
                out.push(g);
            }
        }
        let mut k = 0;
        loop {
            if k == n {
                return Ok(out);
            }
            idx[k] += 1;
            if idx[k] < elems.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// The multiplicity by enumerating every candidate quotient of every
/// degree-`deg f − 1` coefficient vector.
pub fn exhaustive_multiplicity<S: Scalar>(f: &Polynomial<S>, a: &Elem<S>) -> Result<usize> {
    exhaustive_multiplicity_bounded(f, a, DEFAULT_MAX_DEGREE)
}

pub fn exhaustive_multiplicity_bounded<S: Scalar>(f: &Polynomial<S>, a: &Elem<S>, max_degree: usize) -> Result<usize> {
    let elems = finite_elements(f)?;
    if f.degree().unwrap_or(0) > max_degree {
        return precondition(format!("degree above the oracle bound {max_degree}"));
    }
    let mut memo = HashMap::new();
    exhaustive_rec(f, a, &elems, &mut memo)
}

fn exhaustive_rec<S: Scalar>(
    f: &Polynomial<S>,
    a: &Elem<S>,
    elems: &[Elem<S>],
    memo: &mut HashMap<Polynomial<S>, usize>,
) -> Result<usize> {
    if let Some(m) = memo.get(f) {
        return Ok(*m);
    }
    let mut best = 0;
    for g in all_quotients(f, a, elems)? {
        best = best.max(1 + exhaustive_rec(&g, a, elems, memo)?);
    }
    memo.insert(f.clone(), best);
    Ok(best)
}

/// Every element `a` (zero included) with some `g`, `f ≼ (x − a) g`.
pub fn exhaustive_root_set<S: Scalar>(f: &Polynomial<S>) -> Result<Vec<Elem<S>>> {
    let elems = finite_elements(f)?;
    let mut out = Vec::new();
    for a in &elems {
        if !all_quotients(f, a, &elems)?.is_empty() {
            out.push(a.clone());
        }
    }
    Ok(out)
}

/// Outcome of the grid oracle: exact on the grid, or a refinement of the
/// grid changed the answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridVerdict {
    Exact(usize),
    Inconclusive { coarse: usize, refined: usize },
}

struct GridOracle<S: Scalar> {
    idyll: Arc<Idyll<S>>,
    units: Vec<Elem<S>>,
    rank: usize,
    eps: Elem<S>,
    refine: bool,
    memo: HashMap<Polynomial<S>, usize>,
    nodes: usize,
}

fn midpoint<S: Scalar>(x: &OagValue<S>, y: &OagValue<S>) -> OagValue<S> {
    let (a, b) = (x.coords().unwrap(), y.coords().unwrap());
    OagValue::Finite(a.iter().zip(b).map(|(p, q)| (p.clone() + q.clone()) / S::from_int(2)).collect())
}

impl<S: Scalar> GridOracle<S> {
    /// `v(c_j) + k v(a)` for all coefficients and `|k| ≤ deg f`, then
    /// midpoints of neighbours and one step past the top (twice over when
    /// refining).
    fn grid(&self, f: &Polynomial<S>, a: &Elem<S>) -> Result<Vec<OagValue<S>>> {
        let va = self.idyll.valuation(a)?;
        let n = f.degree().unwrap_or(0) as i64;
        let mut set = BTreeSet::new();
        for c in f.terms().values() {
            let vc = self.idyll.valuation(c)?;
            for k in -n..=n {
                set.insert(vc.add(&va.times(k))?);
            }
        }
        let rounds = if self.refine { 2 } else { 1 };
        for _ in 0..rounds {
            let pts: Vec<_> = set.iter().cloned().collect();
            for w in pts.windows(2) {
                set.insert(midpoint(&w[0], &w[1]));
            }
            if let Some(top) = pts.last().filter(|_| self.rank > 0) {
                let mut e = vec![S::zero(); self.rank];
                e[0] = S::one();
                set.insert(top.add(&OagValue::Finite(e))?);
            }
        }
        Ok(set.into_iter().collect())
    }

    fn holds(&self, f: &Polynomial<S>, a: &Elem<S>, i: usize, prev: &Elem<S>, cur: &Elem<S>) -> Result<bool> {
        let b = &self.idyll;
        b.is_null(&FormalSum::new([f.coeff(i), b.mul(&self.eps, prev)?, b.mul(a, cur)?]))
    }

    /// Quotients with coefficients on the grid, built bottom-up and pruned
    /// by each relation as soon as both of its quotient coefficients are
    /// fixed.
    fn quotients(&mut self, f: &Polynomial<S>, a: &Elem<S>) -> Result<Vec<Polynomial<S>>> {
        let n = f.degree().unwrap_or(0);
        if n == 0 {
            return Ok(Vec::new());
        }
        let mut values = vec![Elem::Zero];
        for l in self.grid(f, a)? {
            for u in &self.units {
                values.push(Elem::ext(u.clone(), l.clone()));
            }
        }
        let mut out = Vec::new();
        let mut d = Vec::with_capacity(n);
        self.extend(f, a, &values, &mut d, &mut out)?;
        Ok(out)
    }

    fn extend(
        &mut self,
        f: &Polynomial<S>,
        a: &Elem<S>,
        values: &[Elem<S>],
        d: &mut Vec<Elem<S>>,
        out: &mut Vec<Polynomial<S>>,
    ) -> Result<()> {
        let n = f.degree().unwrap();
        let i = d.len();
        if i == n {
            let last = d[n - 1].clone();
            if !last.is_zero() && self.holds(f, a, n, &last, &Elem::Zero)? {
                out.push(Polynomial::from_coeffs(self.idyll.clone(), d.clone())?);
            }
            return Ok(());
        }
        let prev = if i == 0 { Elem::Zero } else { d[i - 1].clone() };
        for x in values {
            self.nodes += 1;
            if self.nodes > ENUMERATION_LIMIT {
                return Err(Error::Resource { cap: ENUMERATION_LIMIT });
            }
            if self.holds(f, a, i, &prev, x)? {
                d.push(x.clone());
                self.extend(f, a, values, d, out)?;
                d.pop();
            }
        }
        Ok(())
    }

    fn mult(&mut self, f: &Polynomial<S>, a: &Elem<S>) -> Result<usize> {
        if let Some(m) = self.memo.get(f) {
            return Ok(*m);
        }
        let mut best = 0;
        for g in self.quotients(f, a)? {
            best = best.max(1 + self.mult(&g, a)?);
        }
        self.memo.insert(f.clone(), best);
        Ok(best)
    }
}

/// Multiplicity over a tropical extension with finite base, enumerating
/// quotients whose coefficient levels lie on a finite grid derived from
/// `f` and `a`. The grid is refined once more and the verdict is
/// inconclusive if the answer moves.
pub fn bounded_extension_oracle<S: Scalar>(f: &Polynomial<S>, a: &Elem<S>) -> Result<GridVerdict> {
    let b = f.idyll();
    let Idyll::Extension(e) = &**b else {
        return unsupported(format!("the grid oracle needs a tropical extension, not {}", b.name()));
    };
    let Some(units) = e.base.units() else {
        return unsupported(format!("the grid oracle needs a finite base, not {}", e.base.name()));
    };
    if f.is_zero() {
        return precondition("the zero polynomial");
    }
    b.check(a)?;
    if a.is_zero() {
        return Ok(GridVerdict::Exact(f.min_degree().unwrap()));
    }
    let run = |refine| -> Result<usize> {
        let mut o = GridOracle {
            idyll: b.clone(),
            units: units.clone(),
            rank: e.rank,
            eps: b.epsilon()?,
            refine,
            memo: HashMap::new(),
            nodes: 0,
        };
        o.mult(f, a)
    };
    let coarse = run(false)?;
    let refined = run(true)?;
    Ok(if coarse == refined { GridVerdict::Exact(coarse) } else { GridVerdict::Inconclusive { coarse, refined } })
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleEntry {
    pub instance: String,
    pub oracle: String,
    pub engine: String,
    pub agree: bool,
}

/// Every comparison made by a verification run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct OracleReport {
    pub entries: Vec<OracleEntry>,
}

impl OracleReport {
    pub fn record(&mut self, instance: impl Into<String>, oracle: impl ToString, engine: impl ToString) {
        let (oracle, engine) = (oracle.to_string(), engine.to_string());
        let agree = oracle == engine;
        self.entries.push(OracleEntry { instance: instance.into(), oracle, engine, agree });
    }

    pub fn all_agree(&self) -> bool {
        self.entries.iter().all(|e| e.agree)
    }

    pub fn failures(&self) -> impl Iterator<Item = &OracleEntry> {
        self.entries.iter().filter(|e| !e.agree)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "compared": self.entries.len(),
            "agree": self.all_agree(),
            "entries": self.entries.iter().map(|e| json!({
                "instance": e.instance,
                "oracle": e.oracle,
                "engine": e.engine,
                "agree": e.agree,
            })).collect::<Vec<_>>(),
        })
    }
}

fn show(r: &Result<usize>) -> String {
    match r {
        Ok(m) => m.to_string(),
        Err(e) => format!("error: {e}"),
    }
}

fn compare_at<S: Scalar>(report: &mut OracleReport, f: &Polynomial<S>, a: &Elem<S>) -> Result<()> {
    let label = format!("{} over {} at {}", f, f.idyll().name(), format_elem(a, f.idyll()));
    let engine = multiplicity(f, a).map(|x| x.0);
    if f.idyll().is_finite() {
        let oracle = exhaustive_multiplicity(f, a);
        report.record(format!("{label} [exhaustive]"), show(&oracle), show(&engine));
    } else {
        match bounded_extension_oracle(f, a)? {
            GridVerdict::Exact(m) => report.record(format!("{label} [grid]"), m, show(&engine)),
            GridVerdict::Inconclusive { .. } => {}
        }
    }
    if let Ok(c) = mult_closed_form(f, a) {
        report.record(format!("{label} [closed]"), c, show(&engine));
    }
    Ok(())
}

/// The pinned corpus: `(idyll, polynomial, root, multiplicity)`.
pub const CORPUS: &[(&str, &str, &str, usize)] = &[
    ("sign", "1 - x - x^2 + x^3", "1", 2),
    ("sign", "1 - x - x^2 + x^3", "-1", 1),
    ("krasner", "x + x^2 + x^5", "1", 4),
    ("krasner", "x^2 + x^5", "1", 3),
    ("trop", "2 + 1*x + 0*x^2 + 0*x^3", "1", 2),
    ("trop", "3 + 1*x + 0*x^2 + 0*x^3", "2", 1),
    ("trop", "2 + 1*x + 0*x^2 + 0*x^3 + 2*x^4 + 1*x^5", "1", 2),
    ("trop", "2 + 1*x + 0*x^2 + 0*x^3 + 2*x^4 + 1*x^5", "(-1/2)", 2),
    ("trop-real", "1 - x + 1^1*x^2", "1", 1),
    ("trop-real", "1 - x + 1^1*x^2", "1^-1", 1),
    ("trop:rank-2", "(3,3) + (2,2)*x + (1,1)*x^2 + (0,1)*x^3 + (0,0)*x^4", "(1,1)", 2),
    ("sign", "1 - x + x^2 - x^3 - x^4 - x^5 + x^6", "-1", 2),
    ("sign", "1 + x + x^2 - x^3 + x^4 - x^5", "1", 3),
];

/// Runs the oracles on the pinned corpus and on `sweeps` seeded random
/// polynomials per idyll.
pub fn run_suite(seed: u64, sweeps: usize) -> Result<OracleReport> {
    let mut report = OracleReport::default();
    for (name, text, at, expected) in CORPUS {
        let f = parse_poly::<crate::Rat>(text, Arc::new(Idyll::from_name(name)?))?;
        let a = parse_elem(at, f.idyll())?;
        report.record(
            format!("{f} over {name} at {at} [expected]"),
            expected,
            show(&multiplicity(&f, &a).map(|x| x.0)),
        );
        compare_at(&mut report, &f, &a)?;
    }
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let small = GenConfig { max_degree: 4, ..GenConfig::default() };
    for name in ["krasner", "sign", "quot:GF(5)/{1,4}", "trop", "trop-real"] {
        let b = Arc::new(Idyll::<crate::Rat>::from_name(name)?);
        for _ in 0..sweeps {
            let f = random_poly(&b, &small, &mut rng);
            for a in root_candidates(&f)? {
                compare_at(&mut report, &f, &a)?;
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn poly(name: &str, text: &str) -> Polynomial<Q> {
        parse_poly(text, Arc::new(Idyll::from_name(name).unwrap())).unwrap()
    }

    #[test]
    fn exhaustive_examples() {
        let f = poly("sign", "1 - x - x^2 + x^3");
        assert_eq!(exhaustive_multiplicity(&f, &Elem::Sign(1)).unwrap(), 2);
        let k = poly("krasner", "x + x^2 + x^5");
        assert_eq!(exhaustive_multiplicity(&k, &Elem::One).unwrap(), 4);
    }

    #[test]
    fn root_sets() {
        assert_eq!(exhaustive_root_set(&poly("sign", "1 + x")).unwrap(), vec![Elem::Sign(-1)]);
        assert_eq!(exhaustive_root_set(&poly("krasner", "1 + x + x^2")).unwrap(), vec![Elem::One]);
        assert!(exhaustive_root_set(&poly("field:GF(3)", "1 + x^2")).unwrap().is_empty());
    }

    #[test]
    fn grid_oracle() {
        let f = poly("trop", "2 + 1*x + 0*x^2 + 0*x^3");
        let a = parse_elem("1", f.idyll()).unwrap();
        assert_eq!(bounded_extension_oracle(&f, &a).unwrap(), GridVerdict::Exact(2));
        let m = poly("trop-real", "1^2*x^3");
        let b = parse_elem("-1^1", m.idyll()).unwrap();
        assert_eq!(bounded_extension_oracle(&m, &b).unwrap(), GridVerdict::Exact(0));
    }

    #[test]
    fn suite_agrees() {
        let r = run_suite(1, 3).unwrap();
        let bad: Vec<_> = r.failures().collect();
        assert!(bad.is_empty(), "{bad:#?}");
    }
}
