//! Top-down division and the memoized multiplicity recursion.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use crate::algebra::{Elem, FormalSum, Idyll, SumSet};
use crate::error::{unsupported, Error, Result};
use crate::extension::Extension;
use crate::oag::OagValue;
use crate::poly::Polynomial;
use crate::scalar::Scalar;

/// Candidate levels for the infinite part of a layered sum set, and the
/// units they are paired with. Only used at the root `1` of an extension,
/// where every null test depends on the order of the levels alone.
struct Graded<S> {
    ext: Extension<S>,
    units: Vec<Elem<S>>,
}

pub(crate) struct Searcher<S: Scalar> {
    idyll: Arc<Idyll<S>>,
    root: Elem<S>,
    graded: Option<Graded<S>>,
    cap: usize,
    truncate: bool,
    pub(crate) truncated: bool,
    nodes: usize,
    memo: HashMap<Polynomial<S>, usize>,
}

impl<S: Scalar> Searcher<S> {
    /// Searches at `root` over an idyll whose sum sets are finite.
    pub(crate) fn plain(idyll: Arc<Idyll<S>>, root: Elem<S>, cap: usize) -> Result<Self> {
        Self::build(idyll, root, None, cap)
    }

    /// Searches at the root `1` of an extension with a finite base.
    pub(crate) fn graded(idyll: Arc<Idyll<S>>, cap: usize) -> Result<Self> {
        let Idyll::Extension(ext) = &*idyll else {
            return unsupported(format!("{} is not an extension", idyll.name()));
        };
        let Some(units) = ext.base.units() else {
            return unsupported(format!("search over {} needs a finite base", idyll.name()));
        };
        let g = Graded { ext: ext.clone(), units };
        let one = ext.one();
        Self::build(idyll, one, Some(g), cap)
    }

    fn build(idyll: Arc<Idyll<S>>, root: Elem<S>, graded: Option<Graded<S>>, cap: usize) -> Result<Self> {
        Ok(Searcher { idyll, root, graded, cap, truncate: false, truncated: false, nodes: 0, memo: HashMap::new() })
    }

    /// Stop expanding at the cap instead of failing; results become lower
    /// bounds and `truncated` is set.
    pub(crate) fn truncating(mut self) -> Self {
        self.truncate = true;
        self
    }

    fn null(&self, terms: [Elem<S>; 3]) -> Result<bool> {
        self.idyll.is_null(&FormalSum::new(terms))
    }

    /// Levels tried for the layered part: the levels of `p`, midpoints of
    /// consecutive ones, and one level past the largest.
    fn grid(&self, p: &Polynomial<S>) -> Vec<OagValue<S>> {
        let levels: BTreeSet<OagValue<S>> = p.terms().values().map(|c| self.idyll.valuation(c).unwrap()).collect();
        let levels: Vec<_> = levels.into_iter().collect();
        let mut out = levels.clone();
        for w in levels.windows(2) {
            let (a, b) = (w[0].coords().unwrap(), w[1].coords().unwrap());
            let mid = a.iter().zip(b).map(|(x, y)| (x.clone() + y.clone()) / S::from_int(2)).collect();
            out.push(OagValue::Finite(mid));
        }
        if let Some(OagValue::Finite(top)) = levels.last().filter(|l| l.rank() != Some(0)) {
            let mut next = top.clone();
            next[0] = next[0].clone() + S::one();
            out.push(OagValue::Finite(next));
        }
        out.sort();
        out
    }

    fn expand(&self, set: SumSet<S>, grid: &[OagValue<S>]) -> Result<Vec<Elem<S>>> {
        match set {
            SumSet::Finite(s) => Ok(s.into_iter().collect()),
            SumSet::Layered { core, above } => {
                let Some(g) = &self.graded else {
                    return unsupported(format!("layered sum sets in {} at a root other than 1", self.idyll.name()));
                };
                let mut out: Vec<_> = core.into_iter().collect();
                for level in grid.iter().filter(|l| **l > above) {
                    for u in &g.units {
                        let x = Elem::ext(u.clone(), level.clone());
                        if !out.contains(&x) {
                            out.push(x);
                        }
                    }
                }
                Ok(out)
            }
        }
    }

    fn tick(&mut self) -> Result<bool> {
        self.nodes += 1;
        if self.nodes <= self.cap {
            return Ok(true);
        }
        if self.truncate {
            self.truncated = true;
            return Ok(false);
        }
        Err(Error::Resource { cap: self.cap })
    }

    /// All `g` with `p ≼ (x − root) g`, with layered choices restricted to
    /// the grid of `p`.
    pub(crate) fn quotients(&mut self, p: &Polynomial<S>) -> Result<Vec<Polynomial<S>>> {
        let c = p.dense();
        if c.len() < 2 {
            return Ok(Vec::new());
        }
        let n = c.len() - 1;
        let grid = if self.graded.is_some() { self.grid(p) } else { Vec::new() };
        let mut d = vec![Elem::Zero; n];
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        self.descend(&c, n, &mut d, &grid, &mut seen, &mut out)?;
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn descend(
        &mut self,
        c: &[Elem<S>],
        i: usize,
        d: &mut Vec<Elem<S>>,
        grid: &[OagValue<S>],
        seen: &mut HashSet<Vec<Elem<S>>>,
        out: &mut Vec<Polynomial<S>>,
    ) -> Result<()> {
        let di = if i == d.len() { Elem::Zero } else { d[i].clone() };
        let adi = self.idyll.mul(&self.root, &di)?;
        if i == 0 {
            if self.null([c[0].clone(), adi, Elem::Zero])? && seen.insert(d.clone()) {
                out.push(Polynomial::from_coeffs(self.idyll.clone(), d.clone())?);
            }
            return Ok(());
        }
        let set = self.idyll.sum_set(&c[i], &adi)?;
        for x in self.expand(set, grid)? {
            if !self.tick()? {
                return Ok(());
            }
            d[i - 1] = x;
            self.descend(c, i - 1, d, grid, seen, out)?;
        }
        Ok(())
    }

    /// Unit multiple with leading coefficient one; in graded mode the levels
    /// are also replaced by `0, 1, 2, …` in order.
    fn canonical(&self, p: &Polynomial<S>) -> Result<Polynomial<S>> {
        let top = p.coeff(p.degree().expect("nonzero"));
        let q = p.scale(&self.idyll.inv(&top)?)?;
        let Some(g) = &self.graded else {
            return Ok(q);
        };
        let levels: BTreeSet<OagValue<S>> = q.terms().values().map(|c| g.ext.valuation(c)).collect();
        let rank = g.ext.rank;
        let relabel = |l: &OagValue<S>| {
            let k = levels.iter().position(|x| x == l).unwrap();
            let mut coords = vec![S::zero(); rank];
            if rank > 0 {
                coords[0] = S::from_int(k as i64);
            }
            OagValue::Finite(coords)
        };
        q.map_coeffs(q.idyll().clone(), |c| match c {
            Elem::Ext { unit, level } => Ok(Elem::ext((**unit).clone(), relabel(level))),
            other => Ok(other.clone()),
        })
    }

    pub(crate) fn mult(&mut self, p: &Polynomial<S>) -> Result<usize> {
        if self.idyll.is_pasture_backed() && !self.idyll.is_null(&p.eval_sum(&self.root)?)? {
            return Ok(0);
        }
        let key = self.canonical(p)?;
        if let Some(m) = self.memo.get(&key) {
            return Ok(*m);
        }
        let deg = key.degree().unwrap_or(0);
        let mut best = 0;
        for q in self.quotients(&key)? {
            if best >= deg {
                break;
            }
            best = best.max(1 + self.mult(&q)?);
        }
        self.memo.insert(key, best);
        Ok(best)
    }

    /// A longest chain `p ≼ (x − root) g_0`, `g_0 ≼ (x − root) g_1`, ….
    pub(crate) fn chain(&mut self, p: &Polynomial<S>) -> Result<(usize, Vec<Polynomial<S>>)> {
        let m = self.mult(p)?;
        let mut out = Vec::with_capacity(m);
        let mut cur = p.clone();
        for k in (0..m).rev() {
            let next = self
                .quotients(&cur)?
                .into_iter()
                .map(|q| Ok((self.mult(&q)?, q)))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .find(|(mq, _)| *mq == k);
            match next {
                Some((_, q)) => {
                    out.push(q.clone());
                    cur = q;
                }
                None if self.truncated => break,
                None => return Err(Error::Mismatch(format!("no quotient of {cur} realizes multiplicity {k}"))),
            }
        }
        Ok((m, out))
    }
}
