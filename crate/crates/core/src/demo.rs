//! Worked examples, each comparing expected values with computed ones.

use std::sync::Arc;

use serde_json::{json, Value};

use crate::algebra::{Elem, Idyll};
use crate::error::{Error, Result};
use crate::mult::rules::{
    krasner_quotient, sign_negative_quotient, sign_positive_quotient, sign_positive_quotient_general, tropical_quotient,
};
use crate::mult::{degree_bound_check, mult_closed_form, multiplicity, root_candidates, Engine};
use crate::newton::{initial_form_head, initial_form_split, newton_polygon};
use crate::oag::OagValue;
use crate::poly::{factor_check, rational_poly, sign_of_poly, trop_of_rational, Polynomial};
use crate::text::{format_elem, parse_elem, parse_poly};
use crate::{Rat, Scalar};

pub const DEMOS: &[&str] =
    &["descartes", "newton-p2", "newton-p3", "catalan", "polygon", "rank-two", "division-rules", "phase"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub label: String,
    pub expected: String,
    pub computed: String,
}

impl Check {
    pub fn pass(&self) -> bool {
        self.expected == self.computed
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemoReport {
    pub name: String,
    pub checks: Vec<Check>,
}

impl DemoReport {
    fn new(name: &str) -> Self {
        DemoReport { name: name.to_string(), checks: Vec::new() }
    }

    fn check(&mut self, label: impl Into<String>, expected: impl ToString, computed: impl ToString) {
        self.checks.push(Check { label: label.into(), expected: expected.to_string(), computed: computed.to_string() });
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(Check::pass)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("demo {}\n", self.name);
        for c in &self.checks {
            let mark = if c.pass() { "ok" } else { "MISMATCH" };
            out.push_str(&format!("  {}: expected {}, computed {} [{mark}]\n", c.label, c.expected, c.computed));
        }
        out.push_str(if self.pass() { "  pass\n" } else { "  FAIL\n" });
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "demo": self.name,
            "pass": self.pass(),
            "checks": self.checks.iter().map(|c| json!({
                "label": c.label, "expected": c.expected, "computed": c.computed, "pass": c.pass(),
            })).collect::<Vec<_>>(),
        })
    }
}

type P = Polynomial<Rat>;

fn over(name: &str, text: &str) -> Result<P> {
    parse_poly(text, Arc::new(Idyll::from_name(name)?))
}

fn search(f: &P, a: &Elem<Rat>) -> Result<usize> {
    Ok(multiplicity(f, a)?.0)
}

fn cubic() -> P {
    rational_poly(&[72, -6, -7, 1])
}

/// Root valuations with multiplicity, sorted.
fn valuation_multiset(f: &P) -> Result<String> {
    let mut vals = Vec::new();
    for a in root_candidates(f)? {
        let m = search(f, &a)?;
        let v = f.idyll().valuation(&a)?;
        vals.extend(std::iter::repeat_n(v, m));
    }
    vals.sort();
    let show = |v: &OagValue<Rat>| match v.coords() {
        Some([x]) => x.to_string(),
        _ => v.to_string(),
    };
    Ok(vals.iter().map(show).collect::<Vec<_>>().join(","))
}

fn descartes() -> Result<DemoReport> {
    let mut r = DemoReport::new("descartes");
    let f = sign_of_poly(&cubic())?;
    r.check("sign sequence", "1 - x - x^2 + x^3", &f);
    for (s, want) in [(1, 2), (-1, 1)] {
        let a = Elem::Sign(s);
        r.check(format!("mult at {s:+} (search)"), want, search(&f, &a)?);
        r.check(format!("mult at {s:+} (closed form)"), want, mult_closed_form(&f, &a)?);
    }
    let q = cubic();
    let roots = [(-3, -1), (4, 1), (6, 1)];
    for s in [1, -1] {
        let count: usize = roots
            .iter()
            .filter(|(_, sg)| *sg == s)
            .map(|(x, _)| search(&q, &Elem::Rat(Rat::from_int(*x))))
            .sum::<Result<usize>>()?;
        r.check(
            format!("rational roots of sign {s:+} at most the sign multiplicity"),
            "true",
            count <= search(&f, &Elem::Sign(s as i8))?,
        );
    }
    Ok(r)
}

fn newton(p: u64) -> Result<DemoReport> {
    let mut r = DemoReport::new(&format!("newton-p{p}"));
    let f = trop_of_rational(&cubic(), p)?;
    let (text, vals) = if p == 2 { ("3 + 1*x + 0*x^2 + 0*x^3", "0,1,2") } else { ("2 + 1*x + 0*x^2 + 0*x^3", "0,1,1") };
    r.check("tropicalization", text, &f);
    r.check("root valuations", vals, valuation_multiset(&f)?);
    let np = newton_polygon(&f)?;
    let slopes: Vec<String> = np.slopes().iter().map(|s| s.to_string()).collect();
    r.check("edge slopes", if p == 2 { "-2,-1,0" } else { "-1,0" }, slopes.join(","));
    if p == 3 {
        let one = parse_elem("1", f.idyll())?;
        r.check("mult at 1", 2, search(&f, &one)?);
    }
    Ok(r)
}

fn catalan() -> Result<DemoReport> {
    let mut r = DemoReport::new("catalan");
    let f = over("trop-real", "1 - x + 1^1*x^2")?;
    for (at, want) in [("1", 1), ("1^-1", 1), ("-1", 0)] {
        let a = parse_elem(at, f.idyll())?;
        r.check(format!("mult at {at} (search)"), want, search(&f, &a)?);
        r.check(format!("mult at {at} (closed form)"), want, mult_closed_form(&f, &a)?);
    }
    let bound = degree_bound_check(&f, Engine::Both)?;
    let roots: Vec<String> = bound.roots.iter().map(|(a, _)| format_elem(a, f.idyll())).collect();
    r.check("roots", "1^-1,1^0", roots.join(","));
    Ok(r)
}

fn polygon() -> Result<DemoReport> {
    let mut r = DemoReport::new("polygon");
    let f = over("trop", "2 + 1*x + 0*x^2 + 0*x^3 + 2*x^4 + 1*x^5")?;
    let np = newton_polygon(&f)?;
    let slopes: Vec<String> = np.slopes().iter().map(|s| s.to_string()).collect();
    let widths: Vec<String> = np.edges.iter().map(|e| e.width.to_string()).collect();
    r.check("edge slopes", "-1,0,1/2", slopes.join(","));
    r.check("edge widths", "2,1,2", widths.join(","));
    for (g, want) in [("1", "1 + x + x^2"), ("0", "x^2 + x^3"), ("-1/2", "x^3 + x^5")] {
        let gamma = OagValue::scalar(crate::text::parse_scalar::<Rat>(g)?);
        r.check(format!("initial form at {g}"), want, initial_form_split(&f, &gamma)?);
    }
    r.check("degree bound", "5 <= 5", {
        let b = degree_bound_check(&f, Engine::Both)?;
        format!("{} <= {}", b.sum, b.degree)
    });
    Ok(r)
}

fn rank_two() -> Result<DemoReport> {
    let mut r = DemoReport::new("rank-two");
    let f = over("trop:rank-2", "(3,3) + (2,2)*x + (1,1)*x^2 + (0,1)*x^3 + (0,0)*x^4")?;
    let one = Rat::from_int(1);
    let first = initial_form_head(&f, &one)?;
    r.check("first round", "3 + 2*x + 1*x^2 + 1*x^3", &first);
    r.check("second round", "1 + x + x^2", initial_form_head(&first, &one)?);
    let a = parse_elem("(1,1)", f.idyll())?;
    r.check("mult at (1,1) (search)", 2, search(&f, &a)?);
    r.check("mult at (1,1) (closed form)", 2, mult_closed_form(&f, &a)?);
    Ok(r)
}

fn division_rules() -> Result<DemoReport> {
    let mut r = DemoReport::new("division-rules");
    let k = over("krasner", "x^2 + x^5")?;
    let g = krasner_quotient(&k)?;
    r.check("Krasner quotient", "x^2 + x^3 + x^4", &g);
    r.check("Krasner factorization holds", true, factor_check(&k, &Elem::One, &g)?);

    let f = over("sign", "1 - x + x^2 - x^3 - x^4 - x^5 + x^6")?;
    let shown = over("sign", "1 - x + x^2 - x^3 - x^4 + x^5")?;
    r.check("negative root factorization holds", true, factor_check(&f, &Elem::Sign(-1), &shown)?);
    r.check("negative root quotient", &shown, sign_negative_quotient(&f)?);

    let f = over("sign", "1 + x + x^2 - x^3 + x^4 - x^5")?;
    let shown = over("sign", "-1 - x - x^2 + x^3 - x^4")?;
    r.check("positive root factorization holds", true, factor_check(&f, &Elem::Sign(1), &shown)?);
    r.check("positive root quotient", &shown, sign_positive_quotient(&f)?);

    let f = over("sign", "1 - x^2 + x^3 - x^5")?;
    let g = sign_positive_quotient_general(&f)?;
    let one = Elem::Sign(1);
    r.check("quotient with gaps divides", true, factor_check(&f, &one, &g)?);
    r.check("quotient with gaps drops one", search(&f, &one)? - 1, search(&g, &one)?);

    let t = over("trop", "2 + 1*x + 0*x^2 + 0*x^3 + 2*x^4 + 1*x^5")?;
    for lvl in ["1", "0", "(-1/2)"] {
        let a = parse_elem(lvl, t.idyll())?;
        let g = tropical_quotient(&t, &a)?;
        r.check(format!("tropical quotient at {lvl} divides"), true, factor_check(&t, &a, &g)?);
        r.check(format!("tropical quotient at {lvl} drops one"), search(&t, &a)? - 1, search(&g, &a)?);
    }
    Ok(r)
}

fn phase() -> Result<DemoReport> {
    let mut r = DemoReport::new("phase");
    let f = over("phase", "1 + x + x^2")?;
    for k in 0..24 {
        let theta = Rat::from_ratio(k, 24);
        let inside = 6 < k && k < 18;
        let root = crate::mult::is_root(&f, &Elem::Phase(theta.clone()))?;
        r.check(format!("root at {theta} of a turn"), inside, root);
    }
    Ok(r)
}

pub fn run_demo(name: &str) -> Result<DemoReport> {
    match name {
        "descartes" => descartes(),
        "newton-p2" => newton(2),
        "newton-p3" => newton(3),
        "catalan" => catalan(),
        "polygon" => polygon(),
        "rank-two" => rank_two(),
        "division-rules" => division_rules(),
        "phase" => phase(),
        _ => Err(Error::Parse { pos: 0, msg: format!("unknown demo '{name}' (known: {})", DEMOS.join(", ")) }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_demos_pass() {
        for name in DEMOS {
            let r = run_demo(name).unwrap();
            assert!(r.pass(), "{}", r.to_text());
        }
    }
}
