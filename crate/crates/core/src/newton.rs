//! Newton polygons and initial forms over tropical extensions.

use std::fmt::Write as _;
use std::sync::Arc;

use num_integer::Integer;
use num_traits::One;
use serde_json::{json, Value};

use crate::algebra::{Elem, Idyll};
use crate::error::{precondition, structural, unsupported, Result};
use crate::extension::{head_inner, split_head, Extension};
use crate::oag::OagValue;
use crate::poly::Polynomial;
use crate::scalar::Scalar;

/// A bounded edge of the lower hull.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge<S> {
    pub slope: S,
    pub start: usize,
    pub end: usize,
    pub width: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolygon<S> {
    pub points: Vec<(usize, S)>,
    pub hull: Vec<(usize, S)>,
    pub edges: Vec<Edge<S>>,
}

fn cross<S: Scalar>(a: &(usize, S), b: &(usize, S), c: &(usize, S)) -> S {
    let dx1 = S::from_int(b.0 as i64 - a.0 as i64);
    let dx2 = S::from_int(c.0 as i64 - a.0 as i64);
    dx1 * (c.1.clone() - a.1.clone()) - (b.1.clone() - a.1.clone()) * dx2
}

impl<S: Scalar> NewtonPolygon<S> {
    /// Lower convex hull of points with distinct abscissae. Collinear
    /// interior points are not vertices.
    pub fn from_points(mut points: Vec<(usize, S)>) -> Result<Self> {
        if points.is_empty() {
            return precondition("the zero polynomial has no Newton polygon");
        }
        points.sort_by_key(|p| p.0);
        if points.windows(2).any(|w| w[0].0 == w[1].0) {
            return structural("Newton polygon points must have distinct degrees");
        }
        let mut hull: Vec<(usize, S)> = Vec::new();
        for p in &points {
            while hull.len() >= 2 && !cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p).is_positive() {
                hull.pop();
            }
            hull.push(p.clone());
        }
        let edges = hull
            .windows(2)
            .map(|w| {
                let width = w[1].0 - w[0].0;
                Edge {
                    slope: (w[1].1.clone() - w[0].1.clone()) / S::from_int(width as i64),
                    start: w[0].0,
                    end: w[1].0,
                    width,
                }
            })
            .collect();
        Ok(NewtonPolygon { points, hull, edges })
    }

    /// Width of the edge with the given slope, `0` if there is none.
    pub fn edge_width(&self, slope: &S) -> usize {
        self.edge_with_slope(slope).map_or(0, |e| e.width)
    }

    pub fn edge_with_slope(&self, slope: &S) -> Option<&Edge<S>> {
        self.edges.iter().find(|e| e.slope == *slope)
    }

    /// Slopes of the bounded edges, left to right.
    pub fn slopes(&self) -> Vec<S> {
        self.edges.iter().map(|e| e.slope.clone()).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "points": self.points.iter().map(|(i, y)| json!([i, y.to_string()])).collect::<Vec<_>>(),
            "hull": self.hull.iter().map(|(i, y)| json!([i, y.to_string()])).collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|e| json!({
                "slope": e.slope.to_string(), "start": e.start, "end": e.end, "width": e.width,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Valuation of a coefficient in a rank-one setting.
fn rank1_value<S: Scalar>(idyll: &Idyll<S>, c: &Elem<S>) -> Result<S> {
    let v = idyll.valuation(c)?;
    match v.coords() {
        Some([x]) => Ok(x.clone()),
        _ => unsupported(format!("{} does not have a rank-one valuation", idyll.name())),
    }
}

/// Newton polygon of a polynomial over a rank-one extension or `oag:rank-1`.
pub fn newton_polygon<S: Scalar>(f: &Polynomial<S>) -> Result<NewtonPolygon<S>> {
    let pts = f.terms().iter().map(|(i, c)| Ok((*i, rank1_value(f.idyll(), c)?))).collect::<Result<Vec<_>>>()?;
    NewtonPolygon::from_points(pts)
}

/// Newton polygon with respect to the head coordinate of the valuation.
pub fn newton_polygon_head<S: Scalar>(f: &Polynomial<S>) -> Result<NewtonPolygon<S>> {
    let pts = f
        .terms()
        .iter()
        .map(|(i, c)| {
            let v = f.idyll().valuation(c)?;
            match v.coords() {
                Some([x, ..]) => Ok((*i, x.clone())),
                _ => structural("rank-zero valuation has no head"),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    NewtonPolygon::from_points(pts)
}

fn extension_of<S: Scalar>(f: &Polynomial<S>) -> Result<&Extension<S>> {
    f.idyll().as_extension().map_or_else(|| structural(format!("{} is not a tropical extension", f.idyll().name())), Ok)
}

/// Degrees minimizing `v(c_i) + iγ` (lexicographically).
pub fn argmin_set<S: Scalar>(f: &Polynomial<S>, gamma: &OagValue<S>) -> Result<(Vec<usize>, OagValue<S>)> {
    let mut best: Option<OagValue<S>> = None;
    let mut set = Vec::new();
    for (i, c) in f.terms() {
        let w = f.idyll().valuation(c)?.add(&gamma.times(*i as i64))?;
        match &best {
            Some(b) if w > *b => {}
            Some(b) if w == *b => set.push(*i),
            _ => {
                best = Some(w);
                set = vec![*i];
            }
        }
    }
    match best {
        Some(b) => Ok((set, b)),
        None => precondition("initial form of the zero polynomial"),
    }
}

/// `In_γ f = Σ_{i∈I} lc(c_i) x^i` over the base, for a split extension.
pub fn initial_form_split<S: Scalar>(f: &Polynomial<S>, gamma: &OagValue<S>) -> Result<Polynomial<S>> {
    let ext = extension_of(f)?;
    if !ext.is_split() {
        return unsupported("split initial forms of a twisted extension; use initial_form_at");
    }
    if gamma.rank() != Some(ext.rank) {
        return structural(format!("{gamma} does not have rank {}", ext.rank));
    }
    let (set, _) = argmin_set(f, gamma)?;
    let terms = set.iter().map(|i| Ok((*i, ext.lc(&f.coeff(*i))?.0))).collect::<Result<Vec<_>>>()?;
    Polynomial::new(ext.base.clone(), terms)
}

/// `In_a f = Σ_{i∈I} lc(c_i)(ax)^i`, a polynomial whose coefficients all
/// lie in the torsor `B^{γ0}`.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialForm<S: Scalar> {
    pub level: OagValue<S>,
    /// Coefficients `c_i a^i` (as elements of the extension) for `i ∈ I`.
    pub poly: Polynomial<S>,
}

impl<S: Scalar> InitialForm<S> {
    /// Divides every coefficient by `rep ∈ B^{γ0}`, giving a polynomial
    /// over the base.
    pub fn normalize(&self, rep: &Elem<S>) -> Result<Polynomial<S>> {
        let ext = extension_of(&self.poly)?;
        let terms =
            self.poly.terms().iter().map(|(i, c)| Ok((*i, ext.normalize(c, rep)?))).collect::<Result<Vec<_>>>()?;
        Polynomial::new(ext.base.clone(), terms)
    }

    /// Normalization by the canonical representative `1^{γ0}`.
    pub fn to_base(&self) -> Result<Polynomial<S>> {
        let ext = extension_of(&self.poly)?;
        self.normalize(&ext.unit_at(self.level.clone()))
    }
}

pub fn initial_form_at<S: Scalar>(f: &Polynomial<S>, a: &Elem<S>) -> Result<InitialForm<S>> {
    let ext = extension_of(f)?;
    if a.is_zero() {
        return precondition("initial form at zero");
    }
    let c = f.idyll();
    let gamma = ext.valuation(a);
    c.check(a)?;
    let (set, level) = argmin_set(f, &gamma)?;
    let terms = set.iter().map(|i| Ok((*i, c.mul(&f.coeff(*i), &c.pow(a, *i)?)?))).collect::<Result<Vec<_>>>()?;
    Ok(InitialForm { level, poly: Polynomial::new(c.clone(), terms)? })
}

/// One round of the higher-rank recursion: view `B[Q^n]` as
/// `B[Q^{n−1}][Q]` and take the initial form with respect to the head
/// coordinate. The result lives over `B[Q^{n−1}]` (over `B` when `n = 1`).
pub fn initial_form_head<S: Scalar>(f: &Polynomial<S>, head: &S) -> Result<Polynomial<S>> {
    let ext = extension_of(f)?;
    let inner = Arc::new(head_inner(ext));
    let mut best: Option<S> = None;
    let mut chosen = Vec::new();
    for (i, c) in f.terms() {
        let (x, h) = split_head(ext, c)?;
        let w = h.expect("nonzero coefficient") + head.clone() * S::from_int(*i as i64);
        match &best {
            Some(b) if w > *b => {}
            Some(b) if w == *b => chosen.push((*i, x)),
            _ => {
                best = Some(w);
                chosen = vec![(*i, x)];
            }
        }
    }
    if best.is_none() {
        return precondition("initial form of the zero polynomial");
    }
    Polynomial::new(inner, chosen)
}

/// `In_γ f` computed one coordinate at a time.
pub fn initial_form_recursive<S: Scalar>(f: &Polynomial<S>, gamma: &OagValue<S>) -> Result<Polynomial<S>> {
    let ext = extension_of(f)?;
    let Some(coords) = gamma.coords() else {
        return structural("initial form at infinity");
    };
    if coords.len() != ext.rank || ext.rank == 0 {
        return structural(format!("{gamma} does not have rank {}", ext.rank));
    }
    let mut g = f.clone();
    for x in coords {
        g = initial_form_head(&g, x)?;
    }
    Ok(g)
}

/// Least common multiple of the denominators of the hull data.
fn common_denominator<S: Scalar>(np: &NewtonPolygon<S>) -> num_bigint::BigInt {
    np.points.iter().fold(num_bigint::BigInt::one(), |l, (_, y)| l.lcm(y.to_big().denom()))
}

fn scaled<S: Scalar>(y: &S, l: &num_bigint::BigInt) -> num_bigint::BigInt {
    (y.to_big() * num_rational::BigRational::from_integer(l.clone())).to_integer()
}

/// Hull ordinate at degree `i` (inside the hull's degree range).
fn hull_at<S: Scalar>(np: &NewtonPolygon<S>, i: usize) -> Option<S> {
    if let Some((_, y)) = np.hull.iter().find(|p| p.0 == i) {
        return Some(y.clone());
    }
    let e = np.edges.iter().find(|e| e.start < i && i < e.end)?;
    let y0 = &np.hull.iter().find(|p| p.0 == e.start)?.1;
    Some(y0.clone() + e.slope.clone() * S::from_int((i - e.start) as i64))
}

/// Text rendering: one column per degree, one row per lattice height
/// (heights scaled by the common denominator). `o` marks hull vertices,
/// `*` other points, `.` lattice points on hull edges.
pub fn render_ascii<S: Scalar>(np: &NewtonPolygon<S>) -> String {
    let l = common_denominator(np);
    let lo = np.points.iter().map(|(_, y)| scaled(y, &l)).min().unwrap();
    let hi = np.points.iter().map(|(_, y)| scaled(y, &l)).max().unwrap();
    let (d0, d1) = (np.points[0].0, np.points[np.points.len() - 1].0);
    let mut out = String::new();
    let mut row = hi.clone();
    while row >= lo {
        let label = num_rational::BigRational::new(row.clone(), l.clone());
        let _ = write!(out, "{:>6} |", label.to_string());
        for i in d0..=d1 {
            let pt = np.points.iter().find(|p| p.0 == i);
            let on_hull = np.hull.iter().any(|p| p.0 == i);
            let mark = match pt {
                Some((_, y)) if scaled(y, &l) == row => {
                    if on_hull {
                        'o'
                    } else {
                        '*'
                    }
                }
                _ => match hull_at(np, i) {
                    Some(h)
                        if !on_hull
                            && (h.to_big() * num_rational::BigRational::from_integer(l.clone())).is_integer()
                            && scaled(&h, &l) == row =>
                    {
                        '.'
                    }
                    _ => ' ',
                },
            };
            let _ = write!(out, " {mark} ");
        }
        out.push('\n');
        row -= 1;
    }
    let _ = write!(out, "{:>6} +", "");
    for _ in d0..=d1 {
        out.push_str("---");
    }
    out.push('\n');
    let _ = write!(out, "{:>6}  ", "");
    for i in d0..=d1 {
        let _ = write!(out, "{:^3}", i);
    }
    out.push('\n');
    if np.edges.is_empty() {
        out.push_str("no edges\n");
    }
    for e in &np.edges {
        let _ = writeln!(out, "edge [{}, {}] slope {} width {}", e.start, e.end, e.slope, e.width);
    }
    out
}

/// SVG rendering on the integer lattice of the bounding box.
pub fn render_svg<S: Scalar>(np: &NewtonPolygon<S>) -> String {
    const UNIT: i64 = 40;
    const PAD: i64 = 30;
    let l = common_denominator(np);
    let ys: Vec<num_bigint::BigInt> = np.points.iter().map(|(_, y)| scaled(y, &l)).collect();
    let lo = ys.iter().min().unwrap().clone();
    let hi = ys.iter().max().unwrap().clone();
    let d0 = np.points[0].0 as i64;
    let d1 = np.points[np.points.len() - 1].0 as i64;
    let height_units: i64 = (hi.clone() - lo.clone()).try_into().unwrap_or(0);
    let px = |i: usize| PAD + (i as i64 - d0) * UNIT;
    let py = |y: &S| {
        let k: i64 = (hi.clone() - scaled(y, &l)).try_into().unwrap_or(0);
        PAD + k * UNIT
    };
    let w = 2 * PAD + (d1 - d0) * UNIT;
    let h = 2 * PAD + height_units * UNIT;
    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#);
    if np.hull.len() > 1 {
        let pts: Vec<String> = np.hull.iter().map(|(i, y)| format!("{},{}", px(*i), py(y))).collect();
        let _ =
            writeln!(out, r#"  <polyline points="{}" fill="none" stroke="black" stroke-width="2"/>"#, pts.join(" "));
    }
    for (i, y) in &np.points {
        let fill = if np.hull.iter().any(|p| p.0 == *i) { "black" } else { "white" };
        let _ = writeln!(
            out,
            r#"  <circle cx="{}" cy="{}" r="4" fill="{fill}" stroke="black"><title>({i}, {y})</title></circle>"#,
            px(*i),
            py(y)
        );
    }
    for (k, e) in np.edges.iter().enumerate() {
        let a = &np.hull[k];
        let b = &np.hull[k + 1];
        let _ = writeln!(
            out,
            r#"  <text x="{}" y="{}" font-size="12" text-anchor="middle">slope {}</text>"#,
            (px(a.0) + px(b.0)) / 2,
            (py(&a.1) + py(&b.1)) / 2 + 16,
            e.slope
        );
    }
    out.push_str("</svg>\n");
    out
}
