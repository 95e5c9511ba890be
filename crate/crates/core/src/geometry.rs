//! Points, singularities and line intersections of plane curves.
//!
//! Points of PG(2, p^e) are enumerated inside the ambient field of the
//! polynomial, which must contain GF(p^e). Representatives are normalised so
//! that the last nonzero coordinate is 1.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::linalg::{kernel, Matrix3};
use crate::mpoly::{MultiPoly, Var};

pub type Point = [Elem; 3];
/// Coefficients `(a, b, c)` of the line `aX + bY + cZ = 0`.
pub type Line = [Elem; 3];

/// Scale so that the last nonzero coordinate is 1.
pub fn normalize_point(field: &Field, p: Point) -> Point {
    match p.iter().rposition(|e| !e.is_zero()) {
        None => p,
        Some(i) => {
            let inv = field.inv(p[i]).expect("nonzero");
            p.map(|e| field.mul(e, inv))
        }
    }
}

/// Scale so that the first nonzero coefficient is 1.
pub fn normalize_line(field: &Field, l: Line) -> Line {
    match l.iter().position(|e| !e.is_zero()) {
        None => l,
        Some(i) => {
            let inv = field.inv(l[i]).expect("nonzero");
            l.map(|e| field.mul(e, inv))
        }
    }
}

/// All points of PG(2, p^sub) inside the field.
pub fn points(field: &Field, sub: u32) -> Result<Vec<Point>> {
    let s = field.subfield_elements(sub)?;
    let (o, z) = (Elem::ONE, Elem::ZERO);
    let mut out = Vec::with_capacity(s.len() * s.len() + s.len() + 1);
    for &x in &s {
        for &y in &s {
            out.push([x, y, o]);
        }
    }
    for &x in &s {
        out.push([x, o, z]);
    }
    out.push([o, z, z]);
    Ok(out)
}

fn specialized(f: &MultiPoly, lambda: Option<Elem>) -> Result<MultiPoly> {
    match (f.has_lambda(), lambda) {
        (false, _) => Ok(f.clone()),
        (true, Some(l)) => Ok(f.specialize_lambda(l)),
        (true, None) => Err(Error::MissingParameter),
    }
}

/// Evaluates a form on the affine chart `Z = 1` one row `x = const` at a time.
struct RowEvaluator {
    field: Field,
    /// Terms grouped by their `Y` exponent: `(b, [(a, c)])` meaning `c X^a Y^b`.
    by_y: Vec<(u32, Vec<(u32, Elem)>)>,
}

impl RowEvaluator {
    fn new(f: &MultiPoly) -> RowEvaluator {
        let mut by_y: Vec<(u32, Vec<(u32, Elem)>)> = Vec::new();
        for &(m, c) in f.terms() {
            let b = m.exp(Var::Y);
            match by_y.iter_mut().find(|(bb, _)| *bb == b) {
                Some((_, v)) => v.push((m.exp(Var::X), c)),
                None => by_y.push((b, vec![(m.exp(Var::X), c)])),
            }
        }
        RowEvaluator { field: f.field().clone(), by_y }
    }

    /// Coefficients of the univariate polynomial in `y` at this `x`.
    fn row(&self, x: Elem) -> Vec<(u32, Elem)> {
        let f = &self.field;
        self.by_y
            .iter()
            .map(|(b, terms)| {
                let c = terms.iter().fold(Elem::ZERO, |acc, &(a, c)| f.add(acc, f.mul(c, f.pow(x, a as u64))));
                (*b, c)
            })
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }

    fn eval_row(&self, row: &[(u32, Elem)], y: Elem) -> Elem {
        let f = &self.field;
        row.iter().fold(Elem::ZERO, |acc, &(b, c)| f.add(acc, f.mul(c, f.pow(y, b as u64))))
    }
}

/// The rational points of `f = 0` in PG(2, p^sub).
pub fn rational_points(f: &MultiPoly, sub: u32, lambda: Option<Elem>) -> Result<Vec<Point>> {
    let g = specialized(f, lambda)?;
    let field = g.field().clone();
    let s = field.subfield_elements(sub)?;
    let chart = RowEvaluator::new(&g.dehomogenize());
    let mut out: Vec<Point> = s
        .par_iter()
        .flat_map_iter(|&x| {
            let row = chart.row(x);
            let hits: Vec<Point> = if row.is_empty() {
                s.iter().map(|&y| [x, y, Elem::ONE]).collect()
            } else {
                s.iter().filter(|&&y| chart.eval_row(&row, y).is_zero()).map(|&y| [x, y, Elem::ONE]).collect()
            };
            hits
        })
        .collect();
    for &x in &s {
        let p = [x, Elem::ONE, Elem::ZERO];
        if g.evaluate(p, None)?.is_zero() {
            out.push(p);
        }
    }
    let p = [Elem::ONE, Elem::ZERO, Elem::ZERO];
    if g.evaluate(p, None)?.is_zero() {
        out.push(p);
    }
    Ok(out)
}

/// Number of points of `f = 0` in PG(2, p^sub).
pub fn count_points(f: &MultiPoly, sub: u32, lambda: Option<Elem>) -> Result<u64> {
    let g = specialized(f, lambda)?;
    let field = g.field().clone();
    let s = field.subfield_elements(sub)?;
    let chart = RowEvaluator::new(&g.dehomogenize());
    let affine: u64 = s
        .par_iter()
        .map(|&x| {
            let row = chart.row(x);
            if row.is_empty() {
                s.len() as u64
            } else {
                s.iter().filter(|&&y| chart.eval_row(&row, y).is_zero()).count() as u64
            }
        })
        .sum();
    let mut at_infinity = 0u64;
    for &x in &s {
        if g.evaluate([x, Elem::ONE, Elem::ZERO], None)?.is_zero() {
            at_infinity += 1;
        }
    }
    if g.evaluate([Elem::ONE, Elem::ZERO, Elem::ZERO], None)?.is_zero() {
        at_infinity += 1;
    }
    Ok(affine + at_infinity)
}

/// The absolute degree of GF(q^m), checking that the field contains it.
pub fn extension_degree(field: &Field, q: u64, m: u32) -> Result<u32> {
    let p = field.characteristic() as u64;
    let (mut h, mut t) = (0u32, 1u64);
    while t < q {
        t *= p;
        h += 1;
    }
    if t != q || h == 0 {
        return Err(Error::InvalidParameter(format!("{q} is not a power of {p}")));
    }
    let deg = h * m;
    if !field.has_subfield(deg) {
        return Err(field.too_small(q.checked_pow(m).unwrap_or(u64::MAX)));
    }
    Ok(deg)
}

/// `|C(F_(q^m))|` for `f` over the ambient field, which must contain GF(q^m).
pub fn count_points_ext(f: &MultiPoly, q: u64, m: u32, lambda: Option<Elem>) -> Result<u64> {
    let deg = extension_degree(f.field(), q, m)?;
    count_points(f, deg, lambda)
}

/// One row of a point-count CSV.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointCount {
    pub curve_id: String,
    pub q: u64,
    pub m: u32,
    pub count: u64,
    pub elapsed_ms: u128,
}

pub fn timed_count(curve_id: &str, f: &MultiPoly, q: u64, m: u32, lambda: Option<Elem>) -> Result<PointCount> {
    let start = Instant::now();
    let count = count_points_ext(f, q, m, lambda)?;
    Ok(PointCount { curve_id: curve_id.to_string(), q, m, count, elapsed_ms: start.elapsed().as_millis() })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularityReport {
    pub point: Point,
    pub multiplicity: u32,
    /// Tangent lines rational over the ambient field, with their multiplicity in the tangent cone.
    pub tangents: Vec<(Line, u32)>,
    /// Degree of the part of the tangent cone that does not split over the ambient field.
    pub unsplit: u32,
}

/// A matrix `A` with `A e_3 = p`, so that `f(A v)` has the point at `(0:0:1)`.
fn frame_at(field: &Field, p: Point) -> Matrix3 {
    let i = p.iter().rposition(|e| !e.is_zero()).expect("nonzero point");
    let others: Vec<usize> = (0..3).filter(|&j| j != i).collect();
    let mut m = [[Elem::ZERO; 3]; 3];
    m[others[0]][0] = Elem::ONE;
    m[others[1]][1] = Elem::ONE;
    for r in 0..3 {
        m[r][2] = p[r];
    }
    Matrix3::new(field, m)
}

/// Roots of a univariate polynomial (coefficients lowest first) with multiplicities.
fn roots_with_multiplicity(field: &Field, mut coeffs: Vec<Elem>) -> (Vec<(Elem, u32)>, usize) {
    while coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    let mut out = Vec::new();
    if coeffs.len() <= 1 {
        return (out, 0);
    }
    let candidates: Vec<Elem> = field.elements().collect();
    for t in candidates {
        let mut mult = 0;
        loop {
            if coeffs.len() <= 1 {
                break;
            }
            // synthetic division by (x - t)
            let n = coeffs.len() - 1;
            let mut q = vec![Elem::ZERO; n];
            let mut carry = coeffs[n];
            for i in (0..n).rev() {
                q[i] = carry;
                carry = field.add(coeffs[i], field.mul(carry, t));
            }
            if !carry.is_zero() {
                break;
            }
            coeffs = q;
            mult += 1;
        }
        if mult > 0 {
            out.push((t, mult));
        }
        if coeffs.len() <= 1 {
            break;
        }
    }
    let rest = coeffs.len() - 1;
    (out, rest)
}

/// Multiplicity and tangent cone of the curve at a point on it.
pub fn multiplicity_at(f: &MultiPoly, p: Point) -> Result<SingularityReport> {
    if f.has_lambda() {
        return Err(Error::MissingParameter);
    }
    let field = f.field().clone();
    if p.iter().all(|e| e.is_zero()) {
        return Err(Error::InvalidParameter("(0:0:0) is not a point".into()));
    }
    if !f.evaluate(p, None)?.is_zero() {
        return Err(Error::PointNotOnCurve);
    }
    let a = frame_at(&field, p);
    let g = f.linear_substitute(&a)?;
    let r = g
        .terms()
        .iter()
        .map(|t| t.0.exp(Var::X) + t.0.exp(Var::Y))
        .min()
        .ok_or_else(|| Error::InvalidParameter("the zero polynomial has no multiplicity".into()))?;
    // initial form in X, Y of degree r, as a polynomial in t = X/Y
    let mut coeffs = vec![Elem::ZERO; r as usize + 1];
    for &(m, c) in g.terms() {
        if m.exp(Var::X) + m.exp(Var::Y) == r {
            coeffs[m.exp(Var::X) as usize] = field.add(coeffs[m.exp(Var::X) as usize], c);
        }
    }
    let deg_t = coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0) as u32;
    let (roots, rest) = roots_with_multiplicity(&field, coeffs);
    let ainv = a.inverse()?;
    let back = |w: Line| -> Line {
        let mut out = [Elem::ZERO; 3];
        for (j, o) in out.iter_mut().enumerate() {
            for (i, &wi) in w.iter().enumerate() {
                *o = field.add(*o, field.mul(wi, ainv.m[i][j]));
            }
        }
        normalize_line(&field, out)
    };
    let mut tangents = Vec::new();
    if r > deg_t {
        tangents.push((back([Elem::ZERO, Elem::ONE, Elem::ZERO]), r - deg_t));
    }
    for (t, mult) in roots {
        tangents.push((back([Elem::ONE, field.neg(t), Elem::ZERO]), mult));
    }
    Ok(SingularityReport { point: normalize_point(&field, p), multiplicity: r, tangents, unsplit: rest as u32 })
}

/// Singular points of `f = 0` in PG(2, p^sub), with their local data.
pub fn singular_points(f: &MultiPoly, sub: u32, lambda: Option<Elem>) -> Result<Vec<SingularityReport>> {
    let g = specialized(f, lambda)?;
    let partials: Vec<MultiPoly> = Var::XYZ.iter().map(|&v| g.partial_derivative(v)).collect();
    let pts = rational_points(&g, sub, None)?;
    let sing: Vec<Point> = pts
        .into_par_iter()
        .filter(|&p| partials.iter().all(|d| d.evaluate(p, None).map(|v| v.is_zero()).unwrap_or(false)))
        .collect();
    sing.into_par_iter().map(|p| multiplicity_at(&g, p)).collect()
}

/// A second point on the line through `p`, independent of `p`.
fn other_point_on_line(field: &Field, line: Line, p: Point) -> Point {
    let ker = kernel(field, &[line.to_vec()], 3);
    for v in ker {
        let q = [v[0], v[1], v[2]];
        let cross = [
            field.sub(field.mul(p[1], q[2]), field.mul(p[2], q[1])),
            field.sub(field.mul(p[2], q[0]), field.mul(p[0], q[2])),
            field.sub(field.mul(p[0], q[1]), field.mul(p[1], q[0])),
        ];
        if cross.iter().any(|c| !c.is_zero()) {
            return q;
        }
    }
    unreachable!("a line holds two independent points")
}

/// Intersection multiplicity of the curve and a line at a common point.
pub fn line_intersection_multiplicity(f: &MultiPoly, line: Line, p: Point) -> Result<u32> {
    if f.has_lambda() {
        return Err(Error::MissingParameter);
    }
    let field = f.field().clone();
    let on_line = (0..3).fold(Elem::ZERO, |acc, i| field.add(acc, field.mul(line[i], p[i])));
    if !on_line.is_zero() || !f.evaluate(p, None)?.is_zero() {
        return Err(Error::PointNotOnBoth);
    }
    let q = other_point_on_line(&field, line, p);
    // complete (p, q) to a basis with a standard vector
    let mut a = None;
    for k in 0..3 {
        let mut m = [[Elem::ZERO; 3]; 3];
        for r in 0..3 {
            m[r][0] = p[r];
            m[r][1] = q[r];
        }
        m[k][2] = Elem::ONE;
        let cand = Matrix3::new(&field, m);
        if !cand.det().is_zero() {
            a = Some(cand);
            break;
        }
    }
    let a = a.expect("p and q are independent");
    let g = f.linear_substitute(&a)?;
    // restriction to the line is the part without the third variable; p is (1:0)
    g.terms()
        .iter()
        .filter(|t| t.0.exp(Var::Z) == 0)
        .map(|t| t.0.exp(Var::Y))
        .min()
        .ok_or(Error::LineIsComponent)
}

/// Sum of the intersection multiplicities over the points of the line in PG(2, p^sub).
pub fn line_intersection_total(f: &MultiPoly, line: Line, sub: u32) -> Result<u32> {
    let field = f.field().clone();
    let mut total = 0;
    for p in points(&field, sub)? {
        let on_line = (0..3).fold(Elem::ZERO, |acc, i| field.add(acc, field.mul(line[i], p[i])));
        if on_line.is_zero() && f.evaluate(p, None)?.is_zero() {
            total += line_intersection_multiplicity(f, line, p)?;
        }
    }
    Ok(total)
}

/// Whether `f` is a scalar multiple of the product of the lines, taken with multiplicity.
pub fn verify_line_splitting(f: &MultiPoly, lines: &[(Line, u32)]) -> Result<bool> {
    let field = f.field();
    let total: u64 = lines.iter().map(|l| l.1 as u64).sum();
    let deg = f.degree().unwrap_or(0);
    if total != deg {
        return Err(Error::DegreeMismatch { expected: deg, found: total });
    }
    let mut prod = MultiPoly::one(field);
    for &(l, e) in lines {
        prod = prod.try_mul(&MultiPoly::linear(field, l).pow(e as u64)?)?;
    }
    Ok(f.proportional(&prod).is_some())
}

/// The tangent line at a smooth point, from the gradient.
pub fn tangent_line(f: &MultiPoly, p: Point) -> Result<Option<Line>> {
    let field = f.field();
    let mut g = [Elem::ZERO; 3];
    for (i, &v) in Var::XYZ.iter().enumerate() {
        g[i] = f.partial_derivative(v).evaluate(p, None)?;
    }
    if g.iter().all(|e| e.is_zero()) {
        return Ok(None);
    }
    Ok(Some(normalize_line(field, g)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::Monomial;

    fn mono(f: &Field, x: u32, y: u32, z: u32, c: i64) -> MultiPoly {
        MultiPoly::monomial(f, Monomial::new(x, y, z, 0), f.from_int(c))
    }

    #[test]
    fn plane_has_right_size() {
        let f = Field::new(2, 2).unwrap();
        assert_eq!(points(&f, 2).unwrap().len(), 21);
        assert_eq!(points(&f, 1).unwrap().len(), 7);
    }

    #[test]
    fn conic_has_q_plus_one_points() {
        let f = Field::new(5, 2).unwrap();
        let conic = &mono(&f, 0, 2, 0, 1) - &mono(&f, 1, 0, 1, 1);
        assert_eq!(count_points(&conic, 1, None).unwrap(), 6);
        assert_eq!(count_points(&conic, 2, None).unwrap(), 26);
    }

    #[test]
    fn node_and_cusp() {
        let f = Field::new(5, 1).unwrap();
        // Y^2 Z = X^2 (X + Z) has a node at (0:0:1) with tangents Y = X and Y = -X
        let node = &mono(&f, 0, 2, 1, 1) - &(&mono(&f, 3, 0, 0, 1) + &mono(&f, 2, 0, 1, 1));
        let r = multiplicity_at(&node, [Elem::ZERO, Elem::ZERO, Elem::ONE]).unwrap();
        assert_eq!(r.multiplicity, 2);
        assert_eq!(r.tangents.len(), 2);
        assert_eq!(r.unsplit, 0);
        let cusp = &mono(&f, 0, 2, 1, 1) - &mono(&f, 3, 0, 0, 1);
        let r = multiplicity_at(&cusp, [Elem::ZERO, Elem::ZERO, Elem::ONE]).unwrap();
        assert_eq!(r.multiplicity, 2);
        assert_eq!(r.tangents, vec![([Elem::ZERO, Elem::ONE, Elem::ZERO], 2)]);
        assert_eq!(multiplicity_at(&cusp, [Elem::ONE, Elem::ZERO, Elem::ONE]).unwrap_err(), Error::PointNotOnCurve);
        let sing = singular_points(&node, 1, None).unwrap();
        assert_eq!(sing.len(), 1);
    }

    #[test]
    fn tangent_line_meets_twice() {
        let f = Field::new(3, 1).unwrap();
        let conic = &mono(&f, 0, 2, 0, 1) - &mono(&f, 1, 0, 1, 1);
        let p = [Elem::ZERO, Elem::ZERO, Elem::ONE];
        let t = tangent_line(&conic, p).unwrap().unwrap();
        assert_eq!(line_intersection_multiplicity(&conic, t, p).unwrap(), 2);
        let secant = [Elem::ZERO, Elem::ONE, Elem::ZERO];
        assert_eq!(line_intersection_multiplicity(&conic, secant, p).unwrap(), 1);
        let away = [Elem::ONE, Elem::ONE, Elem::ONE];
        assert_eq!(line_intersection_multiplicity(&conic, t, away).unwrap_err(), Error::PointNotOnBoth);
    }

    #[test]
    fn line_components() {
        let f = Field::new(2, 1).unwrap();
        let x = MultiPoly::var(&f, Var::X);
        let y = MultiPoly::var(&f, Var::Y);
        let prod = &x * &y;
        let p = [Elem::ZERO, Elem::ZERO, Elem::ONE];
        let xline = [Elem::ONE, Elem::ZERO, Elem::ZERO];
        assert_eq!(line_intersection_multiplicity(&prod, xline, p).unwrap_err(), Error::LineIsComponent);
        let yline = [Elem::ZERO, Elem::ONE, Elem::ZERO];
        assert!(verify_line_splitting(&prod, &[(xline, 1), (yline, 1)]).unwrap());
        assert!(!verify_line_splitting(&prod, &[(xline, 2)]).unwrap());
        assert!(verify_line_splitting(&prod, &[(xline, 1)]).is_err());
    }
}
