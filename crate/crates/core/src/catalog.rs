//! The named curves, pencils and nets.
//!
//! Every constructor returns a homogeneous form in `X, Y, Z` whose degree is
//! checked against the closed formula for that family. Pencils are built as
//! `G - L*H`; pass [`Lambda::Value`] to specialise `L`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::groups::{smallest_prime_factor, Projectivity};
use crate::linalg::{kernel, Matrix3};
use crate::mpoly::{moore_det, moore_projective, Monomial, MultiPoly, Var};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CurveId {
    /// `F_{n,m}`; DGZ is `(3, 1)` and its dual `(3, 2)`.
    Fnm(u32, u32),
    Dgz,
    DualDgz,
    Hermitian,
    Pellikaan,
    Fermat,
    AglPencil,
    DualAglPencil,
    Pgl3Pencil,
    PguPencil,
    SingerNet,
    SingerBig,
    TrianglePencil,
    Pgl2Pencil,
    Hemisystem,
}

impl CurveId {
    pub const NAMED: [CurveId; 15] = [
        CurveId::Dgz,
        CurveId::DualDgz,
        CurveId::Fnm(3, 1),
        CurveId::Hermitian,
        CurveId::Pellikaan,
        CurveId::Fermat,
        CurveId::AglPencil,
        CurveId::DualAglPencil,
        CurveId::Pgl3Pencil,
        CurveId::PguPencil,
        CurveId::SingerNet,
        CurveId::SingerBig,
        CurveId::TrianglePencil,
        CurveId::Pgl2Pencil,
        CurveId::Hemisystem,
    ];

    pub fn is_pencil(self) -> bool {
        matches!(
            self,
            CurveId::AglPencil
                | CurveId::DualAglPencil
                | CurveId::Pgl3Pencil
                | CurveId::PguPencil
                | CurveId::TrianglePencil
                | CurveId::Pgl2Pencil
                | CurveId::Hemisystem
        )
    }

    /// Whether the size parameter is `n` (the curve lives over GF(n^2)) rather than `q`.
    pub fn uses_n(self) -> bool {
        matches!(self, CurveId::Hermitian | CurveId::PguPencil)
    }

    pub fn requires_odd(self) -> bool {
        matches!(self, CurveId::Pgl2Pencil | CurveId::Hemisystem)
    }

    pub fn description(self) -> &'static str {
        match self {
            CurveId::Fnm(..) => "quotient of Moore determinants M(n,m)/M(2,1)",
            CurveId::Dgz => "DGZ curve F_{3,1}, degree q^3-q^2",
            CurveId::DualDgz => "dual DGZ curve F_{3,2}, degree q^3-q",
            CurveId::Hermitian => "Hermitian curve Y^nZ+YZ^n-X^(n+1)",
            CurveId::Pellikaan => "X^(q+1)Y+Y^(q+1)Z+Z^(q+1)X",
            CurveId::Fermat => "X^(q-1)+Y^(q-1)+Z^(q-1)",
            CurveId::AglPencil => "DGZ - L Z^(q^3-q^2)",
            CurveId::DualAglPencil => "DGZ - L (lines of PG(2,q) missing (1:0:0))^(q-1)",
            CurveId::Pgl3Pencil => "G - L H^(q(q-1)), H the product of all F_q-lines",
            CurveId::PguPencil => "Y^(n^3)Z+YZ^(n^3)-X^(n^3+1) - L F^(n^2-n+1), F Hermitian",
            CurveId::SingerNet => "aX^(q+1)Y + bY^(q+1)Z + cZ^(q+1)X",
            CurveId::SingerBig => "X^(q+1)Z^q + Y^(q+1)X^q + Z^(q+1)Y^q",
            CurveId::TrianglePencil => "L(X^(q-1)+Y^(q-1)+Z^(q-1))^2 + (XY)^(q-1)+(YZ)^(q-1)+(ZX)^(q-1)",
            CurveId::Pgl2Pencil => "Y^(q+1)-(X^qZ+XZ^q) - L(Y^2-2XZ)^((q+1)/2)",
            CurveId::Hemisystem => "(X+Y)^(q+1)Z^(q-1) - 2((XY)^q+XYZ^(2q-2)) - L(X-Y)^(q+1)Z^(q-1)",
        }
    }
}

impl fmt::Display for CurveId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CurveId::Fnm(n, m) => return write!(f, "fnm-{n}-{m}"),
            CurveId::Dgz => "dgz",
            CurveId::DualDgz => "dual-dgz",
            CurveId::Hermitian => "hermitian",
            CurveId::Pellikaan => "pellikaan",
            CurveId::Fermat => "fermat",
            CurveId::AglPencil => "agl-pencil",
            CurveId::DualAglPencil => "dual-agl-pencil",
            CurveId::Pgl3Pencil => "pgl3-pencil",
            CurveId::PguPencil => "pgu-pencil",
            CurveId::SingerNet => "singer-net",
            CurveId::SingerBig => "singer-big",
            CurveId::TrianglePencil => "triangle-pencil",
            CurveId::Pgl2Pencil => "pgl2-pencil",
            CurveId::Hemisystem => "hemisystem",
        };
        f.write_str(s)
    }
}

impl FromStr for CurveId {
    type Err = Error;

    /// Accepts the catalog ids; `fnm` alone means `(3, 1)` and `fnm-N-M` picks `(N, M)`.
    fn from_str(s: &str) -> Result<CurveId> {
        if s == "fnm" {
            return Ok(CurveId::Fnm(3, 1));
        }
        if let Some(rest) = s.strip_prefix("fnm-") {
            let (a, b) = rest.split_once('-').ok_or_else(|| Error::Unknown(s.into()))?;
            let n = a.parse().map_err(|_| Error::Unknown(s.into()))?;
            let m = b.parse().map_err(|_| Error::Unknown(s.into()))?;
            return Ok(CurveId::Fnm(n, m));
        }
        CurveId::NAMED
            .into_iter()
            .find(|c| c.to_string() == s)
            .ok_or_else(|| Error::Unknown(s.to_string()))
    }
}

/// The pencil parameter: left symbolic as the variable `L`, or a field value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lambda {
    Symbolic,
    Value(Elem),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveParams {
    /// `q`, or `n` for the Hermitian curve and its pencil.
    pub q: u64,
    pub lambda: Lambda,
    /// Coefficients of the Singer net member; defaults to `(1:1:1)`.
    pub net: Option<[Elem; 3]>,
}

impl CurveParams {
    pub fn new(q: u64) -> CurveParams {
        CurveParams { q, lambda: Lambda::Symbolic, net: None }
    }

    pub fn with_lambda(q: u64, lambda: Elem) -> CurveParams {
        CurveParams { q, lambda: Lambda::Value(lambda), net: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveSpec {
    pub id: CurveId,
    pub params: CurveParams,
    pub poly: MultiPoly,
    pub expected_degree: u64,
    /// For pencils, the pair `(G, H)` with `poly = G - L*H`.
    pub pencil: Option<(MultiPoly, MultiPoly)>,
}

impl CurveSpec {
    /// The member with `L` replaced by the given value.
    pub fn member(&self, lambda: Elem) -> MultiPoly {
        self.poly.specialize_lambda(lambda)
    }

    pub fn label(&self) -> String {
        match self.params.lambda {
            Lambda::Symbolic => format!("{}(q={})", self.id, self.params.q),
            Lambda::Value(l) => {
                format!("{}(q={}, L={})", self.id, self.params.q, self.poly.field().format_elem(l))
            }
        }
    }
}

/// `(p, h)` with `q = p^h`.
pub fn prime_power(q: u64) -> Result<(u64, u32)> {
    let p = smallest_prime_factor(q).ok_or_else(|| Error::InvalidParameter(format!("{q} is not a prime power")))?;
    let mut t = q;
    let mut h = 0;
    while t % p == 0 {
        t /= p;
        h += 1;
    }
    if t != 1 {
        return Err(Error::InvalidParameter(format!("{q} is not a prime power")));
    }
    Ok((p, h))
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn exp32(v: u64) -> Result<u32> {
    u32::try_from(v).map_err(|_| Error::ExponentOverflow)
}

struct Builder<'a> {
    f: &'a Field,
    x: MultiPoly,
    y: MultiPoly,
    z: MultiPoly,
    l: MultiPoly,
}

impl<'a> Builder<'a> {
    fn new(f: &'a Field) -> Builder<'a> {
        Builder {
            f,
            x: MultiPoly::var(f, Var::X),
            y: MultiPoly::var(f, Var::Y),
            z: MultiPoly::var(f, Var::Z),
            l: MultiPoly::var(f, Var::L),
        }
    }

    fn mono(&self, x: u64, y: u64, z: u64, c: i64) -> Result<MultiPoly> {
        Ok(MultiPoly::monomial(self.f, Monomial::new(exp32(x)?, exp32(y)?, exp32(z)?, 0), self.f.from_int(c)))
    }

    fn pencil(&self, g: &MultiPoly, h: &MultiPoly) -> Result<MultiPoly> {
        g.try_sub(&self.l.try_mul(h)?)
    }
}

/// `F_{n,m} = M(n,m) / M(2,1)` over the prime field.
pub fn fnm(field: &Field, q: u64, n: u32, m: u32) -> Result<MultiPoly> {
    let num = moore_projective(field, q, n, m)?;
    let den = moore_projective(field, q, 2, 1)?;
    num.divide_exact(&den)?
        .ok_or_else(|| Error::InvalidParameter(format!("M(2,1) does not divide M({n},{m})")))
}

/// The product of all `q^2+q+1` lines of PG(2,q), as the Moore determinant `M(2,1)`.
pub fn all_lines(field: &Field, q: u64) -> Result<MultiPoly> {
    moore_projective(field, q, 2, 1)
}

/// The tangent line `F_X X + F_Y Y + F_Z Z` of a curve at a point, as coefficients.
pub fn gradient(f: &MultiPoly, point: [Elem; 3]) -> Result<[Elem; 3]> {
    let mut out = [Elem::ZERO; 3];
    for (i, v) in Var::XYZ.iter().enumerate() {
        out[i] = f.partial_derivative(*v).evaluate(point, None)?;
    }
    Ok(out)
}

pub fn build(field: &Field, id: CurveId, params: &CurveParams) -> Result<CurveSpec> {
    let f = field;
    let b = Builder::new(f);
    let q = params.q;
    let (p, _) = prime_power(q)?;
    if p != f.characteristic() as u64 {
        return Err(Error::InvalidParameter(format!("q={q} has the wrong characteristic for {f:?}")));
    }
    if id.requires_odd() && p == 2 {
        return Err(Error::InvalidParameter(format!("{id} requires odd q")));
    }
    let base_order = if id.uses_n() { q * q } else { q };
    f.subfield_degree_of_order(base_order)?;

    let mut pencil = None;
    let (poly, expected): (MultiPoly, u64) = match id {
        CurveId::Fnm(n, m) => {
            if !(n > m && m >= 1 && gcd(n, m) == 1 && (n, m) != (2, 1)) {
                return Err(Error::InvalidParameter(format!("F_{{{n},{m}}} needs n > m >= 1, gcd 1, (n,m) != (2,1)")));
            }
            let d = q.checked_pow(n).ok_or(Error::ExponentOverflow)? + q.pow(m) - q * q - q;
            (fnm(f, q, n, m)?, d)
        }
        CurveId::Dgz => (fnm(f, q, 3, 1)?, q.pow(3) - q * q),
        CurveId::DualDgz => (fnm(f, q, 3, 2)?, q.pow(3) - q),
        CurveId::Hermitian => {
            let n = q;
            let poly = &(&b.mono(0, n, 1, 1)? + &b.mono(0, 1, n, 1)?) - &b.mono(n + 1, 0, 0, 1)?;
            (poly, n + 1)
        }
        CurveId::Pellikaan => {
            let poly = &(&b.mono(q + 1, 1, 0, 1)? + &b.mono(0, q + 1, 1, 1)?) + &b.mono(1, 0, q + 1, 1)?;
            (poly, q + 2)
        }
        CurveId::Fermat => {
            let poly = &(&b.mono(q - 1, 0, 0, 1)? + &b.mono(0, q - 1, 0, 1)?) + &b.mono(0, 0, q - 1, 1)?;
            (poly, q - 1)
        }
        CurveId::SingerNet => {
            let [c1, c2, c3] = params.net.unwrap_or([Elem::ONE; 3]);
            let poly = &(&b.mono(q + 1, 1, 0, 1)?.scale(c1) + &b.mono(0, q + 1, 1, 1)?.scale(c2))
                + &b.mono(1, 0, q + 1, 1)?.scale(c3);
            if poly.is_zero() {
                return Err(Error::InvalidParameter("net coefficients are all zero".into()));
            }
            (poly, q + 2)
        }
        CurveId::SingerBig => {
            let poly = &(&b.mono(q + 1, 0, q, 1)? + &b.mono(q, q + 1, 0, 1)?) + &b.mono(0, q, q + 1, 1)?;
            (poly, 2 * q + 1)
        }
        CurveId::AglPencil => {
            let d = q.pow(3) - q * q;
            let g = fnm(f, q, 3, 1)?;
            let h = b.mono(0, 0, d, 1)?;
            let poly = b.pencil(&g, &h)?;
            pencil = Some((g, h));
            (poly, d)
        }
        CurveId::DualAglPencil => {
            let d = q.pow(3) - q * q;
            let g = fnm(f, q, 3, 1)?;
            // lines through (1:0:0): Z and Y - cZ for c in GF(q)
            let through = b.z.try_mul(&(&b.mono(0, q, 0, 1)? - &b.mono(0, 1, q - 1, 1)?))?;
            let rest = all_lines(f, q)?
                .divide_exact(&through)?
                .ok_or_else(|| Error::InvalidParameter("line product is not divisible".into()))?;
            let h = rest.pow(q - 1)?;
            let poly = b.pencil(&g, &h)?;
            pencil = Some((g, h));
            (poly, d)
        }
        CurveId::Pgl3Pencil => {
            let hh = all_lines(f, q)?;
            let q2 = exp32(q * q)?;
            let q4 = exp32(q.pow(4))?;
            let g = moore_det(f, [1, q2, q4])
                .divide_exact(&hh)?
                .ok_or_else(|| Error::InvalidParameter("H does not divide the q^2-Moore determinant".into()))?;
            let h = hh.pow(q * (q - 1))?;
            let poly = b.pencil(&g, &h)?;
            pencil = Some((g, h));
            (poly, q.pow(4) - q)
        }
        CurveId::PguPencil => {
            let n = q;
            let n3 = n.pow(3);
            let g = &(&b.mono(0, n3, 1, 1)? + &b.mono(0, 1, n3, 1)?) - &b.mono(n3 + 1, 0, 0, 1)?;
            let herm = &(&b.mono(0, n, 1, 1)? + &b.mono(0, 1, n, 1)?) - &b.mono(n + 1, 0, 0, 1)?;
            let h = herm.pow(n * n - n + 1)?;
            let poly = b.pencil(&g, &h)?;
            pencil = Some((g, h));
            (poly, n3 + 1)
        }
        CurveId::TrianglePencil => {
            let e = q - 1;
            let fermat = &(&b.mono(e, 0, 0, 1)? + &b.mono(0, e, 0, 1)?) + &b.mono(0, 0, e, 1)?;
            let g = &(&b.mono(e, e, 0, 1)? + &b.mono(0, e, e, 1)?) + &b.mono(e, 0, e, 1)?;
            let h = fermat.pow(2)?;
            // L*h + g, written as g - (-L)*h
            let poly = g.try_add(&b.l.try_mul(&h)?)?;
            pencil = Some((g, h.neg()));
            (poly, 2 * q - 2)
        }
        CurveId::Pgl2Pencil => {
            let g = &(&b.mono(0, q + 1, 0, 1)? - &b.mono(q, 0, 1, 1)?) - &b.mono(1, 0, q, 1)?;
            let conic = &b.mono(0, 2, 0, 1)? - &b.mono(1, 0, 1, 2)?;
            let h = conic.pow((q + 1) / 2)?;
            let poly = b.pencil(&g, &h)?;
            pencil = Some((g, h));
            (poly, q + 1)
        }
        CurveId::Hemisystem => {
            let zq = b.z.pow(q - 1)?;
            let plus = (&b.x + &b.y).pow(q + 1)?;
            let minus = (&b.x - &b.y).pow(q + 1)?;
            let xy = &b.x * &b.y;
            let inner = &xy.pow(q)? + &(&xy * &b.z.pow(2 * q - 2)?);
            let g = &(&plus * &zq) - &inner.scale(f.from_int(2));
            let h = &minus * &zq;
            let poly = b.pencil(&g, &h)?;
            pencil = Some((g, h));
            (poly, 2 * q)
        }
    };

    let poly = match params.lambda {
        Lambda::Symbolic => poly,
        Lambda::Value(l) => poly.specialize_lambda(l),
    };
    let found = poly.degree().unwrap_or(0);
    if !poly.is_homogeneous() || found != expected {
        return Err(Error::DegreeMismatch { expected, found });
    }
    Ok(CurveSpec { id, params: params.clone(), poly, expected_degree: expected, pencil })
}

/// The pair `(a, b)` with `f = a*g1 + b*g2`, or `None` if `f` is not in the pencil.
pub fn pencil_coordinates(f: &MultiPoly, g1: &MultiPoly, g2: &MultiPoly) -> Result<Option<(Elem, Elem)>> {
    let field = f.field();
    if g1.field() != field || g2.field() != field {
        return Err(Error::ContextMismatch);
    }
    let (d1, d2) = (g1.degree().unwrap_or(0), g2.degree().unwrap_or(0));
    if d1 != d2 {
        return Err(Error::DegreeMismatch { expected: d1, found: d2 });
    }
    let mut support: Vec<Monomial> =
        f.terms().iter().chain(g1.terms()).chain(g2.terms()).map(|t| t.0).collect();
    support.sort();
    support.dedup();
    // columns: a, b, and the constant -1 multiplying f
    let rows: Vec<Vec<Elem>> = support
        .iter()
        .map(|m| vec![g1.coeff(m), g2.coeff(m), field.neg(f.coeff(m))])
        .collect();
    let ker = kernel(field, &rows, 3);
    for v in ker {
        if !v[2].is_zero() {
            let inv = field.inv(v[2])?;
            return Ok(Some((field.mul(v[0], inv), field.mul(v[1], inv))));
        }
    }
    Ok(None)
}

/// Search `A = diag(c, d, 1)` over GF(p^ext) with `f(A v)` proportional to `g`.
pub fn projective_equivalence_witness(
    f: &MultiPoly,
    g: &MultiPoly,
    ext: u32,
    cap: u64,
) -> Result<Option<Projectivity>> {
    let field = f.field();
    if g.field() != field {
        return Err(Error::ContextMismatch);
    }
    let (df, dg) = (f.degree().unwrap_or(0), g.degree().unwrap_or(0));
    if df != dg {
        return Err(Error::DegreeMismatch { expected: dg, found: df });
    }
    let sub = field.subfield_elements(ext)?;
    let units = &sub[1..];
    let size = (units.len() as u64).pow(2);
    if size > cap {
        return Err(Error::SearchSpaceExceeded { size, cap });
    }
    let fs: Vec<Monomial> = f.terms().iter().map(|t| t.0).collect();
    let gs: Vec<Monomial> = g.terms().iter().map(|t| t.0).collect();
    if fs != gs {
        return Ok(None);
    }
    for &c in units {
        for &d in units {
            let a = Matrix3::diag(field, [c, d, Elem::ONE]);
            let img = f.linear_substitute(&a)?;
            if img.proportional(g).is_some() {
                return Ok(Some(Projectivity::new(a, "diag(c,d,1)")?));
            }
        }
    }
    Ok(None)
}

/// A primitive cube root of unity: in GF(q) when 3 divides q-1, else in GF(q^2).
///
/// Returns the root and the absolute degree of the subfield it was taken from.
pub fn cube_root_of_unity(field: &Field, q: u64) -> Result<(Elem, u32)> {
    let h = field.subfield_degree_of_order(q)?;
    let deg = if (q - 1) % 3 == 0 { h } else { 2 * h };
    let g = field.subfield_generator(deg)?;
    let order = (field.characteristic() as u64).pow(deg) - 1;
    if order % 3 != 0 {
        return Err(Error::InvalidParameter("no cube root of unity in characteristic 3".into()));
    }
    Ok((field.pow(g, order / 3), deg))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for id in CurveId::NAMED {
            let s = id.to_string();
            let back: CurveId = s.parse().unwrap();
            assert_eq!(back.to_string(), s);
        }
        assert_eq!("fnm".parse::<CurveId>().unwrap(), CurveId::Fnm(3, 1));
        assert_eq!("fnm-5-2".parse::<CurveId>().unwrap(), CurveId::Fnm(5, 2));
        assert!("conic".parse::<CurveId>().is_err());
    }

    #[test]
    fn degrees_at_q2() {
        let f = Field::new(2, 6).unwrap();
        let cases = [
            (CurveId::Dgz, 2, 4),
            (CurveId::DualDgz, 2, 6),
            (CurveId::Hermitian, 2, 3),
            (CurveId::Pellikaan, 2, 4),
            (CurveId::Fermat, 4, 3),
            (CurveId::AglPencil, 2, 4),
            (CurveId::DualAglPencil, 2, 4),
            (CurveId::Pgl3Pencil, 2, 14),
            (CurveId::PguPencil, 2, 9),
            (CurveId::SingerNet, 2, 4),
            (CurveId::SingerBig, 2, 5),
            (CurveId::TrianglePencil, 4, 6),
        ];
        for (id, q, d) in cases {
            let spec = build(&f, id, &CurveParams::new(q)).unwrap();
            assert_eq!(spec.expected_degree, d, "{id}");
        }
    }

    #[test]
    fn odd_only_curves() {
        let f = Field::new(2, 2).unwrap();
        assert!(matches!(build(&f, CurveId::Pgl2Pencil, &CurveParams::new(2)), Err(Error::InvalidParameter(_))));
        let f3 = Field::new(3, 1).unwrap();
        assert_eq!(build(&f3, CurveId::Hemisystem, &CurveParams::new(3)).unwrap().expected_degree, 6);
        assert_eq!(build(&f3, CurveId::Pgl2Pencil, &CurveParams::new(3)).unwrap().expected_degree, 4);
    }

    #[test]
    fn fnm_parameter_checks() {
        let f = Field::new(2, 1).unwrap();
        assert!(build(&f, CurveId::Fnm(4, 2), &CurveParams::new(2)).is_err());
        assert!(build(&f, CurveId::Fnm(2, 1), &CurveParams::new(2)).is_err());
        assert_eq!(build(&f, CurveId::Fnm(4, 1), &CurveParams::new(2)).unwrap().expected_degree, 12);
    }

    #[test]
    fn pencil_coordinates_basic() {
        let f = Field::new(3, 1).unwrap();
        let spec = build(&f, CurveId::Pgl2Pencil, &CurveParams::new(3)).unwrap();
        let (g, h) = spec.pencil.clone().unwrap();
        assert_eq!(pencil_coordinates(&g, &g, &h).unwrap(), Some((Elem::ONE, Elem::ZERO)));
        assert_eq!(pencil_coordinates(&(&g + &h), &g, &h).unwrap(), Some((Elem::ONE, Elem::ONE)));
        let other = MultiPoly::monomial(&f, Monomial::new(4, 0, 0, 0), Elem::ONE);
        assert_eq!(pencil_coordinates(&other, &g, &h).unwrap(), None);
        let low = MultiPoly::var(&f, Var::X);
        assert!(matches!(pencil_coordinates(&g, &g, &low), Err(Error::DegreeMismatch { .. })));
    }

    #[test]
    fn cube_roots() {
        let f = Field::new(2, 2).unwrap();
        let (w, deg) = cube_root_of_unity(&f, 4).unwrap();
        assert_eq!(deg, 2);
        assert_eq!(f.multiplicative_order(w), Some(3));
        let f8 = Field::new(2, 6).unwrap();
        assert_eq!(cube_root_of_unity(&f8, 8).unwrap().1, 6);
    }
}
