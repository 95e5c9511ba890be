//! Generators of the projective groups that act on the catalog curves.
//!
//! A projectivity is stored as a normalised 3x3 matrix `A`; it acts on a
//! polynomial by `f -> f(A v)`. Row `i` of `A` is the linear form that
//! replaces the `i`-th coordinate, so `(X + aZ, Y, Z)` has rows
//! `[1, 0, a], [0, 1, 0], [0, 0, 1]`.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::linalg::Matrix3;

#[derive(Clone, PartialEq, Eq)]
pub struct Projectivity {
    pub matrix: Matrix3,
    pub label: String,
}

impl fmt::Debug for Projectivity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {:?}", self.label, self.matrix)
    }
}

impl Projectivity {
    pub fn new(matrix: Matrix3, label: impl Into<String>) -> Result<Projectivity> {
        if matrix.det().is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(Projectivity { matrix: matrix.normalized(), label: label.into() })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupKind {
    Pgl3,
    Psl3,
    Agl2,
    DualAgl2,
    Pgu3,
    Triangle,
    Singer,
    SingerNormalizer,
    Pgl2Conic,
    HemisystemLinear,
}

impl GroupKind {
    pub const ALL: [GroupKind; 10] = [
        GroupKind::Pgl3,
        GroupKind::Psl3,
        GroupKind::Agl2,
        GroupKind::DualAgl2,
        GroupKind::Pgu3,
        GroupKind::Triangle,
        GroupKind::Singer,
        GroupKind::SingerNormalizer,
        GroupKind::Pgl2Conic,
        GroupKind::HemisystemLinear,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GroupKind::Pgl3 => "pgl3",
            GroupKind::Psl3 => "psl3",
            GroupKind::Agl2 => "agl2",
            GroupKind::DualAgl2 => "dual-agl2",
            GroupKind::Pgu3 => "pgu3",
            GroupKind::Triangle => "triangle",
            GroupKind::Singer => "singer",
            GroupKind::SingerNormalizer => "singer-normalizer",
            GroupKind::Pgl2Conic => "pgl2-conic",
            GroupKind::HemisystemLinear => "hemisystem-linear",
        }
    }
}

impl FromStr for GroupKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<GroupKind> {
        GroupKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Unknown(s.to_string()))
    }
}

/// A group together with its size parameter.
///
/// For [`GroupKind::Pgu3`] the parameter is `n`, and the group lives in
/// PGL(3, n^2); for every other kind it is the field order `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupId {
    pub kind: GroupKind,
    pub param: u64,
}

impl GroupId {
    pub fn new(kind: GroupKind, param: u64) -> GroupId {
        GroupId { kind, param }
    }

    /// Order of the field the matrix entries live in.
    pub fn entry_field_order(&self) -> u64 {
        match self.kind {
            GroupKind::Pgu3 => self.param * self.param,
            GroupKind::Singer | GroupKind::SingerNormalizer => self.param.pow(3),
            _ => self.param,
        }
    }

    /// The order predicted by the group's structure.
    pub fn order_formula(&self) -> BigUint {
        let q = BigUint::from(self.param);
        let one = BigUint::from(1u32);
        let q2 = &q * &q;
        let q3 = &q2 * &q;
        match self.kind {
            GroupKind::Pgl3 => &q3 * (&q3 - &one) * (&q2 - &one),
            GroupKind::Psl3 => {
                let g = if self.param % 3 == 1 { 3u32 } else { 1 };
                &q3 * (&q3 - &one) * (&q2 - &one) / BigUint::from(g)
            }
            GroupKind::Agl2 | GroupKind::DualAgl2 => &q3 * (&q + &one) * (&q - &one) * (&q - &one),
            GroupKind::Pgu3 => &q3 * (&q3 + &one) * (&q2 - &one),
            GroupKind::Triangle => BigUint::from(6u32) * (&q - &one) * (&q - &one),
            GroupKind::Singer => &q2 + &q + &one,
            GroupKind::SingerNormalizer => BigUint::from(3u32) * (&q2 + &q + &one),
            GroupKind::Pgl2Conic => &q * (&q2 - &one),
            GroupKind::HemisystemLinear => BigUint::from(2u32) * &q * (&q - &one),
        }
    }

    /// Check that the parameter is a prime power meeting the kind's constraints.
    pub fn validate(&self) -> Result<()> {
        let q = self.param;
        let p = smallest_prime_factor(q).ok_or_else(|| Error::InvalidParameter(format!("{q} is not a prime power")))?;
        let mut t = q;
        while t % p == 0 {
            t /= p;
        }
        if t != 1 {
            return Err(Error::InvalidParameter(format!("{q} is not a prime power")));
        }
        if matches!(self.kind, GroupKind::Pgl2Conic | GroupKind::HemisystemLinear) && p == 2 {
            return Err(Error::InvalidParameter(format!("{} requires odd q", self.kind.name())));
        }
        Ok(())
    }
}

pub(crate) fn smallest_prime_factor(n: u64) -> Option<u64> {
    if n < 2 {
        return None;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return Some(d);
        }
        d += 1;
    }
    Some(n)
}

fn m3(field: &Field, rows: [[Elem; 3]; 3]) -> Matrix3 {
    Matrix3::new(field, rows)
}

/// The generating set of `id`, with entries in `field`.
pub fn generators(field: &Field, id: GroupId) -> Result<Vec<Projectivity>> {
    id.validate()?;
    let f = field;
    let (o, z) = (Elem::ONE, Elem::ZERO);
    let entry_degree = f.subfield_degree_of_order(id.entry_field_order())?;
    let q = id.param;
    let mut out = Vec::new();
    let mut push = |m: Matrix3, label: String| -> Result<()> {
        out.push(Projectivity::new(m, label)?);
        Ok(())
    };
    match id.kind {
        GroupKind::Pgl3 | GroupKind::Psl3 => {
            let params = if id.kind == GroupKind::Pgl3 {
                vec![o]
            } else {
                f.subfield_basis(entry_degree)?
            };
            for i in 0..3 {
                for j in 0..3 {
                    if i == j {
                        continue;
                    }
                    for &a in &params {
                        let mut m = Matrix3::identity(f);
                        m.m[i][j] = a;
                        push(m, format!("t{}{}({})", i + 1, j + 1, f.format_elem(a)))?;
                    }
                }
            }
            if id.kind == GroupKind::Pgl3 {
                let g = f.subfield_generator(entry_degree)?;
                push(Matrix3::diag(f, [g, o, o]), "diag(g,1,1)".into())?;
            }
        }
        GroupKind::Agl2 | GroupKind::DualAgl2 => {
            let basis = f.subfield_basis(entry_degree)?;
            let g = f.subfield_generator(entry_degree)?;
            let mut affine = Vec::new();
            for &a in &basis {
                let e = f.format_elem(a);
                affine.push((m3(f, [[o, z, a], [z, o, z], [z, z, o]]), format!("X+{e}Z")));
                affine.push((m3(f, [[o, z, z], [z, o, a], [z, z, o]]), format!("Y+{e}Z")));
                affine.push((m3(f, [[o, a, z], [z, o, z], [z, z, o]]), format!("X+{e}Y")));
                affine.push((m3(f, [[o, z, z], [a, o, z], [z, z, o]]), format!("Y+{e}X")));
            }
            affine.push((Matrix3::diag(f, [g, o, o]), "diag(g,1,1)".into()));
            if id.kind == GroupKind::Agl2 {
                for (m, l) in affine {
                    push(m, l)?;
                }
            } else {
                // transpose-inverse fixes (0:0:1); relabelling X <-> Z moves that to (1:0:0)
                let swap = Matrix3::permutation(f, [2, 1, 0]);
                for (m, l) in affine {
                    let d = swap.mul(&m.inverse()?.transpose())?.mul(&swap)?;
                    push(d, format!("dual[{l}]"))?;
                }
            }
        }
        GroupKind::Pgu3 => {
            let n = q;
            let qq = n * n;
            push(m3(f, [[o, z, z], [z, z, o], [z, o, z]]), "swap(Y,Z)".into())?;
            for u in f.subfield_elements(entry_degree)? {
                let un = f.pow(u, n);
                for e in f.hermitian_trace_solutions(u, n)? {
                    push(
                        m3(f, [[o, z, u], [un, o, e], [z, z, o]]),
                        format!("a2({},{})", f.format_elem(u), f.format_elem(e)),
                    )?;
                }
            }
            let c = f.subfield_generator(entry_degree)?;
            debug_assert_eq!(f.pow(c, qq - 1), o);
            push(Matrix3::diag(f, [c, f.pow(c, n + 1), o]), "a3(c)".into())?;
        }
        GroupKind::Triangle => {
            let g = f.subfield_generator(entry_degree)?;
            push(Matrix3::diag(f, [g, o, o]), "diag(g,1,1)".into())?;
            push(Matrix3::diag(f, [o, g, o]), "diag(1,g,1)".into())?;
            push(Matrix3::permutation(f, [1, 2, 0]), "rot(Y,Z,X)".into())?;
            push(Matrix3::permutation(f, [1, 0, 2]), "swap(X,Y)".into())?;
        }
        GroupKind::Singer | GroupKind::SingerNormalizer => {
            // b has order q^2 + q + 1, i.e. norm 1 down to GF(q)
            let b = f.pow(f.subfield_generator(entry_degree)?, q - 1);
            push(Matrix3::diag(f, [b, f.pow(b, q * q + 1), o]), "sigma".into())?;
            if id.kind == GroupKind::SingerNormalizer {
                push(Matrix3::permutation(f, [1, 2, 0]), "rot(Y,Z,X)".into())?;
            }
        }
        GroupKind::Pgl2Conic => {
            let half = f.inv(f.from_int(2))?;
            push(Matrix3::permutation(f, [2, 1, 0]), "tau".into())?;
            for a in f.subfield_basis(entry_degree)? {
                let a2 = f.mul(f.mul(a, a), half);
                push(m3(f, [[o, a, a2], [z, o, a], [z, z, o]]), format!("sigma({})", f.format_elem(a)))?;
            }
            let b = f.subfield_generator(entry_degree)?;
            push(Matrix3::diag(f, [f.mul(b, b), b, o]), "delta(g)".into())?;
        }
        GroupKind::HemisystemLinear => {
            for a in f.subfield_basis(entry_degree)? {
                push(m3(f, [[o, z, a], [z, o, a], [z, z, o]]), format!("beta1({})", f.format_elem(a)))?;
            }
            let g = f.subfield_generator(entry_degree)?;
            push(Matrix3::diag(f, [g, g, o]), "beta2(g)".into())?;
            push(Matrix3::permutation(f, [1, 0, 2]), "swap(X,Y)".into())?;
        }
    }
    Ok(out)
}

/// Size of the group generated by `gens`, or `None` once it exceeds `cap`.
pub fn closure_order(gens: &[Projectivity], cap: usize) -> Result<Option<usize>> {
    let Some(first) = gens.first() else {
        return Ok(Some(1));
    };
    let field = first.matrix.field.clone();
    let id = Matrix3::identity(&field);
    let mut seen: HashSet<[u32; 9]> = HashSet::new();
    seen.insert(id.key());
    let mut queue = VecDeque::from([id]);
    while let Some(m) = queue.pop_front() {
        for g in gens {
            let next = m.mul(&g.matrix)?.normalized();
            if seen.insert(next.key()) {
                if seen.len() > cap {
                    return Ok(None);
                }
                queue.push_back(next);
            }
        }
    }
    Ok(Some(seen.len()))
}

/// The product of the given generators, left to right, without normalisation.
pub fn word_product(field: &Field, gens: &[Projectivity], word: &[usize]) -> Result<Matrix3> {
    let mut m = Matrix3::identity(field);
    for &i in word {
        let g = gens.get(i).ok_or_else(|| Error::InvalidParameter(format!("generator index {i}")))?;
        m = m.mul(&g.matrix)?;
    }
    Ok(m)
}

/// Exchange format: entries are generator-power indices in the ambient field, `null` for zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSet {
    pub group: String,
    pub q: u64,
    pub n: Option<u64>,
    pub matrices: Vec<Vec<Option<u64>>>,
}

impl GeneratorSet {
    pub fn new(id: GroupId, gens: &[Projectivity]) -> GeneratorSet {
        let (q, n) = match id.kind {
            GroupKind::Pgu3 => (id.param * id.param, Some(id.param)),
            _ => (id.param, None),
        };
        let matrices = gens
            .iter()
            .map(|g| g.matrix.m.iter().flatten().map(|&e| g.matrix.field.log(e)).collect())
            .collect();
        GeneratorSet { group: id.kind.name().to_string(), q, n, matrices }
    }

    pub fn to_matrices(&self, field: &Field) -> Result<Vec<Matrix3>> {
        self.matrices
            .iter()
            .map(|row| {
                if row.len() != 9 {
                    return Err(Error::InvalidParameter("matrix must have 9 entries".into()));
                }
                let mut m = [[Elem::ZERO; 3]; 3];
                for (i, e) in row.iter().enumerate() {
                    m[i / 3][i % 3] = e.map_or(Elem::ZERO, |j| field.gen_pow(j));
                }
                Ok(Matrix3::new(field, m))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_kinds() {
        for k in GroupKind::ALL {
            assert_eq!(k.name().parse::<GroupKind>().unwrap(), k);
        }
        assert!("pgl4".parse::<GroupKind>().is_err());
    }

    #[test]
    fn small_closures_match_formulas() {
        let cases = [
            (GroupId::new(GroupKind::Pgl3, 2), 2u32, 1u32),
            (GroupId::new(GroupKind::Triangle, 3), 3, 1),
            (GroupId::new(GroupKind::Singer, 2), 2, 3),
            (GroupId::new(GroupKind::SingerNormalizer, 2), 2, 3),
            (GroupId::new(GroupKind::SingerNormalizer, 3), 3, 3),
            (GroupId::new(GroupKind::Singer, 4), 2, 6),
            (GroupId::new(GroupKind::Pgl2Conic, 3), 3, 1),
            (GroupId::new(GroupKind::HemisystemLinear, 5), 5, 1),
            (GroupId::new(GroupKind::Agl2, 2), 2, 1),
            (GroupId::new(GroupKind::DualAgl2, 3), 3, 1),
            (GroupId::new(GroupKind::Pgu3, 2), 2, 2),
        ];
        for (id, p, k) in cases {
            let f = Field::new(p, k).unwrap();
            let gens = generators(&f, id).unwrap();
            let n = closure_order(&gens, 1_000_000).unwrap().unwrap();
            assert_eq!(BigUint::from(n), id.order_formula(), "{id:?}");
        }
    }

    #[test]
    fn dual_agl_fixes_first_point() {
        let f = Field::new(3, 1).unwrap();
        for g in generators(&f, GroupId::new(GroupKind::DualAgl2, 3)).unwrap() {
            let img = g.matrix.apply([Elem::ONE, Elem::ZERO, Elem::ZERO]);
            assert!(img[1].is_zero() && img[2].is_zero());
        }
    }

    #[test]
    fn field_requirements() {
        let f = Field::new(2, 2).unwrap();
        assert!(matches!(generators(&f, GroupId::new(GroupKind::Singer, 2)), Err(Error::FieldTooSmall { .. })));
        assert!(matches!(
            generators(&f, GroupId::new(GroupKind::Pgl2Conic, 4)),
            Err(Error::InvalidParameter(_))
        ));
        assert!(generators(&f, GroupId::new(GroupKind::Pgl3, 6)).is_err());
    }

    #[test]
    fn generator_json_round_trip() {
        let f = Field::new(2, 3).unwrap();
        let id = GroupId::new(GroupKind::SingerNormalizer, 2);
        let gens = generators(&f, id).unwrap();
        let set = GeneratorSet::new(id, &gens);
        let text = serde_json::to_string(&set).unwrap();
        let back: GeneratorSet = serde_json::from_str(&text).unwrap();
        let mats = back.to_matrices(&f).unwrap();
        assert_eq!(mats, gens.iter().map(|g| g.matrix.clone()).collect::<Vec<_>>());
    }
}
