//! Invariance of forms under projectivities, and invariant forms of a given degree.

use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::CurveSpec;
use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::groups::{generators, word_product, GroupId, Projectivity};
use crate::linalg::{kernel, Matrix3};
use crate::mpoly::{Monomial, MultiPoly};

/// The scalar `c` with `f(A v) = c f(v)`, if there is one.
///
/// The pencil variable is untouched by the substitution, so for a symbolic
/// pencil a returned scalar certifies every member at once.
pub fn check_invariance(f: &MultiPoly, a: &Matrix3) -> Result<Option<Elem>> {
    let g = f.linear_substitute(a)?;
    Ok(g.proportional(f))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorScalar {
    pub label: String,
    pub scalar: Option<Elem>,
}

#[derive(Debug, Clone)]
pub struct InvarianceCertificate {
    pub curve: String,
    pub group: GroupId,
    pub field: Field,
    pub per_generator: Vec<GeneratorScalar>,
    pub verdict: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificateJson {
    pub curve: String,
    pub group: String,
    pub generators: Vec<ScalarJson>,
    pub verdict: bool,
}

/// A scalar as a generator-power index; `None` when the generator breaks invariance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScalarJson {
    pub label: String,
    pub scalar: Option<u64>,
}

impl InvarianceCertificate {
    pub fn to_json(&self) -> CertificateJson {
        CertificateJson {
            curve: self.curve.clone(),
            group: format!("{}({})", self.group.kind.name(), self.group.param),
            generators: self
                .per_generator
                .iter()
                .map(|g| ScalarJson { label: g.label.clone(), scalar: g.scalar.and_then(|c| self.field.log(c)) })
                .collect(),
            verdict: self.verdict,
        }
    }

    pub fn failing(&self) -> Vec<&str> {
        self.per_generator.iter().filter(|g| g.scalar.is_none()).map(|g| g.label.as_str()).collect()
    }
}

pub fn certify(curve: &str, f: &MultiPoly, id: GroupId, gens: &[Projectivity]) -> Result<InvarianceCertificate> {
    let per_generator = gens
        .par_iter()
        .map(|g| Ok(GeneratorScalar { label: g.label.clone(), scalar: check_invariance(f, &g.matrix)? }))
        .collect::<Result<Vec<_>>>()?;
    let verdict = per_generator.iter().all(|g| g.scalar.is_some());
    Ok(InvarianceCertificate { curve: curve.to_string(), group: id, field: f.field().clone(), per_generator, verdict })
}

pub fn check_group_invariance(spec: &CurveSpec, id: GroupId) -> Result<InvarianceCertificate> {
    let gens = generators(spec.poly.field(), id)?;
    certify(&spec.label(), &spec.poly, id, &gens)
}

/// For each word, whether the scalar of the word's product equals the product
/// of the generator scalars. Returns the number of words that agree.
pub fn cocycle_agreements(
    f: &MultiPoly,
    gens: &[Projectivity],
    scalars: &[Elem],
    words: &[Vec<usize>],
) -> Result<usize> {
    let field = f.field();
    let ok = words
        .par_iter()
        .map(|w| -> Result<bool> {
            let m = word_product(field, gens, w)?;
            let expect = w.iter().fold(Elem::ONE, |acc, &i| field.mul(acc, scalars[i]));
            Ok(check_invariance(f, &m)? == Some(expect))
        })
        .collect::<Result<Vec<bool>>>()?;
    Ok(ok.into_iter().filter(|&b| b).count())
}

/// The degree-`d` monomials in `X, Y, Z`, in decreasing monomial order.
pub fn monomial_basis(d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for a in (0..=d).rev() {
        for b in (0..=d - a).rev() {
            out.push(Monomial::new(a, b, d - a - b, 0));
        }
    }
    out
}

/// Matrix of `f -> f(A v)` on degree-`d` forms; column `j` is the image of monomial `j`.
pub fn action_matrix(a: &Matrix3, basis: &[Monomial]) -> Result<Vec<Vec<Elem>>> {
    let field = &a.field;
    let n = basis.len();
    let mut m = vec![vec![Elem::ZERO; n]; n];
    for (j, mono) in basis.iter().enumerate() {
        let img = MultiPoly::monomial(field, *mono, Elem::ONE).linear_substitute(a)?;
        for &(t, c) in img.terms() {
            let i = basis.iter().position(|b| *b == t).expect("substitution preserves degree");
            m[i][j] = c;
        }
    }
    Ok(m)
}

#[derive(Debug, Clone)]
pub struct JointEigenspace {
    /// One eigenvalue per generator, in generator order.
    pub eigenvalues: Vec<Elem>,
    pub basis: Vec<MultiPoly>,
}

impl JointEigenspace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Whether `f` lies in the span of this space.
    pub fn contains(&self, f: &MultiPoly) -> bool {
        if f.is_zero() {
            return true;
        }
        let Some(field) = self.basis.first().map(|b| b.field().clone()) else {
            return false;
        };
        let mons = monomial_basis(f.degree().unwrap_or(0) as u32);
        let rows: Vec<Vec<Elem>> = mons
            .iter()
            .map(|m| self.basis.iter().map(|b| b.coeff(m)).chain([field.neg(f.coeff(m))]).collect())
            .collect();
        let k = self.basis.len();
        kernel(&field, &rows, k + 1).iter().any(|v| !v[k].is_zero())
    }
}

/// All joint eigenspaces of the group's generators on degree-`d` forms, with
/// eigenvalues searched in GF(p^ext). Each nonzero vector in such a space is
/// an invariant curve of degree `d`.
pub fn invariant_form_space(
    field: &Field,
    id: GroupId,
    d: u32,
    ext: u32,
    cap: usize,
) -> Result<Vec<JointEigenspace>> {
    if d == 0 {
        return Err(Error::InvalidParameter("degree must be at least 1".into()));
    }
    let basis = monomial_basis(d);
    let dim = basis.len();
    if dim > cap {
        return Err(Error::CapExceeded { dim, cap });
    }
    let scalars: Vec<Elem> = field.subfield_elements(ext)?.into_iter().skip(1).collect();
    let gens = generators(field, id)?;
    let mats = gens.iter().map(|g| action_matrix(&g.matrix, &basis)).collect::<Result<Vec<_>>>()?;

    let identity: Vec<Vec<Elem>> = (0..dim)
        .map(|j| (0..dim).map(|i| if i == j { Elem::ONE } else { Elem::ZERO }).collect())
        .collect();
    // each space is a list of column vectors
    let mut spaces: Vec<(Vec<Elem>, Vec<Vec<Elem>>)> = vec![(Vec::new(), identity)];
    for m in &mats {
        let next: Vec<(Vec<Elem>, Vec<Vec<Elem>>)> = spaces
            .par_iter()
            .flat_map_iter(|(eigs, cols)| {
                // image of each basis column under m
                let images: Vec<Vec<Elem>> = cols.iter().map(|c| mat_vec(field, m, c)).collect();
                let mut found = Vec::new();
                for &c in &scalars {
                    // (m - c) B y = 0
                    let k = cols.len();
                    let rows: Vec<Vec<Elem>> = (0..dim)
                        .map(|i| (0..k).map(|j| field.sub(images[j][i], field.mul(c, cols[j][i]))).collect())
                        .collect();
                    let ker = kernel(field, &rows, k);
                    if ker.is_empty() {
                        continue;
                    }
                    let new_cols: Vec<Vec<Elem>> = ker
                        .iter()
                        .map(|y| {
                            (0..dim)
                                .map(|i| {
                                    (0..k).fold(Elem::ZERO, |acc, j| field.add(acc, field.mul(y[j], cols[j][i])))
                                })
                                .collect()
                        })
                        .collect();
                    let mut e = eigs.clone();
                    e.push(c);
                    found.push((e, new_cols));
                }
                found
            })
            .collect();
        spaces = next;
        if spaces.is_empty() {
            break;
        }
    }
    Ok(spaces
        .into_iter()
        .map(|(eigenvalues, cols)| JointEigenspace {
            eigenvalues,
            basis: cols
                .iter()
                .map(|c| {
                    let terms = basis.iter().zip(c).map(|(m, &v)| (*m, v)).collect();
                    MultiPoly::from_terms(field, terms).normalize()
                })
                .collect(),
        })
        .collect())
}

fn mat_vec(field: &Field, m: &[Vec<Elem>], v: &[Elem]) -> Vec<Elem> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(Elem::ZERO, |acc, (&a, &b)| if a.is_zero() || b.is_zero() { acc } else { field.add(acc, field.mul(a, b)) })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build, CurveId, CurveParams};
    use crate::groups::GroupKind;

    #[test]
    fn fermat_q3_scalars() {
        let f = Field::new(3, 1).unwrap();
        let spec = build(&f, CurveId::Fermat, &CurveParams::new(3)).unwrap();
        let g = f.generator();
        let c = check_invariance(&spec.poly, &Matrix3::diag(&f, [g, Elem::ONE, Elem::ONE])).unwrap();
        assert_eq!(c, Some(Elem::ONE));
        let cert = check_group_invariance(&spec, GroupId::new(GroupKind::Pgl3, 3)).unwrap();
        assert!(!cert.verdict);
        assert!(!cert.failing().is_empty());
    }

    #[test]
    fn basis_size() {
        assert_eq!(monomial_basis(4).len(), 15);
        assert_eq!(monomial_basis(14).len(), 120);
    }

    #[test]
    fn cap_is_enforced() {
        let f = Field::new(3, 1).unwrap();
        let r = invariant_form_space(&f, GroupId::new(GroupKind::Triangle, 3), 15, 1, 120);
        assert_eq!(r.unwrap_err(), Error::CapExceeded { dim: 136, cap: 120 });
    }

    #[test]
    fn certificate_json_shape() {
        let f = Field::new(2, 2).unwrap();
        let spec = build(&f, CurveId::Hermitian, &CurveParams::new(2)).unwrap();
        let cert = check_group_invariance(&spec, GroupId::new(GroupKind::Pgu3, 2)).unwrap();
        assert!(cert.verdict);
        let v = serde_json::to_value(cert.to_json()).unwrap();
        assert_eq!(v["verdict"], serde_json::Value::Bool(true));
        assert_eq!(v["generators"][0]["label"], "swap(Y,Z)");
        assert_eq!(v["generators"][0]["scalar"], 0);
    }
}
