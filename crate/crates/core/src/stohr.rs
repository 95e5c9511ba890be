//! Nonclassicality and Frobenius nonclassicality certificates.
//!
//! A curve `f = 0` is witnessed nonclassical for the power `s` of the
//! characteristic when each partial derivative is an `s`-th power,
//! `f_(X_i) = U_i^s`, so that `sum U_i^s X_i = H f`. It is Frobenius
//! nonclassical for `q'` when moreover `f` divides
//! `U_1 X^(q'/s) + U_2 Y^(q'/s) + U_3 Z^(q'/s)`; the quotient is `L`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mpoly::{Monomial, MultiPoly, Var};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonclassicalityWitness {
    pub curve: MultiPoly,
    pub s: u64,
    pub u: [MultiPoly; 3],
    /// `H` with `sum U_i^s X_i = H f`.
    pub h: MultiPoly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrobeniusCertificate {
    pub witness: NonclassicalityWitness,
    pub qprime: u64,
    /// `L` with `sum U_i X_i^(q'/s) = L f`, when it exists.
    pub l: Option<MultiPoly>,
    pub verdict: bool,
}

/// JSON form of a Frobenius certificate; polynomials use the text format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StohrCertificateJson {
    pub curve: String,
    pub s: u64,
    pub qprime: u64,
    pub u: [String; 3],
    pub h: String,
    pub l: Option<String>,
    pub verdict: bool,
}

impl FrobeniusCertificate {
    pub fn to_json(&self, curve_label: &str) -> StohrCertificateJson {
        let w = &self.witness;
        StohrCertificateJson {
            curve: curve_label.to_string(),
            s: w.s,
            qprime: self.qprime,
            u: [w.u[0].to_text(), w.u[1].to_text(), w.u[2].to_text()],
            h: w.h.to_text(),
            l: self.l.as_ref().map(|l| l.to_text()),
            verdict: self.verdict,
        }
    }
}

fn is_power_of(s: u64, p: u64) -> bool {
    let mut t = 1;
    while t < s {
        t *= p;
    }
    t == s && s > 1
}

fn x_i(f: &MultiPoly, i: usize, e: u64) -> Result<MultiPoly> {
    let mut m = [0u32; 4];
    m[i] = u32::try_from(e).map_err(|_| Error::ExponentOverflow)?;
    Ok(MultiPoly::monomial(f.field(), Monomial(m), crate::gf::Elem::ONE))
}

/// The `s`-th roots of the partial derivatives, if they all exist.
pub fn extract_witness(f: &MultiPoly, s: u64) -> Result<Option<NonclassicalityWitness>> {
    if f.has_lambda() {
        return Err(Error::MissingParameter);
    }
    let p = f.field().characteristic() as u64;
    if !is_power_of(s, p) {
        return Err(Error::InvalidParameter(format!("{s} is not a power of the characteristic {p} above 1")));
    }
    let mut u = Vec::with_capacity(3);
    for v in Var::XYZ {
        match f.partial_derivative(v).qth_root(s) {
            Some(r) => u.push(r),
            None => return Ok(None),
        }
    }
    let mut sum = MultiPoly::zero(f.field());
    for (i, ui) in u.iter().enumerate() {
        sum = sum.try_add(&ui.pow(s)?.try_mul(&x_i(f, i, 1)?)?)?;
    }
    let h = sum.divide_exact(f)?.ok_or_else(|| {
        Error::InvalidParameter("Euler identity failed; the form is not homogeneous".into())
    })?;
    let [u1, u2, u3]: [MultiPoly; 3] = u.try_into().expect("three partials");
    Ok(Some(NonclassicalityWitness { curve: f.clone(), s, u: [u1, u2, u3], h }))
}

/// The smallest power `s` of the characteristic, at most the degree, admitting a witness.
pub fn search_witness(f: &MultiPoly) -> Result<Option<NonclassicalityWitness>> {
    let p = f.field().characteristic() as u64;
    let d = f.degree().unwrap_or(0);
    let mut s = p;
    while s <= d.max(p) {
        if let Some(w) = extract_witness(f, s)? {
            return Ok(Some(w));
        }
        s *= p;
    }
    Ok(None)
}

pub fn frobenius_check(w: &NonclassicalityWitness, qprime: u64) -> Result<FrobeniusCertificate> {
    if qprime % w.s != 0 || !is_power_of(qprime, w.curve.field().characteristic() as u64) {
        return Err(Error::InvalidParameter(format!("q'={qprime} must be a power of p divisible by s={}", w.s)));
    }
    let e = qprime / w.s;
    let f = &w.curve;
    let mut sum = MultiPoly::zero(f.field());
    for (i, ui) in w.u.iter().enumerate() {
        sum = sum.try_add(&ui.try_mul(&x_i(f, i, e)?)?)?;
    }
    let l = sum.divide_exact(f)?;
    let verdict = l.is_some();
    Ok(FrobeniusCertificate { witness: w.clone(), qprime, l, verdict })
}

/// The number of GF(q')-points of a smooth Frobenius nonclassical curve of degree `d`.
pub fn hefez_voloch_count(d: u64, qprime: u64) -> i128 {
    d as i128 * (qprime as i128 - d as i128 + 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build, CurveId, CurveParams};
    use crate::gf::Field;

    #[test]
    fn hermitian_n2() {
        let f = Field::new(2, 2).unwrap();
        let spec = build(&f, CurveId::Hermitian, &CurveParams::new(2)).unwrap();
        let w = extract_witness(&spec.poly, 2).unwrap().unwrap();
        assert_eq!(w.h, MultiPoly::one(&f));
        let c = frobenius_check(&w, 4).unwrap();
        assert!(c.verdict);
        assert_eq!(c.l, Some(MultiPoly::one(&f)));
        assert_eq!(hefez_voloch_count(3, 4), 9);
    }

    #[test]
    fn fermat_has_no_witness() {
        let f = Field::new(3, 1).unwrap();
        let spec = build(&f, CurveId::Fermat, &CurveParams::new(3)).unwrap();
        assert_eq!(extract_witness(&spec.poly, 3).unwrap(), None);
        assert_eq!(search_witness(&spec.poly).unwrap(), None);
    }

    #[test]
    fn rejects_bad_powers() {
        let f = Field::new(2, 2).unwrap();
        let spec = build(&f, CurveId::Hermitian, &CurveParams::new(2)).unwrap();
        assert!(extract_witness(&spec.poly, 3).is_err());
        let w = extract_witness(&spec.poly, 2).unwrap().unwrap();
        assert!(frobenius_check(&w, 6).is_err());
    }
}
