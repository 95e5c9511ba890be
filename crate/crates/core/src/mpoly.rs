//! Sparse polynomials in `X, Y, Z` and a pencil parameter `L` over GF(p^k).
//!
//! `L` is an ordinary ring variable of weight zero: it never counts towards
//! the degree, so a pencil `G - L*H` is homogeneous whenever `G` and `H` are.

use std::collections::BTreeMap;
use std::fmt;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::linalg::{ElementaryOp, Matrix3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    X = 0,
    Y = 1,
    Z = 2,
    L = 3,
}

impl Var {
    pub const ALL: [Var; 4] = [Var::X, Var::Y, Var::Z, Var::L];
    pub const XYZ: [Var; 3] = [Var::X, Var::Y, Var::Z];

    fn name(self) -> &'static str {
        ["X", "Y", "Z", "L"][self as usize]
    }
}

/// Exponents of `X, Y, Z, L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub [u32; 4]);

impl Monomial {
    pub fn new(x: u32, y: u32, z: u32, l: u32) -> Monomial {
        Monomial([x, y, z, l])
    }

    pub fn degree(&self) -> u64 {
        self.0[0] as u64 + self.0[1] as u64 + self.0[2] as u64
    }

    pub fn exp(&self, v: Var) -> u32 {
        self.0[v as usize]
    }

    pub fn checked_mul(&self, o: &Monomial) -> Result<Monomial> {
        let mut r = [0u32; 4];
        for i in 0..4 {
            r[i] = self.0[i].checked_add(o.0[i]).ok_or(Error::ExponentOverflow)?;
        }
        Ok(Monomial(r))
    }

    pub fn divides(&self, o: &Monomial) -> bool {
        (0..4).all(|i| self.0[i] <= o.0[i])
    }

    fn div(&self, o: &Monomial) -> Monomial {
        let mut r = [0u32; 4];
        for i in 0..4 {
            r[i] = self.0[i] - o.0[i];
        }
        Monomial(r)
    }

    fn sort_key(&self) -> (u64, u32, u32, u32, u32) {
        (self.degree(), self.0[0], self.0[1], self.0[2], self.0[3])
    }
}

/// Graded order on `X, Y, Z`, then lexicographic `X > Y > Z`, then `L`.
impl Ord for Monomial {
    fn cmp(&self, other: &Monomial) -> std::cmp::Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Monomial) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial with terms sorted in increasing monomial order and no zero coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    field: Field,
    terms: Vec<(Monomial, Elem)>,
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

type Acc = FxHashMap<Monomial, Elem>;

fn acc_add(field: &Field, acc: &mut Acc, m: Monomial, c: Elem) {
    if c.is_zero() {
        return;
    }
    let slot = acc.entry(m).or_insert(Elem::ZERO);
    *slot = field.add(*slot, c);
}

/// `C(n, k) mod p` for `n, k < p`.
fn small_binom(n: u32, k: u32, p: u32) -> u32 {
    if k > n {
        return 0;
    }
    let p64 = p as u64;
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..k as u64 {
        num = num * ((n as u64 - i) % p64) % p64;
        den = den * ((i + 1) % p64) % p64;
    }
    let mut inv = 1u64;
    let mut b = den;
    let mut e = p64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            inv = inv * b % p64;
        }
        b = b * b % p64;
        e >>= 1;
    }
    (num * inv % p64) as u32
}

/// All `(m, C(e, m) mod p)` with nonzero binomial, by Lucas: the base-p digits of
/// `m` must not exceed those of `e`.
fn lucas_terms(e: u32, p: u32) -> Vec<(u32, u32)> {
    let mut digits = Vec::new();
    let mut x = e;
    while x > 0 {
        digits.push(x % p);
        x /= p;
    }
    let mut out = vec![(0u32, 1u32)];
    let mut place = 1u32;
    for &d in &digits {
        let mut next = Vec::with_capacity(out.len() * (d as usize + 1));
        for &(m, c) in &out {
            for t in 0..=d {
                let b = small_binom(d, t, p);
                next.push((m + t * place, ((c as u64 * b as u64) % p as u64) as u32));
            }
        }
        out = next;
        place = place.wrapping_mul(p);
    }
    out
}

impl MultiPoly {
    pub fn zero(field: &Field) -> MultiPoly {
        MultiPoly { field: field.clone(), terms: Vec::new() }
    }

    pub fn constant(field: &Field, c: Elem) -> MultiPoly {
        MultiPoly::monomial(field, Monomial::default(), c)
    }

    pub fn one(field: &Field) -> MultiPoly {
        MultiPoly::constant(field, Elem::ONE)
    }

    pub fn monomial(field: &Field, m: Monomial, c: Elem) -> MultiPoly {
        let terms = if c.is_zero() { Vec::new() } else { vec![(m, c)] };
        MultiPoly { field: field.clone(), terms }
    }

    pub fn var(field: &Field, v: Var) -> MultiPoly {
        let mut e = [0u32; 4];
        e[v as usize] = 1;
        MultiPoly::monomial(field, Monomial(e), Elem::ONE)
    }

    /// Linear form `a X + b Y + c Z`.
    pub fn linear(field: &Field, coeffs: [Elem; 3]) -> MultiPoly {
        let terms = coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                let mut e = [0u32; 4];
                e[i] = 1;
                (Monomial(e), c)
            })
            .collect();
        MultiPoly::from_terms(field, terms)
    }

    /// Build from arbitrary terms; repeated monomials are summed.
    pub fn from_terms(field: &Field, terms: Vec<(Monomial, Elem)>) -> MultiPoly {
        let mut acc = Acc::default();
        for (m, c) in terms {
            acc_add(field, &mut acc, m, c);
        }
        MultiPoly::from_acc(field, acc)
    }

    fn from_acc(field: &Field, acc: Acc) -> MultiPoly {
        let mut terms: Vec<(Monomial, Elem)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        MultiPoly { field: field.clone(), terms }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn terms(&self) -> &[(Monomial, Elem)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Elem {
        match self.terms.binary_search_by(|t| t.0.cmp(m)) {
            Ok(i) => self.terms[i].1,
            Err(_) => Elem::ZERO,
        }
    }

    pub fn leading_term(&self) -> Option<(Monomial, Elem)> {
        self.terms.last().copied()
    }

    /// Total degree in `X, Y, Z`; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u64> {
        self.terms.iter().map(|t| t.0.degree()).max()
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.iter().map(|t| t.0.exp(v)).max().unwrap_or(0)
    }

    pub fn has_lambda(&self) -> bool {
        self.degree_in(Var::L) > 0
    }

    /// Homogeneous in `X, Y, Z`; the zero polynomial counts as homogeneous.
    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some(t) => {
                let d = t.0.degree();
                self.terms.iter().all(|s| s.0.degree() == d)
            }
        }
    }

    fn same_field(&self, o: &MultiPoly) -> Result<()> {
        if self.field == o.field {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn try_add(&self, o: &MultiPoly) -> Result<MultiPoly> {
        self.same_field(o)?;
        let f = &self.field;
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < o.terms.len() {
            let take = match (self.terms.get(i), o.terms.get(j)) {
                (Some(a), Some(b)) => a.0.cmp(&b.0),
                (Some(_), None) => std::cmp::Ordering::Less,
                _ => std::cmp::Ordering::Greater,
            };
            match take {
                std::cmp::Ordering::Less => {
                    out.push(self.terms[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(o.terms[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = f.add(self.terms[i].1, o.terms[j].1);
                    if !c.is_zero() {
                        out.push((self.terms[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Ok(MultiPoly { field: f.clone(), terms: out })
    }

    pub fn neg(&self) -> MultiPoly {
        let f = &self.field;
        MultiPoly {
            field: f.clone(),
            terms: self.terms.iter().map(|&(m, c)| (m, f.neg(c))).collect(),
        }
    }

    pub fn try_sub(&self, o: &MultiPoly) -> Result<MultiPoly> {
        self.try_add(&o.neg())
    }

    pub fn scale(&self, c: Elem) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(&self.field);
        }
        let f = &self.field;
        MultiPoly {
            field: f.clone(),
            terms: self.terms.iter().map(|&(m, a)| (m, f.mul(a, c))).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: Elem) -> Result<MultiPoly> {
        if c.is_zero() {
            return Ok(MultiPoly::zero(&self.field));
        }
        let f = &self.field;
        let terms = self
            .terms
            .iter()
            .map(|&(t, a)| Ok((t.checked_mul(m)?, f.mul(a, c))))
            .collect::<Result<Vec<_>>>()?;
        Ok(MultiPoly { field: f.clone(), terms })
    }

    pub fn try_mul(&self, o: &MultiPoly) -> Result<MultiPoly> {
        self.same_field(o)?;
        let f = &self.field;
        if self.terms.len() == 1 {
            let (m, c) = self.terms[0];
            return o.mul_monomial(&m, c);
        }
        if o.terms.len() == 1 {
            let (m, c) = o.terms[0];
            return self.mul_monomial(&m, c);
        }
        let mut acc = Acc::default();
        acc.reserve(self.terms.len() * o.terms.len() / 2 + 1);
        for &(ma, ca) in &self.terms {
            for &(mb, cb) in &o.terms {
                acc_add(f, &mut acc, ma.checked_mul(&mb)?, f.mul(ca, cb));
            }
        }
        Ok(MultiPoly::from_acc(f, acc))
    }

    /// `self^(p^j)`, computed termwise since the Frobenius is additive.
    pub fn frobenius_power(&self, j: u32) -> Result<MultiPoly> {
        let f = &self.field;
        let p = f.characteristic() as u64;
        let s = p.checked_pow(j).filter(|&s| s <= u32::MAX as u64).ok_or(Error::ExponentOverflow)? as u32;
        let mut terms = Vec::with_capacity(self.terms.len());
        for &(m, c) in &self.terms {
            let mut e = [0u32; 4];
            for i in 0..4 {
                e[i] = m.0[i].checked_mul(s).ok_or(Error::ExponentOverflow)?;
            }
            terms.push((Monomial(e), f.pow(c, s as u64)));
        }
        Ok(MultiPoly { field: f.clone(), terms })
    }

    /// `self^e`, using the base-p expansion of `e` and the Frobenius.
    pub fn pow(&self, e: u64) -> Result<MultiPoly> {
        let p = self.field.characteristic() as u64;
        let mut result = MultiPoly::one(&self.field);
        let mut base = self.clone();
        let mut e = e;
        let mut first = true;
        while e > 0 {
            if !first {
                base = base.frobenius_power(1)?;
            }
            first = false;
            let d = e % p;
            for _ in 0..d {
                result = result.try_mul(&base)?;
            }
            e /= p;
        }
        Ok(result)
    }

    /// Set `L` to a value.
    pub fn specialize_lambda(&self, lambda: Elem) -> MultiPoly {
        if !self.has_lambda() {
            return self.clone();
        }
        let f = &self.field;
        let terms = self
            .terms
            .iter()
            .map(|&(m, c)| {
                let l = m.0[3];
                (Monomial([m.0[0], m.0[1], m.0[2], 0]), f.mul(c, f.pow(lambda, l as u64)))
            })
            .collect();
        MultiPoly::from_terms(f, terms)
    }

    pub fn evaluate(&self, point: [Elem; 3], lambda: Option<Elem>) -> Result<Elem> {
        let f = &self.field;
        let mut s = Elem::ZERO;
        for &(m, c) in &self.terms {
            let mut t = c;
            for i in 0..3 {
                if m.0[i] > 0 {
                    t = f.mul(t, f.pow(point[i], m.0[i] as u64));
                }
            }
            if m.0[3] > 0 {
                let l = lambda.ok_or(Error::MissingParameter)?;
                t = f.mul(t, f.pow(l, m.0[3] as u64));
            }
            s = f.add(s, t);
        }
        Ok(s)
    }

    pub fn partial_derivative(&self, v: Var) -> MultiPoly {
        let f = &self.field;
        let i = v as usize;
        let terms = self
            .terms
            .iter()
            .filter_map(|&(m, c)| {
                let e = m.0[i];
                let k = f.from_int(e as i64);
                if e == 0 || k.is_zero() {
                    return None;
                }
                let mut n = m;
                n.0[i] -= 1;
                Some((n, f.mul(c, k)))
            })
            .collect();
        MultiPoly::from_terms(f, terms)
    }

    /// The unique `g` with `g^s = self`, if every exponent is divisible by `s`.
    ///
    /// `s` must be a power of the characteristic.
    pub fn qth_root(&self, s: u64) -> Option<MultiPoly> {
        let f = &self.field;
        let p = f.characteristic() as u64;
        let mut h = 0u32;
        let mut t = 1u64;
        while t < s {
            t *= p;
            h += 1;
        }
        if t != s {
            return None;
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for &(m, c) in &self.terms {
            if m.0.iter().any(|&e| e as u64 % s != 0) {
                return None;
            }
            let e = m.0.map(|x| (x as u64 / s) as u32);
            terms.push((Monomial(e), f.frobenius_inv(c, h)));
        }
        Some(MultiPoly::from_terms(f, terms))
    }

    /// The scalar `c` with `self = c * other`, if one exists.
    pub fn proportional(&self, other: &MultiPoly) -> Option<Elem> {
        if self.field != other.field || self.terms.len() != other.terms.len() {
            return None;
        }
        if self.is_zero() {
            return Some(Elem::ONE);
        }
        let f = &self.field;
        let (m0, a0) = self.terms[0];
        let (n0, b0) = other.terms[0];
        if m0 != n0 {
            return None;
        }
        let c = f.div(a0, b0).ok()?;
        for (&(m, a), &(n, b)) in self.terms.iter().zip(&other.terms) {
            if m != n || a != f.mul(c, b) {
                return None;
            }
        }
        Some(c)
    }

    /// Scale so that the leading coefficient is 1.
    pub fn normalize(&self) -> MultiPoly {
        match self.leading_term() {
            None => self.clone(),
            Some((_, c)) => self.scale(self.field.inv(c).expect("nonzero")),
        }
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn divide_exact(&self, d: &MultiPoly) -> Result<Option<MultiPoly>> {
        self.same_field(d)?;
        let f = &self.field;
        let (dm, dc) = d.leading_term().ok_or(Error::DivisionByZero)?;
        let dinv = f.inv(dc)?;
        let mut rem: BTreeMap<Monomial, Elem> = self.terms.iter().copied().collect();
        let mut quotient = Vec::new();
        while let Some((&m, &c)) = rem.iter().next_back() {
            if !dm.divides(&m) {
                return Ok(None);
            }
            let qm = m.div(&dm);
            let qc = f.mul(c, dinv);
            quotient.push((qm, qc));
            for &(tm, tc) in &d.terms {
                let key = tm.checked_mul(&qm)?;
                let sub = f.mul(tc, qc);
                let e = rem.entry(key).or_insert(Elem::ZERO);
                *e = f.sub(*e, sub);
                if e.is_zero() {
                    rem.remove(&key);
                }
            }
        }
        Ok(Some(MultiPoly::from_terms(f, quotient)))
    }

    /// Substitute polynomials for `X, Y, Z, L`.
    pub fn compose(&self, subs: &[MultiPoly; 4]) -> Result<MultiPoly> {
        for s in subs {
            self.same_field(s)?;
        }
        let f = &self.field;
        let mut cache: [FxHashMap<u32, MultiPoly>; 4] = Default::default();
        let mut acc = Acc::default();
        for &(m, c) in &self.terms {
            let mut t = MultiPoly::constant(f, c);
            for i in 0..4 {
                let e = m.0[i];
                if e == 0 {
                    continue;
                }
                if !cache[i].contains_key(&e) {
                    let pw = subs[i].pow(e as u64)?;
                    cache[i].insert(e, pw);
                }
                t = t.try_mul(&cache[i][&e])?;
            }
            for &(tm, tc) in &t.terms {
                acc_add(f, &mut acc, tm, tc);
            }
        }
        Ok(MultiPoly::from_acc(f, acc))
    }

    fn apply_elementary(&self, op: ElementaryOp) -> Result<MultiPoly> {
        let f = &self.field;
        match op {
            ElementaryOp::Swap(i, j) => {
                let terms = self
                    .terms
                    .iter()
                    .map(|&(m, c)| {
                        let mut n = m;
                        n.0.swap(i, j);
                        (n, c)
                    })
                    .collect();
                Ok(MultiPoly::from_terms(f, terms))
            }
            ElementaryOp::Scale(i, s) => {
                let mut out = self.clone();
                for t in out.terms.iter_mut() {
                    t.1 = f.mul(t.1, f.pow(s, t.0 .0[i] as u64));
                }
                Ok(out)
            }
            ElementaryOp::AddMul { target, source, c } => {
                let p = f.characteristic();
                let mut lucas: FxHashMap<u32, Vec<(u32, u32)>> = FxHashMap::default();
                let mut acc = Acc::default();
                for &(m, a) in &self.terms {
                    let e = m.0[target];
                    if e == 0 {
                        acc_add(f, &mut acc, m, a);
                        continue;
                    }
                    let parts = lucas.entry(e).or_insert_with(|| lucas_terms(e, p));
                    for &(k, b) in parts.iter() {
                        let mut n = m;
                        n.0[target] = e - k;
                        n.0[source] = n.0[source].checked_add(k).ok_or(Error::ExponentOverflow)?;
                        let coef = f.mul(f.mul(a, f.from_int(b as i64)), f.pow(c, k as u64));
                        acc_add(f, &mut acc, n, coef);
                    }
                }
                Ok(MultiPoly::from_acc(f, acc))
            }
        }
    }

    /// `v -> self(A v)`, through an elementary factorisation of `A`.
    pub fn linear_substitute(&self, a: &Matrix3) -> Result<MultiPoly> {
        if a.field != self.field {
            return Err(Error::ContextMismatch);
        }
        let mut g = self.clone();
        for op in a.elementary_factors()? {
            g = g.apply_elementary(op)?;
        }
        Ok(g)
    }

    /// Same as [`linear_substitute`](Self::linear_substitute), by expanding powers of the row forms.
    pub fn linear_substitute_direct(&self, a: &Matrix3) -> Result<MultiPoly> {
        if a.field != self.field {
            return Err(Error::ContextMismatch);
        }
        let f = &self.field;
        let subs = [
            MultiPoly::linear(f, a.m[0]),
            MultiPoly::linear(f, a.m[1]),
            MultiPoly::linear(f, a.m[2]),
            MultiPoly::var(f, Var::L),
        ];
        self.compose(&subs)
    }

    /// Multiply each term by the power of `Z` that brings it to degree `d`.
    pub fn homogenize(&self, d: u64) -> Result<MultiPoly> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for &(m, c) in &self.terms {
            let md = m.degree();
            if md > d {
                return Err(Error::DegreeMismatch { expected: d, found: md });
            }
            let mut n = m;
            n.0[2] = n.0[2].checked_add((d - md) as u32).ok_or(Error::ExponentOverflow)?;
            terms.push((n, c));
        }
        Ok(MultiPoly::from_terms(&self.field, terms))
    }

    /// Set `Z = 1`.
    pub fn dehomogenize(&self) -> MultiPoly {
        let terms = self
            .terms
            .iter()
            .map(|&(m, c)| (Monomial([m.0[0], m.0[1], 0, m.0[3]]), c))
            .collect();
        MultiPoly::from_terms(&self.field, terms)
    }

    /// Apply a map to every coefficient, e.g. a Frobenius twist.
    pub fn map_coeffs(&self, g: impl Fn(Elem) -> Elem) -> MultiPoly {
        let terms = self.terms.iter().map(|&(m, c)| (m, g(c))).collect();
        MultiPoly::from_terms(&self.field, terms)
    }

    /// Whether every coefficient lies in GF(p^sub).
    pub fn defined_over(&self, sub: u32) -> Result<bool> {
        for &(_, c) in &self.terms {
            if !self.field.is_in_subfield(c, sub)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Move into a bigger field containing this one, through an explicit
    /// embedding of the generator.
    pub fn embed(&self, target: &Field, image_of_generator: Elem) -> MultiPoly {
        let src = &self.field;
        let terms = self
            .terms
            .iter()
            .map(|&(m, c)| {
                let v = match src.log(c) {
                    None => Elem::ZERO,
                    Some(j) => target.pow(image_of_generator, j),
                };
                (m, v)
            })
            .collect();
        MultiPoly::from_terms(target, terms)
    }

    /// Text form: terms `j X^a Y^b Z^c L^d` joined by ` + `, where the
    /// coefficient is `g^j` for the field generator `g`; zero is `0`.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let f = &self.field;
        let mut parts = Vec::with_capacity(self.terms.len());
        for &(m, c) in self.terms.iter().rev() {
            let mut s = f.log(c).expect("nonzero coefficient").to_string();
            for v in Var::ALL {
                let e = m.exp(v);
                if e > 0 {
                    s.push_str(&format!(" {}^{}", v.name(), e));
                }
            }
            parts.push(s);
        }
        parts.join(" + ")
    }

    pub fn parse(field: &Field, text: &str) -> Result<MultiPoly> {
        let trimmed = text.trim();
        if trimmed == "0" {
            return Ok(MultiPoly::zero(field));
        }
        let mut terms = Vec::new();
        let mut offset = 0usize;
        for raw in text.split('+') {
            let perr = |pos: usize, reason: &str| Error::Parse { pos, reason: reason.into() };
            let mut tokens = raw.split_whitespace();
            let start = offset + raw.len() - raw.trim_start().len();
            let coef = tokens.next().ok_or_else(|| perr(start, "empty term"))?;
            let j: u64 = coef.parse().map_err(|_| perr(start, "coefficient must be a generator-power index"))?;
            let mut e = [0u32; 4];
            for tok in tokens {
                let (name, exp) = match tok.split_once('^') {
                    Some((n, x)) => (n, x.parse::<u32>().map_err(|_| perr(start, "bad exponent"))?),
                    None => (tok, 1),
                };
                let idx = match name {
                    "X" => 0,
                    "Y" => 1,
                    "Z" => 2,
                    "L" => 3,
                    _ => return Err(perr(start, "unknown variable")),
                };
                e[idx] = e[idx].checked_add(exp).ok_or(Error::ExponentOverflow)?;
            }
            terms.push((Monomial(e), field.gen_pow(j)));
            offset += raw.len() + 1;
        }
        Ok(MultiPoly::from_terms(field, terms))
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl std::ops::$tr<&MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            /// Panics if the operands live in different fields or exponents overflow.
            fn $method(self, rhs: &MultiPoly) -> MultiPoly {
                self.$inner(rhs).expect("polynomial arithmetic")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

/// Determinant of the 3x3 matrix whose row for `V` in `X, Y, Z` is `(V^e1, V^e2, V^e3)`.
pub fn moore_det(field: &Field, exps: [u32; 3]) -> MultiPoly {
    let mut terms = Vec::with_capacity(6);
    let perms: [([usize; 3], i64); 6] = [
        ([0, 1, 2], 1),
        ([1, 2, 0], 1),
        ([2, 0, 1], 1),
        ([2, 1, 0], -1),
        ([0, 2, 1], -1),
        ([1, 0, 2], -1),
    ];
    for (perm, sign) in perms {
        let mut e = [0u32; 4];
        for r in 0..3 {
            e[r] += exps[perm[r]];
        }
        terms.push((Monomial(e), field.from_int(sign)));
    }
    MultiPoly::from_terms(field, terms)
}

/// The projective Moore determinant with columns `V, V^(q^b), V^(q^a)`.
pub fn moore_projective(field: &Field, q: u64, a: u32, b: u32) -> Result<MultiPoly> {
    let pa = q.checked_pow(a).filter(|&v| v <= u32::MAX as u64).ok_or(Error::ExponentOverflow)?;
    let pb = q.checked_pow(b).filter(|&v| v <= u32::MAX as u64).ok_or(Error::ExponentOverflow)?;
    Ok(moore_det(field, [1, pb as u32, pa as u32]))
}

/// `(X^(q^a) - X)(Y^(q^b) - Y) - (Y^(q^a) - Y)(X^(q^b) - X)`, in `X, Y` only.
pub fn moore_affine(field: &Field, q: u64, a: u32, b: u32) -> Result<MultiPoly> {
    let pa = q.checked_pow(a).filter(|&v| v <= u32::MAX as u64).ok_or(Error::ExponentOverflow)? as u32;
    let pb = q.checked_pow(b).filter(|&v| v <= u32::MAX as u64).ok_or(Error::ExponentOverflow)? as u32;
    let x = MultiPoly::var(field, Var::X);
    let y = MultiPoly::var(field, Var::Y);
    let lin = |v: &MultiPoly, e: u32| -> Result<MultiPoly> { v.pow(e as u64)?.try_sub(v) };
    let t1 = lin(&x, pa)?.try_mul(&lin(&y, pb)?)?;
    let t2 = lin(&y, pa)?.try_mul(&lin(&x, pb)?)?;
    t1.try_sub(&t2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32, k: u32) -> Field {
        Field::new(p, k).unwrap()
    }

    #[test]
    fn lucas_matches_pascal() {
        for p in [2u32, 3, 5] {
            for e in 0..60u32 {
                let mut row = vec![1u64];
                for _ in 0..e {
                    let mut next = vec![1u64; row.len() + 1];
                    for i in 1..row.len() {
                        next[i] = (row[i - 1] + row[i]) % p as u64;
                    }
                    row = next;
                }
                let mut expect: Vec<(u32, u32)> = row
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(m, &c)| (m as u32, c as u32))
                    .collect();
                let mut got: Vec<(u32, u32)> = lucas_terms(e, p).into_iter().filter(|t| t.1 != 0).collect();
                expect.sort();
                got.sort();
                assert_eq!(got, expect, "p={p} e={e}");
            }
        }
    }

    #[test]
    fn pow_matches_repeated_multiplication() {
        let f = gf(3, 2);
        let x = MultiPoly::var(&f, Var::X);
        let y = MultiPoly::var(&f, Var::Y);
        let p = &(&x + &y) + &MultiPoly::constant(&f, f.generator());
        let mut r = MultiPoly::one(&f);
        for e in 0..12u64 {
            assert_eq!(p.pow(e).unwrap(), r);
            r = &r * &p;
        }
    }

    #[test]
    fn moore_sign_convention() {
        let f = gf(3, 1);
        let q = 3;
        let proj = moore_projective(&f, q, 2, 1).unwrap();
        let aff = moore_affine(&f, q, 2, 1).unwrap();
        let at_z1 = proj.dehomogenize();
        assert_eq!(at_z1, aff.neg());
        assert_eq!(proj.degree(), Some(13));
    }

    #[test]
    fn divide_exact_round_trip() {
        let f = gf(2, 2);
        let x = MultiPoly::var(&f, Var::X);
        let z = MultiPoly::var(&f, Var::Z);
        let a = &x.pow(5).unwrap() + &z.scale(f.generator()).pow(5).unwrap();
        let b = &x + &MultiPoly::var(&f, Var::Y);
        let prod = &a * &b;
        assert_eq!(prod.divide_exact(&b).unwrap(), Some(a.clone()));
        assert_eq!(a.divide_exact(&b).unwrap(), None);
    }

    #[test]
    fn qth_root_inverts_frobenius() {
        let f = gf(2, 3);
        let x = MultiPoly::var(&f, Var::X);
        let y = MultiPoly::var(&f, Var::Y);
        let p = &(&x * &y).scale(f.generator()) + &y;
        let sq = p.pow(4).unwrap();
        assert_eq!(sq.qth_root(4), Some(p.clone()));
        assert_eq!(p.qth_root(2), None);
    }

    #[test]
    fn text_round_trip() {
        let f = gf(5, 2);
        let p = MultiPoly::from_terms(
            &f,
            vec![
                (Monomial::new(3, 0, 1, 0), f.gen_pow(7)),
                (Monomial::new(0, 2, 2, 1), Elem::ONE),
                (Monomial::new(0, 0, 0, 0), f.gen_pow(23)),
            ],
        );
        let t = p.to_text();
        assert_eq!(MultiPoly::parse(&f, &t).unwrap(), p);
        assert_eq!(MultiPoly::parse(&f, "0").unwrap(), MultiPoly::zero(&f));
        assert!(MultiPoly::parse(&f, "1 W^2").is_err());
        assert!(MultiPoly::parse(&f, "a X").is_err());
    }

    #[test]
    fn substitution_routes_agree() {
        let f = gf(3, 2);
        let g = f.generator();
        let x = MultiPoly::var(&f, Var::X);
        let y = MultiPoly::var(&f, Var::Y);
        let z = MultiPoly::var(&f, Var::Z);
        let poly = &(&x.pow(4).unwrap() * &y) + &(&z.pow(5).unwrap()).scale(g);
        let a = Matrix3::new(
            &f,
            [[Elem::ZERO, Elem::ONE, g], [g, Elem::ZERO, Elem::ONE], [Elem::ONE, g, Elem::ONE]],
        );
        assert_eq!(poly.linear_substitute(&a).unwrap(), poly.linear_substitute_direct(&a).unwrap());
    }

    #[test]
    fn context_mismatch() {
        let a = MultiPoly::one(&gf(2, 1));
        let b = MultiPoly::one(&gf(3, 1));
        assert_eq!(a.try_add(&b).unwrap_err(), Error::ContextMismatch);
        assert_eq!(MultiPoly::var(&gf(2, 1), Var::L).evaluate([Elem::ONE; 3], None), Err(Error::MissingParameter));
    }

    #[test]
    fn exponent_overflow_is_reported() {
        let f = gf(2, 1);
        let x = MultiPoly::var(&f, Var::X);
        assert_eq!(x.pow(1 << 31).unwrap().degree(), Some(1 << 31));
        assert_eq!(x.pow(1u64 << 33).unwrap_err(), Error::ExponentOverflow);
    }
}
