//! Arithmetic in finite fields GF(p^k).
//!
//! Elements are stored as their coordinate vector in the polynomial basis
//! `1, x, x^2, ..., x^(k-1)`, packed into a `u32` as `c_0 + c_1 p + ... `.
//! Fields small enough get log/exp and Zech tables so that multiplication
//! and addition are table lookups; larger fields fall back to polynomial
//! arithmetic modulo the defining polynomial.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;

use crate::error::{Error, Result};

const TABLE_LIMIT: u64 = 1 << 22;
const MAX_ORDER: u64 = 1 << 30;
const NO_LOG: u32 = u32::MAX;

/// A field element, meaningful only together with the [`Field`] it came from.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Elem(u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    /// The packed polynomial-basis encoding.
    pub fn index(self) -> u32 {
        self.0
    }

    pub fn from_index(i: u32) -> Elem {
        Elem(i)
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

struct Inner {
    p: u32,
    k: u32,
    order: u32,
    /// `c_0, ..., c_k` with `c_k = 1`.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    /// `zech[j] = log(1 + g^j)`, or `NO_LOG` when that sum vanishes.
    zech: Vec<u32>,
    generator: Elem,
}

/// A finite field GF(p^k). Cloning is cheap.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Field) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}; {})", self.0.p, self.0.k, self.modulus_string())
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Dense univariate polynomials over GF(p), lowest coefficient first.
mod uni {
    pub fn trim(a: &mut Vec<u32>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    fn inv_mod(a: u32, p: u32) -> u32 {
        let mut r = 1u64;
        let mut b = a as u64;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p as u64;
            }
            b = b * b % p as u64;
            e >>= 1;
        }
        r as u32
    }

    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p) as u64;
        while r.len() > dm {
            let top = r.len() - 1;
            let c = r[top] as u64 * lead_inv % p as u64;
            if c != 0 {
                for (i, &mi) in m.iter().enumerate() {
                    let idx = top - dm + i;
                    r[idx] = ((r[idx] as u64 + (p as u64 - c) * mi as u64) % p as u64) as u32;
                }
            }
            trim(&mut r);
        }
        r
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        let mut v: Vec<u32> = out.into_iter().map(|c| c as u32).collect();
        trim(&mut v);
        v
    }

    pub fn mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        rem(&mul(a, b, p), m, p)
    }

    pub fn powmod(a: &[u32], mut e: u64, m: &[u32], p: u32) -> Vec<u32> {
        let mut r = vec![1];
        let mut b = rem(a, m, p);
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(&r, &b, m, p);
            }
            b = mulmod(&b, &b, m, p);
            e >>= 1;
        }
        r
    }

    pub fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let n = a.len().max(b.len());
        let mut v: Vec<u32> = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(&mut v);
        v
    }

    pub fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let r = rem(&x, &y, p);
            x = y;
            y = r;
        }
        x
    }

    /// Ben-Or: `m` of degree k is irreducible iff gcd(m, X^(p^i) - X) = 1 for i <= k/2.
    pub fn is_irreducible(m: &[u32], p: u32) -> bool {
        let k = m.len() - 1;
        if k == 0 {
            return false;
        }
        let x = vec![0, 1];
        let mut h = rem(&x, m, p);
        for _ in 0..k / 2 {
            h = powmod(&h, p as u64, m, p);
            let g = gcd(m, &sub(&h, &x, p), p);
            if g.len() > 1 {
                return false;
            }
        }
        true
    }
}

impl Field {
    /// GF(p^k) with the lexicographically smallest monic irreducible modulus.
    ///
    /// Candidates `X^k + c_(k-1) X^(k-1) + ... + c_0` are tried in increasing
    /// order of the integer `c_0 + c_1 p + ... + c_(k-1) p^(k-1)`.
    pub fn new(p: u32, k: u32) -> Result<Field> {
        let order = Self::check_params(p, k)?;
        let mut c = 0u64;
        loop {
            let mut m = digits_of(c as u32, p, k as usize);
            m.push(1);
            if uni::is_irreducible(&m, p) {
                return Ok(Field::build(p, k, order, m));
            }
            c += 1;
        }
    }

    /// GF(p^k) defined by the given modulus coefficients `c_0, ..., c_k`.
    pub fn with_modulus(p: u32, k: u32, coeffs: &[u32]) -> Result<Field> {
        let order = Self::check_params(p, k)?;
        let bad = Error::ReducibleModulus { p, k };
        if coeffs.len() != k as usize + 1 || coeffs[k as usize] != 1 || coeffs.iter().any(|&c| c >= p) {
            return Err(bad);
        }
        if !uni::is_irreducible(coeffs, p) {
            return Err(bad);
        }
        Ok(Field::build(p, k, order, coeffs.to_vec()))
    }

    /// Use the table entry for `(p, k)` if present, otherwise the default modulus.
    pub fn from_table(p: u32, k: u32, table: &ModulusTable) -> Result<Field> {
        match table.get(p, k) {
            Some(c) => Field::with_modulus(p, k, c),
            None => Field::new(p, k),
        }
    }

    fn check_params(p: u32, k: u32) -> Result<u32> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if k == 0 {
            return Err(Error::ZeroDegree);
        }
        let mut order = 1u64;
        for _ in 0..k {
            order *= p as u64;
            if order > MAX_ORDER {
                return Err(Error::FieldTooLarge { p, k });
            }
        }
        Ok(order as u32)
    }

    fn build(p: u32, k: u32, order: u32, modulus: Vec<u32>) -> Field {
        let mut inner = Inner {
            p,
            k,
            order,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
            zech: Vec::new(),
            generator: Elem::ONE,
        };
        let tmp = Field(Arc::new(Inner {
            p,
            k,
            order,
            modulus: inner.modulus.clone(),
            exp: Vec::new(),
            log: Vec::new(),
            zech: Vec::new(),
            generator: Elem::ONE,
        }));
        let g = tmp.find_primitive();
        inner.generator = g;
        if (order as u64) <= TABLE_LIMIT {
            let n = (order - 1) as usize;
            let mut exp = vec![0u32; n];
            let mut log = vec![NO_LOG; order as usize];
            let mut x = Elem::ONE;
            for (j, slot) in exp.iter_mut().enumerate() {
                *slot = x.0;
                log[x.0 as usize] = j as u32;
                x = tmp.mul_slow(x, g);
            }
            let mut zech = vec![NO_LOG; n];
            for (j, z) in zech.iter_mut().enumerate() {
                let s = tmp.add_digits(Elem(exp[j]), Elem::ONE);
                *z = log[s.0 as usize];
            }
            inner.exp = exp;
            inner.log = log;
            inner.zech = zech;
        }
        Field(Arc::new(inner))
    }

    fn find_primitive(&self) -> Elem {
        let n = self.0.order as u64 - 1;
        if n == 1 {
            return Elem::ONE;
        }
        let factors = prime_factors(n);
        for i in 2..self.0.order {
            let a = Elem(i);
            if factors.iter().all(|&r| self.pow_slow(a, n / r) != Elem::ONE) {
                return a;
            }
        }
        unreachable!("every finite field has a primitive element")
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.k
    }

    pub fn order(&self) -> u32 {
        self.0.order
    }

    /// Modulus coefficients `c_0, ..., c_k`.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn modulus_string(&self) -> String {
        let mut parts = Vec::new();
        for (i, &c) in self.0.modulus.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mon = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            parts.push(match (c, i) {
                (_, 0) => c.to_string(),
                (1, _) => mon,
                _ => format!("{c}{mon}"),
            });
        }
        parts.join(" + ")
    }

    /// The primitive element: the smallest encoding whose multiplicative order is `p^k - 1`.
    pub fn generator(&self) -> Elem {
        self.0.generator
    }

    pub fn has_tables(&self) -> bool {
        !self.0.exp.is_empty()
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.0.order).map(Elem)
    }

    /// The image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> Elem {
        Elem(n.rem_euclid(self.0.p as i64) as u32)
    }

    /// Coordinates in the polynomial basis.
    pub fn digits(&self, a: Elem) -> Vec<u32> {
        digits_of(a.0, self.0.p, self.0.k as usize)
    }

    pub fn from_digits(&self, d: &[u32]) -> Result<Elem> {
        if d.len() > self.0.k as usize || d.iter().any(|&c| c >= self.0.p) {
            return Err(Error::InvalidParameter("digit vector out of range".into()));
        }
        Ok(Elem(d.iter().rev().fold(0, |acc, &c| acc * self.0.p + c)))
    }

    pub fn contains(&self, a: Elem) -> bool {
        a.0 < self.0.order
    }

    fn add_digits(&self, a: Elem, b: Elem) -> Elem {
        let p = self.0.p;
        if p == 2 {
            return Elem(a.0 ^ b.0);
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut r = 0;
        let mut place = 1;
        while x > 0 || y > 0 {
            r += ((x % p + y % p) % p) * place;
            place *= p;
            x /= p;
            y /= p;
        }
        Elem(r)
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.0.p == 2 {
            return Elem(a.0 ^ b.0);
        }
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        if self.has_tables() {
            let n = self.0.order - 1;
            let la = self.0.log[a.0 as usize];
            let lb = self.0.log[b.0 as usize];
            let d = if lb >= la { lb - la } else { lb + n - la };
            let z = self.0.zech[d as usize];
            if z == NO_LOG {
                return Elem::ZERO;
            }
            let e = la as u64 + z as u64;
            return Elem(self.0.exp[(e % n as u64) as usize]);
        }
        self.add_digits(a, b)
    }

    pub fn neg(&self, a: Elem) -> Elem {
        let p = self.0.p;
        if p == 2 || a.0 == 0 {
            return a;
        }
        if self.has_tables() {
            let n = self.0.order - 1;
            let l = self.0.log[a.0 as usize] as u64 + (n / 2) as u64;
            return Elem(self.0.exp[(l % n as u64) as usize]);
        }
        let mut x = a.0;
        let mut r = 0;
        let mut place = 1;
        while x > 0 {
            r += ((p - x % p) % p) * place;
            place *= p;
            x /= p;
        }
        Elem(r)
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    fn mul_slow(&self, a: Elem, b: Elem) -> Elem {
        let p = self.0.p;
        let k = self.0.k as usize;
        let prod = uni::mulmod(&self.digits(a), &self.digits(b), &self.0.modulus, p);
        let mut d = prod;
        d.resize(k, 0);
        Elem(d.iter().rev().fold(0, |acc, &c| acc * p + c))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        if self.has_tables() {
            let n = self.0.order - 1;
            let s = self.0.log[a.0 as usize] + self.0.log[b.0 as usize];
            let s = if s >= n { s - n } else { s };
            return Elem(self.0.exp[s as usize]);
        }
        self.mul_slow(a, b)
    }

    fn pow_slow(&self, a: Elem, mut e: u64) -> Elem {
        let mut r = Elem::ONE;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul_slow(r, b);
            }
            b = self.mul_slow(b, b);
            e >>= 1;
        }
        r
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.0 == 0 {
            return Elem::ZERO;
        }
        let n = (self.0.order - 1) as u64;
        if self.has_tables() {
            let l = self.0.log[a.0 as usize] as u64;
            let idx = ((l as u128 * (e % n) as u128) % n as u128) as usize;
            return Elem(self.0.exp[idx]);
        }
        let e = e % n;
        self.pow_slow(a, if e == 0 { n } else { e })
    }

    /// `a^e` for an arbitrarily large exponent.
    pub fn pow_big(&self, a: Elem, e: &BigUint) -> Elem {
        if e.bits() == 0 {
            return Elem::ONE;
        }
        if a.0 == 0 {
            return Elem::ZERO;
        }
        let n = BigUint::from(self.0.order - 1);
        let r: BigUint = e % &n;
        let r = r.to_u64_digits().first().copied().unwrap_or(0);
        self.pow(a, r)
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        if self.has_tables() {
            let n = self.0.order - 1;
            let l = self.0.log[a.0 as usize];
            return Ok(Elem(self.0.exp[((n - l) % n) as usize]));
        }
        Ok(self.pow_slow(a, self.0.order as u64 - 2))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Discrete logarithm to the base [`generator`](Self::generator).
    pub fn log(&self, a: Elem) -> Option<u64> {
        if a.0 == 0 {
            return None;
        }
        if self.has_tables() {
            return Some(self.0.log[a.0 as usize] as u64);
        }
        let g = self.0.generator;
        let mut x = Elem::ONE;
        for j in 0..self.0.order as u64 - 1 {
            if x == a {
                return Some(j);
            }
            x = self.mul_slow(x, g);
        }
        None
    }

    /// `g^j` for the field generator `g`.
    pub fn gen_pow(&self, j: u64) -> Elem {
        self.pow(self.0.generator, j)
    }

    /// The Frobenius power `a^(p^e)`; `e` is taken modulo the degree.
    pub fn frobenius(&self, a: Elem, e: u32) -> Elem {
        let e = e % self.0.k;
        self.pow(a, (self.0.p as u64).pow(e))
    }

    /// The inverse of [`frobenius`](Self::frobenius): the unique `b` with `b^(p^e) = a`.
    pub fn frobenius_inv(&self, a: Elem, e: u32) -> Elem {
        let k = self.0.k;
        self.frobenius(a, (k - e % k) % k)
    }

    pub fn multiplicative_order(&self, a: Elem) -> Option<u64> {
        if a.0 == 0 {
            return None;
        }
        let mut n = self.0.order as u64 - 1;
        for r in prime_factors(n) {
            while n % r == 0 && self.pow(a, n / r) == Elem::ONE {
                n /= r;
            }
        }
        Some(n)
    }

    /// Whether the subfield GF(p^sub) exists in this field.
    pub fn has_subfield(&self, sub: u32) -> bool {
        sub >= 1 && self.0.k % sub == 0
    }

    /// The absolute degree of the subfield of order `q`, if it exists.
    pub fn subfield_degree_of_order(&self, q: u64) -> Result<u32> {
        let p = self.0.p as u64;
        let mut d = 0u32;
        let mut o = 1u64;
        while o < q {
            o *= p;
            d += 1;
        }
        if o != q || d == 0 || !self.has_subfield(d) {
            return Err(self.too_small(q));
        }
        Ok(d)
    }

    pub(crate) fn too_small(&self, needed: u64) -> Error {
        Error::FieldTooSmall { p: self.0.p, k: self.0.k, needed }
    }

    pub fn is_in_subfield(&self, a: Elem, sub: u32) -> Result<bool> {
        if !self.has_subfield(sub) {
            return Err(Error::NonDividingDegree { sub, degree: self.0.k });
        }
        Ok(self.frobenius(a, sub) == a)
    }

    /// A primitive element of GF(p^sub): `g^((p^k - 1)/(p^sub - 1))`.
    pub fn subfield_generator(&self, sub: u32) -> Result<Elem> {
        if !self.has_subfield(sub) {
            return Err(Error::NonDividingDegree { sub, degree: self.0.k });
        }
        let big = self.0.order as u64 - 1;
        let small = (self.0.p as u64).pow(sub) - 1;
        Ok(self.gen_pow(big / small))
    }

    /// The elements of GF(p^sub): zero followed by the powers of its generator.
    pub fn subfield_elements(&self, sub: u32) -> Result<Vec<Elem>> {
        let g = self.subfield_generator(sub)?;
        let n = (self.0.p as u64).pow(sub) - 1;
        let mut out = Vec::with_capacity(n as usize + 1);
        out.push(Elem::ZERO);
        let mut x = Elem::ONE;
        for _ in 0..n {
            out.push(x);
            x = self.mul(x, g);
        }
        Ok(out)
    }

    /// A GF(p)-basis of GF(p^sub): `1, h, ..., h^(sub-1)` for the subfield generator `h`.
    pub fn subfield_basis(&self, sub: u32) -> Result<Vec<Elem>> {
        let h = self.subfield_generator(sub)?;
        Ok((0..sub as u64).map(|i| self.pow(h, i)).collect())
    }

    /// All `e` in GF(n^2) with `e^n + e = u^(n+1)`; there are exactly `n` of them.
    ///
    /// `n` must be a power of the characteristic with GF(n^2) inside this field,
    /// and `u` must lie in GF(n^2).
    pub fn hermitian_trace_solutions(&self, u: Elem, n: u64) -> Result<Vec<Elem>> {
        let j = self.subfield_degree_of_order(n)?;
        if !self.has_subfield(2 * j) {
            return Err(self.too_small(n * n));
        }
        if !self.is_in_subfield(u, 2 * j)? {
            return Err(Error::NotInSubfield);
        }
        let target = self.pow(u, n + 1);
        Ok(self
            .subfield_elements(2 * j)?
            .into_iter()
            .filter(|&e| self.add(self.pow(e, n), e) == target)
            .collect())
    }

    /// The image of this field's generator under an embedding into `target`.
    ///
    /// The image is the first root, in generator-power order, of the minimal
    /// polynomial of the generator; `target` must contain a copy of this field.
    pub fn embedding_into(&self, target: &Field) -> Result<Elem> {
        let (p, k) = (self.0.p, self.0.k);
        if target.0.p != p {
            return Err(Error::ContextMismatch);
        }
        if !target.has_subfield(k) {
            return Err(target.too_small(self.0.order as u64));
        }
        // minimal polynomial of g: product of (x - g^(p^i)), lowest coefficient first
        let g = self.generator();
        let mut minpoly = vec![Elem::ONE];
        for i in 0..k {
            let root = self.frobenius(g, i);
            let mut next = vec![Elem::ZERO; minpoly.len() + 1];
            for (j, &c) in minpoly.iter().enumerate() {
                next[j + 1] = self.add(next[j + 1], c);
                next[j] = self.sub(next[j], self.mul(c, root));
            }
            minpoly = next;
        }
        let coeffs: Vec<Elem> = minpoly.iter().map(|&c| target.from_int(self.digits(c)[0] as i64)).collect();
        let h = target.subfield_generator(k)?;
        let n = self.0.order as u64 - 1;
        let mut t = Elem::ONE;
        for _ in 0..n {
            t = target.mul(t, h);
            let v = coeffs.iter().rev().fold(Elem::ZERO, |acc, &c| target.add(target.mul(acc, t), c));
            if v.is_zero() {
                return Ok(t);
            }
        }
        Err(Error::Unknown("no root of the minimal polynomial in the target field".into()))
    }

    /// Transport `a` along the embedding whose generator image is `image`.
    pub fn map_into(&self, target: &Field, image: Elem, a: Elem) -> Elem {
        match self.log(a) {
            None => Elem::ZERO,
            Some(j) => target.pow(image, j),
        }
    }

    /// `g^j` in terms of the field generator, or `0`.
    pub fn format_elem(&self, a: Elem) -> String {
        match self.log(a) {
            None => "0".to_string(),
            Some(j) => format!("g^{j}"),
        }
    }
}

fn digits_of(mut v: u32, p: u32, k: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(k);
    for _ in 0..k {
        out.push(v % p);
        v /= p;
    }
    out
}

/// An element bundled with its field, for code that prefers operators.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    pub field: Field,
    pub value: Elem,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.format_elem(self.value))
    }
}

impl FieldElement {
    pub fn new(field: &Field, value: Elem) -> FieldElement {
        FieldElement { field: field.clone(), value }
    }

    fn same(&self, other: &FieldElement) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same(other)?;
        Ok(FieldElement::new(&self.field, self.field.add(self.value, other.value)))
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same(other)?;
        Ok(FieldElement::new(&self.field, self.field.sub(self.value, other.value)))
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same(other)?;
        Ok(FieldElement::new(&self.field, self.field.mul(self.value, other.value)))
    }

    pub fn div(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same(other)?;
        Ok(FieldElement::new(&self.field, self.field.div(self.value, other.value)?))
    }

    pub fn inv(&self) -> Result<FieldElement> {
        Ok(FieldElement::new(&self.field, self.field.inv(self.value)?))
    }

    pub fn pow(&self, e: &BigUint) -> FieldElement {
        FieldElement::new(&self.field, self.field.pow_big(self.value, e))
    }

    pub fn frobenius(&self, e: u32) -> FieldElement {
        FieldElement::new(&self.field, self.field.frobenius(self.value, e))
    }
}

/// Explicit moduli keyed by `(p, k)`, read from lines `p k c_0 ... c_k`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ModulusTable {
    entries: Vec<(u32, u32, Vec<u32>)>,
}

impl ModulusTable {
    pub fn parse(text: &str) -> Result<ModulusTable> {
        let mut entries = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |reason: &str| Error::ModulusTable { line: i + 1, reason: reason.into() };
            let nums: Vec<u32> = line
                .split_whitespace()
                .map(|t| t.parse::<u32>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| err("expected non-negative integers"))?;
            if nums.len() < 3 {
                return Err(err("expected `p k c_0 ... c_k`"));
            }
            let (p, k) = (nums[0], nums[1]);
            if nums.len() != k as usize + 3 {
                return Err(err("coefficient count does not match k"));
            }
            let coeffs = nums[2..].to_vec();
            Field::with_modulus(p, k, &coeffs).map_err(|e| err(&e.to_string()))?;
            entries.push((p, k, coeffs));
        }
        Ok(ModulusTable { entries })
    }

    pub fn get(&self, p: u32, k: u32) -> Option<&[u32]> {
        self.entries
            .iter()
            .find(|(pp, kk, _)| *pp == p && *kk == k)
            .map(|(_, _, c)| c.as_slice())
    }

    pub fn insert(&mut self, field: &Field) {
        let (p, k) = (field.characteristic(), field.degree());
        self.entries.retain(|(pp, kk, _)| !(*pp == p && *kk == k));
        self.entries.push((p, k, field.modulus().to_vec()));
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (p, k, c) in &self.entries {
            let cs: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            s.push_str(&format!("{p} {k} {}\n", cs.join(" ")));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_mul(f: &Field, a: Elem, b: Elem) -> Elem {
        f.mul_slow(a, b)
    }

    #[test]
    fn default_moduli() {
        assert_eq!(Field::new(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
        assert_eq!(Field::new(2, 1).unwrap().modulus(), &[0, 1]);
        assert_eq!(Field::new(2, 2).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(Field::new(2, 4).unwrap().modulus(), &[1, 1, 0, 0, 1]);
        assert_eq!(Field::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
    }

    #[test]
    fn embeddings_are_homomorphisms() {
        for (p, k, big) in [(2, 4, 12), (3, 2, 6), (2, 2, 8)] {
            let s = Field::new(p, k).unwrap();
            let t = Field::new(p, big).unwrap();
            let img = s.embedding_into(&t).unwrap();
            let phi = |a| s.map_into(&t, img, a);
            for a in s.elements() {
                for b in s.elements() {
                    assert_eq!(phi(s.add(a, b)), t.add(phi(a), phi(b)));
                    assert_eq!(phi(s.mul(a, b)), t.mul(phi(a), phi(b)));
                }
            }
        }
        let small = Field::new(2, 4).unwrap();
        assert!(small.embedding_into(&Field::new(2, 6).unwrap()).is_err());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(Field::new(4, 1).unwrap_err(), Error::NotPrime(4));
        assert_eq!(Field::new(2, 0).unwrap_err(), Error::ZeroDegree);
        assert!(matches!(Field::new(2, 31), Err(Error::FieldTooLarge { .. })));
        assert!(matches!(
            Field::with_modulus(2, 2, &[1, 0, 1]),
            Err(Error::ReducibleModulus { .. })
        ));
    }

    #[test]
    fn gf8_example() {
        let f = Field::new(2, 3).unwrap();
        let x = Elem(2);
        // x^3 = x + 1
        assert_eq!(f.pow(x, 3), Elem(3));
        for a in f.elements() {
            assert_eq!(f.pow(a, 8), a);
        }
    }

    #[test]
    fn tables_agree_with_polynomial_arithmetic() {
        for (p, k) in [(2, 4), (3, 3), (5, 2), (7, 1)] {
            let f = Field::new(p, k).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(f.mul(a, b), naive_mul(&f, a, b));
                    assert_eq!(f.add(a, b), f.add_digits(a, b));
                }
                assert_eq!(f.add(a, f.neg(a)), Elem::ZERO);
            }
        }
    }

    #[test]
    fn untabled_field_is_consistent() {
        let f = Field::new(2, 23).unwrap();
        assert!(!f.has_tables());
        let g = f.generator();
        let a = f.pow(g, 12345);
        let b = f.inv(a).unwrap();
        assert_eq!(f.mul(a, b), Elem::ONE);
        assert_eq!(f.frobenius(a, 23), a);
    }

    #[test]
    fn subfields_and_frobenius() {
        let f = Field::new(2, 6).unwrap();
        let s = f.subfield_elements(3).unwrap();
        assert_eq!(s.len(), 8);
        for &a in &s {
            assert!(f.is_in_subfield(a, 3).unwrap());
        }
        assert_eq!(f.elements().filter(|&a| f.is_in_subfield(a, 2).unwrap()).count(), 4);
        assert!(matches!(f.is_in_subfield(Elem::ONE, 4), Err(Error::NonDividingDegree { .. })));
        let a = f.gen_pow(5);
        assert_eq!(f.frobenius(f.frobenius_inv(a, 2), 2), a);
    }

    #[test]
    fn hermitian_solutions_have_size_n() {
        let f = Field::new(3, 4).unwrap();
        for u in f.subfield_elements(2).unwrap() {
            let sols = f.hermitian_trace_solutions(u, 3).unwrap();
            assert_eq!(sols.len(), 3);
        }
        let f4 = Field::new(2, 2).unwrap();
        assert_eq!(f4.hermitian_trace_solutions(Elem::ONE, 2).unwrap().len(), 2);
        assert!(Field::new(2, 3).unwrap().hermitian_trace_solutions(Elem::ONE, 2).is_err());
    }

    #[test]
    fn big_exponent_reduces() {
        let f = Field::new(3, 2).unwrap();
        let a = f.gen_pow(3);
        let e = BigUint::from(10u32).pow(40);
        let r = (BigUint::from(10u32).pow(40) % BigUint::from(8u32)).to_u64_digits();
        assert_eq!(f.pow_big(a, &e), f.pow(a, r.first().copied().unwrap_or(0)));
    }

    #[test]
    fn modulus_table_round_trip() {
        let t = ModulusTable::parse("# comment\n2 3 1 0 1 1\n3 2 2 2 1\n").unwrap();
        let f = Field::from_table(2, 3, &t).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1, 1]);
        assert_eq!(ModulusTable::parse(&t.to_text()).unwrap(), t);
        assert!(ModulusTable::parse("2 2 1 0 1\n").is_err());
        assert!(ModulusTable::parse("2 3 1 1\n").is_err());
    }

    #[test]
    fn field_element_context() {
        let a = Field::new(2, 2).unwrap();
        let b = Field::new(2, 3).unwrap();
        let x = FieldElement::new(&a, Elem::ONE);
        let y = FieldElement::new(&b, Elem::ONE);
        assert_eq!(x.add(&y).unwrap_err(), Error::ContextMismatch);
        assert_eq!(x.div(&FieldElement::new(&a, Elem::ZERO)).unwrap_err(), Error::DivisionByZero);
    }
}
