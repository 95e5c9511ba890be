//! 3x3 matrices over a field and small dense Gaussian elimination.

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};

/// A 3x3 matrix; row `i` holds the image of the `i`-th coordinate.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix3 {
    pub field: Field,
    pub m: [[Elem; 3]; 3],
}

impl std::fmt::Debug for Matrix3 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rows: Vec<Vec<String>> = self
            .m
            .iter()
            .map(|r| r.iter().map(|&e| self.field.format_elem(e)).collect())
            .collect();
        write!(f, "{rows:?}")
    }
}

/// One elementary step of a factorisation `A = E_1 E_2 ... E_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementaryOp {
    Swap(usize, usize),
    /// Coordinate `i` is multiplied by the scalar.
    Scale(usize, Elem),
    /// Coordinate `target` becomes `target + c * source`.
    AddMul { target: usize, source: usize, c: Elem },
}

impl Matrix3 {
    pub fn new(field: &Field, m: [[Elem; 3]; 3]) -> Matrix3 {
        Matrix3 { field: field.clone(), m }
    }

    pub fn identity(field: &Field) -> Matrix3 {
        let mut m = [[Elem::ZERO; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = Elem::ONE;
        }
        Matrix3::new(field, m)
    }

    pub fn diag(field: &Field, d: [Elem; 3]) -> Matrix3 {
        let mut m = [[Elem::ZERO; 3]; 3];
        for i in 0..3 {
            m[i][i] = d[i];
        }
        Matrix3::new(field, m)
    }

    /// The permutation matrix sending coordinate `i` to `perm[i]`: row `i` is `e_perm[i]`.
    pub fn permutation(field: &Field, perm: [usize; 3]) -> Matrix3 {
        let mut m = [[Elem::ZERO; 3]; 3];
        for i in 0..3 {
            m[i][perm[i]] = Elem::ONE;
        }
        Matrix3::new(field, m)
    }

    pub fn mul(&self, other: &Matrix3) -> Result<Matrix3> {
        if self.field != other.field {
            return Err(Error::ContextMismatch);
        }
        let f = &self.field;
        let mut m = [[Elem::ZERO; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                let mut s = Elem::ZERO;
                for t in 0..3 {
                    s = f.add(s, f.mul(self.m[i][t], other.m[t][j]));
                }
                *slot = s;
            }
        }
        Ok(Matrix3::new(f, m))
    }

    pub fn apply(&self, v: [Elem; 3]) -> [Elem; 3] {
        let f = &self.field;
        let mut out = [Elem::ZERO; 3];
        for (i, o) in out.iter_mut().enumerate() {
            for (t, &vt) in v.iter().enumerate() {
                *o = f.add(*o, f.mul(self.m[i][t], vt));
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix3 {
        let mut m = [[Elem::ZERO; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                *slot = self.m[j][i];
            }
        }
        Matrix3::new(&self.field, m)
    }

    pub fn det(&self) -> Elem {
        let f = &self.field;
        let m = &self.m;
        let term = |a: Elem, b: Elem, c: Elem| f.mul(f.mul(a, b), c);
        let pos = f.add(
            f.add(term(m[0][0], m[1][1], m[2][2]), term(m[0][1], m[1][2], m[2][0])),
            term(m[0][2], m[1][0], m[2][1]),
        );
        let neg = f.add(
            f.add(term(m[0][2], m[1][1], m[2][0]), term(m[0][0], m[1][2], m[2][1])),
            term(m[0][1], m[1][0], m[2][2]),
        );
        f.sub(pos, neg)
    }

    pub fn scale(&self, c: Elem) -> Matrix3 {
        let mut m = self.m;
        for row in m.iter_mut() {
            for e in row.iter_mut() {
                *e = self.field.mul(*e, c);
            }
        }
        Matrix3::new(&self.field, m)
    }

    pub fn inverse(&self) -> Result<Matrix3> {
        let f = &self.field;
        let d = self.det();
        if d.is_zero() {
            return Err(Error::SingularMatrix);
        }
        let di = f.inv(d)?;
        let m = &self.m;
        let mut out = [[Elem::ZERO; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                let (r0, r1) = ((j + 1) % 3, (j + 2) % 3);
                let (c0, c1) = ((i + 1) % 3, (i + 2) % 3);
                let cof = f.sub(f.mul(m[r0][c0], m[r1][c1]), f.mul(m[r0][c1], m[r1][c0]));
                *slot = f.mul(cof, di);
            }
        }
        Ok(Matrix3::new(f, out))
    }

    /// Scale so that the first nonzero entry in row-major order is 1.
    pub fn normalized(&self) -> Matrix3 {
        match self.m.iter().flatten().find(|e| !e.is_zero()) {
            None => self.clone(),
            Some(&lead) => self.scale(self.field.inv(lead).expect("nonzero")),
        }
    }

    /// Key of the normalised matrix, suitable for hashing projectivities.
    pub fn key(&self) -> [u32; 9] {
        let n = self.normalized();
        let mut k = [0u32; 9];
        for (i, e) in n.m.iter().flatten().enumerate() {
            k[i] = e.index();
        }
        k
    }

    pub fn is_scalar(&self) -> bool {
        let d = self.m[0][0];
        !d.is_zero()
            && (0..3).all(|i| (0..3).all(|j| self.m[i][j] == if i == j { d } else { Elem::ZERO }))
    }

    /// Factor the matrix as `E_1 E_2 ... E_k` with elementary matrices.
    pub fn elementary_factors(&self) -> Result<Vec<ElementaryOp>> {
        let f = &self.field;
        let mut a = self.m;
        let mut ops = Vec::new();
        for col in 0..3 {
            let piv = (col..3).find(|&r| !a[r][col].is_zero()).ok_or(Error::SingularMatrix)?;
            if piv != col {
                a.swap(piv, col);
                ops.push(ElementaryOp::Swap(piv, col));
            }
            let lead = a[col][col];
            if lead != Elem::ONE {
                let s = f.inv(lead)?;
                for e in a[col].iter_mut() {
                    *e = f.mul(*e, s);
                }
                // the inverse of scaling by s is scaling by lead
                ops.push(ElementaryOp::Scale(col, lead));
            }
            for r in 0..3 {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let c = a[r][col];
                for j in 0..3 {
                    a[r][j] = f.sub(a[r][j], f.mul(c, a[col][j]));
                }
                ops.push(ElementaryOp::AddMul { target: r, source: col, c });
            }
        }
        Ok(ops)
    }
}

/// Row-reduce in place; returns the pivot columns.
pub fn row_reduce(field: &Field, rows: &mut [Vec<Elem>]) -> Vec<usize> {
    let f = field;
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = f.inv(rows[r][c]).expect("nonzero pivot");
        for e in rows[r].iter_mut() {
            *e = f.mul(*e, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let m = row[c];
            for (e, &pe) in row.iter_mut().zip(&pivot_row) {
                if !pe.is_zero() {
                    *e = f.sub(*e, f.mul(m, pe));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// A basis of `{ v : rows * v = 0 }`.
pub fn kernel(field: &Field, rows: &[Vec<Elem>], ncols: usize) -> Vec<Vec<Elem>> {
    let mut a: Vec<Vec<Elem>> = rows.to_vec();
    let pivots = row_reduce(field, &mut a);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![Elem::ZERO; ncols];
            v[fc] = Elem::ONE;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = field.neg(a[r][fc]);
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn compose(field: &Field, ops: &[ElementaryOp]) -> Matrix3 {
        let mut acc = Matrix3::identity(field);
        for op in ops {
            let mut e = Matrix3::identity(field);
            match *op {
                ElementaryOp::Swap(i, j) => {
                    e.m.swap(i, j);
                }
                ElementaryOp::Scale(i, s) => e.m[i][i] = s,
                ElementaryOp::AddMul { target, source, c } => e.m[target][source] = c,
            }
            acc = acc.mul(&e).unwrap();
        }
        acc
    }

    #[test]
    fn factorisation_reproduces_matrix() {
        let f = Field::new(3, 2).unwrap();
        let g = f.generator();
        let samples = [
            [[Elem::ZERO, Elem::ONE, g], [g, Elem::ZERO, Elem::ONE], [Elem::ONE, g, Elem::ZERO]],
            [[Elem::ZERO, Elem::ZERO, Elem::ONE], [Elem::ZERO, g, Elem::ZERO], [g, Elem::ONE, Elem::ONE]],
        ];
        for m in samples {
            let a = Matrix3::new(&f, m);
            let ops = a.elementary_factors().unwrap();
            assert_eq!(compose(&f, &ops), a);
        }
        let sing = Matrix3::new(&f, [[Elem::ONE; 3]; 3]);
        assert_eq!(sing.elementary_factors().unwrap_err(), Error::SingularMatrix);
    }

    #[test]
    fn inverse_times_matrix_is_identity() {
        let f = Field::new(5, 1).unwrap();
        let m = Matrix3::new(
            &f,
            [[f.from_int(1), f.from_int(2), f.from_int(3)], [f.from_int(0), f.from_int(1), f.from_int(4)], [f.from_int(5), f.from_int(6), f.from_int(0)]],
        );
        assert_eq!(m.mul(&m.inverse().unwrap()).unwrap(), Matrix3::identity(&f));
    }

    #[test]
    fn kernel_dimension() {
        let f = Field::new(2, 1).unwrap();
        let o = Elem::ONE;
        let z = Elem::ZERO;
        let rows = vec![vec![o, o, z, z], vec![z, z, o, o]];
        let k = kernel(&f, &rows, 4);
        assert_eq!(k.len(), 2);
        for v in k {
            for r in &rows {
                let s = r.iter().zip(&v).fold(z, |acc, (&a, &b)| f.add(acc, f.mul(a, b)));
                assert!(s.is_zero());
            }
        }
    }
}
