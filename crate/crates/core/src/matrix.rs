//! Dense matrices over a [`Field`].

use std::fmt;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::poly::Poly;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Fe>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_index_rows())
    }
}

impl Matrix {
    pub fn zero(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix { field: field.clone(), rows, cols, data: vec![Fe::ZERO; rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, Fe::ONE);
        }
        m
    }

    pub fn from_rows(field: &Field, rows: Vec<Vec<Fe>>) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged matrix rows".into()));
        }
        Ok(Matrix { field: field.clone(), rows: r, cols: c, data: rows.concat() })
    }

    /// Build from element indices; fails on out-of-range entries.
    pub fn from_index_rows(field: &Field, rows: &[Vec<u64>]) -> Result<Matrix> {
        let rows = rows
            .iter()
            .map(|row| row.iter().map(|&i| field.element(i)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_rows(field, rows)
    }

    pub fn from_flat(field: &Field, rows: usize, cols: usize, data: Vec<Fe>) -> Matrix {
        assert_eq!(data.len(), rows * cols);
        Matrix { field: field.clone(), rows, cols, data }
    }

    pub fn to_index_rows(&self) -> Vec<Vec<u64>> {
        self.data.chunks(self.cols.max(1)).take(self.rows).map(|r| r.iter().map(|c| c.index()).collect()).collect()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Fe] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Fe {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Fe) {
        self.data[r * self.cols + c] = v;
    }

    pub fn scale(&self, c: Fe) -> Matrix {
        let f = &self.field;
        Matrix {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f.mul(x, c)).collect(),
        }
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Matrix::zero(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[Fe]) -> Result<Vec<Fe>> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch(format!("vector of length {} against {} rows", v.len(), self.rows)));
        }
        let f = &self.field;
        let mut out = vec![Fe::ZERO; self.cols];
        for (i, &a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = f.add(*o, f.mul(a, self.get(i, j)));
            }
        }
        Ok(out)
    }

    pub fn pow_big(&self, e: &BigUint) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::NonSquareMatrix { rows: self.rows, cols: self.cols });
        }
        let mut acc = Matrix::identity(&self.field, self.rows);
        for i in (0..e.bits()).rev() {
            acc = acc.mul(&acc)?;
            if e.bit(i) {
                acc = acc.mul(self)?;
            }
        }
        Ok(acc)
    }

    pub fn pow(&self, e: u64) -> Result<Matrix> {
        self.pow_big(&BigUint::from(e))
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == if i == j { Fe::ONE } else { Fe::ZERO }))
    }

    /// Determinant by Gaussian elimination.
    pub fn det(&self) -> Result<Fe> {
        if !self.is_square() {
            return Err(Error::NonSquareMatrix { rows: self.rows, cols: self.cols });
        }
        let f = &self.field;
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Fe::ONE;
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !a.get(r, col).is_zero()) else {
                return Ok(Fe::ZERO);
            };
            if piv != col {
                a.swap_rows(piv, col);
                det = f.neg(det);
            }
            let pv = a.get(col, col);
            det = f.mul(det, pv);
            let inv = f.inv(pv).expect("pivot is nonzero");
            for r in col + 1..n {
                let t = f.mul(a.get(r, col), inv);
                if t.is_zero() {
                    continue;
                }
                for c in col..n {
                    let v = f.sub(a.get(r, c), f.mul(t, a.get(col, c)));
                    a.set(r, c, v);
                }
            }
        }
        Ok(det)
    }

    pub fn is_invertible(&self) -> bool {
        self.det().is_ok_and(|d| !d.is_zero())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// Upper Hessenberg form similar to `self`.
    pub fn hessenberg(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::NonSquareMatrix { rows: self.rows, cols: self.cols });
        }
        let f = &self.field;
        let n = self.rows;
        let mut h = self.clone();
        for j in 0..n.saturating_sub(2) {
            let Some(piv) = (j + 1..n).find(|&i| !h.get(i, j).is_zero()) else {
                continue;
            };
            if piv != j + 1 {
                h.swap_rows(piv, j + 1);
                h.swap_cols(piv, j + 1);
            }
            let inv = f.inv(h.get(j + 1, j)).expect("pivot is nonzero");
            for i in j + 2..n {
                let u = f.mul(h.get(i, j), inv);
                if u.is_zero() {
                    continue;
                }
                // row_i -= u * row_{j+1}, then col_{j+1} += u * col_i
                for c in 0..n {
                    let v = f.sub(h.get(i, c), f.mul(u, h.get(j + 1, c)));
                    h.set(i, c, v);
                }
                for r in 0..n {
                    let v = f.add(h.get(r, j + 1), f.mul(u, h.get(r, i)));
                    h.set(r, j + 1, v);
                }
            }
        }
        Ok(h)
    }

    /// `det(X I - self)`, via Hessenberg reduction and the standard
    /// Hessenberg recurrence.
    pub fn charpoly(&self) -> Result<Poly> {
        let h = self.hessenberg()?;
        let f = &self.field;
        let n = self.rows;
        let x = Poly::x(f);
        // p[k] = charpoly of the leading k x k block
        let mut p: Vec<Poly> = Vec::with_capacity(n + 1);
        p.push(Poly::one(f));
        for k in 1..=n {
            let diag = Poly::constant(f, h.get(k - 1, k - 1));
            let mut next = &(&x - &diag) * &p[k - 1];
            let mut prod = Fe::ONE;
            for i in 1..k {
                prod = f.mul(prod, h.get(k - i, k - i - 1));
                if prod.is_zero() {
                    break;
                }
                let c = f.mul(prod, h.get(k - i - 1, k - 1));
                next = &next - &p[k - i - 1].scale(c);
            }
            p.push(next);
        }
        Ok(p.pop().expect("n + 1 entries"))
    }

    /// Rank by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let f = &self.field;
        let mut a = self.clone();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(piv) = (rank..self.rows).find(|&r| !a.get(r, col).is_zero()) else {
                continue;
            };
            a.swap_rows(piv, rank);
            let inv = f.inv(a.get(rank, col)).expect("pivot is nonzero");
            for r in 0..self.rows {
                if r == rank {
                    continue;
                }
                let t = f.mul(a.get(r, col), inv);
                if t.is_zero() {
                    continue;
                }
                for c in col..self.cols {
                    let v = f.sub(a.get(r, c), f.mul(t, a.get(rank, c)));
                    a.set(r, c, v);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Companion matrix of a monic polynomial: ones on the subdiagonal and
    /// `-c_0, ..., -c_{m-1}` down the last column.
    pub fn companion(h: &Poly) -> Result<Matrix> {
        let m = h
            .deg()
            .filter(|&d| d >= 1)
            .ok_or(Error::BadDegree { expected: ">= 1".into(), found: h.degree().to_string() })?;
        if !h.is_monic() {
            return Err(Error::Invalid("companion matrix needs a monic polynomial".into()));
        }
        let f = h.field();
        let mut c = Matrix::zero(f, m, m);
        for i in 1..m {
            c.set(i, i - 1, Fe::ONE);
        }
        for i in 0..m {
            c.set(i, m - 1, f.neg(h.coeff(i)));
        }
        Ok(c)
    }
}
