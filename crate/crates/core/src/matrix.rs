//! Dense matrices over a ring context.

use crate::error::{Error, Result};
use crate::ring::{CoeffRing, Ring};

/// Row-major dense matrix. Entries carry no ring; operations take the ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<E>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<E>>, cols: usize) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != cols {
                return Err(Error::ShapeMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            data.extend(r);
        }
        Ok(Matrix {
            rows: n,
            cols,
            data,
        })
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_cols(rows: usize, cols: &[Vec<E>]) -> Self {
        let mut data = Vec::with_capacity(rows * cols.len());
        for i in 0..rows {
            for c in cols {
                data.push(c[i].clone());
            }
        }
        Matrix {
            rows,
            cols: cols.len(),
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<E> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<E>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn select_cols(&self, idx: impl IntoIterator<Item = usize>) -> Self {
        let cols: Vec<Vec<E>> = idx.into_iter().map(|j| self.col(j)).collect();
        Matrix::from_cols(self.rows, &cols)
    }

    pub fn select_rows(&self, idx: impl IntoIterator<Item = usize>) -> Self {
        let rows: Vec<Vec<E>> = idx.into_iter().map(|i| self.row(i)).collect();
        let n = rows.len();
        Matrix {
            rows: n,
            cols: self.cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn map<F: Clone>(&self, f: impl Fn(&E) -> F) -> Matrix<F> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// `[self | other]`
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let mut cols = self.columns();
        cols.extend(other.columns());
        Matrix::from_cols(self.rows, &cols)
    }

    /// `[self ; other]`
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }
}

impl<E: Clone> Matrix<E> {
    pub fn zeros<R: Ring<Elem = E>>(ring: &R, rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![ring.zero(); rows * cols],
        }
    }

    pub fn identity<R: Ring<Elem = E>>(ring: &R, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    pub fn scalar<R: Ring<Elem = E>>(ring: &R, n: usize, c: &E) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    pub fn diagonal<R: Ring<Elem = E>>(ring: &R, rows: usize, cols: usize, diag: &[E]) -> Self {
        let mut m = Self::zeros(ring, rows, cols);
        for (i, d) in diag.iter().enumerate() {
            m.set(i, i, d.clone());
        }
        m
    }

    /// Block diagonal matrix.
    pub fn block_diag<R: Ring<Elem = E>>(ring: &R, blocks: &[Self]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(ring, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            m.paste(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    /// Overwrite the block starting at `(r0, c0)` with `b`.
    pub fn paste(&mut self, r0: usize, c0: usize, b: &Self) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j).clone());
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in r0..r0 + rows {
            for j in c0..c0 + cols {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn is_zero<R: Ring<Elem = E>>(&self, ring: &R) -> bool {
        self.data.iter().all(|x| ring.is_zero(x))
    }

    /// First column (and row within it) holding a nonzero entry.
    pub fn first_nonzero<R: Ring<Elem = E>>(&self, ring: &R) -> Option<(usize, usize)> {
        for j in 0..self.cols {
            for i in 0..self.rows {
                if !ring.is_zero(self.get(i, j)) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn mul<R: Ring<Elem = E>>(ring: &R, a: &Self, b: &Self) -> Self {
        assert_eq!(
            a.cols, b.rows,
            "matrix product shape mismatch: {}x{} * {}x{}",
            a.rows, a.cols, b.rows, b.cols
        );
        let mut out = Self::zeros(ring, a.rows, b.cols);
        for i in 0..a.rows {
            for k in 0..a.cols {
                let x = a.get(i, k);
                if ring.is_zero(x) {
                    continue;
                }
                for j in 0..b.cols {
                    let y = b.get(k, j);
                    if ring.is_zero(y) {
                        continue;
                    }
                    let v = ring.add(out.get(i, j), &ring.mul(x, y));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec<R: Ring<Elem = E>>(ring: &R, a: &Self, v: &[E]) -> Vec<E> {
        assert_eq!(a.cols, v.len(), "matrix-vector shape mismatch");
        (0..a.rows)
            .map(|i| {
                (0..a.cols).fold(ring.zero(), |acc, k| {
                    ring.add(&acc, &ring.mul(a.get(i, k), &v[k]))
                })
            })
            .collect()
    }

    pub fn add<R: Ring<Elem = E>>(ring: &R, a: &Self, b: &Self) -> Self {
        assert_eq!(a.shape(), b.shape(), "matrix sum shape mismatch");
        Matrix {
            rows: a.rows,
            cols: a.cols,
            data: a.data.iter().zip(&b.data).map(|(x, y)| ring.add(x, y)).collect(),
        }
    }

    pub fn sub<R: Ring<Elem = E>>(ring: &R, a: &Self, b: &Self) -> Self {
        assert_eq!(a.shape(), b.shape(), "matrix difference shape mismatch");
        Matrix {
            rows: a.rows,
            cols: a.cols,
            data: a.data.iter().zip(&b.data).map(|(x, y)| ring.sub(x, y)).collect(),
        }
    }

    pub fn neg<R: Ring<Elem = E>>(&self, ring: &R) -> Self {
        self.map(|x| ring.neg(x))
    }

    pub fn scale<R: Ring<Elem = E>>(&self, ring: &R, c: &E) -> Self {
        self.map(|x| ring.mul(c, x))
    }

    /// row[a] += c * row[b]
    pub fn add_row_multiple<R: Ring<Elem = E>>(&mut self, ring: &R, a: usize, b: usize, c: &E) {
        for j in 0..self.cols {
            let v = ring.add(self.get(a, j), &ring.mul(c, self.get(b, j)));
            self.set(a, j, v);
        }
    }

    /// col[a] += c * col[b]
    pub fn add_col_multiple<R: Ring<Elem = E>>(&mut self, ring: &R, a: usize, b: usize, c: &E) {
        for i in 0..self.rows {
            let v = ring.add(self.get(i, a), &ring.mul(c, self.get(i, b)));
            self.set(i, a, v);
        }
    }

    pub fn scale_row<R: Ring<Elem = E>>(&mut self, ring: &R, a: usize, c: &E) {
        for j in 0..self.cols {
            let v = ring.mul(c, self.get(a, j));
            self.set(a, j, v);
        }
    }

    pub fn scale_col<R: Ring<Elem = E>>(&mut self, ring: &R, a: usize, c: &E) {
        for i in 0..self.rows {
            let v = ring.mul(c, self.get(i, a));
            self.set(i, a, v);
        }
    }

    pub fn format<R: Ring<Elem = E>>(&self, ring: &R) -> Vec<Vec<String>> {
        self.to_rows()
            .iter()
            .map(|r| r.iter().map(|x| ring.format(x)).collect())
            .collect()
    }

    pub fn parse<R: Ring<Elem = E>>(
        ring: &R,
        rows: &[Vec<String>],
        nrows: usize,
        ncols: usize,
    ) -> Result<Self> {
        if nrows == 0 || ncols == 0 {
            // shapes are carried by the ranks; an empty array is the only legal spelling
            if rows.iter().any(|r| !r.is_empty()) || (nrows == 0 && !rows.is_empty()) {
                return Err(Error::ShapeMismatch(format!(
                    "expected an empty {nrows}x{ncols} matrix"
                )));
            }
            return Ok(Self::zeros(ring, nrows, ncols));
        }
        if rows.len() != nrows {
            return Err(Error::ShapeMismatch(format!(
                "expected {nrows} rows, found {}",
                rows.len()
            )));
        }
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|s| ring.parse(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(parsed, ncols)
    }
}

/// Entrywise image in the residue field.
pub fn residue_reduce<R: CoeffRing>(
    ring: &R,
    m: &Matrix<R::Elem>,
) -> Matrix<<R::Residue as Ring>::Elem> {
    m.map(|x| ring.reduce(x))
}

/// Entrywise canonical lift from the residue field.
pub fn residue_lift<R: CoeffRing>(
    ring: &R,
    m: &Matrix<<R::Residue as Ring>::Elem>,
) -> Matrix<R::Elem> {
    m.map(|x| ring.lift(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{FpPoly, Integers};
    use num_bigint::BigInt;

    fn z(rows: &[&[i64]]) -> Matrix<BigInt> {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| x.into()).collect()).collect(),
            cols,
        )
        .unwrap()
    }

    #[test]
    fn residue_reduce_examples() {
        let r = Integers::new(3).unwrap();
        assert_eq!(residue_reduce(&r, &z(&[&[3]])), Matrix::from_vec(1, 1, vec![0]));
        let id = Matrix::identity(&r, 3);
        assert_eq!(
            residue_reduce(&r, &id),
            Matrix::identity(&r.residue_field(), 3)
        );
        let p = FpPoly::over_prime(5).unwrap();
        let m = Matrix::from_vec(1, 2, vec![p.parse("t+1").unwrap(), p.parse("t").unwrap()]);
        assert_eq!(residue_reduce(&p, &m), Matrix::from_vec(1, 2, vec![1, 0]));
    }

    #[test]
    fn product_and_stacks() {
        let r = Integers::new(2).unwrap();
        let a = z(&[&[1, 2], &[3, 4]]);
        let b = z(&[&[0, 1], &[1, 0]]);
        assert_eq!(Matrix::mul(&r, &a, &b), z(&[&[2, 1], &[4, 3]]));
        assert_eq!(a.hstack(&b).shape(), (2, 4));
        assert_eq!(a.vstack(&b).shape(), (4, 2));
        assert_eq!(a.transpose(), z(&[&[1, 3], &[2, 4]]));
    }
}
