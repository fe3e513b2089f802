//! Linear algebra over a field: reduced echelon forms, subspaces in normal
//! form, and subquotients with chosen representatives.

use crate::matrix::Matrix;
use crate::ring::Field;

/// Reduced row echelon form and its pivot columns.
pub fn rref<F: Field>(f: &F, m: &Matrix<F::Elem>) -> (Matrix<F::Elem>, Vec<usize>) {
    let mut a = m.clone();
    let (rows, cols) = a.shape();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !f.is_zero(a.get(i, c))) else {
            continue;
        };
        a.swap_rows(r, p);
        let inv = f.inv(a.get(r, c)).unwrap();
        a.scale_row(f, r, &inv);
        for i in 0..rows {
            if i != r && !f.is_zero(a.get(i, c)) {
                let factor = f.neg(a.get(i, c));
                a.add_row_multiple(f, i, r, &factor);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn field_rank<F: Field>(f: &F, m: &Matrix<F::Elem>) -> usize {
    rref(f, m).1.len()
}

/// Kernel basis read off the reduced echelon form: one vector per free
/// column, in increasing column order.
pub fn field_kernel<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    let (a, pivots) = rref(f, m);
    let n = m.cols();
    let mut basis = Vec::new();
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = vec![f.zero(); n];
        v[free] = f.one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg(a.get(row, free));
        }
        basis.push(v);
    }
    Matrix::from_cols(n, &basis)
}

/// Indices of a maximal independent prefix-greedy set of columns.
pub fn independent_columns<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Vec<usize> {
    rref(f, m).1
}

/// A `c x n` matrix `l` with `l * m == I`, for `m` of full column rank `c`.
pub fn left_inverse<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Option<Matrix<F::Elem>> {
    let (n, c) = m.shape();
    let aug = m.hstack(&Matrix::identity(f, n));
    let (r, pivots) = rref(f, &aug);
    if pivots.len() < c || pivots[..c] != (0..c).collect::<Vec<_>>()[..] {
        return None;
    }
    Some(r.block(0, c, c, n))
}

/// Solve `a x = b` over the field.
pub fn field_solve<F: Field>(
    f: &F,
    a: &Matrix<F::Elem>,
    b: &Matrix<F::Elem>,
) -> Option<Matrix<F::Elem>> {
    let (rows, cols) = a.shape();
    let aug = a.hstack(b);
    let (r, pivots) = rref(f, &aug);
    if pivots.iter().any(|&p| p >= cols) {
        return None;
    }
    let mut x = Matrix::zeros(f, cols, b.cols());
    for (row, &pc) in pivots.iter().enumerate() {
        for j in 0..b.cols() {
            x.set(pc, j, r.get(row, cols + j).clone());
        }
    }
    debug_assert!(rows == 0 || Matrix::mul(f, a, &x) == *b);
    Some(x)
}

/// A subspace of `F^n`, stored as the nonzero rows of a reduced echelon
/// form. Equality of subspaces is equality of this normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace<E> {
    ambient: usize,
    rows: Matrix<E>,
}

impl<E: Clone> Subspace<E> {
    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.rows()
    }

    /// Normal-form rows.
    pub fn normal_form(&self) -> &Matrix<E> {
        &self.rows
    }

    /// Basis as columns.
    pub fn basis(&self) -> Matrix<E> {
        self.rows.transpose()
    }
}

impl<E: Clone + PartialEq> Subspace<E> {
    pub fn zero<F: Field<Elem = E>>(f: &F, n: usize) -> Self {
        Subspace {
            ambient: n,
            rows: Matrix::zeros(f, 0, n),
        }
    }

    pub fn full<F: Field<Elem = E>>(f: &F, n: usize) -> Self {
        Subspace {
            ambient: n,
            rows: Matrix::identity(f, n),
        }
    }

    /// Span of the columns of `m`.
    pub fn span<F: Field<Elem = E>>(f: &F, m: &Matrix<E>) -> Self {
        let (r, pivots) = rref(f, &m.transpose());
        Subspace {
            ambient: m.rows(),
            rows: r.select_rows(0..pivots.len()),
        }
    }

    pub fn contains_vec<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> bool {
        let m = Matrix::from_cols(self.ambient, &[v.to_vec()]);
        self.contains(f, &Subspace::span(f, &m))
    }

    pub fn contains<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> bool {
        self.sum(f, other).dim() == self.dim()
    }

    pub fn sum<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        assert_eq!(self.ambient, other.ambient, "subspace ambient mismatch");
        Subspace::span(f, &self.basis().hstack(&other.basis()))
    }

    pub fn intersect<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        assert_eq!(self.ambient, other.ambient, "subspace ambient mismatch");
        let a = self.basis();
        let b = other.basis();
        let k = field_kernel(f, &a.hstack(&b.neg(f)));
        let coeffs = k.block(0, 0, a.cols(), k.cols());
        Subspace::span(f, &Matrix::mul(f, &a, &coeffs))
    }

    /// Image under a linear map.
    pub fn image<F: Field<Elem = E>>(&self, f: &F, map: &Matrix<E>) -> Self {
        Subspace::span(f, &Matrix::mul(f, map, &self.basis()))
    }

    /// `{ v in self : map v in target }`
    pub fn preimage_within<F: Field<Elem = E>>(
        &self,
        f: &F,
        map: &Matrix<E>,
        target: &Self,
    ) -> Self {
        let a = self.basis();
        let b = target.basis();
        let k = field_kernel(f, &Matrix::mul(f, map, &a).hstack(&b.neg(f)));
        let coeffs = k.block(0, 0, a.cols(), k.cols());
        Subspace::span(f, &Matrix::mul(f, &a, &coeffs))
    }
}

/// `num / den` with `den ⊆ num`, with representatives extending a basis of
/// `den` greedily through the given generators of `num`.
#[derive(Clone, Debug)]
pub struct Subquotient<E> {
    ambient: usize,
    reps: Matrix<E>,
    den: Matrix<E>,
    left_inv: Matrix<E>,
}

impl<E: Clone + PartialEq> Subquotient<E> {
    pub fn new<F: Field<Elem = E>>(f: &F, num: &Matrix<E>, den: &Matrix<E>) -> Self {
        let n = num.rows();
        let den_basis = den.select_cols(independent_columns(f, den));
        let all = den_basis.hstack(num);
        let chosen = independent_columns(f, &all);
        let d = den_basis.cols();
        let reps = all.select_cols(chosen.iter().copied().filter(|&j| j >= d));
        let m = reps.hstack(&den_basis);
        let left_inv = left_inverse(f, &m).expect("independent columns");
        Subquotient {
            ambient: n,
            reps,
            den: den_basis,
            left_inv,
        }
    }

    pub fn dim(&self) -> usize {
        self.reps.cols()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// Representatives of a basis of the quotient, as columns.
    pub fn reps(&self) -> &Matrix<E> {
        &self.reps
    }

    pub fn den_basis(&self) -> &Matrix<E> {
        &self.den
    }

    /// Coordinates of the class of `v`, or `None` when `v` is not in `num`.
    pub fn coords<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> Option<Vec<E>> {
        let x = Matrix::mul_vec(f, &self.left_inv, v);
        let m = self.reps.hstack(&self.den);
        if Matrix::mul_vec(f, &m, &x) != v {
            return None;
        }
        Some(x[..self.dim()].to_vec())
    }

    /// Coordinates of every column of `m`.
    pub fn coords_matrix<F: Field<Elem = E>>(&self, f: &F, m: &Matrix<E>) -> Option<Matrix<E>> {
        let cols = m
            .columns()
            .iter()
            .map(|c| self.coords(f, c))
            .collect::<Option<Vec<_>>>()?;
        Some(Matrix::from_cols(self.dim(), &cols))
    }
}

/// Cohomology at a spot `C' --d_in--> C --d_out--> C''`.
pub fn field_cohomology<F: Field>(
    f: &F,
    d_in: &Matrix<F::Elem>,
    d_out: &Matrix<F::Elem>,
) -> Subquotient<F::Elem> {
    Subquotient::new(f, &field_kernel(f, d_out), d_in)
}
