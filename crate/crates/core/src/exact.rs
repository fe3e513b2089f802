//! Short exact sequences `0 -> A -> C -> C/A -> 0` of complexes over a
//! field, with the maps of the long exact sequence in cohomology.

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::field::{independent_columns, left_inverse, Subquotient};
use crate::matrix::Matrix;
use crate::ring::Field;

/// A subcomplex `A ⊆ C` with a chosen complement, so that both `A` and
/// `C/A` are concrete complexes.
#[derive(Clone, Debug)]
pub struct FieldSes<F: Field> {
    pub total: Complex<F>,
    pub sub: Complex<F>,
    pub quotient: Complex<F>,
    sub_basis: Vec<Matrix<F::Elem>>,
    comp_basis: Vec<Matrix<F::Elem>>,
    /// Inverse of `[sub_basis | comp_basis]` per degree.
    split: Vec<Matrix<F::Elem>>,
}

impl<F: Field> FieldSes<F> {
    /// `gens(i)` spans `A^i` inside `C^i`; fails if `d` does not preserve `A`.
    pub fn new(total: &Complex<F>, gens: impl Fn(i64) -> Matrix<F::Elem>) -> Result<Self> {
        let f = total.ring().clone();
        let (lo, hi) = (total.lo(), total.hi());
        let mut sub_basis = Vec::new();
        let mut comp_basis = Vec::new();
        let mut split = Vec::new();
        for i in lo..=hi {
            let g = gens(i);
            let a = g.select_cols(independent_columns(&f, &g));
            let n = total.rank(i);
            let all = a.hstack(&Matrix::identity(&f, n));
            let chosen = independent_columns(&f, &all);
            let c = all.select_cols(chosen.into_iter().filter(|&j| j >= a.cols()));
            let inv = left_inverse(&f, &a.hstack(&c)).expect("basis of C^i");
            sub_basis.push(a);
            comp_basis.push(c);
            split.push(inv);
        }
        let at = |v: &Vec<Matrix<F::Elem>>, i: i64| v[(i - lo) as usize].clone();
        let mut sub_d = Vec::new();
        let mut quot_d = Vec::new();
        for i in lo..hi {
            let (a0, a1) = (at(&sub_basis, i), at(&sub_basis, i + 1));
            let c0 = at(&comp_basis, i);
            let inv1 = at(&split, i + 1);
            let da = Matrix::mul(&f, &inv1, &Matrix::mul(&f, &total.d(i), &a0));
            let k1 = a1.cols();
            let n1 = total.rank(i + 1);
            if !da.block(k1, 0, n1 - k1, a0.cols()).is_zero(&f) {
                return Err(Error::Invariant(format!(
                    "subcomplex not preserved by d in degree {i}"
                )));
            }
            sub_d.push(da.block(0, 0, k1, a0.cols()));
            let dc = Matrix::mul(&f, &inv1, &Matrix::mul(&f, &total.d(i), &c0));
            quot_d.push(dc.block(k1, 0, n1 - k1, c0.cols()));
        }
        let sub = Complex::new(f.clone(), lo, sub_basis.iter().map(|m| m.cols()).collect(), sub_d)?;
        let quotient = Complex::new(f, lo, comp_basis.iter().map(|m| m.cols()).collect(), quot_d)?;
        Ok(FieldSes {
            total: total.clone(),
            sub,
            quotient,
            sub_basis,
            comp_basis,
            split,
        })
    }

    fn idx(&self, i: i64) -> Option<usize> {
        (i >= self.total.lo() && i <= self.total.hi()).then(|| (i - self.total.lo()) as usize)
    }

    /// Basis of `A^i` as columns in `C^i`.
    pub fn sub_basis(&self, i: i64) -> Matrix<F::Elem> {
        let f = self.total.ring();
        self.idx(i)
            .map_or_else(|| Matrix::zeros(f, 0, 0), |j| self.sub_basis[j].clone())
    }

    /// Lifts of the quotient basis, as columns in `C^i`.
    pub fn complement_basis(&self, i: i64) -> Matrix<F::Elem> {
        let f = self.total.ring();
        self.idx(i)
            .map_or_else(|| Matrix::zeros(f, 0, 0), |j| self.comp_basis[j].clone())
    }

    /// Coordinates of `v ∈ C^i` in `[A | complement]`.
    fn split_coords(&self, i: i64, v: &[F::Elem]) -> Vec<F::Elem> {
        match self.idx(i) {
            Some(j) => Matrix::mul_vec(self.total.ring(), &self.split[j], v),
            None => Vec::new(),
        }
    }

    /// `H^i(A) -> H^i(C)`.
    pub fn sub_to_total(&self, i: i64) -> Matrix<F::Elem> {
        let f = self.total.ring();
        let ha = self.sub.field_cohomology(i);
        let hc = self.total.field_cohomology(i);
        let reps = Matrix::mul(f, &self.sub_basis(i), ha.reps());
        coords_or_panic(f, &hc, &reps)
    }

    /// `H^i(C) -> H^i(C/A)`.
    pub fn total_to_quotient(&self, i: i64) -> Matrix<F::Elem> {
        let f = self.total.ring();
        let hc = self.total.field_cohomology(i);
        let hq = self.quotient.field_cohomology(i);
        let k = self.sub.rank(i);
        let cols: Vec<Vec<F::Elem>> = hc
            .reps()
            .columns()
            .iter()
            .map(|v| self.split_coords(i, v)[k..].to_vec())
            .collect();
        let m = Matrix::from_cols(self.quotient.rank(i), &cols);
        coords_or_panic(f, &hq, &m)
    }

    /// Connecting map `H^i(C/A) -> H^{i+1}(A)`.
    pub fn connecting(&self, i: i64) -> Matrix<F::Elem> {
        let f = self.total.ring();
        let hq = self.quotient.field_cohomology(i);
        let ha = self.sub.field_cohomology(i + 1);
        let k1 = self.sub.rank(i + 1);
        let cols: Vec<Vec<F::Elem>> = hq
            .reps()
            .columns()
            .iter()
            .map(|q| self.connecting_rep(i, q))
            .collect();
        let m = Matrix::from_cols(k1, &cols);
        coords_or_panic(f, &ha, &m)
    }

    /// Class in `H^i(C/A)` of a cocycle `v ∈ C^i` (mod `A`).
    pub fn quotient_class(&self, i: i64, v: &[F::Elem]) -> Option<Vec<F::Elem>> {
        let q = self.split_coords(i, v)[self.sub.rank(i)..].to_vec();
        self.quotient.field_cohomology(i).coords(self.total.ring(), &q)
    }

    /// `A`-coordinates of `d` applied to the lift of a quotient cocycle.
    pub fn connecting_rep(&self, i: i64, q: &[F::Elem]) -> Vec<F::Elem> {
        let f = self.total.ring();
        let lift = Matrix::mul_vec(f, &self.complement_basis(i), q);
        let dx = Matrix::mul_vec(f, &self.total.d(i), &lift);
        self.split_coords(i + 1, &dx)[..self.sub.rank(i + 1)].to_vec()
    }
}

fn coords_or_panic<F: Field>(
    f: &F,
    h: &Subquotient<F::Elem>,
    m: &Matrix<F::Elem>,
) -> Matrix<F::Elem> {
    h.coords_matrix(f, m).expect("image of a cocycle is a cocycle")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::field_rank;
    use crate::ring::{PrimeField, Ring};

    #[test]
    fn connecting_map_of_identity_shell() {
        // C = [k --1--> k], A = degree 1 term; C/A = degree 0 term.
        let f = PrimeField::new(3).unwrap();
        let c = Complex::new_valid(f, 0, vec![1, 1], vec![Matrix::identity(&f, 1)]).unwrap();
        let ses = FieldSes::new(&c, |i| {
            if i == 1 {
                Matrix::identity(&f, 1)
            } else {
                Matrix::zeros(&f, 1, 0)
            }
        })
        .unwrap();
        assert_eq!(ses.quotient.betti(0), 1);
        assert_eq!(ses.sub.betti(1), 1);
        let delta = ses.connecting(0);
        assert_eq!(field_rank(&f, &delta), 1);
        assert_eq!(delta.get(0, 0), &f.one());
    }

    #[test]
    fn rejects_non_subcomplex() {
        let f = PrimeField::new(3).unwrap();
        let c = Complex::new_valid(f, 0, vec![1, 1], vec![Matrix::identity(&f, 1)]).unwrap();
        let r = FieldSes::new(&c, |i| {
            if i == 0 {
                Matrix::identity(&f, 1)
            } else {
                Matrix::zeros(&f, 1, 0)
            }
        });
        assert!(r.is_err());
    }
}
