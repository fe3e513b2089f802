//! Full-rank lattices in a `xi`-inverted free module, their relative
//! position, and the Bialynicki-Birula flag on the reference fiber.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Subspace;
use crate::matrix::{residue_reduce, Matrix};
use crate::ring::{CoeffRing, Field, Ring};
use crate::snf::{det, snf};

/// `xi^shift` times the span of the columns of `basis`.
///
/// Only `xi`-valuations are read off; other primes are treated as units.
#[derive(Clone, Debug, PartialEq)]
pub struct Lattice<E> {
    basis: Matrix<E>,
    shift: i64,
    pub ambient: String,
}

impl<E: Clone + PartialEq> Lattice<E> {
    pub fn new<R: CoeffRing<Elem = E>>(ring: &R, basis: Matrix<E>, shift: i64, ambient: impl Into<String>) -> Result<Self> {
        if basis.rows() != basis.cols() || ring.is_zero(&det(ring, &basis)) {
            return Err(Error::SingularBasis);
        }
        Ok(Lattice {
            basis,
            shift,
            ambient: ambient.into(),
        })
    }

    /// The standard lattice `R^n`.
    pub fn standard<R: CoeffRing<Elem = E>>(ring: &R, n: usize, ambient: impl Into<String>) -> Self {
        Lattice {
            basis: Matrix::identity(ring, n),
            shift: 0,
            ambient: ambient.into(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &Matrix<E> {
        &self.basis
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    /// `xi^c L`.
    pub fn scaled(&self, c: i64) -> Self {
        Lattice {
            basis: self.basis.clone(),
            shift: self.shift + c,
            ambient: self.ambient.clone(),
        }
    }

    /// `L g` for an invertible-over-`R` change of basis `g`.
    pub fn rebased<R: CoeffRing<Elem = E>>(&self, ring: &R, g: &Matrix<E>) -> Result<Self> {
        Lattice::new(ring, Matrix::mul(ring, &self.basis, g), self.shift, self.ambient.clone())
    }
}

/// `L` in coordinates adapted to `L0`: `L = span_j xi^{a_j} g_j` where the
/// `g_j` form a basis of `L0` (locally at `xi`).
struct Adapted<E> {
    exponents: Vec<i64>,
    /// Columns `g_j` in `L0`-coordinates.
    frame: Matrix<E>,
}

fn adapted<R: CoeffRing>(ring: &R, l: &Lattice<R::Elem>, l0: &Lattice<R::Elem>) -> Result<Adapted<R::Elem>> {
    if l.dim() != l0.dim() {
        return Err(Error::ShapeMismatch(format!("lattices of rank {} and {}", l.dim(), l0.dim())));
    }
    let n = l.dim();
    if n == 0 {
        return Ok(Adapted {
            exponents: Vec::new(),
            frame: Matrix::zeros(ring, 0, 0),
        });
    }
    // delta * B0^{-1} = V (delta D^{-1}) U is integral for delta the last
    // invariant factor of B0.
    let s0 = snf(ring, &l0.basis);
    let diag = s0.invariant_factors();
    if diag.len() < n {
        return Err(Error::SingularBasis);
    }
    let delta = diag[n - 1].clone();
    let scaled: Vec<R::Elem> = diag
        .iter()
        .map(|d| ring.exact_div(&delta, d).expect("invariant factors divide the last one"))
        .collect();
    let inv = Matrix::mul(ring, &Matrix::mul(ring, &s0.v, &Matrix::diagonal(ring, n, n, &scaled)), &s0.u);
    let x = Matrix::mul(ring, &inv, &l.basis);
    let s = snf(ring, &x);
    let e = s.invariant_factors();
    if e.len() < n {
        return Err(Error::SingularBasis);
    }
    let vd = ring.xi_valuation(&delta).expect("nonzero") as i64;
    let exponents = e
        .iter()
        .map(|d| ring.xi_valuation(d).expect("nonzero") as i64 - vd + l.shift - l0.shift)
        .collect();
    Ok(Adapted {
        exponents,
        frame: s.u_inv.clone(),
    })
}

/// `xi`-valuations of the elementary divisors of `L` relative to `L0`,
/// sorted in decreasing order.
pub fn relative_position<R: CoeffRing>(ring: &R, l: &Lattice<R::Elem>, l0: &Lattice<R::Elem>) -> Result<Vec<i64>> {
    let mut a = adapted(ring, l, l0)?.exponents;
    a.sort_unstable_by(|x, y| y.cmp(x));
    Ok(a)
}

/// An increasing filtration `m ↦ Fil_m` of `k^n`, zero for `m < lo` and
/// full for `m >= lo + levels.len()`. Stored trimmed, so equality of flags
/// is equality of this representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flag<E> {
    n: usize,
    lo: i64,
    levels: Vec<Subspace<E>>,
}

impl<E: Clone + PartialEq> Flag<E> {
    /// `levels[j]` is `Fil_{lo + j}`; zero below, full above.
    pub fn from_levels<F: Field<Elem = E>>(f: &F, n: usize, lo: i64, levels: Vec<Subspace<E>>) -> Self {
        let zero = Subspace::zero(f, n);
        let full = Subspace::full(f, n);
        let mut lo = lo;
        let mut levels = levels;
        while levels.first().is_some_and(|s| *s == zero) {
            levels.remove(0);
            lo += 1;
        }
        while levels.last().is_some_and(|s| *s == full) {
            levels.pop();
        }
        if n == 0 {
            lo = 0;
        }
        Flag { n, lo, levels }
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    /// `Fil_m`.
    pub fn at<F: Field<Elem = E>>(&self, f: &F, m: i64) -> Subspace<E> {
        if m < self.lo {
            return Subspace::zero(f, self.n);
        }
        match self.levels.get((m - self.lo) as usize) {
            Some(s) => s.clone(),
            None => Subspace::full(f, self.n),
        }
    }

    pub fn is_monotone<F: Field<Elem = E>>(&self, f: &F) -> bool {
        self.levels.windows(2).all(|w| w[1].contains(f, &w[0]))
    }

    /// Smallest `m` with `Fil_m != 0` and smallest `m` with `Fil_m` full.
    pub fn range(&self) -> (i64, i64) {
        (self.lo, self.lo + self.levels.len() as i64)
    }

    /// Jump positions with multiplicity, decreasing.
    pub fn jumps<F: Field<Elem = E>>(&self, f: &F) -> Vec<i64> {
        let (a, b) = self.range();
        let mut out = Vec::new();
        for m in a..=b {
            let k = self.at(f, m).dim() - self.at(f, m - 1).dim();
            out.extend(std::iter::repeat_n(m, k));
        }
        out.sort_unstable_by(|x, y| y.cmp(x));
        out
    }

    /// `Fil'_m = Fil_{m - c}`.
    pub fn shifted(&self, c: i64) -> Self {
        Flag {
            n: self.n,
            lo: if self.n == 0 { 0 } else { self.lo + c },
            levels: self.levels.clone(),
        }
    }

    pub fn to_json<F: Field<Elem = E>>(&self, f: &F) -> FlagJson {
        let (a, b) = self.range();
        FlagJson {
            n: self.n,
            levels: (a..=b)
                .map(|m| FlagLevel {
                    m,
                    dim: self.at(f, m).dim(),
                    rows: self.at(f, m).normal_form().format(f),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlagLevel {
    pub m: i64,
    pub dim: usize,
    pub rows: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlagJson {
    pub n: usize,
    pub levels: Vec<FlagLevel>,
}

/// `Fil_m` = image of `L ∩ xi^m L0` in `xi^m L0 / xi^{m+1} L0 ≅ k^n`.
pub fn bb_filtration<R: CoeffRing>(
    ring: &R,
    l: &Lattice<R::Elem>,
    l0: &Lattice<R::Elem>,
) -> Result<Flag<<R::Residue as Ring>::Elem>> {
    let a = adapted(ring, l, l0)?;
    let k = ring.residue_field();
    let n = l.dim();
    let frame = residue_reduce(ring, &a.frame);
    if a.exponents.is_empty() {
        return Ok(Flag::from_levels(&k, 0, 0, Vec::new()));
    }
    let lo = *a.exponents.iter().min().unwrap();
    let hi = *a.exponents.iter().max().unwrap();
    let levels = (lo..=hi)
        .map(|m| {
            let cols: Vec<usize> = (0..n).filter(|&j| a.exponents[j] <= m).collect();
            Subspace::span(&k, &frame.select_cols(cols))
        })
        .collect();
    Ok(Flag::from_levels(&k, n, lo, levels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{FpPoly, Integers, PrimeField};

    #[test]
    fn identical_and_scaled_lattices() {
        let r = Integers::new(3).unwrap();
        let l0 = Lattice::standard(&r, 2, "std");
        assert_eq!(relative_position(&r, &l0, &l0).unwrap(), vec![0, 0]);
        assert_eq!(relative_position(&r, &l0.scaled(1), &l0).unwrap(), vec![1, 1]);
        let k = r.residue_field();
        let f = bb_filtration(&r, &l0, &l0).unwrap();
        assert_eq!(f.at(&k, -1).dim(), 0);
        assert_eq!(f.at(&k, 0).dim(), 2);
        let one = Lattice::standard(&r, 1, "std");
        let g = bb_filtration(&r, &one.scaled(1), &one).unwrap();
        assert_eq!((g.at(&k, 0).dim(), g.at(&k, 1).dim()), (0, 1));
    }

    #[test]
    fn polynomial_lattice_with_a_pole() {
        let r = FpPoly::new(PrimeField::new(5).unwrap());
        let t = r.xi();
        // span(e1, t^{-1} e2) = t^{-1} span(t e1, e2)
        let b = Matrix::diagonal(&r, 2, 2, &[t, r.one()]);
        let l = Lattice::new(&r, b, -1, "std").unwrap();
        let l0 = Lattice::standard(&r, 2, "std");
        assert_eq!(relative_position(&r, &l, &l0).unwrap(), vec![0, -1]);
        let k = r.residue_field();
        let f = bb_filtration(&r, &l, &l0).unwrap();
        let e2 = Subspace::span(&k, &Matrix::from_cols(2, &[vec![0, 1]]));
        assert_eq!(f.at(&k, -1), e2);
        assert_eq!(f.at(&k, 0).dim(), 2);
        assert_eq!(f.at(&k, -2).dim(), 0);
        assert_eq!(f.jumps(&k), vec![0, -1]);
    }

    #[test]
    fn singular_basis_is_rejected() {
        let r = Integers::new(2).unwrap();
        let z = Matrix::zeros(&r, 2, 2);
        assert_eq!(Lattice::new(&r, z, 0, "x"), Err(Error::SingularBasis));
    }
}
