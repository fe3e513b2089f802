//! The complex `H^•(K/xi)` with the Bockstein differential, and its
//! comparison with `eta(K) ⊗ k`.

use serde::Serialize;

use crate::complex::Complex;
use crate::decalage::{eta, scaled_reduce};
use crate::error::{Error, Result};
use crate::field::{field_rank, Subquotient};
use crate::matrix::{residue_lift, Matrix};
use crate::report::Report;
use crate::ring::{CoeffRing, Ring};

type K<R> = <<R as CoeffRing>::Residue as Ring>::Elem;

/// `H^i(K/xi)` in every degree (with chosen bases) and `beta`.
///
/// `complex` has `dim H^i(K/xi)` in degree `i` and `beta` as differential;
/// its degree-`i` term carries twist tag `i`.
#[derive(Clone, Debug)]
pub struct BocksteinComplex<R: CoeffRing> {
    pub complex: Complex<R::Residue>,
    reduced: Complex<R::Residue>,
    classes: Vec<Subquotient<K<R>>>,
}

impl<R: CoeffRing> BocksteinComplex<R> {
    pub fn new(k: &Complex<R>) -> Result<Self> {
        let ring = k.ring();
        let reduced = k.reduce_mod_xi();
        let classes: Vec<_> = (k.lo()..=k.hi()).map(|i| reduced.field_cohomology(i)).collect();
        let mut this = BocksteinComplex {
            complex: Complex::zero_differentials(
                ring.residue_field(),
                k.lo(),
                classes.iter().map(|c| c.dim()).collect(),
            ),
            reduced,
            classes,
        };
        let betas = (k.lo()..k.hi())
            .map(|i| {
                let lifts = residue_lift(ring, this.class_space(i).reps());
                let cols = lifts
                    .columns()
                    .iter()
                    .map(|h| this.beta_of_lift(k, i, h))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Matrix::from_cols(this.complex.rank(i + 1), &cols))
            })
            .collect::<Result<Vec<_>>>()?;
        this.complex = Complex::new(
            ring.residue_field(),
            k.lo(),
            this.complex.ranks().to_vec(),
            betas,
        )?;
        Ok(this)
    }

    /// `H^i(K/xi)` with its chosen basis.
    pub fn class_space(&self, i: i64) -> &Subquotient<K<R>> {
        &self.classes[(i - self.complex.lo()) as usize]
    }

    pub fn reduced(&self) -> &Complex<R::Residue> {
        &self.reduced
    }

    pub fn dim(&self, i: i64) -> usize {
        self.complex.rank(i)
    }

    pub fn beta(&self, i: i64) -> Matrix<K<R>> {
        self.complex.d(i)
    }

    /// Coordinates of the class of a mod-xi cocycle.
    pub fn class_of(&self, i: i64, v: &[K<R>]) -> Option<Vec<K<R>>> {
        if i < self.complex.lo() || i > self.complex.hi() {
            return Some(Vec::new());
        }
        self.class_space(i).coords(self.reduced.ring(), v)
    }

    /// `beta` of the class lifted by `x ∈ K^i`: the class of `d x / xi`.
    pub fn beta_of_lift(&self, k: &Complex<R>, i: i64, x: &[R::Elem]) -> Result<Vec<K<R>>> {
        let ring = k.ring();
        let dx = Matrix::mul_vec(ring, &k.d(i), x);
        let xi = ring.xi();
        let y: Vec<R::Elem> = dx
            .iter()
            .map(|e| ring.exact_div(e, &xi))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Invariant(format!("lift in degree {i} is not a cocycle mod xi")))?;
        let y_bar: Vec<K<R>> = y.iter().map(|e| ring.reduce(e)).collect();
        self.class_of(i + 1, &y_bar)
            .ok_or_else(|| Error::Invariant("d x / xi is not a cocycle mod xi".into()))
    }

    pub fn to_json(&self) -> BocksteinJson {
        let f = self.complex.ring();
        BocksteinJson {
            lo: self.complex.lo(),
            dims: self.complex.ranks().to_vec(),
            beta: (self.complex.lo()..self.complex.hi())
                .map(|i| self.beta(i).format(f))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BocksteinJson {
    pub lo: i64,
    pub dims: Vec<usize>,
    pub beta: Vec<Vec<Vec<String>>>,
}

pub fn bockstein_complex<R: CoeffRing>(k: &Complex<R>) -> Result<BocksteinComplex<R>> {
    BocksteinComplex::new(k)
}

/// `psi_i : (eta K)^i ⊗ k -> H^i(K/xi)`, `xi^i p ↦ [p mod xi]`, in the
/// basis of `eta(K)` and the chosen basis of `H^i(K/xi)`.
pub fn comparison_to_bockstein<R: CoeffRing>(
    k: &Complex<R>,
    bock: &BocksteinComplex<R>,
    basis: &Matrix<R::Elem>,
    i: i64,
) -> Result<Matrix<K<R>>> {
    let ring = k.ring();
    let p = scaled_reduce(ring, basis, i as u32)?;
    let cols = p
        .columns()
        .iter()
        .map(|v| bock.class_of(i, v))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::Invariant(format!("comparison in degree {i} misses cocycles")))?;
    Ok(Matrix::from_cols(bock.dim(i), &cols))
}

/// The comparison `eta(K) ⊗ k -> H^•(K/xi)` is a chain map inducing an
/// isomorphism in every degree.
pub fn verify_eta_comparison<R: CoeffRing>(k: &Complex<R>) -> Result<Report> {
    let ring = k.ring();
    let f = ring.residue_field();
    let bock = bockstein_complex(k)?;
    let e = eta(k)?;
    let e_bar = e.complex.reduce_mod_xi();
    let mut report = Report::new();
    let psi: Vec<Matrix<K<R>>> = (k.lo()..=k.hi())
        .map(|i| comparison_to_bockstein(k, &bock, &e.basis(i), i))
        .collect::<Result<_>>()?;
    let at = |i: i64| -> Matrix<K<R>> {
        if i < k.lo() || i > k.hi() {
            Matrix::zeros(&f, bock.dim(i), e_bar.rank(i))
        } else {
            psi[(i - k.lo()) as usize].clone()
        }
    };
    let mut chain = true;
    for i in k.lo()..k.hi() {
        let lhs = Matrix::mul(&f, &at(i + 1), &e_bar.d(i));
        let rhs = Matrix::mul(&f, &bock.beta(i), &at(i));
        chain &= lhs == rhs;
    }
    report.push("bockstein-chain-map", chain, "psi commutes with d and beta");
    for i in k.lo()..=k.hi() {
        let src = e_bar.field_cohomology(i);
        let tgt = bock.complex.field_cohomology(i);
        let images = Matrix::mul(&f, &at(i), src.reps());
        let induced = tgt
            .coords_matrix(&f, &images)
            .ok_or_else(|| Error::Invariant("psi does not preserve cocycles".into()))?;
        let iso = src.dim() == tgt.dim() && field_rank(&f, &induced) == src.dim();
        report.push(
            "bockstein-quasi-iso",
            iso,
            format!("degree {i}: dim {} -> dim {}", src.dim(), tgt.dim()),
        );
    }
    Ok(report)
}

/// `beta` is independent of the lift: perturbing every lift by
/// `xi w + d u` leaves the matrix unchanged.
pub fn verify_lift_independence<R: CoeffRing>(
    k: &Complex<R>,
    perturb: &mut dyn FnMut(usize) -> Vec<R::Elem>,
) -> Result<bool> {
    let ring = k.ring();
    let bock = bockstein_complex(k)?;
    for i in k.lo()..k.hi() {
        let reps = residue_lift(ring, bock.class_space(i).reps());
        let mut cols = Vec::new();
        for h in reps.columns() {
            let w = perturb(k.rank(i));
            let u = perturb(k.rank(i - 1));
            let du = Matrix::mul_vec(ring, &k.d(i - 1), &u);
            let x: Vec<R::Elem> = h
                .iter()
                .zip(&w)
                .zip(&du)
                .map(|((a, b), c)| ring.add(&ring.add(a, &ring.mul(&ring.xi(), b)), c))
                .collect();
            cols.push(bock.beta_of_lift(k, i, &x)?);
        }
        if Matrix::from_cols(bock.dim(i + 1), &cols) != bock.beta(i) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `beta o beta = 0`.
pub fn beta_squares_to_zero<R: CoeffRing>(bock: &BocksteinComplex<R>) -> bool {
    bock.complex.validate().is_ok()
}

/// Whether every differential of the Bockstein complex vanishes.
pub fn beta_vanishes<R: CoeffRing>(bock: &BocksteinComplex<R>) -> bool {
    let f = bock.complex.ring();
    (bock.complex.lo()..bock.complex.hi()).all(|i| bock.beta(i).is_zero(f))
}
