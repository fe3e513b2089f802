//! Finitely generated modules over a PID, finite presentations, and
//! cohomology computed from presentations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ring::{CoeffRing, EuclideanRing};
use crate::snf::{image_basis, kernel_basis, snf, Snf};

/// Isomorphism invariants: `R^free_rank ⊕ ⊕ R/(d_j)` with `d_1 | d_2 | ...`
/// normalized and non-unit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FGModule<E> {
    pub free_rank: usize,
    pub invariant_factors: Vec<E>,
}

impl<E: Clone + PartialEq> FGModule<E> {
    pub fn zero() -> Self {
        FGModule {
            free_rank: 0,
            invariant_factors: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        FGModule {
            free_rank: rank,
            invariant_factors: Vec::new(),
        }
    }

    /// Cokernel of `rels : R^s -> R^gens`.
    pub fn from_relations<R: EuclideanRing<Elem = E>>(ring: &R, gens: usize, rels: &Matrix<E>) -> Self {
        Self::from_snf(ring, gens, &snf(ring, rels))
    }

    fn from_snf<R: EuclideanRing<Elem = E>>(ring: &R, gens: usize, s: &Snf<E>) -> Self {
        let invariant_factors = s
            .invariant_factors()
            .into_iter()
            .filter(|d| !ring.is_unit(d))
            .map(|d| ring.normalize(&d))
            .collect();
        FGModule {
            free_rank: gens - s.rank,
            invariant_factors,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    /// Number of generators of a minimal presentation.
    pub fn num_generators(&self) -> usize {
        self.free_rank + self.invariant_factors.len()
    }

    /// `M ⊗ k^r`: `k^r` as a module, i.e. `r` copies of `R/(xi)`.
    pub fn residue_space<R: CoeffRing<Elem = E>>(ring: &R, r: usize) -> Self {
        FGModule {
            free_rank: 0,
            invariant_factors: vec![ring.normalize(&ring.xi()); r],
        }
    }

    /// Factors divisible by `xi`.
    pub fn xi_primary_count<R: CoeffRing<Elem = E>>(&self, ring: &R) -> usize {
        self.invariant_factors
            .iter()
            .filter(|d| ring.xi_valuation(d).is_some_and(|v| v >= 1))
            .count()
    }

    /// `dim_k (M ⊗ k)`.
    pub fn dim_mod_xi<R: CoeffRing<Elem = E>>(&self, ring: &R) -> usize {
        self.free_rank + self.xi_primary_count(ring)
    }

    /// Whether the submodule `M[xi]` of elements killed by `xi` vanishes.
    pub fn is_xi_torsion_free<R: CoeffRing<Elem = E>>(&self, ring: &R) -> bool {
        self.xi_primary_count(ring) == 0
    }

    /// `M / M[xi]`: each factor `d` with `xi | d` becomes `d / xi`.
    pub fn kill_xi_torsion<R: CoeffRing<Elem = E>>(&self, ring: &R) -> Self {
        let xi = ring.xi();
        let invariant_factors = self
            .invariant_factors
            .iter()
            .map(|d| match ring.exact_div(d, &xi) {
                Some(q) => ring.normalize(&q),
                None => d.clone(),
            })
            .filter(|d| !ring.is_unit(d))
            .collect();
        FGModule {
            free_rank: self.free_rank,
            invariant_factors,
        }
    }

    pub fn direct_sum<R: EuclideanRing<Elem = E>>(ring: &R, a: &Self, b: &Self) -> Self {
        let n = a.num_generators() + b.num_generators();
        let diag: Vec<E> = a
            .invariant_factors
            .iter()
            .chain(&b.invariant_factors)
            .cloned()
            .collect();
        let rels = Matrix::diagonal(ring, n, diag.len(), &diag);
        FGModule::from_relations(ring, n, &rels)
    }

    pub fn display<R: EuclideanRing<Elem = E>>(&self, ring: &R) -> String {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(format!("R^{}", self.free_rank));
        }
        parts.extend(
            self.invariant_factors
                .iter()
                .map(|d| format!("R/({})", ring.format(d))),
        );
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    pub fn to_json<R: EuclideanRing<Elem = E>>(&self, ring: &R) -> FGModuleJson {
        FGModuleJson {
            free_rank: self.free_rank,
            invariant_factors: self.invariant_factors.iter().map(|d| ring.format(d)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FGModuleJson {
    pub free_rank: usize,
    pub invariant_factors: Vec<String>,
}

/// `R^gens / im(rels)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FPModule<E> {
    pub gens: usize,
    pub rels: Matrix<E>,
}

impl<E: Clone + PartialEq> FPModule<E> {
    pub fn free<R: EuclideanRing<Elem = E>>(ring: &R, gens: usize) -> Self {
        FPModule {
            gens,
            rels: Matrix::zeros(ring, gens, 0),
        }
    }

    pub fn module<R: EuclideanRing<Elem = E>>(&self, ring: &R) -> FGModule<E> {
        FGModule::from_relations(ring, self.gens, &self.rels)
    }
}

/// Cohomology at one spot of a presented complex, with enough data to
/// express classes in coordinates.
///
/// Cocycles form a free lattice with basis `cocycles`; in those coordinates
/// the coboundaries plus relations are the columns of `X`, and `relations`
/// is the Smith form of `X`. Generators of the cohomology are the columns
/// of `cocycles * U^{-1}` at the positions listed in `gens`.
#[derive(Clone, Debug)]
pub struct CohomologyPresentation<E> {
    cocycles: Matrix<E>,
    cocycle_snf: Snf<E>,
    relations: Snf<E>,
    gens: Vec<usize>,
    module: FGModule<E>,
}

impl<E: Clone + PartialEq> CohomologyPresentation<E> {
    /// Presentation of `{x : d_next x ∈ im rel_next} / (im d_prev + im rel)`
    /// inside `R^g`.
    pub fn new<R: EuclideanRing<Elem = E>>(
        ring: &R,
        g: usize,
        d_prev: &Matrix<E>,
        rel: &Matrix<E>,
        d_next: &Matrix<E>,
        rel_next: &Matrix<E>,
    ) -> Result<Self> {
        let w = kernel_basis(ring, &d_next.hstack(rel_next));
        let top = w.block(0, 0, g, w.cols());
        let cocycles = image_basis(ring, &top);
        let cocycle_snf = snf(ring, &cocycles);
        let x = cocycle_snf
            .solve(ring, &d_prev.hstack(rel))
            .ok_or_else(|| Error::Invariant("coboundary is not a cocycle".into()))?;
        let relations = snf(ring, &x);
        let z = cocycles.cols();
        let gens = (0..z)
            .filter(|&j| j >= relations.rank || !ring.is_unit(relations.d.get(j, j)))
            .collect();
        let module = FGModule::from_snf(ring, z, &relations);
        Ok(CohomologyPresentation {
            cocycles,
            cocycle_snf,
            relations,
            gens,
            module,
        })
    }

    pub fn module(&self) -> &FGModule<E> {
        &self.module
    }

    /// Basis of the cocycle lattice, as columns.
    pub fn cocycles(&self) -> &Matrix<E> {
        &self.cocycles
    }

    pub fn num_generators(&self) -> usize {
        self.gens.len()
    }

    /// Cocycle representatives of the generators.
    pub fn generators<R: EuclideanRing<Elem = E>>(&self, ring: &R) -> Matrix<E> {
        Matrix::mul(ring, &self.cocycles, &self.relations.u_inv).select_cols(self.gens.iter().copied())
    }

    /// Additive order of each generator; `None` for free generators.
    pub fn orders(&self) -> Vec<Option<E>> {
        self.gens
            .iter()
            .map(|&j| (j < self.relations.rank).then(|| self.relations.d.get(j, j).clone()))
            .collect()
    }

    /// Representatives of a basis of the free quotient `H / torsion`.
    pub fn free_generators<R: EuclideanRing<Elem = E>>(&self, ring: &R) -> Matrix<E> {
        let r = self.relations.rank;
        Matrix::mul(ring, &self.cocycles, &self.relations.u_inv).select_cols(r..self.cocycles.cols())
    }

    /// Coordinates of the class of a cocycle in the generators, torsion
    /// coordinates reduced; `None` if `v` is not a cocycle.
    pub fn coords<R: EuclideanRing<Elem = E>>(&self, ring: &R, v: &[E]) -> Option<Vec<E>> {
        let c = self.cocycle_snf.solve_vec(ring, v)?;
        let y = Matrix::mul_vec(ring, &self.relations.u, &c);
        Some(self.gens.iter().map(|&j| self.reduce_at(ring, j, &y[j])).collect())
    }

    /// Coordinates in the free quotient only.
    pub fn free_coords<R: EuclideanRing<Elem = E>>(&self, ring: &R, v: &[E]) -> Option<Vec<E>> {
        let c = self.cocycle_snf.solve_vec(ring, v)?;
        let y = Matrix::mul_vec(ring, &self.relations.u, &c);
        Some(y[self.relations.rank..].to_vec())
    }

    pub fn coords_matrix<R: EuclideanRing<Elem = E>>(&self, ring: &R, m: &Matrix<E>) -> Option<Matrix<E>> {
        let cols = m
            .columns()
            .iter()
            .map(|c| self.coords(ring, c))
            .collect::<Option<Vec<_>>>()?;
        Some(Matrix::from_cols(self.gens.len(), &cols))
    }

    /// Reduce each row of a coordinate matrix modulo the order of the
    /// corresponding generator.
    pub fn reduce_coords<R: EuclideanRing<Elem = E>>(&self, ring: &R, m: &Matrix<E>) -> Matrix<E> {
        let mut out = m.clone();
        for (row, &j) in self.gens.iter().enumerate() {
            for col in 0..m.cols() {
                out.set(row, col, self.reduce_at(ring, j, m.get(row, col)));
            }
        }
        out
    }

    fn reduce_at<R: EuclideanRing<Elem = E>>(&self, ring: &R, j: usize, x: &E) -> E {
        if j < self.relations.rank {
            ring.div_rem(x, self.relations.d.get(j, j)).1
        } else {
            x.clone()
        }
    }

    pub fn is_cocycle<R: EuclideanRing<Elem = E>>(&self, ring: &R, v: &[E]) -> bool {
        self.cocycle_snf.solve_vec(ring, v).is_some()
    }

    /// Whether the class of a cocycle vanishes.
    pub fn is_trivial<R: EuclideanRing<Elem = E>>(&self, ring: &R, v: &[E]) -> bool {
        self.coords(ring, v)
            .is_some_and(|c| c.iter().all(|x| ring.is_zero(x)))
    }
}

/// Matrix of the map induced on cohomology by `f`, in generator coordinates.
pub fn induced_on_cohomology<R: EuclideanRing>(
    ring: &R,
    src: &CohomologyPresentation<R::Elem>,
    tgt: &CohomologyPresentation<R::Elem>,
    f: &Matrix<R::Elem>,
) -> Result<Matrix<R::Elem>> {
    let images = Matrix::mul(ring, f, &src.generators(ring));
    tgt.coords_matrix(ring, &images)
        .ok_or_else(|| Error::Invariant("map does not send cocycles to cocycles".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{Integers, Ring};
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
    fn module_from_relations() {
        let r = Integers::new(2).unwrap();
        let m = FGModule::from_relations(&r, 3, &z(&[&[2, 0], &[0, 6], &[0, 0]]));
        assert_eq!(m.free_rank, 1);
        assert_eq!(m.invariant_factors, vec![BigInt::from(2), BigInt::from(6)]);
        assert_eq!(m.xi_primary_count(&r), 2);
        let k = m.kill_xi_torsion(&r);
        assert_eq!(k.invariant_factors, vec![BigInt::from(3)]);
    }

    #[test]
    fn presentation_of_multiplication_by_p() {
        let r = Integers::new(5).unwrap();
        let d = z(&[&[5]]);
        let empty = |n| Matrix::zeros(&r, n, 0);
        let h0 = CohomologyPresentation::new(&r, 1, &empty(1), &empty(1), &d, &empty(1)).unwrap();
        assert!(h0.module().is_zero());
        let h1 = CohomologyPresentation::new(&r, 1, &d, &empty(1), &Matrix::zeros(&r, 0, 1), &empty(0))
            .unwrap();
        assert_eq!(h1.module().invariant_factors, vec![BigInt::from(5)]);
        assert_eq!(h1.coords(&r, &[r.from_i64(7)]).unwrap(), vec![BigInt::from(2)]);
        assert!(h1.is_trivial(&r, &[r.from_i64(10)]));
    }
}
