//! Bounded cochain complexes of finite free modules, finitely presented
//! complexes, and chain maps.

use crate::error::{Error, Result};
use crate::field::{field_cohomology, Subquotient};
use crate::matrix::{residue_reduce, Matrix};
use crate::module::{induced_on_cohomology, CohomologyPresentation, FGModule, FPModule};
use crate::ring::{CoeffRing, EuclideanRing, Field, Ring};
use crate::snf::{kernel_basis, solve};

/// A cochain complex `K^lo -> ... -> K^hi` of free modules of finite rank.
///
/// `diffs[j]` is the differential from degree `lo + j` to `lo + j + 1`.
/// `twist` records the power of `xi` the complex has been scaled by.
#[derive(Clone, Debug, PartialEq)]
pub struct Complex<R: Ring> {
    ring: R,
    lo: i64,
    ranks: Vec<usize>,
    diffs: Vec<Matrix<R::Elem>>,
    twist: i64,
}

impl<R: Ring> Complex<R> {
    /// Checks shapes only; see [`Complex::validate`] for `d o d = 0`.
    pub fn new(ring: R, lo: i64, ranks: Vec<usize>, diffs: Vec<Matrix<R::Elem>>) -> Result<Self> {
        if ranks.is_empty() {
            return Err(Error::ShapeMismatch("a complex needs lo <= hi".into()));
        }
        if diffs.len() + 1 != ranks.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} degrees need {} differentials, got {}",
                ranks.len(),
                ranks.len() - 1,
                diffs.len()
            )));
        }
        for (j, d) in diffs.iter().enumerate() {
            if d.shape() != (ranks[j + 1], ranks[j]) {
                return Err(Error::ShapeMismatch(format!(
                    "differential in degree {} is {}x{}, expected {}x{}",
                    lo + j as i64,
                    d.rows(),
                    d.cols(),
                    ranks[j + 1],
                    ranks[j]
                )));
            }
        }
        Ok(Complex {
            ring,
            lo,
            ranks,
            diffs,
            twist: 0,
        })
    }

    /// Shape-checked and `d o d = 0`.
    pub fn new_valid(ring: R, lo: i64, ranks: Vec<usize>, diffs: Vec<Matrix<R::Elem>>) -> Result<Self> {
        let k = Self::new(ring, lo, ranks, diffs)?;
        k.validate()?;
        Ok(k)
    }

    /// Complex with the given ranks and zero differentials.
    pub fn zero_differentials(ring: R, lo: i64, ranks: Vec<usize>) -> Self {
        let diffs = ranks
            .windows(2)
            .map(|w| Matrix::zeros(&ring, w[1], w[0]))
            .collect();
        Complex {
            ring,
            lo,
            ranks,
            diffs,
            twist: 0,
        }
    }

    /// Same degree range, all terms zero.
    pub fn zero_like(&self) -> Self {
        Self::zero_differentials(self.ring.clone(), self.lo, vec![0; self.ranks.len()])
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.ranks.len() as i64 - 1
    }

    pub fn twist(&self) -> i64 {
        self.twist
    }

    pub fn with_twist(mut self, twist: i64) -> Self {
        self.twist = twist;
        self
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn rank(&self, i: i64) -> usize {
        if i < self.lo || i > self.hi() {
            0
        } else {
            self.ranks[(i - self.lo) as usize]
        }
    }

    /// Differential from degree `i` to `i + 1` (zero outside the range).
    pub fn d(&self, i: i64) -> Matrix<R::Elem> {
        if i >= self.lo && i < self.hi() {
            self.diffs[(i - self.lo) as usize].clone()
        } else {
            Matrix::zeros(&self.ring, self.rank(i + 1), self.rank(i))
        }
    }

    pub fn d_ref(&self, i: i64) -> Option<&Matrix<R::Elem>> {
        (i >= self.lo && i < self.hi()).then(|| &self.diffs[(i - self.lo) as usize])
    }

    pub fn validate(&self) -> Result<()> {
        for i in self.lo..self.hi() - 1 {
            let dd = Matrix::mul(&self.ring, &self.d(i + 1), &self.d(i));
            if let Some((_, column)) = dd.first_nonzero(&self.ring) {
                return Err(Error::DifferentialSquareNonzero { degree: i, column });
            }
        }
        Ok(())
    }

    pub fn is_zero_complex(&self) -> bool {
        self.ranks.iter().all(|&r| r == 0)
    }

    /// `K[k]`: degree `i` term is `K^{i+k}`, differential scaled by `(-1)^k`.
    pub fn shift(&self, k: i64) -> Self {
        let diffs = if k.rem_euclid(2) == 1 {
            self.diffs.iter().map(|d| d.neg(&self.ring)).collect()
        } else {
            self.diffs.clone()
        };
        Complex {
            ring: self.ring.clone(),
            lo: self.lo - k,
            ranks: self.ranks.clone(),
            diffs,
            twist: self.twist,
        }
    }

    /// Same complex over a widened degree range.
    pub fn widen(&self, lo: i64, hi: i64) -> Self {
        let lo = lo.min(self.lo);
        let hi = hi.max(self.hi());
        let ranks: Vec<usize> = (lo..=hi).map(|i| self.rank(i)).collect();
        let diffs = (lo..hi).map(|i| self.d(i)).collect();
        Complex {
            ring: self.ring.clone(),
            lo,
            ranks,
            diffs,
            twist: self.twist,
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        (self.lo..=self.hi())
            .map(|i| sign(i) * self.rank(i) as i64)
            .sum()
    }
}

/// `(-1)^i`
pub fn sign(i: i64) -> i64 {
    if i.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

impl<R: EuclideanRing> Complex<R> {
    /// Basis of `Z^i = ker d(i)`.
    pub fn cocycles(&self, i: i64) -> Matrix<R::Elem> {
        kernel_basis(&self.ring, &self.d(i))
    }

    /// Generators of `B^i = im d(i-1)`.
    pub fn boundaries(&self, i: i64) -> Matrix<R::Elem> {
        self.d(i - 1)
    }

    pub fn cohomology_presentation(&self, i: i64) -> Result<CohomologyPresentation<R::Elem>> {
        let r = &self.ring;
        CohomologyPresentation::new(
            r,
            self.rank(i),
            &self.d(i - 1),
            &Matrix::zeros(r, self.rank(i), 0),
            &self.d(i),
            &Matrix::zeros(r, self.rank(i + 1), 0),
        )
    }

    pub fn cohomology(&self, i: i64) -> FGModule<R::Elem> {
        self.cohomology_presentation(i)
            .expect("validated complex")
            .module()
            .clone()
    }

    /// Canonical truncation `... -> K^{m-1} -> Z^m -> 0` with its inclusion.
    /// The degree range is kept; terms above `m` become zero.
    pub fn truncate_leq(&self, m: i64) -> (Complex<R>, ChainMap<R>) {
        if m >= self.hi() {
            return (self.clone(), ChainMap::identity(self));
        }
        let r = &self.ring;
        let zm = self.cocycles(m);
        let basis = |i: i64| -> Matrix<R::Elem> {
            if i < m {
                Matrix::identity(r, self.rank(i))
            } else if i == m {
                zm.clone()
            } else {
                Matrix::zeros(r, self.rank(i), 0)
            }
        };
        let sub = self.subcomplex_from_bases(&basis).expect("truncation is a subcomplex");
        let incl = ChainMap::from_fn(&sub, self, basis);
        (sub, incl)
    }

    /// Brutal truncation `sigma_{>= m}`: `K^i` for `i >= m`, zero below.
    pub fn hodge_filtration(&self, m: i64) -> (Complex<R>, ChainMap<R>) {
        let r = &self.ring;
        let basis = |i: i64| -> Matrix<R::Elem> {
            if i >= m {
                Matrix::identity(r, self.rank(i))
            } else {
                Matrix::zeros(r, self.rank(i), 0)
            }
        };
        let sub = self.subcomplex_from_bases(&basis).expect("brutal truncation is a subcomplex");
        let incl = ChainMap::from_fn(&sub, self, basis);
        (sub, incl)
    }

    /// The subcomplex whose degree-`i` term has basis `basis(i)` (columns in
    /// `K^i`). Fails if `d` does not preserve the spans.
    pub fn subcomplex_from_bases(
        &self,
        basis: &dyn Fn(i64) -> Matrix<R::Elem>,
    ) -> Result<Complex<R>> {
        let r = &self.ring;
        let bases: Vec<Matrix<R::Elem>> = (self.lo..=self.hi()).map(basis).collect();
        let ranks = bases.iter().map(|b| b.cols()).collect();
        let mut diffs = Vec::new();
        for (j, i) in (self.lo..self.hi()).enumerate() {
            let img = Matrix::mul(r, &self.d(i), &bases[j]);
            let dj = solve(r, &bases[j + 1], &img).ok_or_else(|| {
                Error::Invariant(format!("span not preserved by d in degree {i}"))
            })?;
            diffs.push(dj);
        }
        Complex::new(r.clone(), self.lo, ranks, diffs)
    }

    /// `cone(f)^i = src^{i+1} ⊕ tgt^i`, `d = [[-d_src, 0], [f, d_tgt]]`.
    pub fn cone(f: &ChainMap<R>) -> Complex<R> {
        let r = f.source.ring().clone();
        let (s, t) = (&f.source, &f.target);
        let lo = (s.lo() - 1).min(t.lo());
        let hi = (s.hi() - 1).max(t.hi());
        let ranks: Vec<usize> = (lo..=hi).map(|i| s.rank(i + 1) + t.rank(i)).collect();
        let diffs = (lo..hi)
            .map(|i| {
                let (a, b) = (s.rank(i + 1), t.rank(i));
                let (a2, b2) = (s.rank(i + 2), t.rank(i + 1));
                let mut d = Matrix::zeros(&r, a2 + b2, a + b);
                d.paste(0, 0, &s.d(i + 1).neg(&r));
                d.paste(a2, 0, &f.at(i + 1));
                d.paste(a2, a, &t.d(i));
                d
            })
            .collect();
        Complex::new(r, lo, ranks, diffs).expect("cone shapes")
    }

    /// The complex as a presented complex with no relations.
    pub fn to_fp(&self) -> FPComplex<R> {
        let modules = self
            .ranks
            .iter()
            .map(|&g| FPModule::free(&self.ring, g))
            .collect();
        FPComplex {
            ring: self.ring.clone(),
            lo: self.lo,
            modules,
            diffs: self.diffs.clone(),
        }
    }
}

impl<R: CoeffRing> Complex<R> {
    /// `K ⊗ R/(xi)`: same ranks, reduced differentials.
    pub fn reduce_mod_xi(&self) -> Complex<R::Residue> {
        let k = self.ring.residue_field();
        Complex {
            ring: k,
            lo: self.lo,
            ranks: self.ranks.clone(),
            diffs: self
                .diffs
                .iter()
                .map(|d| residue_reduce(&self.ring, d))
                .collect(),
            twist: self.twist,
        }
    }
}

impl<F: Field> Complex<F> {
    /// `H^i` with chosen representatives (reduced-echelon kernel basis,
    /// greedy complement of the boundaries).
    pub fn field_cohomology(&self, i: i64) -> Subquotient<F::Elem> {
        field_cohomology(&self.ring, &self.d(i - 1), &self.d(i))
    }

    pub fn betti(&self, i: i64) -> usize {
        self.field_cohomology(i).dim()
    }
}

/// A degreewise map of complexes over the same ring.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainMap<R: Ring> {
    pub source: Complex<R>,
    pub target: Complex<R>,
    lo: i64,
    maps: Vec<Matrix<R::Elem>>,
    pub twist_shift: i64,
}

impl<R: Ring> ChainMap<R> {
    pub fn from_fn(
        source: &Complex<R>,
        target: &Complex<R>,
        f: impl Fn(i64) -> Matrix<R::Elem>,
    ) -> Self {
        let lo = source.lo().min(target.lo());
        let hi = source.hi().max(target.hi());
        ChainMap {
            source: source.clone(),
            target: target.clone(),
            lo,
            maps: (lo..=hi).map(f).collect(),
            twist_shift: 0,
        }
    }

    pub fn identity(k: &Complex<R>) -> Self {
        Self::from_fn(k, k, |i| Matrix::identity(k.ring(), k.rank(i)))
    }

    pub fn zero(source: &Complex<R>, target: &Complex<R>) -> Self {
        Self::from_fn(source, target, |i| {
            Matrix::zeros(source.ring(), target.rank(i), source.rank(i))
        })
    }

    /// Multiplication by a scalar on a complex.
    pub fn scalar(k: &Complex<R>, c: &R::Elem) -> Self {
        Self::from_fn(k, k, |i| Matrix::scalar(k.ring(), k.rank(i), c))
    }

    /// Component in degree `i`.
    pub fn at(&self, i: i64) -> Matrix<R::Elem> {
        let hi = self.lo + self.maps.len() as i64 - 1;
        if i >= self.lo && i <= hi {
            self.maps[(i - self.lo) as usize].clone()
        } else {
            Matrix::zeros(self.source.ring(), self.target.rank(i), self.source.rank(i))
        }
    }

    fn range(&self) -> std::ops::RangeInclusive<i64> {
        self.source.lo().min(self.target.lo())..=self.source.hi().max(self.target.hi())
    }

    /// Shapes match and `f d = d f` in every degree.
    pub fn validate(&self) -> Result<()> {
        let r = self.source.ring();
        for i in self.range() {
            let f = self.at(i);
            if f.shape() != (self.target.rank(i), self.source.rank(i)) {
                return Err(Error::ShapeMismatch(format!("chain map in degree {i}")));
            }
            let lhs = Matrix::mul(r, &self.at(i + 1), &self.source.d(i));
            let rhs = Matrix::mul(r, &self.target.d(i), &f);
            if lhs != rhs {
                return Err(Error::Invariant(format!(
                    "chain map does not commute with d in degree {i}"
                )));
            }
        }
        Ok(())
    }

    /// `g o self`
    pub fn then(&self, g: &ChainMap<R>) -> ChainMap<R> {
        let r = self.source.ring();
        let mut out = ChainMap::from_fn(&self.source, &g.target, |i| {
            Matrix::mul(r, &g.at(i), &self.at(i))
        });
        out.twist_shift = self.twist_shift + g.twist_shift;
        out
    }
}

impl<R: EuclideanRing> ChainMap<R> {
    /// `H^i(f)` in the generator coordinates of the two presentations.
    pub fn induced_map(&self, i: i64) -> Result<InducedMap<R::Elem>> {
        let r = self.source.ring();
        let src = self.source.cohomology_presentation(i)?;
        let tgt = self.target.cohomology_presentation(i)?;
        let matrix = induced_on_cohomology(r, &src, &tgt, &self.at(i))?;
        Ok(InducedMap { src, tgt, matrix })
    }

    /// Whether every component is injective.
    pub fn is_degreewise_injective(&self) -> bool {
        self.range()
            .all(|i| kernel_basis(self.source.ring(), &self.at(i)).cols() == 0)
    }
}

impl<F: Field> ChainMap<F> {
    /// `H^i(f)` in the chosen bases of [`Complex::field_cohomology`].
    pub fn field_induced(&self, i: i64) -> Matrix<F::Elem> {
        let f = self.source.ring();
        let src = self.source.field_cohomology(i);
        let tgt = self.target.field_cohomology(i);
        tgt.coords_matrix(f, &Matrix::mul(f, &self.at(i), src.reps()))
            .expect("chain maps send cocycles to cocycles")
    }
}

/// A map on cohomology together with the presentations it is written in.
#[derive(Clone, Debug)]
pub struct InducedMap<E> {
    pub src: CohomologyPresentation<E>,
    pub tgt: CohomologyPresentation<E>,
    pub matrix: Matrix<E>,
}

/// A bounded complex of finitely presented modules. Differentials act on
/// generators and must carry relations into relations.
#[derive(Clone, Debug, PartialEq)]
pub struct FPComplex<R: Ring> {
    ring: R,
    lo: i64,
    modules: Vec<FPModule<R::Elem>>,
    diffs: Vec<Matrix<R::Elem>>,
}

impl<R: EuclideanRing> FPComplex<R> {
    pub fn new(
        ring: R,
        lo: i64,
        modules: Vec<FPModule<R::Elem>>,
        diffs: Vec<Matrix<R::Elem>>,
    ) -> Result<Self> {
        if modules.is_empty() || diffs.len() + 1 != modules.len() {
            return Err(Error::ShapeMismatch("presented complex degree range".into()));
        }
        for (j, m) in modules.iter().enumerate() {
            if m.rels.rows() != m.gens {
                return Err(Error::ShapeMismatch(format!("relations in degree {}", lo + j as i64)));
            }
        }
        for (j, d) in diffs.iter().enumerate() {
            if d.shape() != (modules[j + 1].gens, modules[j].gens) {
                return Err(Error::ShapeMismatch(format!("differential in degree {}", lo + j as i64)));
            }
        }
        let c = FPComplex {
            ring,
            lo,
            modules,
            diffs,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.modules.len() as i64 - 1
    }

    pub fn gens(&self, i: i64) -> usize {
        self.module_at(i).map_or(0, |m| m.gens)
    }

    fn module_at(&self, i: i64) -> Option<&FPModule<R::Elem>> {
        (i >= self.lo && i <= self.hi()).then(|| &self.modules[(i - self.lo) as usize])
    }

    pub fn rels(&self, i: i64) -> Matrix<R::Elem> {
        match self.module_at(i) {
            Some(m) => m.rels.clone(),
            None => Matrix::zeros(&self.ring, 0, 0),
        }
    }

    /// The module in degree `i` up to isomorphism.
    pub fn term(&self, i: i64) -> FGModule<R::Elem> {
        self.module_at(i)
            .map_or_else(FGModule::zero, |m| m.module(&self.ring))
    }

    pub fn d(&self, i: i64) -> Matrix<R::Elem> {
        if i >= self.lo && i < self.hi() {
            self.diffs[(i - self.lo) as usize].clone()
        } else {
            Matrix::zeros(&self.ring, self.gens(i + 1), self.gens(i))
        }
    }

    pub fn validate(&self) -> Result<()> {
        let r = &self.ring;
        for i in self.lo..self.hi() {
            let moved = Matrix::mul(r, &self.d(i), &self.rels(i));
            if solve(r, &self.rels(i + 1), &moved).is_none() {
                return Err(Error::Invariant(format!(
                    "differential in degree {i} does not respect relations"
                )));
            }
            let dd = Matrix::mul(r, &self.d(i + 1), &self.d(i));
            if solve(r, &self.rels(i + 2), &dd).is_none() {
                let column = dd.first_nonzero(r).map_or(0, |(_, c)| c);
                return Err(Error::DifferentialSquareNonzero { degree: i, column });
            }
        }
        Ok(())
    }

    pub fn cohomology_presentation(&self, i: i64) -> Result<CohomologyPresentation<R::Elem>> {
        CohomologyPresentation::new(
            &self.ring,
            self.gens(i),
            &self.d(i - 1),
            &self.rels(i),
            &self.d(i),
            &self.rels(i + 1),
        )
    }

    pub fn cohomology(&self, i: i64) -> FGModule<R::Elem> {
        self.cohomology_presentation(i)
            .expect("validated presented complex")
            .module()
            .clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Integers;
    use num_bigint::BigInt;

    fn zi(p: u64) -> Integers {
        Integers::new(p).unwrap()
    }

    fn one_by_one(r: &Integers, x: i64) -> Complex<Integers> {
        Complex::new_valid(r.clone(), 0, vec![1, 1], vec![Matrix::scalar(r, 1, &r.from_i64(x))])
            .unwrap()
    }

    #[test]
    fn validate_rejects_nonzero_square() {
        let r = zi(2);
        let one = Matrix::identity(&r, 1);
        let k = Complex::new(r, 0, vec![1, 1, 1], vec![one.clone(), one]).unwrap();
        assert_eq!(
            k.validate(),
            Err(Error::DifferentialSquareNonzero { degree: 0, column: 0 })
        );
    }

    #[test]
    fn cohomology_of_multiplication_by_p() {
        let r = zi(5);
        let k = one_by_one(&r, 5);
        assert!(k.cohomology(0).is_zero());
        assert_eq!(k.cohomology(1).invariant_factors, vec![BigInt::from(5)]);
        let shell = one_by_one(&r, 1);
        assert!(shell.cohomology(0).is_zero() && shell.cohomology(1).is_zero());
        let z = Complex::zero_differentials(r, 0, vec![2, 3]);
        assert_eq!(z.cohomology(0), FGModule::free(2));
        assert_eq!(z.cohomology(1), FGModule::free(3));
    }

    #[test]
    fn truncations() {
        let r = zi(3);
        let k = one_by_one(&r, 3);
        let (t, incl) = k.truncate_leq(0);
        assert!(t.is_zero_complex());
        incl.validate().unwrap();
        let (t, _) = k.truncate_leq(5);
        assert_eq!(t, k);
        let (h, incl) = k.hodge_filtration(1);
        assert_eq!(h.ranks(), &[0, 1]);
        incl.validate().unwrap();
        assert!(k.hodge_filtration(2).0.is_zero_complex());
    }

    #[test]
    fn cone_of_multiplication_by_xi() {
        let r = zi(3);
        let k = Complex::zero_differentials(r.clone(), 0, vec![1, 1]);
        let f = ChainMap::scalar(&k, &r.from_i64(3));
        f.validate().unwrap();
        let c = Complex::cone(&f);
        c.validate().unwrap();
        let z3 = FGModule {
            free_rank: 0,
            invariant_factors: vec![BigInt::from(3)],
        };
        assert_eq!(c.cohomology(0), z3);
        assert_eq!(c.cohomology(1), z3);
        assert!(c.cohomology(-1).is_zero());
        let id = Complex::cone(&ChainMap::identity(&k));
        assert!((id.lo()..=id.hi()).all(|i| id.cohomology(i).is_zero()));
    }

    #[test]
    fn induced_maps() {
        let r = zi(3);
        let k = Complex::zero_differentials(r.clone(), 0, vec![1]);
        let f = ChainMap::scalar(&k, &r.from_i64(3));
        let h = f.induced_map(0).unwrap();
        assert_eq!(h.matrix, Matrix::scalar(&r, 1, &r.from_i64(3)));
        let id = ChainMap::identity(&one_by_one(&r, 9)).induced_map(1).unwrap();
        assert_eq!(id.matrix, Matrix::identity(&r, 1));
    }

    #[test]
    fn reduction_mod_xi() {
        let r = zi(3);
        let kb = one_by_one(&r, 3).reduce_mod_xi();
        assert_eq!(kb.betti(0), 1);
        assert_eq!(kb.betti(1), 1);
    }
}
