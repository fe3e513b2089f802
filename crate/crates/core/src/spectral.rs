//! Spectral sequences of filtered complexes over the residue field, the
//! truncation and Hodge filtrations on global sections, and degeneration.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::field::{field_rank, Subquotient, Subspace};
use crate::matrix::Matrix;
use crate::ring::{CoeffRing, Field, Ring};
use crate::site::{global_map, global_sections, sheaf_bockstein, sheaf_reduce, SheafComplex};

/// A complex with a decreasing filtration `F^p`, full for `p <= p_lo` and
/// zero for `p > p_hi`.
#[derive(Clone, Debug)]
pub struct FilteredComplex<F: Field> {
    pub ambient: Complex<F>,
    p_lo: i64,
    p_hi: i64,
    /// `levels[p - p_lo][n - lo]`
    levels: Vec<Vec<Subspace<F::Elem>>>,
}

impl<F: Field> FilteredComplex<F> {
    /// `gens(p, n)` spans `F^p` in degree `n`, for `p_lo <= p <= p_hi`.
    pub fn new(
        ambient: Complex<F>,
        p_lo: i64,
        p_hi: i64,
        gens: impl Fn(i64, i64) -> Matrix<F::Elem>,
    ) -> Result<Self> {
        let f = ambient.ring().clone();
        let levels: Vec<Vec<Subspace<F::Elem>>> = (p_lo..=p_hi)
            .map(|p| {
                (ambient.lo()..=ambient.hi())
                    .map(|n| Subspace::span(&f, &gens(p, n)))
                    .collect()
            })
            .collect();
        let this = FilteredComplex {
            ambient,
            p_lo,
            p_hi,
            levels,
        };
        this.validate()?;
        Ok(this)
    }

    /// From an increasing filtration `G_m`, `g_lo <= m <= g_hi`, via
    /// `F^p = G_{-p}`.
    pub fn from_increasing(
        ambient: Complex<F>,
        g_lo: i64,
        g_hi: i64,
        gens: impl Fn(i64, i64) -> Matrix<F::Elem>,
    ) -> Result<Self> {
        Self::new(ambient, -g_hi, -g_lo, |p, n| gens(-p, n))
    }

    pub fn p_lo(&self) -> i64 {
        self.p_lo
    }

    pub fn p_hi(&self) -> i64 {
        self.p_hi
    }

    pub fn level(&self, p: i64, n: i64) -> Subspace<F::Elem> {
        let f = self.ambient.ring();
        let dim = self.ambient.rank(n);
        if n < self.ambient.lo() || n > self.ambient.hi() || p > self.p_hi {
            Subspace::zero(f, dim)
        } else if p < self.p_lo {
            Subspace::full(f, dim)
        } else {
            self.levels[(p - self.p_lo) as usize][(n - self.ambient.lo()) as usize].clone()
        }
    }

    /// Decreasing, stable under `d`, full at `p_lo`.
    pub fn validate(&self) -> Result<()> {
        let f = self.ambient.ring();
        for n in self.ambient.lo()..=self.ambient.hi() {
            if self.level(self.p_lo, n) != Subspace::full(f, self.ambient.rank(n)) {
                return Err(Error::Invariant(format!("filtration not exhaustive in degree {n}")));
            }
            for p in self.p_lo..=self.p_hi {
                if !self.level(p - 1, n).contains(f, &self.level(p, n)) {
                    return Err(Error::Invariant(format!("filtration not decreasing at p = {p}")));
                }
                let img = self.level(p, n).image(f, &self.ambient.d(n));
                if !self.level(p, n + 1).contains(f, &img) {
                    return Err(Error::Invariant(format!("F^{p} not a subcomplex in degree {n}")));
                }
            }
        }
        Ok(())
    }

    /// `Z_r^{p,n} = F^p ∩ d^{-1}(F^{p+r})`; `Z_{-1}^p = F^p`.
    fn z(&self, r: i64, p: i64, n: i64) -> Subspace<F::Elem> {
        let f = self.ambient.ring();
        if r < 0 {
            return self.level(p, n);
        }
        self.level(p, n)
            .preimage_within(f, &self.ambient.d(n), &self.level(p + r, n + 1))
    }

    /// `E_r^{p}` in total degree `n`.
    fn e(&self, r: i64, p: i64, n: i64) -> Subquotient<F::Elem> {
        let f = self.ambient.ring();
        let num = self.z(r, p, n);
        let b1 = self.z(r - 1, p + 1, n);
        let b2 = self.z(r - 1, p - r + 1, n - 1).image(f, &self.ambient.d(n - 1));
        let den = b1.sum(f, &b2);
        Subquotient::new(f, &num.basis(), &den.basis())
    }

    /// Image of `H^n(F^p) -> H^n(ambient)`, in the ambient cohomology basis.
    pub fn abutment_level(&self, p: i64, n: i64) -> Subspace<F::Elem> {
        let f = self.ambient.ring();
        let h = self.ambient.field_cohomology(n);
        let cyc = self.level(p, n)
            .preimage_within(f, &self.ambient.d(n), &Subspace::zero(f, self.ambient.rank(n + 1)));
        let coords = h.coords_matrix(f, &cyc.basis()).expect("cocycles");
        Subspace::span(f, &coords)
    }

    /// Pages `E_0, ..., E_{r_max}`.
    pub fn pages(&self, r_max: usize) -> Vec<Page<F::Elem>> {
        (0..=r_max as i64).map(|r| self.page(r)).collect()
    }

    pub fn page(&self, r: i64) -> Page<F::Elem> {
        let f = self.ambient.ring();
        let (lo, hi) = (self.ambient.lo(), self.ambient.hi());
        let mut spaces = BTreeMap::new();
        for p in self.p_lo..=self.p_hi {
            for n in lo..=hi {
                spaces.insert((p, n), self.e(r, p, n));
            }
        }
        let mut diffs = BTreeMap::new();
        for (&(p, n), src) in &spaces {
            let tgt = spaces.get(&(p + r, n + 1));
            let rows = tgt.map_or(0, |t| t.dim());
            let m = match tgt {
                Some(t) if src.dim() > 0 && rows > 0 => {
                    let img = Matrix::mul(f, &self.ambient.d(n), src.reps());
                    t.coords_matrix(f, &img).expect("d_r lands in Z_r")
                }
                _ => Matrix::zeros(f, rows, src.dim()),
            };
            diffs.insert((p, n), m);
        }
        Page {
            r: r as usize,
            spaces,
            diffs,
        }
    }

    /// Index after which every page equals `E_infinity`.
    pub fn stable_page(&self) -> usize {
        (self.p_hi - self.p_lo + 2).max(1) as usize
    }
}

/// One page: `E_r^{p}` in total degree `n`, with `d_r : (p, n) -> (p + r, n + 1)`.
#[derive(Clone, Debug)]
pub struct Page<E> {
    pub r: usize,
    pub spaces: BTreeMap<(i64, i64), Subquotient<E>>,
    pub diffs: BTreeMap<(i64, i64), Matrix<E>>,
}

impl<E: Clone + PartialEq> Page<E> {
    pub fn dim(&self, p: i64, n: i64) -> usize {
        self.spaces.get(&(p, n)).map_or(0, |s| s.dim())
    }

    pub fn differential(&self, p: i64, n: i64) -> Option<&Matrix<E>> {
        self.diffs.get(&(p, n))
    }

    /// First `(p, n)` with a nonzero differential.
    pub fn first_nonzero<F: Field<Elem = E>>(&self, f: &F) -> Option<(i64, i64)> {
        self.diffs
            .iter()
            .find(|(_, m)| !m.is_zero(f))
            .map(|(&k, _)| k)
    }

    /// `d_r o d_r = 0` everywhere.
    pub fn squares_to_zero<F: Field<Elem = E>>(&self, f: &F) -> bool {
        self.diffs.iter().all(|(&(p, n), m)| match self.diffs.get(&(p + self.r as i64, n + 1)) {
            Some(m2) if m2.cols() == m.rows() => Matrix::mul(f, m2, m).is_zero(f),
            _ => true,
        })
    }

    /// Dimension of the homology of `d_r` at `(p, n)`.
    pub fn homology_dim<F: Field<Elem = E>>(&self, f: &F, p: i64, n: i64) -> usize {
        let r = self.r as i64;
        let out = self.diffs.get(&(p, n)).map_or(0, |m| field_rank(f, m));
        let inc = self.diffs.get(&(p - r, n - 1)).map_or(0, |m| field_rank(f, m));
        self.dim(p, n) - out - inc
    }

    /// Serializable form with `q = n - p`.
    pub fn to_json<F: Field<Elem = E>>(&self, f: &F) -> SSPage {
        SSPage {
            r: self.r,
            entries: self
                .spaces
                .iter()
                .map(|(&(p, n), s)| PageEntry { p, q: n - p, dim: s.dim() })
                .collect(),
            differentials: self
                .diffs
                .iter()
                .filter(|(_, m)| m.rows() > 0 && m.cols() > 0)
                .map(|(&(p, n), m)| PageDifferential {
                    from: [p, n - p],
                    to: [p + self.r as i64, n + 1 - p - self.r as i64],
                    matrix: m.format(f),
                    zero: m.is_zero(f),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PageEntry {
    pub p: i64,
    pub q: i64,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PageDifferential {
    pub from: [i64; 2],
    pub to: [i64; 2],
    pub matrix: Vec<Vec<String>>,
    pub zero: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SSPage {
    pub r: usize,
    pub entries: Vec<PageEntry>,
    pub differentials: Vec<PageDifferential>,
}

/// Page consistency and the abutment: `E_{r+1}` is the homology of
/// `(E_r, d_r)`, and `E_infinity` has the graded dims of the induced
/// filtration on cohomology.
pub fn verify_pages<F: Field>(fc: &FilteredComplex<F>) -> std::result::Result<(), String> {
    let f = fc.ambient.ring();
    let last = fc.stable_page();
    let pages = fc.pages(last + 1);
    for w in pages.windows(2) {
        if !w[0].squares_to_zero(f) {
            return Err(format!("d_{} does not square to zero", w[0].r));
        }
        for &(p, n) in w[0].spaces.keys() {
            if w[1].dim(p, n) != w[0].homology_dim(f, p, n) {
                return Err(format!("E_{} at (p, n) = ({p}, {n}) is not the homology of E_{}", w[1].r, w[0].r));
            }
        }
    }
    let inf = &pages[last];
    for n in fc.ambient.lo()..=fc.ambient.hi() {
        for p in fc.p_lo()..=fc.p_hi() {
            let graded = fc.abutment_level(p, n).dim() - fc.abutment_level(p + 1, n).dim();
            if graded != inf.dim(p, n) {
                return Err(format!("E_infinity at (p, n) = ({p}, {n}) misses the abutment"));
            }
        }
    }
    Ok(())
}

/// First total degree where `H^i(RΓ K)` has `xi`-torsion, if any.
pub fn h1_witness<R: CoeffRing>(k: &SheafComplex<R>) -> Option<i64> {
    let g = global_sections(k);
    (g.lo()..=g.hi()).find(|&i| !g.cohomology(i).is_xi_torsion_free(k.ring()))
}

/// The truncation filtration `tau_{<= m}` on `RΓ(S, K/xi)`, as a
/// decreasing filtration with `p = -m`.
pub fn tau_filtration<R: CoeffRing>(k: &SheafComplex<R>) -> Result<FilteredComplex<R::Residue>> {
    let kb = sheaf_reduce(k);
    let ambient = global_sections(&kb);
    let (lo, hi) = (kb.lo(), kb.hi());
    let incl = (lo..=hi)
        .map(|m| Ok(global_map(&kb.truncate_leq(m)?.1)))
        .collect::<Result<Vec<_>>>()?;
    FilteredComplex::from_increasing(ambient, lo, hi, |m, n| incl[(m - lo) as usize].at(n))
}

/// The Hodge filtration `sigma_{>= p}` on `RΓ` of the objectwise
/// Bockstein complex.
pub fn hodge_filtration<R: CoeffRing>(k: &SheafComplex<R>) -> Result<FilteredComplex<R::Residue>> {
    let b = sheaf_bockstein(k)?;
    let ambient = global_sections(&b);
    let (lo, hi) = (b.lo(), b.hi());
    let incl = (lo..=hi)
        .map(|p| Ok(global_map(&b.hodge(p)?.1)))
        .collect::<Result<Vec<_>>>()?;
    FilteredComplex::new(ambient, lo, hi, |p, n| incl[(p - lo) as usize].at(n))
}

/// A page in Hodge–Tate indexing: `E_r^{a,b}` with `a` the sheaf-cohomology
/// degree and `b` the degree of the cohomology sheaf.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HtPage {
    pub r: usize,
    pub entries: Vec<PageEntry>,
    pub differentials: Vec<PageDifferential>,
}

/// Hodge–Tate pages `E_2, ..., E_{r_max}` from the truncation filtration.
/// Filtration page `r` is Hodge–Tate page `r + 1`, with
/// `(a, b) = (n + p, -p)`.
pub fn ht_pages<R: CoeffRing>(k: &SheafComplex<R>, r_max: usize) -> Result<Vec<HtPage>> {
    let fc = tau_filtration(k)?;
    let f = fc.ambient.ring().clone();
    let to_ht = |p: i64, n: i64| [n + p, -p];
    Ok((1..r_max.max(2) as i64)
        .map(|r| {
            let page = fc.page(r);
            HtPage {
                r: r as usize + 1,
                entries: page
                    .spaces
                    .iter()
                    .map(|(&(p, n), s)| {
                        let [a, b] = to_ht(p, n);
                        PageEntry { p: a, q: b, dim: s.dim() }
                    })
                    .collect(),
                differentials: page
                    .diffs
                    .iter()
                    .filter(|(_, m)| m.rows() > 0 && m.cols() > 0)
                    .map(|(&(p, n), m)| PageDifferential {
                        from: to_ht(p, n),
                        to: to_ht(p + r, n + 1),
                        matrix: m.format(&f),
                        zero: m.is_zero(&f),
                    })
                    .collect(),
            }
        })
        .collect())
}

/// `dim H^a(S, H^b(K/xi))` computed directly from the cohomology sheaves.
pub fn ht_e2_direct<R: CoeffRing>(k: &SheafComplex<R>) -> Result<BTreeMap<(i64, i64), usize>> {
    let kb = sheaf_reduce(k);
    let mut out = BTreeMap::new();
    let top = kb.hi() + kb.site().height() as i64;
    for b in kb.lo()..=kb.hi() {
        let g = global_sections(&kb.cohomology_sheaf(b)?);
        for a in 0..=top - b {
            out.insert((a, b), g.betti(a + b));
        }
    }
    Ok(out)
}

/// Outcome of a degeneration test, with the first failure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Degeneration {
    pub degenerates: bool,
    pub witness: Option<[i64; 2]>,
}

/// Hodge–Tate degeneration: every `H^i(RΓ tau_{<= m}) -> H^i(RΓ)` is
/// injective. The witness is `(i, m)`. Cross-checked against the pages.
pub fn degeneration_check_ht<R: CoeffRing>(k: &SheafComplex<R>) -> Result<Degeneration> {
    let kb = sheaf_reduce(k);
    let mut witness = None;
    'outer: for m in kb.lo()..=kb.hi() {
        let g = global_map(&kb.truncate_leq(m)?.1);
        for i in g.source.lo()..=g.source.hi() {
            let h = g.field_induced(i);
            if field_rank(g.source.ring(), &h) != h.cols() {
                witness = Some([i, m]);
                break 'outer;
            }
        }
    }
    let fc = tau_filtration(k)?;
    let f = fc.ambient.ring().clone();
    let pages_zero = (1..=fc.stable_page() as i64).all(|r| fc.page(r).first_nonzero(&f).is_none());
    if pages_zero != witness.is_none() {
        return Err(Error::Invariant(
            "truncation injectivity disagrees with vanishing of the Hodge-Tate differentials".into(),
        ));
    }
    Ok(Degeneration {
        degenerates: witness.is_none(),
        witness,
    })
}

/// Hodge–de Rham degeneration: every `d_r`, `r >= 1`, of the Hodge
/// filtration vanishes. The witness is `(p, q)` on the first bad page.
pub fn degeneration_check_hdr<R: CoeffRing>(k: &SheafComplex<R>) -> Result<Degeneration> {
    let fc = hodge_filtration(k)?;
    let f = fc.ambient.ring().clone();
    for r in 1..=fc.stable_page() as i64 {
        if let Some((p, n)) = fc.page(r).first_nonzero(&f) {
            return Ok(Degeneration {
                degenerates: false,
                witness: Some([p, n - p]),
            });
        }
    }
    Ok(Degeneration {
        degenerates: true,
        witness: None,
    })
}

/// The two cokernels inside `H^i(RΓ(S, Ω^m[-m]))`, where `Ω^m` is the
/// degree-`m` term of the objectwise Bockstein complex.
///
/// `coker_f` is the image of `H^i(RΓ tau_{<= m}(K/xi))` and `coker_g` the
/// image of `H^i(RΓ sigma_{>= m} H^•(K/xi))`.
#[derive(Clone, Debug)]
pub struct DegenerationComparison<E> {
    pub i: i64,
    pub m: i64,
    pub ambient_dim: usize,
    pub coker_f: Subspace<E>,
    pub coker_g: Subspace<E>,
    pub equal: bool,
    pub h1: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegenerationComparisonJson {
    pub i: i64,
    pub m: i64,
    pub ambient_dim: usize,
    pub coker_f: Vec<Vec<String>>,
    pub coker_g: Vec<Vec<String>>,
    pub equal: bool,
    pub h1: bool,
}

impl<E: Clone + PartialEq> DegenerationComparison<E> {
    /// Equality is only claimed under H1.
    pub fn assert(&self) -> Result<()> {
        if !self.h1 {
            return Err(Error::HypothesisH1Failed(self.i));
        }
        if !self.equal {
            return Err(Error::Invariant(format!(
                "cokernels differ at (i, m) = ({}, {})",
                self.i, self.m
            )));
        }
        Ok(())
    }

    pub fn to_json<F: Field<Elem = E>>(&self, f: &F) -> DegenerationComparisonJson {
        DegenerationComparisonJson {
            i: self.i,
            m: self.m,
            ambient_dim: self.ambient_dim,
            coker_f: self.coker_f.normal_form().format(f),
            coker_g: self.coker_g.normal_form().format(f),
            equal: self.equal,
            h1: self.h1,
        }
    }
}

pub fn compare_degeneration<R: CoeffRing>(
    k: &SheafComplex<R>,
    i: i64,
    m: i64,
) -> Result<DegenerationComparison<<R::Residue as Ring>::Elem>> {
    let kb = sheaf_reduce(k);
    let f = kb.ring().clone();
    let to_coh = kb.truncation_to_cohomology(m)?;
    let bock = sheaf_bockstein(k)?;
    let to_graded = bock.hodge_to_graded(m)?;
    if to_graded.target != to_coh.target {
        return Err(Error::Invariant(format!(
            "degree-{m} Bockstein term differs from the cohomology sheaf"
        )));
    }
    let a = global_map(&to_coh).field_induced(i);
    let b = global_map(&to_graded).field_induced(i);
    let coker_f = Subspace::span(&f, &a);
    let coker_g = Subspace::span(&f, &b);
    Ok(DegenerationComparison {
        i,
        m,
        ambient_dim: a.rows(),
        equal: coker_f == coker_g,
        coker_f,
        coker_g,
        h1: h1_witness(k).is_none(),
    })
}
