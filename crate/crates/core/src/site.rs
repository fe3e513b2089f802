//! Finite posets as sites, sheaves of free complexes on them, and derived
//! global sections via the complex of increasing chains.

use std::collections::{BTreeMap, HashMap};

use crate::bockstein::BocksteinComplex;
use crate::complex::{sign, ChainMap, Complex};
use crate::decalage::{eta_m, Embedding};
use crate::error::{Error, Result};
use crate::matrix::{residue_reduce, Matrix};
use crate::ring::{CoeffRing, EuclideanRing, Field, Ring};
use crate::snf::solve;

/// Largest poset accepted unless a larger cap is asked for.
pub const DEFAULT_MAX_POSET: usize = 8;

/// A finite partially ordered set; `leq[x][y]` is the closed relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosetSite {
    elements: Vec<String>,
    leq: Vec<Vec<bool>>,
}

impl PosetSite {
    /// Closes `relations` reflexively and transitively, then checks
    /// antisymmetry.
    pub fn new(elements: Vec<String>, relations: &[(String, String)]) -> Result<Self> {
        Self::with_cap(elements, relations, DEFAULT_MAX_POSET)
    }

    pub fn with_cap(elements: Vec<String>, relations: &[(String, String)], cap: usize) -> Result<Self> {
        let n = elements.len();
        if n == 0 {
            return Err(Error::InvalidPoset("no elements".into()));
        }
        if n > cap {
            return Err(Error::InvalidPoset(format!("{n} elements exceeds the cap of {cap}")));
        }
        let mut seen = HashMap::new();
        for (i, e) in elements.iter().enumerate() {
            if seen.insert(e.clone(), i).is_some() {
                return Err(Error::InvalidPoset(format!("duplicate element {e}")));
            }
        }
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for (a, b) in relations {
            let look = |s: &String| {
                seen.get(s)
                    .copied()
                    .ok_or_else(|| Error::InvalidPoset(format!("unknown element {s}")))
            };
            leq[look(a)?][look(b)?] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if leq[i][j] && leq[j][i] {
                    return Err(Error::InvalidPoset(format!(
                        "{} and {} are distinct but comparable both ways",
                        elements[i], elements[j]
                    )));
                }
            }
        }
        Ok(PosetSite { elements, leq })
    }

    fn from_strs(elements: &[&str], relations: &[(&str, &str)]) -> Self {
        let rel: Vec<(String, String)> = relations
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        Self::new(elements.iter().map(|s| s.to_string()).collect(), &rel).expect("builtin poset")
    }

    pub fn point() -> Self {
        Self::from_strs(&["pt"], &[])
    }

    /// `a, b < c, d`: the order complex is a circle.
    pub fn pseudo_circle() -> Self {
        Self::from_strs(
            &["a", "b", "c", "d"],
            &[("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")],
        )
    }

    /// `x0 < x1 < x2`.
    pub fn chain3() -> Self {
        Self::from_strs(&["x0", "x1", "x2"], &[("x0", "x1"), ("x1", "x2")])
    }

    /// Suspension of the pseudo-circle: the order complex is a 2-sphere.
    pub fn pseudo_sphere() -> Self {
        Self::from_strs(
            &["a", "b", "c", "d", "e", "f"],
            &[
                ("a", "c"),
                ("a", "d"),
                ("b", "c"),
                ("b", "d"),
                ("c", "e"),
                ("c", "f"),
                ("d", "e"),
                ("d", "f"),
            ],
        )
    }

    /// `point`, `pseudo-circle`, `chain3` or `pseudo-sphere`.
    pub fn builtin(name: &str) -> Result<Self> {
        match name {
            "point" => Ok(Self::point()),
            "pseudo-circle" => Ok(Self::pseudo_circle()),
            "chain3" => Ok(Self::chain3()),
            "pseudo-sphere" => Ok(Self::pseudo_sphere()),
            _ => Err(Error::InvalidPoset(format!("unknown builtin poset {name}"))),
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn name(&self, x: usize) -> &str {
        &self.elements[x]
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == name)
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x][y]
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq[x][y]
    }

    /// All pairs `x < y`, lexicographic.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .filter(|&(x, y)| self.lt(x, y))
            .collect()
    }

    /// Strictly increasing chains `x_0 < ... < x_n`, by length and then
    /// lexicographically.
    pub fn chains(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut out: Vec<Vec<usize>> = (0..n).map(|x| vec![x]).collect();
        let mut layer = out.clone();
        while !layer.is_empty() {
            let next: Vec<Vec<usize>> = layer
                .iter()
                .flat_map(|c| {
                    let top = *c.last().unwrap();
                    (0..n).filter(move |&y| self.lt(top, y)).map(move |y| {
                        let mut c2 = c.clone();
                        c2.push(y);
                        c2
                    })
                })
                .collect();
            out.extend(next.iter().cloned());
            layer = next;
        }
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    /// Length of the longest chain minus one.
    pub fn height(&self) -> usize {
        self.chains().iter().map(|c| c.len() - 1).max().unwrap_or(0)
    }
}

/// Restriction matrices for `x < y`, one per degree from `lo` to `hi`.
pub type Restrictions<E> = BTreeMap<(usize, usize), Vec<Matrix<E>>>;

/// A complex of free modules at each point with restrictions
/// `K(x) -> K(y)` for `x <= y`. Every stalk lives on the same degree range.
#[derive(Clone, Debug, PartialEq)]
pub struct SheafComplex<R: Ring> {
    site: PosetSite,
    stalks: Vec<Complex<R>>,
    res: Restrictions<R::Elem>,
}

impl<R: Ring> SheafComplex<R> {
    /// Widens stalks to a common range, then validates stalks,
    /// restrictions and functoriality.
    pub fn new(site: PosetSite, stalks: Vec<Complex<R>>, res: Restrictions<R::Elem>) -> Result<Self> {
        let this = Self::new_unchecked(site, stalks, res)?;
        this.validate()?;
        Ok(this)
    }

    /// Widens and shape-checks only.
    pub fn new_unchecked(
        site: PosetSite,
        stalks: Vec<Complex<R>>,
        res: Restrictions<R::Elem>,
    ) -> Result<Self> {
        if stalks.len() != site.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} stalks for {} points",
                stalks.len(),
                site.len()
            )));
        }
        let lo = stalks.iter().map(|k| k.lo()).min().unwrap();
        let hi = stalks.iter().map(|k| k.hi()).max().unwrap();
        let stalks: Vec<Complex<R>> = stalks.iter().map(|k| k.widen(lo, hi)).collect();
        for &(x, y) in res.keys() {
            if x >= site.len() || y >= site.len() || !site.lt(x, y) {
                return Err(Error::InvalidSheaf {
                    from: x.to_string(),
                    to: y.to_string(),
                    reason: "restriction given for a pair that is not x < y".into(),
                });
            }
        }
        let this = SheafComplex { site, stalks, res };
        for (x, y) in this.site.strict_pairs() {
            let maps = this.res.get(&(x, y)).ok_or_else(|| this.bad(x, y, "missing restriction"))?;
            if maps.len() as i64 != hi - lo + 1 {
                return Err(this.bad(x, y, "wrong number of degrees"));
            }
            for (j, m) in maps.iter().enumerate() {
                let i = lo + j as i64;
                if m.shape() != (this.stalks[y].rank(i), this.stalks[x].rank(i)) {
                    return Err(this.bad(x, y, &format!("restriction in degree {i} has the wrong shape")));
                }
            }
        }
        Ok(this)
    }

    fn bad(&self, x: usize, y: usize, reason: &str) -> Error {
        Error::InvalidSheaf {
            from: self.site.name(x).to_string(),
            to: self.site.name(y).to_string(),
            reason: reason.to_string(),
        }
    }

    /// The same complex at every point, identity restrictions.
    pub fn constant(site: PosetSite, k: &Complex<R>) -> Self {
        let res = site
            .strict_pairs()
            .into_iter()
            .map(|p| {
                let maps = (k.lo()..=k.hi()).map(|i| Matrix::identity(k.ring(), k.rank(i))).collect();
                (p, maps)
            })
            .collect();
        let stalks = vec![k.clone(); site.len()];
        SheafComplex { site, stalks, res }
    }

    /// Stalks `d o d = 0`, restrictions are chain maps, and
    /// `res(y,z) res(x,y) = res(x,z)`.
    pub fn validate(&self) -> Result<()> {
        let r = self.ring();
        for (x, k) in self.stalks.iter().enumerate() {
            k.validate().map_err(|e| self.bad(x, x, &e.to_string()))?;
        }
        for (x, y) in self.site.strict_pairs() {
            for i in self.lo()..self.hi() {
                let lhs = Matrix::mul(r, &self.res_at(x, y, i + 1), &self.stalks[x].d(i));
                let rhs = Matrix::mul(r, &self.stalks[y].d(i), &self.res_at(x, y, i));
                if lhs != rhs {
                    return Err(self.bad(x, y, &format!("restriction does not commute with d in degree {i}")));
                }
            }
        }
        for (x, y) in self.site.strict_pairs() {
            for z in 0..self.site.len() {
                if !self.site.lt(y, z) {
                    continue;
                }
                for i in self.lo()..=self.hi() {
                    let comp = Matrix::mul(r, &self.res_at(y, z, i), &self.res_at(x, y, i));
                    if comp != self.res_at(x, z, i) {
                        return Err(self.bad(
                            x,
                            z,
                            &format!("not the composite through {} in degree {i}", self.site.name(y)),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn site(&self) -> &PosetSite {
        &self.site
    }

    pub fn ring(&self) -> &R {
        self.stalks[0].ring()
    }

    pub fn lo(&self) -> i64 {
        self.stalks[0].lo()
    }

    pub fn hi(&self) -> i64 {
        self.stalks[0].hi()
    }

    pub fn stalk(&self, x: usize) -> &Complex<R> {
        &self.stalks[x]
    }

    pub fn stalks(&self) -> &[Complex<R>] {
        &self.stalks
    }

    pub fn restrictions(&self) -> &Restrictions<R::Elem> {
        &self.res
    }

    /// Restriction `K(x)^i -> K(y)^i` for `x <= y`.
    pub fn res_at(&self, x: usize, y: usize, i: i64) -> Matrix<R::Elem> {
        if x == y {
            return Matrix::identity(self.ring(), self.stalks[x].rank(i));
        }
        match self.res.get(&(x, y)) {
            Some(maps) if i >= self.lo() && i <= self.hi() => maps[(i - self.lo()) as usize].clone(),
            _ => Matrix::zeros(self.ring(), self.stalks[y].rank(i), self.stalks[x].rank(i)),
        }
    }

    /// Restriction `K(x) -> K(y)` as a chain map.
    pub fn res(&self, x: usize, y: usize) -> ChainMap<R> {
        ChainMap::from_fn(&self.stalks[x], &self.stalks[y], |i| self.res_at(x, y, i))
    }

    /// New stalks from `stalk(x, K(x))` and restrictions from
    /// `restrict(x, y, i, res)`; the degree range is kept.
    pub fn map_objectwise<S: Ring>(
        &self,
        stalk: impl Fn(usize, &Complex<R>) -> Result<Complex<S>>,
        restrict: impl Fn(usize, usize, i64, &Matrix<R::Elem>) -> Result<Matrix<S::Elem>>,
    ) -> Result<SheafComplex<S>> {
        let stalks = self
            .stalks
            .iter()
            .enumerate()
            .map(|(x, k)| stalk(x, k))
            .collect::<Result<Vec<_>>>()?;
        let mut res = BTreeMap::new();
        for (x, y) in self.site.strict_pairs() {
            let maps = (self.lo()..=self.hi())
                .map(|i| restrict(x, y, i, &self.res_at(x, y, i)))
                .collect::<Result<Vec<_>>>()?;
            res.insert((x, y), maps);
        }
        SheafComplex::new_unchecked(self.site.clone(), stalks, res)
    }
}

/// A map of sheaf complexes: one chain map per point, natural in the
/// restrictions.
#[derive(Clone, Debug)]
pub struct SheafMap<R: Ring> {
    pub source: SheafComplex<R>,
    pub target: SheafComplex<R>,
    pub maps: Vec<ChainMap<R>>,
}

impl<R: Ring> SheafMap<R> {
    pub fn from_fn(
        source: &SheafComplex<R>,
        target: &SheafComplex<R>,
        f: impl Fn(usize, i64) -> Matrix<R::Elem>,
    ) -> Self {
        let maps = (0..source.site.len())
            .map(|x| ChainMap::from_fn(source.stalk(x), target.stalk(x), |i| f(x, i)))
            .collect();
        SheafMap {
            source: source.clone(),
            target: target.clone(),
            maps,
        }
    }

    pub fn identity(f: &SheafComplex<R>) -> Self {
        Self::from_fn(f, f, |x, i| Matrix::identity(f.ring(), f.stalk(x).rank(i)))
    }

    pub fn at(&self, x: usize, i: i64) -> Matrix<R::Elem> {
        self.maps[x].at(i)
    }

    /// Each component is a chain map and commutes with restrictions.
    pub fn validate(&self) -> Result<()> {
        let r = self.source.ring();
        for m in &self.maps {
            m.validate()?;
        }
        for (x, y) in self.source.site.strict_pairs() {
            for i in self.source.lo()..=self.source.hi() {
                let lhs = Matrix::mul(r, &self.at(y, i), &self.source.res_at(x, y, i));
                let rhs = Matrix::mul(r, &self.target.res_at(x, y, i), &self.at(x, i));
                if lhs != rhs {
                    return Err(Error::InvalidSheaf {
                        from: self.source.site.name(x).to_string(),
                        to: self.source.site.name(y).to_string(),
                        reason: format!("map not natural in degree {i}"),
                    });
                }
            }
        }
        Ok(())
    }

    /// `g o self`
    pub fn then(&self, g: &SheafMap<R>) -> SheafMap<R> {
        SheafMap {
            source: self.source.clone(),
            target: g.target.clone(),
            maps: self.maps.iter().zip(&g.maps).map(|(a, b)| a.then(b)).collect(),
        }
    }
}

/// Block layout of the total complex: blocks `(chain, internal degree)`.
#[derive(Clone, Debug)]
pub struct ChainLayout {
    pub chains: Vec<Vec<usize>>,
    lo: i64,
    hi: i64,
    index: HashMap<Vec<usize>, usize>,
}

impl ChainLayout {
    pub fn new(site: &PosetSite, lo: i64, hi: i64) -> Self {
        let chains = site.chains();
        let index = chains.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        ChainLayout {
            chains,
            lo,
            hi,
            index,
        }
    }

    pub fn total_lo(&self) -> i64 {
        self.lo
    }

    pub fn total_hi(&self) -> i64 {
        self.hi + self.chains.iter().map(|c| c.len() as i64 - 1).max().unwrap_or(0)
    }

    /// Blocks in total degree `t` as `(chain index, internal degree)`.
    pub fn blocks(&self, t: i64) -> Vec<(usize, i64)> {
        self.chains
            .iter()
            .enumerate()
            .filter_map(|(c, ch)| {
                let j = t - (ch.len() as i64 - 1);
                (j >= self.lo && j <= self.hi).then_some((c, j))
            })
            .collect()
    }

    /// Offsets of each block inside total degree `t`, given stalk ranks.
    pub fn offsets(&self, t: i64, rank: &dyn Fn(usize, i64) -> usize) -> (HashMap<(usize, i64), usize>, usize) {
        let mut off = HashMap::new();
        let mut n = 0;
        for (c, j) in self.blocks(t) {
            off.insert((c, j), n);
            n += rank(*self.chains[c].last().unwrap(), j);
        }
        (off, n)
    }
}

/// `RΓ(S, F)`: in total degree `t`, the product over chains
/// `x_0 < ... < x_n` of `F(x_n)^{t-n}`, with differential
/// `delta + (-1)^n d`.
pub fn global_sections<R: Ring>(f: &SheafComplex<R>) -> Complex<R> {
    let r = f.ring();
    let lay = ChainLayout::new(f.site(), f.lo(), f.hi());
    let rank = |x: usize, j: i64| f.stalk(x).rank(j);
    let (lo, hi) = (lay.total_lo(), lay.total_hi());
    let ranks: Vec<usize> = (lo..=hi).map(|t| lay.offsets(t, &rank).1).collect();
    let n_site = f.site().len();
    let mut diffs = Vec::new();
    for t in lo..hi {
        let (src_off, src_n) = lay.offsets(t, &rank);
        let (tgt_off, tgt_n) = lay.offsets(t + 1, &rank);
        let mut d = Matrix::zeros(r, tgt_n, src_n);
        for (c, j) in lay.blocks(t) {
            let chain = &lay.chains[c];
            let n = chain.len() as i64 - 1;
            let top = *chain.last().unwrap();
            let col = src_off[&(c, j)];
            if let Some(&row) = tgt_off.get(&(c, j + 1)) {
                let di = f.stalk(top).d(j);
                d.paste(row, col, &di.scale(r, &r.from_i64(sign(n))));
            }
            // cofaces: insert y at position pos, sign (-1)^pos
            for y in 0..n_site {
                if chain.contains(&y) {
                    continue;
                }
                let pos = chain.iter().filter(|&&z| f.site().lt(z, y)).count();
                let below_ok = chain[..pos].iter().all(|&z| f.site().lt(z, y));
                let above_ok = chain[pos..].iter().all(|&z| f.site().lt(y, z));
                if !below_ok || !above_ok {
                    continue;
                }
                let mut tau = chain.clone();
                tau.insert(pos, y);
                let Some(&tc) = lay.index.get(&tau) else { continue };
                let row = tgt_off[&(tc, j)];
                let s = r.from_i64(sign(pos as i64));
                let block = if pos == chain.len() {
                    f.res_at(top, y, j)
                } else {
                    Matrix::identity(r, rank(top, j))
                };
                let prev = d.block(row, col, block.rows(), block.cols());
                d.paste(row, col, &Matrix::add(r, &prev, &block.scale(r, &s)));
            }
        }
        diffs.push(d);
    }
    Complex::new(r.clone(), lo, ranks, diffs).expect("total complex shapes")
}

/// `RΓ` of a map of sheaf complexes over the same degree range: block
/// diagonal in the chain layout.
pub fn global_map<R: Ring>(phi: &SheafMap<R>) -> ChainMap<R> {
    let (s, t) = (&phi.source, &phi.target);
    let r = s.ring();
    let lo = s.lo().min(t.lo());
    let hi = s.hi().max(t.hi());
    let lay = ChainLayout::new(s.site(), lo, hi);
    let src = global_sections(s);
    let tgt = global_sections(t);
    let srank = |x: usize, j: i64| s.stalk(x).rank(j);
    let trank = |x: usize, j: i64| t.stalk(x).rank(j);
    ChainMap::from_fn(&src, &tgt, |d| {
        let (so, sn) = lay.offsets(d, &srank);
        let (to, tn) = lay.offsets(d, &trank);
        let mut m = Matrix::zeros(r, tn, sn);
        for (c, j) in lay.blocks(d) {
            let top = *lay.chains[c].last().unwrap();
            m.paste(to[&(c, j)], so[&(c, j)], &phi.at(top, j));
        }
        m
    })
}

impl<R: EuclideanRing> SheafComplex<R> {
    /// The subsheaf with stalk bases `basis(x, i)`; restrictions are
    /// re-expressed in those bases. Fails if a restriction leaves the
    /// subsheaf.
    pub fn subsheaf(
        &self,
        basis: &dyn Fn(usize, i64) -> Matrix<R::Elem>,
    ) -> Result<(SheafComplex<R>, SheafMap<R>)> {
        let r = self.ring();
        let sub = self.map_objectwise(
            |x, k| k.subcomplex_from_bases(&|i| basis(x, i)),
            |x, y, i, m| {
                let img = Matrix::mul(r, m, &basis(x, i));
                solve(r, &basis(y, i), &img).ok_or_else(|| Error::InvalidSheaf {
                    from: self.site.name(x).to_string(),
                    to: self.site.name(y).to_string(),
                    reason: format!("restriction leaves the subsheaf in degree {i}"),
                })
            },
        )?;
        let incl = SheafMap::from_fn(&sub, self, basis);
        Ok((sub, incl))
    }

    /// Objectwise `tau_{<= m}` with its inclusion.
    pub fn truncate_leq(&self, m: i64) -> Result<(SheafComplex<R>, SheafMap<R>)> {
        let incl: Vec<ChainMap<R>> = self.stalks.iter().map(|k| k.truncate_leq(m).1).collect();
        self.subsheaf(&|x, i| incl[x].at(i))
    }

    /// Objectwise brutal truncation `sigma_{>= m}` with its inclusion.
    pub fn hodge(&self, m: i64) -> Result<(SheafComplex<R>, SheafMap<R>)> {
        self.subsheaf(&|x, i| {
            let n = self.stalks[x].rank(i);
            if i >= m {
                Matrix::identity(self.ring(), n)
            } else {
                Matrix::zeros(self.ring(), n, 0)
            }
        })
    }
}

/// Objectwise `eta_m` together with the stalkwise embeddings.
#[derive(Clone, Debug)]
pub struct SheafEta<R: CoeffRing> {
    pub sheaf: SheafComplex<R>,
    pub iota: SheafMap<R>,
    pub stalks: Vec<Embedding<R>>,
    pub m: i64,
}

/// `(eta_m F)(x) = eta_m(F(x))` with induced restrictions.
pub fn sheaf_eta_m<R: CoeffRing>(f: &SheafComplex<R>, m: i64) -> Result<SheafEta<R>> {
    let stalks = f
        .stalks
        .iter()
        .map(|k| eta_m(k, m))
        .collect::<Result<Vec<_>>>()?;
    let (mut sheaf, iota) = f.subsheaf(&|x, i| stalks[x].basis(i))?;
    for k in sheaf.stalks.iter_mut() {
        *k = k.clone().with_twist(m);
    }
    Ok(SheafEta {
        sheaf,
        iota,
        stalks,
        m,
    })
}

/// The inclusion `eta_{m+1} F -> eta_m F` in the two bases.
pub fn sheaf_eta_inclusion<R: CoeffRing>(upper: &SheafEta<R>, lower: &SheafEta<R>) -> Result<SheafMap<R>> {
    let r = upper.sheaf.ring();
    let mut mats = Vec::new();
    for x in 0..upper.sheaf.site.len() {
        let per = (upper.sheaf.lo()..=upper.sheaf.hi())
            .map(|i| {
                solve(r, &lower.stalks[x].basis(i), &upper.stalks[x].basis(i)).ok_or_else(|| {
                    Error::Invariant(format!("eta_{} not inside eta_{} in degree {i}", upper.m, lower.m))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        mats.push(per);
    }
    let lo = upper.sheaf.lo();
    Ok(SheafMap::from_fn(&upper.sheaf, &lower.sheaf, |x, i| {
        mats[x][(i - lo) as usize].clone()
    }))
}

/// `F ⊗ k` objectwise.
pub fn sheaf_reduce<R: CoeffRing>(f: &SheafComplex<R>) -> SheafComplex<R::Residue> {
    let ring = f.ring().clone();
    f.map_objectwise(|_, k| Ok(k.reduce_mod_xi()), |_, _, _, m| Ok(residue_reduce(&ring, m)))
        .expect("reduction preserves shapes")
}

/// The objectwise Bockstein complex `x ↦ H^•(F(x)/xi)` with restrictions
/// induced on mod-`xi` cohomology.
pub fn sheaf_bockstein<R: CoeffRing>(f: &SheafComplex<R>) -> Result<SheafComplex<R::Residue>> {
    let ring = f.ring().clone();
    let k = ring.residue_field();
    let bocks = f
        .stalks
        .iter()
        .map(BocksteinComplex::new)
        .collect::<Result<Vec<_>>>()?;
    f.map_objectwise(
        |x, _| Ok(bocks[x].complex.clone()),
        |x, y, i, m| {
            let reps = Matrix::mul(&k, &residue_reduce(&ring, m), bocks[x].class_space(i).reps());
            bocks[y]
                .class_space(i)
                .coords_matrix(&k, &reps)
                .ok_or_else(|| Error::Invariant("restriction does not preserve cocycles".into()))
        },
    )
}

impl<F: Field> SheafComplex<F> {
    /// The cohomology sheaf `x ↦ H^q(F(x))`, placed in degree `q`.
    pub fn cohomology_sheaf(&self, q: i64) -> Result<SheafComplex<F>> {
        let f = self.ring().clone();
        let hs: Vec<_> = self.stalks.iter().map(|k| k.field_cohomology(q)).collect();
        self.map_objectwise(
            |x, k| {
                let ranks = (k.lo()..=k.hi())
                    .map(|i| if i == q { hs[x].dim() } else { 0 })
                    .collect();
                Ok(Complex::zero_differentials(f.clone(), k.lo(), ranks))
            },
            |x, y, i, m| {
                if i != q {
                    return Ok(Matrix::zeros(&f, 0, 0));
                }
                hs[y]
                    .coords_matrix(&f, &Matrix::mul(&f, m, hs[x].reps()))
                    .ok_or_else(|| Error::Invariant("restriction does not preserve cocycles".into()))
            },
        )
    }

    /// `tau_{<= q} F -> H^q(F)[-q]`: classes of degree-`q` cocycles.
    pub fn truncation_to_cohomology(&self, q: i64) -> Result<SheafMap<F>> {
        let f = self.ring().clone();
        let (tau, incl) = self.truncate_leq(q)?;
        let hq = self.cohomology_sheaf(q)?;
        let hs: Vec<_> = self.stalks.iter().map(|k| k.field_cohomology(q)).collect();
        let mut mats = Vec::new();
        for x in 0..self.site.len() {
            let m = if q >= self.lo() && q <= self.hi() {
                hs[x]
                    .coords_matrix(&f, &incl.at(x, q))
                    .ok_or_else(|| Error::Invariant("truncation leaves the cocycles".into()))?
            } else {
                Matrix::zeros(&f, 0, 0)
            };
            mats.push(m);
        }
        Ok(SheafMap::from_fn(&tau, &hq, |x, i| {
            if i == q {
                mats[x].clone()
            } else {
                Matrix::zeros(&f, hq.stalk(x).rank(i), tau.stalk(x).rank(i))
            }
        }))
    }

    /// `sigma_{>= m} F -> F^m[-m]`: projection onto the degree-`m` term.
    pub fn hodge_to_graded(&self, m: i64) -> Result<SheafMap<F>> {
        let f = self.ring().clone();
        let (hodge, _) = self.hodge(m)?;
        let graded = self.map_objectwise(
            |_, k| {
                let ranks = (k.lo()..=k.hi()).map(|i| if i == m { k.rank(i) } else { 0 }).collect();
                Ok(Complex::zero_differentials(f.clone(), k.lo(), ranks))
            },
            |_, _, i, r| Ok(if i == m { r.clone() } else { Matrix::zeros(&f, 0, 0) }),
        )?;
        Ok(SheafMap::from_fn(&hodge, &graded, |x, i| {
            if i == m {
                Matrix::identity(&f, graded.stalk(x).rank(i))
            } else {
                Matrix::zeros(&f, graded.stalk(x).rank(i), hodge.stalk(x).rank(i))
            }
        }))
    }
}
