//! Brute-force oracles shared by the integration and acceptance tests.
//!
//! Everything here works from the textual form of library matrices, over a
//! truncated ring `R / xi^N` (`Z / p^N` or `F_p[t] / t^N`), with its own
//! elimination. None of it calls the library's normal forms.

#![allow(dead_code)]

use decalage_core::matrix::Matrix;
use decalage_core::ring::{CoeffRing, FpPoly, Integers, Ring, RingSpec};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

/// `R / xi^N` for a discrete valuation ring localized at `xi`.
pub trait Chain: Clone {
    type E: Clone + PartialEq + std::fmt::Debug;

    fn prec(&self) -> u32;
    fn with_prec(&self, n: u32) -> Self;
    fn p(&self) -> u64;
    fn zero(&self) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    /// `N` for zero.
    fn val(&self, a: &Self::E) -> u32;
    /// `b / a`, defined when `val b >= val a`.
    fn quo(&self, b: &Self::E, a: &Self::E) -> Self::E;
    fn xi_pow(&self, k: u32) -> Self::E;
    /// `a / xi^k` for `val a >= k`, reduced mod `xi`.
    fn residue_after(&self, a: &Self::E, k: u32) -> u64;
    fn from_residue(&self, r: u64) -> Self::E;
    fn parse(&self, s: &str) -> Self::E;
    /// Upper bound for the `xi`-valuation of any nonzero minor that uses
    /// this column: log base `xi` of its size.
    fn column_size(&self, col: &[String]) -> f64;
}

#[derive(Clone, Debug)]
pub struct ZChain {
    p: u64,
    n: u32,
    modulus: BigInt,
}

impl ZChain {
    pub fn new(p: u64, n: u32) -> Self {
        ZChain {
            p,
            n,
            modulus: BigInt::from(p).pow(n),
        }
    }
    fn norm(&self, a: BigInt) -> BigInt {
        a.mod_floor(&self.modulus)
    }
}

impl Chain for ZChain {
    type E = BigInt;

    fn prec(&self) -> u32 {
        self.n
    }
    fn with_prec(&self, n: u32) -> Self {
        ZChain::new(self.p, n)
    }
    fn p(&self) -> u64 {
        self.p
    }
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        self.norm(a + b)
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        self.norm(a - b)
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        self.norm(a * b)
    }
    fn val(&self, a: &BigInt) -> u32 {
        let p = BigInt::from(self.p);
        let mut a = self.norm(a.clone());
        let mut v = 0;
        while v < self.n && !a.is_zero() && (&a % &p).is_zero() {
            a /= &p;
            v += 1;
        }
        if a.is_zero() {
            self.n
        } else {
            v
        }
    }
    fn quo(&self, b: &BigInt, a: &BigInt) -> BigInt {
        let k = self.val(a);
        assert!(self.val(b) >= k, "quo needs val b >= val a");
        let pk = BigInt::from(self.p).pow(k);
        let u = a / &pk;
        let w = b / &pk;
        // u is a unit mod p^N: invert by Euler's theorem
        let phi = BigInt::from(self.p).pow(self.n - 1) * (self.p - 1);
        let inv = u.modpow(&(phi - 1u32), &self.modulus);
        self.norm(w * inv)
    }
    fn xi_pow(&self, k: u32) -> BigInt {
        if k >= self.n {
            BigInt::zero()
        } else {
            BigInt::from(self.p).pow(k)
        }
    }
    fn residue_after(&self, a: &BigInt, k: u32) -> u64 {
        let pk = BigInt::from(self.p).pow(k);
        let q = self.norm(a.clone()) / pk;
        (q % self.p).to_u64().unwrap()
    }
    fn from_residue(&self, r: u64) -> BigInt {
        self.norm(BigInt::from(r))
    }
    fn parse(&self, s: &str) -> BigInt {
        self.norm(s.trim().parse::<BigInt>().expect("integer entry"))
    }
    fn column_size(&self, col: &[String]) -> f64 {
        let sq: BigInt = col.iter().map(|s| s.trim().parse::<BigInt>().unwrap().pow(2)).sum();
        if sq.is_zero() {
            0.0
        } else {
            0.5 * sq.to_f64().unwrap().ln() / (self.p as f64).ln()
        }
    }
}

/// `F_p[t] / t^N`, coefficients in `0..p`, length `N`.
#[derive(Clone, Debug)]
pub struct PolyChain {
    p: u64,
    n: u32,
}

impl PolyChain {
    pub fn new(p: u64, n: u32) -> Self {
        PolyChain { p, n }
    }

    fn inv_mod_p(&self, a: u64) -> u64 {
        (1..self.p).find(|x| x * a % self.p == 1).expect("unit")
    }

    /// Exponent/coefficient pairs of a library polynomial string.
    fn terms(&self, s: &str) -> Vec<(usize, i64)> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut out = Vec::new();
        let mut cur = String::new();
        for ch in s.chars() {
            if (ch == '+' || ch == '-') && !cur.is_empty() && !cur.ends_with('^') {
                out.push(Self::term(&cur));
                cur.clear();
            }
            cur.push(ch);
        }
        if !cur.is_empty() {
            out.push(Self::term(&cur));
        }
        out
    }

    fn term(t: &str) -> (usize, i64) {
        let (sign, body) = match t.strip_prefix('-') {
            Some(b) => (-1, b),
            None => (1, t.strip_prefix('+').unwrap_or(t)),
        };
        match body.split_once('t') {
            None => (0, sign * body.parse::<i64>().expect("coefficient")),
            Some((c, e)) => {
                let c = c.trim_end_matches('*');
                let c = if c.is_empty() { 1 } else { c.parse::<i64>().expect("coefficient") };
                let e = if e.is_empty() { 1 } else { e.trim_start_matches('^').parse().expect("exponent") };
                (e, sign * c)
            }
        }
    }
}

impl Chain for PolyChain {
    type E = Vec<u64>;

    fn prec(&self) -> u32 {
        self.n
    }
    fn with_prec(&self, n: u32) -> Self {
        PolyChain::new(self.p, n)
    }
    fn p(&self) -> u64 {
        self.p
    }
    fn zero(&self) -> Vec<u64> {
        vec![0; self.n as usize]
    }
    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }
    fn sub(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + self.p - y) % self.p).collect()
    }
    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let n = self.n as usize;
        let mut out = vec![0; n];
        for i in 0..n {
            if a[i] == 0 {
                continue;
            }
            for j in 0..n - i {
                out[i + j] = (out[i + j] + a[i] * b[j]) % self.p;
            }
        }
        out
    }
    fn val(&self, a: &Vec<u64>) -> u32 {
        a.iter().position(|&c| c != 0).map_or(self.n, |v| v as u32)
    }
    fn quo(&self, b: &Vec<u64>, a: &Vec<u64>) -> Vec<u64> {
        let k = self.val(a) as usize;
        assert!(self.val(b) as usize >= k, "quo needs val b >= val a");
        let n = self.n as usize;
        let shift = |x: &Vec<u64>| -> Vec<u64> { (0..n).map(|i| if i + k < n { x[i + k] } else { 0 }).collect() };
        let (u, w) = (shift(a), shift(b));
        // power series inverse of u
        let u0 = self.inv_mod_p(u[0]);
        let mut inv = vec![0; n];
        inv[0] = u0;
        for i in 1..n {
            let s: u64 = (1..=i).map(|j| u[j] * inv[i - j] % self.p).sum::<u64>() % self.p;
            inv[i] = (self.p - s) % self.p * u0 % self.p;
        }
        self.mul(&w, &inv)
    }
    fn xi_pow(&self, k: u32) -> Vec<u64> {
        let mut v = self.zero();
        if (k as usize) < v.len() {
            v[k as usize] = 1;
        }
        v
    }
    fn residue_after(&self, a: &Vec<u64>, k: u32) -> u64 {
        a.get(k as usize).copied().unwrap_or(0)
    }
    fn from_residue(&self, r: u64) -> Vec<u64> {
        let mut v = self.zero();
        if !v.is_empty() {
            v[0] = r % self.p;
        }
        v
    }
    fn parse(&self, s: &str) -> Vec<u64> {
        let mut v = self.zero();
        if s.trim() == "0" {
            return v;
        }
        for (e, c) in self.terms(s) {
            if e < v.len() {
                v[e] = (v[e] + c.rem_euclid(self.p as i64) as u64) % self.p;
            }
        }
        v
    }
    fn column_size(&self, col: &[String]) -> f64 {
        col.iter()
            .filter(|s| s.trim() != "0")
            .map(|s| self.terms(s).iter().map(|t| t.0).max().unwrap_or(0))
            .max()
            .unwrap_or(0) as f64
    }
}

/// A library ring with a matching truncated-ring oracle.
pub trait HasChain: CoeffRing {
    type C: Chain;
    fn chain(&self, n: u32) -> Self::C;
}

impl HasChain for Integers {
    type C = ZChain;
    fn chain(&self, n: u32) -> ZChain {
        match self.spec() {
            RingSpec::Z { xi } => ZChain::new(xi.parse().unwrap(), n),
            other => unreachable!("{other:?}"),
        }
    }
}

impl HasChain for FpPoly {
    type C = PolyChain;
    fn chain(&self, n: u32) -> PolyChain {
        match self.spec() {
            RingSpec::FpPoly { p, .. } => PolyChain::new(p, n),
            other => unreachable!("{other:?}"),
        }
    }
}

/// Rows of strings, with the column count kept for empty shapes.
#[derive(Clone, Debug)]
pub struct Text {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<String>>,
}

impl Text {
    pub fn of<R: Ring>(ring: &R, m: &Matrix<R::Elem>) -> Self {
        Text {
            rows: m.rows(),
            cols: m.cols(),
            entries: m.format(ring),
        }
    }

    pub fn column(&self, j: usize) -> Vec<String> {
        self.entries.iter().map(|r| r[j].clone()).collect()
    }

    /// Precision at which every nonzero elementary divisor has valuation
    /// strictly below it (Hadamard-type bound on the minors).
    pub fn safe_precision<C: Chain>(&self, c: &C) -> u32 {
        let total: f64 = (0..self.cols).map(|j| c.column_size(&self.column(j))).sum();
        total.floor() as u32 + 2
    }

    pub fn lift<C: Chain>(&self, c: &C) -> Mat<C::E> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            a: self.entries.iter().map(|r| r.iter().map(|s| c.parse(s)).collect()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mat<E> {
    pub rows: usize,
    pub cols: usize,
    pub a: Vec<Vec<E>>,
}

impl<E: Clone> Mat<E> {
    pub fn from_cols(rows: usize, cols: &[Vec<E>]) -> Self {
        Mat {
            rows,
            cols: cols.len(),
            a: (0..rows).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect(),
        }
    }

    pub fn column(&self, j: usize) -> Vec<E> {
        self.a.iter().map(|r| r[j].clone()).collect()
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Mat {
            rows: self.rows,
            cols: self.cols + other.cols,
            a: self.a.iter().zip(&other.a).map(|(x, y)| x.iter().chain(y).cloned().collect()).collect(),
        }
    }
}

pub fn mat_mul<C: Chain>(c: &C, x: &Mat<C::E>, y: &Mat<C::E>) -> Mat<C::E> {
    assert_eq!(x.cols, y.rows);
    let a = (0..x.rows)
        .map(|i| {
            (0..y.cols)
                .map(|j| (0..x.cols).fold(c.zero(), |acc, k| c.add(&acc, &c.mul(&x.a[i][k], &y.a[k][j]))))
                .collect()
        })
        .collect();
    Mat { rows: x.rows, cols: y.cols, a }
}

/// Diagonal form by row and column operations with a minimal-valuation
/// pivot; returns the pivot valuations and the column transform.
pub fn smith<C: Chain>(c: &C, m: &Mat<C::E>) -> (Vec<u32>, Mat<C::E>) {
    let mut a = m.a.clone();
    let (rows, cols) = (m.rows, m.cols);
    let mut q: Vec<Vec<C::E>> = (0..cols)
        .map(|i| (0..cols).map(|j| if i == j { c.xi_pow(0) } else { c.zero() }).collect())
        .collect();
    let mut vals = Vec::new();
    for t in 0..rows.min(cols) {
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, x) in row.iter().enumerate().skip(t) {
                let v = c.val(x);
                if v < c.prec() && best.is_none_or(|b| v < b.0) {
                    best = Some((v, i, j));
                }
            }
        }
        let Some((v, i, j)) = best else { break };
        a.swap(t, i);
        for row in a.iter_mut() {
            row.swap(t, j);
        }
        for row in q.iter_mut() {
            row.swap(t, j);
        }
        let piv = a[t][t].clone();
        for i in t + 1..rows {
            if c.val(&a[i][t]) < c.prec() {
                let f = c.quo(&a[i][t], &piv);
                for j in t..cols {
                    let d = c.mul(&f, &a[t][j]);
                    a[i][j] = c.sub(&a[i][j], &d);
                }
            }
        }
        for j in t + 1..cols {
            if c.val(&a[t][j]) < c.prec() {
                let f = c.quo(&a[t][j], &piv);
                for row in a.iter_mut() {
                    let d = c.mul(&f, &row[t]);
                    row[j] = c.sub(&row[j], &d);
                }
                for row in q.iter_mut() {
                    let d = c.mul(&f, &row[t]);
                    row[j] = c.sub(&row[j], &d);
                }
            }
        }
        vals.push(v);
    }
    (vals, Mat { rows: cols, cols, a: q })
}

/// Length of the submodule spanned by the columns.
pub fn length<C: Chain>(c: &C, m: &Mat<C::E>) -> u32 {
    smith(c, m).0.iter().map(|v| c.prec() - v).sum()
}

pub fn contains<C: Chain>(c: &C, m: &Mat<C::E>, v: &[C::E]) -> bool {
    length(c, &m.hstack(&Mat::from_cols(m.rows, &[v.to_vec()]))) == length(c, m)
}

/// Generators of the kernel of `m` over `R / xi^N`.
pub fn kernel<C: Chain>(c: &C, m: &Mat<C::E>) -> Vec<Vec<C::E>> {
    let (vals, q) = smith(c, m);
    let mut out = Vec::new();
    for j in 0..m.cols {
        let scale = match vals.get(j) {
            Some(&v) if v == 0 => continue,
            Some(&v) => c.xi_pow(c.prec() - v),
            None => c.xi_pow(0),
        };
        out.push(q.column(j).iter().map(|x| c.mul(&scale, x)).collect());
    }
    out
}

/// Rank over the residue field.
pub fn residue_rank<C: Chain>(c: &C, m: &Mat<u64>) -> usize {
    let f = c.with_prec(1);
    let lifted = Mat {
        rows: m.rows,
        cols: m.cols,
        a: m.a.iter().map(|r| r.iter().map(|&x| f.from_residue(x)).collect()).collect(),
    };
    smith(&f, &lifted).0.len()
}

/// `xi`-valuations of the nonzero elementary divisors, exactly.
pub fn divisor_valuations<C: Chain>(c: &C, t: &Text) -> Vec<u32> {
    let c = c.with_prec(t.safe_precision(c));
    let mut v = smith(&c, &t.lift(&c)).0;
    v.sort_unstable();
    v
}

/// Every vector of `F_p^n`, if there are at most `limit` of them.
pub fn all_vectors(p: u64, n: usize, limit: u64) -> Option<Vec<Vec<u64>>> {
    let total = p.checked_pow(n as u32)?;
    if total > limit {
        return None;
    }
    Some(
        (0..total)
            .map(|mut x| {
                (0..n)
                    .map(|_| {
                        let d = x % p;
                        x /= p;
                        d
                    })
                    .collect()
            })
            .collect(),
    )
}

/// BB flag of `L = xi^c span(B)` against the standard lattice, one level:
/// `v` lies in `Fil_m` iff `xi^m v ∈ xi^c B + xi^{m+1} R^n`.
pub fn fil_contains<C: Chain>(c: &C, b: &Text, shift: i64, m: i64, v: &[u64]) -> bool {
    let k = 0.max(-m).max(-shift);
    let n = (m + 1 + k) as u32;
    let ch = c.with_prec(n);
    let s = (shift + k) as u32;
    let gens = b.lift(&ch);
    let scaled = Mat {
        rows: gens.rows,
        cols: gens.cols,
        a: gens.a.iter().map(|r| r.iter().map(|x| ch.mul(&ch.xi_pow(s), x)).collect()).collect(),
    };
    let target: Vec<C::E> = v.iter().map(|&x| ch.mul(&ch.xi_pow((m + k) as u32), &ch.from_residue(x))).collect();
    contains(&ch, &scaled, &target)
}

/// `dim Fil_m` from the elementary divisors: `#{j : v_j + c <= m}`.
pub fn fil_dim(vals: &[u32], shift: i64, m: i64) -> usize {
    vals.iter().filter(|&&v| v as i64 + shift <= m).count()
}

/// Invariant factors of a small integer matrix from gcds of minors.
pub fn invariant_factors_by_minors(a: &[Vec<i64>]) -> Vec<i64> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut d_prev = 1i64;
    let mut out = Vec::new();
    for k in 1..=rows.min(cols) {
        let mut g = 0i64;
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let minor: Vec<Vec<i64>> = rs.iter().map(|&i| cs.iter().map(|&j| a[i][j]).collect()).collect();
                g = g.gcd(&det_i64(&minor));
            }
        }
        if g == 0 {
            break;
        }
        out.push(g / d_prev);
        d_prev = g;
    }
    out
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Laplace expansion along the first row.
pub fn det_i64(m: &[Vec<i64>]) -> i64 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> =
                    m[1..].iter().map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect()).collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * det_i64(&minor)
            })
            .sum(),
    }
}

/// Reduction mod `xi` of a library matrix.
pub fn residues<C: Chain>(c: &C, t: &Text) -> Mat<u64> {
    let f = c.with_prec(1);
    let m = t.lift(&f);
    Mat {
        rows: m.rows,
        cols: m.cols,
        a: m.a.iter().map(|r| r.iter().map(|x| f.residue_after(x, 0)).collect()).collect(),
    }
}

/// Free rank and positive torsion valuations of `ker d_next / im d_prev`
/// on a free module of rank `n`.
pub fn xi_structure<C: Chain>(c: &C, d_prev: &Text, d_next: &Text, n: usize) -> (usize, Vec<u32>) {
    let vp = divisor_valuations(c, d_prev);
    let vn = divisor_valuations(c, d_next);
    let torsion = vp.iter().copied().filter(|&v| v > 0).collect();
    (n - vp.len() - vn.len(), torsion)
}
