//! Smith normal form and the linear algebra built on it: kernels, images,
//! linear solves and determinants over a Euclidean domain.

use std::cmp::Ordering;

use crate::matrix::Matrix;
use crate::ring::EuclideanRing;

/// `u * m * v == d`, with `u`, `v` unimodular and `d` diagonal with a
/// divisibility chain of normalized entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snf<E> {
    pub u: Matrix<E>,
    pub u_inv: Matrix<E>,
    pub d: Matrix<E>,
    pub v: Matrix<E>,
    pub rank: usize,
}

impl<E: Clone> Snf<E> {
    /// The nonzero diagonal entries `d_1 | d_2 | ...`.
    pub fn invariant_factors(&self) -> Vec<E> {
        (0..self.rank).map(|i| self.d.get(i, i).clone()).collect()
    }
}

struct SnfCalc<'a, R: EuclideanRing> {
    ring: &'a R,
    a: Matrix<R::Elem>,
    u: Matrix<R::Elem>,
    u_inv: Matrix<R::Elem>,
    v: Matrix<R::Elem>,
}

impl<R: EuclideanRing> SnfCalc<'_, R> {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
    }

    /// row[i] += c * row[t]
    fn row_op(&mut self, i: usize, t: usize, c: &R::Elem) {
        let r = self.ring;
        self.a.add_row_multiple(r, i, t, c);
        self.u.add_row_multiple(r, i, t, c);
        self.u_inv.add_col_multiple(r, t, i, &r.neg(c));
    }

    /// col[j] += c * col[t]
    fn col_op(&mut self, j: usize, t: usize, c: &R::Elem) {
        let r = self.ring;
        self.a.add_col_multiple(r, j, t, c);
        self.v.add_col_multiple(r, j, t, c);
    }

    fn smaller(&self, x: &R::Elem, y: &R::Elem) -> bool {
        let r = self.ring;
        match r.size_cmp(x, y) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => r.pivot_key(x) < r.pivot_key(y),
        }
    }

    fn column_is_clear(&self, t: usize) -> bool {
        (t + 1..self.a.rows()).all(|i| self.ring.is_zero(self.a.get(i, t)))
    }

    fn row_is_clear(&self, t: usize) -> bool {
        (t + 1..self.a.cols()).all(|j| self.ring.is_zero(self.a.get(t, j)))
    }

    /// Zero column `t` below the diagonal, always reducing by the smallest
    /// entry so that no other column is touched before the gcd is reached.
    fn clear_column(&mut self, t: usize) {
        let r = self.ring;
        while !self.column_is_clear(t) {
            let mut best = t;
            for i in t + 1..self.a.rows() {
                let x = self.a.get(i, t);
                if !r.is_zero(x) && (r.is_zero(self.a.get(best, t)) || self.smaller(x, self.a.get(best, t))) {
                    best = i;
                }
            }
            self.swap_rows(t, best);
            for i in t + 1..self.a.rows() {
                if !r.is_zero(self.a.get(i, t)) {
                    let q = r.div_rem(self.a.get(i, t), self.a.get(t, t)).0;
                    self.row_op(i, t, &r.neg(&q));
                }
            }
        }
    }

    /// Zero row `t` right of the diagonal, as in `clear_column`.
    fn clear_row(&mut self, t: usize) {
        let r = self.ring;
        while !self.row_is_clear(t) {
            let mut best = t;
            for j in t + 1..self.a.cols() {
                let x = self.a.get(t, j);
                if !r.is_zero(x) && (r.is_zero(self.a.get(t, best)) || self.smaller(x, self.a.get(t, best))) {
                    best = j;
                }
            }
            self.swap_cols(t, best);
            for j in t + 1..self.a.cols() {
                if !r.is_zero(self.a.get(t, j)) {
                    let q = r.div_rem(self.a.get(t, j), self.a.get(t, t)).0;
                    self.col_op(j, t, &r.neg(&q));
                }
            }
        }
    }

    fn pick_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let r = self.ring;
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let x = self.a.get(i, j);
                if r.is_zero(x) {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((bi, bj)) => self.smaller(x, self.a.get(bi, bj)),
                };
                if better {
                    best = Some((i, j));
                }
            }
        }
        best
    }

    fn run(&mut self) -> usize {
        let r = self.ring;
        let (rows, cols) = self.a.shape();
        let mut t = 0;
        while t < rows.min(cols) {
            let Some((pi, pj)) = self.pick_pivot(t) else {
                break;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                self.clear_column(t);
                if !self.row_is_clear(t) {
                    self.clear_row(t);
                    if !self.column_is_clear(t) {
                        continue;
                    }
                }
                let bad = (t + 1..rows).find(|&i| {
                    (t + 1..cols).any(|j| !r.divides(self.a.get(t, t), self.a.get(i, j)))
                });
                match bad {
                    Some(i) => self.row_op(t, i, &r.one()),
                    None => break,
                }
            }
            t += 1;
        }
        for i in 0..t {
            let c = r.normal_unit(self.a.get(i, i));
            let c_inv = r.unit_inverse(&c).expect("normal unit is a unit");
            self.a.scale_row(r, i, &c);
            self.u.scale_row(r, i, &c);
            self.u_inv.scale_col(r, i, &c_inv);
        }
        t
    }
}

/// Deterministic Smith normal form.
pub fn snf<R: EuclideanRing>(ring: &R, m: &Matrix<R::Elem>) -> Snf<R::Elem> {
    let (rows, cols) = m.shape();
    let mut calc = SnfCalc {
        ring,
        a: m.clone(),
        u: Matrix::identity(ring, rows),
        u_inv: Matrix::identity(ring, rows),
        v: Matrix::identity(ring, cols),
    };
    let rank = calc.run();
    Snf {
        u: calc.u,
        u_inv: calc.u_inv,
        d: calc.a,
        v: calc.v,
        rank,
    }
}

/// Rank over the fraction field.
pub fn rank<R: EuclideanRing>(ring: &R, m: &Matrix<R::Elem>) -> usize {
    snf(ring, m).rank
}

/// Column echelon form `h = m t` with `t` unimodular. Returns `(h, t, rank)`;
/// the first `rank` columns of `h` are nonzero, pivots are normalized and
/// entries left of each pivot are reduced modulo it, which keeps entries
/// small across repeated kernel and image computations.
pub fn column_echelon<R: EuclideanRing>(
    ring: &R,
    m: &Matrix<R::Elem>,
) -> (Matrix<R::Elem>, Matrix<R::Elem>, usize) {
    let (rows, cols) = m.shape();
    let mut h = m.clone();
    let mut t = Matrix::identity(ring, cols);
    let mut c = 0;
    for r in 0..rows {
        if c == cols {
            break;
        }
        loop {
            let best = (c..cols)
                .filter(|&j| !ring.is_zero(h.get(r, j)))
                .min_by(|&a, &b| {
                    let (x, y) = (h.get(r, a), h.get(r, b));
                    ring.size_cmp(x, y)
                        .then_with(|| ring.pivot_key(x).cmp(&ring.pivot_key(y)))
                        .then(a.cmp(&b))
                });
            let Some(j0) = best else { break };
            h.swap_cols(c, j0);
            t.swap_cols(c, j0);
            let mut done = true;
            for j in c + 1..cols {
                if ring.is_zero(h.get(r, j)) {
                    continue;
                }
                let (q, rem) = ring.div_rem(h.get(r, j), h.get(r, c));
                let q = ring.neg(&q);
                h.add_col_multiple(ring, j, c, &q);
                t.add_col_multiple(ring, j, c, &q);
                if !ring.is_zero(&rem) {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if ring.is_zero(h.get(r, c)) {
            continue;
        }
        let u = ring.normal_unit(h.get(r, c));
        h.scale_col(ring, c, &u);
        t.scale_col(ring, c, &u);
        for j in 0..c {
            let (q, _) = ring.div_rem(h.get(r, j), h.get(r, c));
            if ring.is_zero(&q) {
                continue;
            }
            let q = ring.neg(&q);
            h.add_col_multiple(ring, j, c, &q);
            t.add_col_multiple(ring, j, c, &q);
        }
        c += 1;
    }
    (h, t, c)
}

/// Columns form a basis of `ker m` (saturated, full column rank).
pub fn kernel_basis<R: EuclideanRing>(ring: &R, m: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    let (_, t, rank) = column_echelon(ring, m);
    let k = t.select_cols(rank..m.cols());
    let (h, _, r) = column_echelon(ring, &k);
    h.select_cols(0..r)
}

/// Columns form a basis of the column span of `m`.
pub fn image_basis<R: EuclideanRing>(ring: &R, m: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    let (h, _, rank) = column_echelon(ring, m);
    h.select_cols(0..rank)
}

/// Some `x` with `a * x == b`, if one exists.
pub fn solve<R: EuclideanRing>(
    ring: &R,
    a: &Matrix<R::Elem>,
    b: &Matrix<R::Elem>,
) -> Option<Matrix<R::Elem>> {
    assert_eq!(a.rows(), b.rows(), "solve: row mismatch");
    snf(ring, a).solve(ring, b)
}

impl<E: Clone + PartialEq> Snf<E> {
    /// Solve `a * x == b` where `self` is the Smith form of `a`.
    pub fn solve<R: EuclideanRing<Elem = E>>(&self, ring: &R, b: &Matrix<E>) -> Option<Matrix<E>> {
        let c = Matrix::mul(ring, &self.u, b);
        let mut y = Matrix::zeros(ring, self.v.rows(), b.cols());
        for i in 0..self.u.rows() {
            for j in 0..b.cols() {
                let cij = c.get(i, j);
                if i < self.rank {
                    y.set(i, j, ring.exact_div(cij, self.d.get(i, i))?);
                } else if !ring.is_zero(cij) {
                    return None;
                }
            }
        }
        Some(Matrix::mul(ring, &self.v, &y))
    }

    pub fn solve_vec<R: EuclideanRing<Elem = E>>(&self, ring: &R, b: &[E]) -> Option<Vec<E>> {
        let m = Matrix::from_cols(b.len(), &[b.to_vec()]);
        self.solve(ring, &m).map(|x| x.col(0))
    }
}

/// Whether every column of `b` lies in the column span of `a`.
pub fn spans<R: EuclideanRing>(ring: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> bool {
    solve(ring, a, b).is_some()
}

/// Fraction-free (Bareiss) determinant.
pub fn det<R: EuclideanRing>(ring: &R, m: &Matrix<R::Elem>) -> R::Elem {
    assert_eq!(m.rows(), m.cols(), "determinant of a non-square matrix");
    let n = m.rows();
    if n == 0 {
        return ring.one();
    }
    let mut a = m.clone();
    let mut negate = false;
    let mut prev = ring.one();
    for k in 0..n - 1 {
        if ring.is_zero(a.get(k, k)) {
            match (k + 1..n).find(|&i| !ring.is_zero(a.get(i, k))) {
                Some(i) => {
                    a.swap_rows(i, k);
                    negate = !negate;
                }
                None => return ring.zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = ring.sub(
                    &ring.mul(a.get(i, j), a.get(k, k)),
                    &ring.mul(a.get(i, k), a.get(k, j)),
                );
                let q = ring.exact_div(&num, &prev).expect("Bareiss division is exact");
                a.set(i, j, q);
            }
        }
        prev = a.get(k, k).clone();
    }
    let d = a.get(n - 1, n - 1).clone();
    if negate {
        ring.neg(&d)
    } else {
        d
    }
}

pub fn is_unimodular<R: EuclideanRing>(ring: &R, m: &Matrix<R::Elem>) -> bool {
    m.rows() == m.cols() && ring.is_unit(&det(ring, m))
}
