//! Exact coefficient rings.
//!
//! Rings are context objects: an element type alone does not know its
//! modulus, so every operation goes through the ring value. This keeps
//! `F_p[t]` usable with a prime chosen at runtime.

use std::cmp::Ordering;
use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// A commutative ring with identity, accessed through a context value.
pub trait Ring: Clone + Debug + PartialEq {
    type Elem: Clone + Debug + PartialEq + Eq + Hash;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn from_i64(&self, n: i64) -> Self::Elem;

    /// Canonical string form (decimal integers, `2*t^3+1` for polynomials).
    fn format(&self, a: &Self::Elem) -> String;
    fn parse(&self, s: &str) -> Result<Self::Elem, Error>;

    fn pow(&self, a: &Self::Elem, e: u32) -> Self::Elem {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }
}

/// Euclidean domain. Every algorithm in `snf` is written against this trait,
/// so fields (trivially Euclidean) reuse the same code paths.
pub trait EuclideanRing: Ring {
    /// Compare Euclidean sizes; zero is the unique minimum.
    fn size_cmp(&self, a: &Self::Elem, b: &Self::Elem) -> Ordering;

    /// `(q, r)` with `a = q*b + r` and `r` smaller than `b`. `b` must be nonzero.
    fn div_rem(&self, a: &Self::Elem, b: &Self::Elem) -> (Self::Elem, Self::Elem);

    fn is_unit(&self, a: &Self::Elem) -> bool;

    fn unit_inverse(&self, u: &Self::Elem) -> Option<Self::Elem>;

    /// Unit `u` such that `u * a` is the normalized associate of `a`.
    fn normal_unit(&self, a: &Self::Elem) -> Self::Elem;

    /// Secondary pivot key (smaller is preferred). Coefficient rings use the
    /// xi-valuation; plain Euclidean rings have no preference.
    fn pivot_key(&self, _a: &Self::Elem) -> u32 {
        0
    }

    fn normalize(&self, a: &Self::Elem) -> Self::Elem {
        self.mul(&self.normal_unit(a), a)
    }

    fn divides(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        if self.is_zero(a) {
            return self.is_zero(b);
        }
        self.is_zero(&self.div_rem(b, a).1)
    }

    /// Exact quotient `b / a`, if `a` divides `b`.
    fn exact_div(&self, b: &Self::Elem, a: &Self::Elem) -> Option<Self::Elem> {
        if self.is_zero(a) {
            return if self.is_zero(b) { Some(self.zero()) } else { None };
        }
        let (q, r) = self.div_rem(b, a);
        self.is_zero(&r).then_some(q)
    }

    fn gcd(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !self.is_zero(&y) {
            let r = self.div_rem(&x, &y).1;
            x = y;
            y = r;
        }
        self.normalize(&x)
    }
}

pub trait Field: EuclideanRing {
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        self.unit_inverse(a)
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.mul(a, &self.inv(b).expect("division by zero in field"))
    }
}

/// Serializable description of a coefficient ring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RingSpec {
    /// Integers with xi a prime number.
    Z { xi: String },
    /// `F_p[t]` with xi = t.
    FpPoly { p: u64, xi: String },
    /// `Q[t]` with xi = t.
    QPoly { xi: String },
}

/// A PID with a distinguished prime `xi` and residue field `R/(xi)`.
pub trait CoeffRing: EuclideanRing {
    type Residue: Field;

    fn xi(&self) -> Self::Elem;
    fn residue_field(&self) -> Self::Residue;
    fn reduce(&self, a: &Self::Elem) -> <Self::Residue as Ring>::Elem;
    /// Canonical lift of a residue.
    fn lift(&self, r: &<Self::Residue as Ring>::Elem) -> Self::Elem;
    fn spec(&self) -> RingSpec;

    /// Largest `e` with `xi^e | a`; `None` stands for +infinity (a = 0).
    fn xi_valuation(&self, a: &Self::Elem) -> Option<u32> {
        if self.is_zero(a) {
            return None;
        }
        let xi = self.xi();
        let mut x = a.clone();
        let mut e = 0;
        loop {
            let (q, r) = self.div_rem(&x, &xi);
            if !self.is_zero(&r) {
                return Some(e);
            }
            x = q;
            e += 1;
        }
    }

    fn xi_pow(&self, e: u32) -> Self::Elem {
        self.pow(&self.xi(), e)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

// ---------------------------------------------------------------------------
// Prime field F_p

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, Error> {
        if !is_prime(p) || p > (1 << 16) {
            return Err(Error::InvalidRing(format!("{p} is not a prime <= 2^16")));
        }
        Ok(PrimeField { p })
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    fn pow_mod(&self, mut b: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        b %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % self.p;
            }
            b = b * b % self.p;
            e >>= 1;
        }
        acc
    }
}

impl Ring for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn from_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
    fn parse(&self, s: &str) -> Result<u64, Error> {
        let n: BigInt = s
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad F_{} element {s:?}", self.p)))?;
        let r = n.mod_floor(&BigInt::from(self.p));
        Ok(r.to_u64().expect("residue fits"))
    }
}

impl EuclideanRing for PrimeField {
    fn size_cmp(&self, a: &u64, b: &u64) -> Ordering {
        (*a != 0).cmp(&(*b != 0))
    }
    fn div_rem(&self, a: &u64, b: &u64) -> (u64, u64) {
        (self.div(a, b), 0)
    }
    fn is_unit(&self, a: &u64) -> bool {
        *a != 0
    }
    fn unit_inverse(&self, u: &u64) -> Option<u64> {
        (*u != 0).then(|| self.pow_mod(*u, self.p - 2))
    }
    fn normal_unit(&self, a: &u64) -> u64 {
        self.unit_inverse(a).unwrap_or(1)
    }
}

impl Field for PrimeField {}

// ---------------------------------------------------------------------------
// Rationals

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Rationals;

impl Ring for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }
    fn format(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
    fn parse(&self, s: &str) -> Result<BigRational, Error> {
        let bad = || Error::Parse(format!("bad rational {s:?}"));
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(BigRational::new(n, d))
            }
            None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
        }
    }
}

impl EuclideanRing for Rationals {
    fn size_cmp(&self, a: &BigRational, b: &BigRational) -> Ordering {
        (!a.is_zero()).cmp(&!b.is_zero())
    }
    fn div_rem(&self, a: &BigRational, b: &BigRational) -> (BigRational, BigRational) {
        (a / b, BigRational::zero())
    }
    fn is_unit(&self, a: &BigRational) -> bool {
        !a.is_zero()
    }
    fn unit_inverse(&self, u: &BigRational) -> Option<BigRational> {
        (!u.is_zero()).then(|| u.recip())
    }
    fn normal_unit(&self, a: &BigRational) -> BigRational {
        self.unit_inverse(a).unwrap_or_else(BigRational::one)
    }
}

impl Field for Rationals {}

// ---------------------------------------------------------------------------
// Integers localized in spirit at a prime p (arithmetic is global).

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Integers {
    p: u64,
    residue: PrimeField,
}

impl Integers {
    pub fn new(p: u64) -> Result<Self, Error> {
        Ok(Integers {
            p,
            residue: PrimeField::new(p)?,
        })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }
}

impl Ring for Integers {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn from_i64(&self, n: i64) -> BigInt {
        n.into()
    }
    fn format(&self, a: &BigInt) -> String {
        a.to_string()
    }
    fn parse(&self, s: &str) -> Result<BigInt, Error> {
        s.trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad integer {s:?}")))
    }
}

impl EuclideanRing for Integers {
    fn size_cmp(&self, a: &BigInt, b: &BigInt) -> Ordering {
        a.abs().cmp(&b.abs())
    }
    fn div_rem(&self, a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
        a.div_rem(b)
    }
    fn is_unit(&self, a: &BigInt) -> bool {
        a.abs().is_one()
    }
    fn unit_inverse(&self, u: &BigInt) -> Option<BigInt> {
        self.is_unit(u).then(|| u.clone())
    }
    fn normal_unit(&self, a: &BigInt) -> BigInt {
        if a.is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        }
    }
    fn pivot_key(&self, a: &BigInt) -> u32 {
        self.xi_valuation(a).unwrap_or(u32::MAX)
    }
}

impl CoeffRing for Integers {
    type Residue = PrimeField;

    fn xi(&self) -> BigInt {
        BigInt::from(self.p)
    }
    fn residue_field(&self) -> PrimeField {
        self.residue
    }
    fn reduce(&self, a: &BigInt) -> u64 {
        a.mod_floor(&BigInt::from(self.p)).to_u64().expect("residue fits")
    }
    fn lift(&self, r: &u64) -> BigInt {
        BigInt::from(*r)
    }
    fn spec(&self) -> RingSpec {
        RingSpec::Z {
            xi: self.p.to_string(),
        }
    }
}

// ---------------------------------------------------------------------------
// Univariate polynomials over a field, xi = t.

/// Polynomial coefficients, lowest degree first, no trailing zeros.
pub type Poly<E> = Vec<E>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRing<F> {
    field: F,
}

impl<F: Field> PolyRing<F> {
    pub fn new(field: F) -> Self {
        PolyRing { field }
    }

    pub fn coefficient_field(&self) -> &F {
        &self.field
    }

    fn trim(&self, mut a: Poly<F::Elem>) -> Poly<F::Elem> {
        while a.last().is_some_and(|c| self.field.is_zero(c)) {
            a.pop();
        }
        a
    }

    pub fn monomial(&self, c: F::Elem, e: usize) -> Poly<F::Elem> {
        let mut v = vec![self.field.zero(); e];
        v.push(c);
        self.trim(v)
    }

    pub fn degree(&self, a: &Poly<F::Elem>) -> Option<usize> {
        a.len().checked_sub(1)
    }

    fn parse_term(&self, term: &str) -> Result<Poly<F::Elem>, Error> {
        let bad = || Error::Parse(format!("bad polynomial term {term:?}"));
        let term = term.trim();
        if term.is_empty() {
            return Err(bad());
        }
        let (neg, body) = match term.strip_prefix('-') {
            Some(rest) => (true, rest.trim()),
            None => (false, term.strip_prefix('+').unwrap_or(term).trim()),
        };
        let (coef, mono) = match body.find('t') {
            None => (body, None),
            Some(pos) => {
                let coef = body[..pos].trim().trim_end_matches('*').trim();
                (coef, Some(body[pos + 1..].trim()))
            }
        };
        let c = if coef.is_empty() {
            self.field.one()
        } else {
            self.field.parse(coef)?
        };
        let c = if neg { self.field.neg(&c) } else { c };
        let e = match mono {
            None => 0,
            Some("") => 1,
            Some(rest) => rest
                .strip_prefix('^')
                .ok_or_else(bad)?
                .trim()
                .parse::<usize>()
                .map_err(|_| bad())?,
        };
        Ok(self.monomial(c, e))
    }
}

impl<F: Field> Ring for PolyRing<F> {
    type Elem = Poly<F::Elem>;

    fn zero(&self) -> Self::Elem {
        Vec::new()
    }
    fn one(&self) -> Self::Elem {
        vec![self.field.one()]
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let n = a.len().max(b.len());
        let z = self.field.zero();
        let v = (0..n)
            .map(|i| self.field.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
            .collect();
        self.trim(v)
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut v = vec![self.field.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                v[i + j] = self.field.add(&v[i + j], &self.field.mul(x, y));
            }
        }
        self.trim(v)
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.iter().map(|c| self.field.neg(c)).collect()
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.is_empty()
    }
    fn from_i64(&self, n: i64) -> Self::Elem {
        self.trim(vec![self.field.from_i64(n)])
    }

    fn format(&self, a: &Self::Elem) -> String {
        if a.is_empty() {
            return "0".to_string();
        }
        let one = self.field.one();
        let mut out = String::new();
        for (e, c) in a.iter().enumerate().rev() {
            if self.field.is_zero(c) {
                continue;
            }
            let term = if e == 0 {
                self.field.format(c)
            } else {
                let mono = if e == 1 { "t".to_string() } else { format!("t^{e}") };
                if *c == one {
                    mono
                } else if self.field.format(c) == "-1" {
                    format!("-{mono}")
                } else {
                    format!("{}*{mono}", self.field.format(c))
                }
            };
            if !out.is_empty() && !term.starts_with('-') {
                out.push('+');
            }
            out.push_str(&term);
        }
        out
    }

    fn parse(&self, s: &str) -> Result<Self::Elem, Error> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        // Split at top-level signs that start a new term (not after '^', '*' or '/').
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = s.as_bytes();
        for i in 1..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-')
                && !matches!(bytes[i - 1], b'^' | b'*' | b'/' | b'+' | b'-')
            {
                terms.push(&s[start..i]);
                start = i;
            }
        }
        terms.push(&s[start..]);
        let mut acc = self.zero();
        for t in terms {
            acc = self.add(&acc, &self.parse_term(t)?);
        }
        Ok(acc)
    }
}

impl<F: Field> EuclideanRing for PolyRing<F> {
    fn size_cmp(&self, a: &Self::Elem, b: &Self::Elem) -> Ordering {
        a.len().cmp(&b.len())
    }
    fn div_rem(&self, a: &Self::Elem, b: &Self::Elem) -> (Self::Elem, Self::Elem) {
        assert!(!b.is_empty(), "polynomial division by zero");
        let lead_inv = self.field.inv(b.last().unwrap()).unwrap();
        let mut r = a.clone();
        let mut q = vec![self.field.zero(); a.len().saturating_sub(b.len()) + 1];
        while r.len() >= b.len() {
            let shift = r.len() - b.len();
            let c = self.field.mul(r.last().unwrap(), &lead_inv);
            for (i, bc) in b.iter().enumerate() {
                r[shift + i] = self.field.sub(&r[shift + i], &self.field.mul(&c, bc));
            }
            q[shift] = c;
            r = self.trim(r);
        }
        (self.trim(q), r)
    }
    fn is_unit(&self, a: &Self::Elem) -> bool {
        a.len() == 1
    }
    fn unit_inverse(&self, u: &Self::Elem) -> Option<Self::Elem> {
        if u.len() == 1 {
            Some(vec![self.field.inv(&u[0])?])
        } else {
            None
        }
    }
    fn normal_unit(&self, a: &Self::Elem) -> Self::Elem {
        match a.last() {
            Some(c) => vec![self.field.inv(c).unwrap()],
            None => self.one(),
        }
    }
    fn pivot_key(&self, a: &Self::Elem) -> u32 {
        a.iter()
            .position(|c| !self.field.is_zero(c))
            .map_or(u32::MAX, |e| e as u32)
    }
}

impl<F: Field + CoeffFieldSpec> CoeffRing for PolyRing<F> {
    type Residue = F;

    fn xi(&self) -> Self::Elem {
        self.monomial(self.field.one(), 1)
    }
    fn residue_field(&self) -> F {
        self.field.clone()
    }
    fn reduce(&self, a: &Self::Elem) -> F::Elem {
        a.first().cloned().unwrap_or_else(|| self.field.zero())
    }
    fn lift(&self, r: &F::Elem) -> Self::Elem {
        self.trim(vec![r.clone()])
    }
    fn spec(&self) -> RingSpec {
        self.field.poly_spec()
    }
    fn xi_valuation(&self, a: &Self::Elem) -> Option<u32> {
        a.iter().position(|c| !self.field.is_zero(c)).map(|e| e as u32)
    }
}

/// Coefficient fields that polynomial rings may be built over.
pub trait CoeffFieldSpec {
    fn poly_spec(&self) -> RingSpec;
}

impl CoeffFieldSpec for PrimeField {
    fn poly_spec(&self) -> RingSpec {
        RingSpec::FpPoly {
            p: self.p,
            xi: "t".into(),
        }
    }
}

impl CoeffFieldSpec for Rationals {
    fn poly_spec(&self) -> RingSpec {
        RingSpec::QPoly { xi: "t".into() }
    }
}

pub type FpPoly = PolyRing<PrimeField>;
pub type QPoly = PolyRing<Rationals>;

impl FpPoly {
    pub fn over_prime(p: u64) -> Result<Self, Error> {
        Ok(PolyRing::new(PrimeField::new(p)?))
    }
}

impl QPoly {
    pub fn rational() -> Self {
        PolyRing::new(Rationals)
    }
}
