//! Seeded random sheaf complexes on finite posets.
//!
//! An instance is a direct sum of two kinds of pieces, then conjugated by
//! random unimodular base changes at every point:
//! - a complex of representable sheaves `P_x` (`R` on `{z >= x}`), whose
//!   differentials are matrices supported on `x_target <= x_source`;
//! - constant complexes on convex subsets (`Z_A ⊗ C`).

use std::collections::BTreeMap;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ring::CoeffRing;
use crate::site::{PosetSite, SheafComplex};
use crate::spectral::{degeneration_check_ht, h1_witness};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Profile {
    /// Any valid complex.
    Free,
    /// `H^i(RΓ K)` is `xi`-torsion-free for all `i`.
    H1,
    /// H1 holds but Hodge–Tate degeneration fails.
    Adversarial,
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "free" => Ok(Profile::Free),
            "h1" => Ok(Profile::H1),
            "adversarial" => Ok(Profile::Adversarial),
            _ => Err(Error::Parse(format!("unknown profile {s}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GenConfig {
    /// Stalk degrees lie in `0..=max_degree`.
    pub max_degree: i64,
    /// Stalk ranks are at most this.
    pub max_rank: usize,
    /// Attempts before giving up on a filtered profile.
    pub budget: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_degree: 2,
            max_rank: 3,
            budget: 200,
        }
    }
}

/// Deterministic in `(site, profile, seed, cfg)`.
pub fn generate_instance<R: CoeffRing>(
    ring: &R,
    site: &PosetSite,
    profile: Profile,
    seed: u64,
    cfg: &GenConfig,
) -> Result<SheafComplex<R>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match profile {
        Profile::Free => Ok(random_sheaf(ring, site, &mut rng, cfg, false)),
        Profile::H1 => {
            for _ in 0..cfg.budget {
                let k = random_sheaf(ring, site, &mut rng, cfg, true);
                if h1_witness(&k).is_none() {
                    return Ok(k);
                }
            }
            Err(Error::GenerationBudgetExceeded(cfg.budget))
        }
        Profile::Adversarial => {
            for _ in 0..cfg.budget {
                let k = random_sheaf(ring, site, &mut rng, cfg, true);
                if h1_witness(&k).is_none() && !degeneration_check_ht(&k)?.degenerates {
                    return Ok(k);
                }
            }
            Err(Error::GenerationBudgetExceeded(cfg.budget))
        }
    }
}

/// A free complex: the global sections of a free-profile instance on a point.
pub fn random_complex<R: CoeffRing>(ring: &R, seed: u64, cfg: &GenConfig) -> Complex<R> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_sheaf(ring, &PosetSite::point(), &mut rng, cfg, false).stalk(0).clone()
}

/// A random coefficient. With `tame`, only `0` and units, so that torsion
/// can only come from the base changes cancelling (it cannot).
fn coeff<R: CoeffRing>(ring: &R, rng: &mut ChaCha8Rng, tame: bool) -> R::Elem {
    let xi = ring.xi();
    let choice = if tame { rng.gen_range(0..4) } else { rng.gen_range(0..8) };
    match choice {
        0 | 1 => ring.zero(),
        2 => ring.one(),
        3 => ring.neg(&ring.one()),
        4 => xi,
        5 => ring.mul(&xi, &xi),
        6 => ring.add(&xi, &ring.one()),
        _ => ring.from_i64(rng.gen_range(-3..=3)),
    }
}

/// A multiplier for elementary base changes; any element will do.
fn multiplier<R: CoeffRing>(ring: &R, rng: &mut ChaCha8Rng) -> R::Elem {
    match rng.gen_range(0..5) {
        0 => ring.xi(),
        1 => ring.neg(&ring.one()),
        _ => ring.from_i64(rng.gen_range(-2..=2)),
    }
}

/// A random unimodular `n x n` matrix and its inverse.
pub fn random_unimodular<R: CoeffRing>(ring: &R, n: usize, rng: &mut ChaCha8Rng) -> (Matrix<R::Elem>, Matrix<R::Elem>) {
    let mut g = Matrix::identity(ring, n);
    let mut inv = Matrix::identity(ring, n);
    if n < 2 {
        return (g, inv);
    }
    for _ in 0..2 * n {
        let a = rng.gen_range(0..n);
        let b = (a + rng.gen_range(1..n)) % n;
        let c = multiplier(ring, rng);
        // g <- E g with E = I + c e_{ab}; inv <- inv E^{-1}
        g.add_row_multiple(ring, a, b, &c);
        inv.add_col_multiple(ring, b, a, &ring.neg(&c));
    }
    (g, inv)
}

/// Generators of the representable part: `(degree, point, is_source)`.
struct Gen {
    point: usize,
    source: bool,
}

fn random_sheaf<R: CoeffRing>(
    ring: &R,
    site: &PosetSite,
    rng: &mut ChaCha8Rng,
    cfg: &GenConfig,
    tame: bool,
) -> SheafComplex<R> {
    let n_pts = site.len();
    let hi = rng.gen_range(1..=cfg.max_degree.max(1));
    let degrees = (hi + 1) as usize;
    let budget_rep = rng.gen_range(0..=cfg.max_rank);
    let budget_const = cfg.max_rank - budget_rep;

    // representable part
    let gens: Vec<Vec<Gen>> = (0..degrees)
        .map(|_| {
            let c = rng.gen_range(0..=budget_rep);
            (0..c)
                .map(|_| Gen {
                    point: rng.gen_range(0..n_pts),
                    source: rng.gen_bool(0.5),
                })
                .collect()
        })
        .collect();
    let mut d: Vec<Matrix<R::Elem>> = (0..degrees - 1)
        .map(|i| {
            let (src, tgt) = (&gens[i], &gens[i + 1]);
            let mut m = Matrix::zeros(ring, tgt.len(), src.len());
            for (j, s) in src.iter().enumerate() {
                for (r, t) in tgt.iter().enumerate() {
                    if s.source && !t.source && site.leq(t.point, s.point) {
                        m.set(r, j, coeff(ring, rng, tame));
                    }
                }
            }
            m
        })
        .collect();
    // global automorphisms respecting supports
    let mut autos = Vec::new();
    for g in &gens {
        let n = g.len();
        let mut a = Matrix::identity(ring, n);
        let mut a_inv = Matrix::identity(ring, n);
        for _ in 0..n {
            if n < 2 {
                break;
            }
            let x = rng.gen_range(0..n);
            let y = rng.gen_range(0..n);
            if x == y || !site.leq(g[x].point, g[y].point) {
                continue;
            }
            let c = multiplier(ring, rng);
            a.add_row_multiple(ring, x, y, &c);
            a_inv.add_col_multiple(ring, y, x, &ring.neg(&c));
        }
        autos.push((a, a_inv));
    }
    for (i, di) in d.iter_mut().enumerate() {
        *di = Matrix::mul(ring, &autos[i + 1].0, &Matrix::mul(ring, di, &autos[i].1));
    }

    // constant pieces on convex subsets
    struct Piece<E> {
        support: Vec<bool>,
        lo: usize,
        complex: Vec<Matrix<E>>, // ranks implied; single term or shell
        ranks: Vec<usize>,
    }
    let mut pieces = Vec::new();
    let mut used = vec![0usize; degrees];
    for _ in 0..budget_const {
        let support = random_convex(site, rng);
        if rng.gen_bool(0.5) || degrees < 2 {
            let k = rng.gen_range(0..degrees);
            if used[k] >= budget_const {
                continue;
            }
            used[k] += 1;
            pieces.push(Piece {
                support,
                lo: k,
                complex: Vec::new(),
                ranks: vec![1],
            });
        } else {
            let k = rng.gen_range(0..degrees - 1);
            if used[k] >= budget_const || used[k + 1] >= budget_const {
                continue;
            }
            used[k] += 1;
            used[k + 1] += 1;
            let c = coeff(ring, rng, tame);
            pieces.push(Piece {
                support,
                lo: k,
                complex: vec![Matrix::scalar(ring, 1, &c)],
                ranks: vec![1, 1],
            });
        }
    }

    // assemble stalks: coordinates are representable generators with
    // point <= z, then pieces supported at z
    let coords = |z: usize, i: usize| -> (Vec<usize>, Vec<usize>) {
        let rep: Vec<usize> = (0..gens[i].len()).filter(|&j| site.leq(gens[i][j].point, z)).collect();
        let pcs: Vec<usize> = (0..pieces.len())
            .filter(|&p| {
                let pc = &pieces[p];
                pc.support[z] && i >= pc.lo && i < pc.lo + pc.ranks.len()
            })
            .collect();
        (rep, pcs)
    };
    let mut stalks = Vec::new();
    for z in 0..n_pts {
        let ranks: Vec<usize> = (0..degrees)
            .map(|i| {
                let (a, b) = coords(z, i);
                a.len() + b.len()
            })
            .collect();
        let diffs = (0..degrees - 1)
            .map(|i| {
                let (a0, b0) = coords(z, i);
                let (a1, b1) = coords(z, i + 1);
                let mut m = Matrix::zeros(ring, a1.len() + b1.len(), a0.len() + b0.len());
                for (r, &t) in a1.iter().enumerate() {
                    for (c, &s) in a0.iter().enumerate() {
                        m.set(r, c, d[i].get(t, s).clone());
                    }
                }
                for (c, &p) in b0.iter().enumerate() {
                    if let Some(r) = b1.iter().position(|&q| q == p) {
                        let pc = &pieces[p];
                        m.set(a1.len() + r, a0.len() + c, pc.complex[i - pc.lo].get(0, 0).clone());
                    }
                }
                m
            })
            .collect();
        stalks.push(Complex::new(ring.clone(), 0, ranks, diffs).expect("generated shapes"));
    }
    let mut res = BTreeMap::new();
    for (x, y) in site.strict_pairs() {
        let maps: Vec<Matrix<R::Elem>> = (0..degrees)
            .map(|i| {
                let (ax, bx) = coords(x, i);
                let (ay, by) = coords(y, i);
                let mut m = Matrix::zeros(ring, ay.len() + by.len(), ax.len() + bx.len());
                for (c, &s) in ax.iter().enumerate() {
                    let r = ay.iter().position(|&t| t == s).expect("up-sets grow");
                    m.set(r, c, ring.one());
                }
                for (c, &p) in bx.iter().enumerate() {
                    if let Some(r) = by.iter().position(|&q| q == p) {
                        m.set(ay.len() + r, ax.len() + c, ring.one());
                    }
                }
                m
            })
            .collect();
        res.insert((x, y), maps);
    }

    // pointwise base changes
    let changes: Vec<Vec<(Matrix<R::Elem>, Matrix<R::Elem>)>> = stalks
        .iter()
        .map(|k: &Complex<R>| (0..degrees as i64).map(|i| random_unimodular(ring, k.rank(i), rng)).collect())
        .collect();
    let stalks: Vec<Complex<R>> = stalks
        .iter()
        .enumerate()
        .map(|(z, k)| {
            let diffs = (0..degrees - 1)
                .map(|i| {
                    Matrix::mul(ring, &changes[z][i + 1].0, &Matrix::mul(ring, &k.d(i as i64), &changes[z][i].1))
                })
                .collect();
            Complex::new(ring.clone(), 0, k.ranks().to_vec(), diffs).expect("conjugated shapes")
        })
        .collect();
    let res = res
        .into_iter()
        .map(|((x, y), maps)| {
            let maps = maps
                .iter()
                .enumerate()
                .map(|(i, m)| Matrix::mul(ring, &changes[y][i].0, &Matrix::mul(ring, m, &changes[x][i].1)))
                .collect();
            ((x, y), maps)
        })
        .collect();
    SheafComplex::new(site.clone(), stalks, res).expect("generated sheaf is valid")
}

/// An up-set, a down-set, a singleton or everything.
fn random_convex(site: &PosetSite, rng: &mut ChaCha8Rng) -> Vec<bool> {
    let n = site.len();
    let x = rng.gen_range(0..n);
    match rng.gen_range(0..4) {
        0 => (0..n).map(|z| site.leq(x, z)).collect(),
        1 => (0..n).map(|z| site.leq(z, x)).collect(),
        2 => (0..n).map(|z| z == x).collect(),
        _ => vec![true; n],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Integers;

    #[test]
    fn deterministic_and_valid() {
        let r = Integers::new(2).unwrap();
        let cfg = GenConfig::default();
        for site in [PosetSite::point(), PosetSite::pseudo_circle(), PosetSite::chain3()] {
            for seed in 0..5 {
                let a = generate_instance(&r, &site, Profile::Free, seed, &cfg).unwrap();
                let b = generate_instance(&r, &site, Profile::Free, seed, &cfg).unwrap();
                assert_eq!(a, b);
                a.validate().unwrap();
                let h = generate_instance(&r, &site, Profile::H1, seed, &cfg).unwrap();
                assert!(h1_witness(&h).is_none());
            }
        }
    }
}
