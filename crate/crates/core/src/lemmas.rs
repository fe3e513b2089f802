//! Every complex-level check in one pass.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bockstein::{beta_squares_to_zero, bockstein_complex, verify_eta_comparison, verify_lift_independence};
use crate::complex::Complex;
use crate::decalage::{connecting_factorization, graded_piece, split_mod_xi, verify_eta_m_cohomology, verify_modxi_subquotient};
use crate::error::Result;
use crate::report::Report;
use crate::ring::CoeffRing;

/// Lift re-randomizations per instance.
pub const LIFT_TRIALS: usize = 5;

/// Cohomology of `eta_m`, graded pieces, the mod-`xi` subquotient, the
/// splitting and connecting map for every `m` in `0..=hi + 2`, then the
/// Bockstein checks. Lift perturbations are drawn from `seed`.
pub fn lemma_suite<R: CoeffRing>(k: &Complex<R>, seed: u64) -> Result<Report> {
    let mut report = Report::new();
    for m in 0..=k.hi() + 2 {
        report.extend(verify_eta_m_cohomology(k, m)?);
        report.extend(graded_piece(k, m)?.verify());
        report.extend(verify_modxi_subquotient(k, m)?);
        report.extend(split_mod_xi(k, m)?.1);
        report.extend(connecting_factorization(k, m)?);
    }
    report.extend(verify_eta_comparison(k)?);
    let bock = bockstein_complex(k)?;
    report.push("bockstein-square-zero", beta_squares_to_zero(&bock), "beta o beta = 0");
    let ring = k.ring();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stable = true;
    for _ in 0..LIFT_TRIALS {
        let mut perturb = |n: usize| (0..n).map(|_| ring.from_i64(rng.gen_range(-4..=4))).collect();
        stable &= verify_lift_independence(k, &mut perturb)?;
    }
    report.push(
        "bockstein-lift-independence",
        stable,
        format!("{LIFT_TRIALS} re-randomized lifts"),
    );
    Ok(report)
}
