//! Sampled checking of the factor-absorption property: whenever a
//! product `r*q` lands in the subalgebra, one of the factors does.
//! Extending maximal subalgebras satisfy this unconditionally, so the
//! expected counterexample count is zero; the report exists to surface
//! implementation bugs, not mathematical ones.

use super::descriptor::SubalgebraDescriptor;
use super::oracle::membership;
use super::MaxsubError;
use crate::field::FieldElem;
use crate::laurent::LaurentPoly;
use crate::rat::Rat;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

#[derive(Debug, Clone)]
pub struct P2Report {
    /// Pairs with `r*q` in the subalgebra that were actually tested.
    pub pairs_tested: usize,
    /// Sampled pairs drawn in total (including rejected ones).
    pub attempts: usize,
    /// Pairs skipped because a verdict hit the precision cap.
    pub undetermined_skips: usize,
    /// Violations of "r in A or q in A" (rendered pairs).
    pub counterexamples: Vec<(String, String)>,
}

/// Rejection-sample `trials` pairs `(r, q)` with `r*q` in the
/// subalgebra and check that one factor belongs.
pub fn p2_sample_check(
    descriptor: &SubalgebraDescriptor,
    trials: usize,
    t_bound: i64,
    y_bound: u32,
    seed: u64,
    cap: &Rat,
) -> Result<P2Report, MaxsubError> {
    let field = descriptor.field();
    let mut rng = StdRng::seed_from_u64(seed);
    let mut report = P2Report {
        pairs_tested: 0,
        attempts: 0,
        undetermined_skips: 0,
        counterexamples: Vec::new(),
    };
    let max_attempts = trials.saturating_mul(2000).max(10_000);
    while report.pairs_tested < trials && report.attempts < max_attempts {
        report.attempts += 1;
        let r = random_poly(&mut rng, &field, t_bound, y_bound);
        let q = random_poly(&mut rng, &field, t_bound, y_bound);
        if r.is_zero() || q.is_zero() {
            continue;
        }
        let rq = r.mul(&q);
        let v_rq = membership(&rq, descriptor, cap)?;
        if v_rq == super::MembershipVerdict::Undetermined {
            report.undetermined_skips += 1;
            continue;
        }
        if !v_rq.is_in() {
            continue;
        }
        let v_r = membership(&r, descriptor, cap)?;
        let v_q = membership(&q, descriptor, cap)?;
        if v_r == super::MembershipVerdict::Undetermined
            || v_q == super::MembershipVerdict::Undetermined
        {
            report.undetermined_skips += 1;
            continue;
        }
        report.pairs_tested += 1;
        if !v_r.is_in() && !v_q.is_in() {
            report
                .counterexamples
                .push((r.render("t", "y"), q.render("t", "y")));
        }
    }
    Ok(report)
}

fn random_poly(
    rng: &mut StdRng,
    field: &std::sync::Arc<crate::field::CycloField>,
    t_bound: i64,
    y_bound: u32,
) -> LaurentPoly {
    let n_terms = rng.gen_range(1..=3);
    let mut out = LaurentPoly::zero(field);
    for _ in 0..n_terms {
        let t_exp = rng.gen_range(-t_bound..=t_bound);
        let y_exp = rng.gen_range(0..=y_bound);
        let coeff = *[-2i64, -1, 1, 2][..].get(rng.gen_range(0..4)).unwrap();
        out = out.add(&LaurentPoly::monomial(
            field,
            t_exp,
            y_exp,
            FieldElem::from_int(field, coeff),
        ));
    }
    out
}
