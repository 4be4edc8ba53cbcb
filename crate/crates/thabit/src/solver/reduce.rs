//! Steps driven by the reduction lemma (irrational `tau`).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use super::steps::{Step, StepCase};
use super::{
    CaseTrace, OutcomeKind, OutcomeRecord, Pin, ProblemSummary, Resolution, SolverOptions,
};
use crate::bounds::TheoremBounds;
use crate::contfrac::ContinuedFraction;
use crate::enumerate::EquationSpec;
use crate::error::{Error, Result};
use crate::numerics::{sci_string, Interval, PrecisionPolicy, RefinableReal, Round};
use crate::reduction::{
    apply_reduction_with, check_candidate_inequality, ConvergentStrategy, InequalityCheck, LogForm,
    ReductionOutcome, ReductionProblem,
};

pub(crate) fn interval_string(iv: &Interval) -> String {
    sci_string(&iv.midpoint().to_rational(), 6, Round::Down)
}

/// Runs every case of `step` through the lemma.
pub(crate) fn reduce_step(
    spec: &EquationSpec,
    step: Step,
    cases: Vec<StepCase>,
    tb: &TheoremBounds,
    opts: &SolverOptions,
) -> Result<Vec<CaseTrace>> {
    let (t, base) = step.tau(spec);
    let (t_r, base_r) = (
        BigRational::from_integer(t.into()),
        BigRational::from_integer(base.into()),
    );
    let tau = RefinableReal::log_ratio(&t_r, &base_r)?;
    if tau.witness().is_some() {
        return Err(Error::RationalTau {
            b: spec.b,
            g: spec.g,
        });
    }
    let (c, k) = step.a_const(spec);
    let a = RefinableReal::quotient(
        &RefinableReal::rational(c),
        &RefinableReal::log(&BigRational::from_integer(k.into()))?,
    );
    let big_b = BigRational::from_integer(step.big_b(spec).into());
    let m_bound = step.m_bound(tb);

    // One shared expansion of tau, extended far enough for every case.
    let mut cf = ContinuedFraction::new(tau.clone(), opts.policy.clone());
    let first = cf.first_above(&(&m_bound * 6))?;
    if let ConvergentStrategy::RetryNext(r) = opts.strategy {
        // Running out here only means fewer retries are available.
        let _ = cf.ensure(first.index + 1 + r);
    }

    cases
        .into_par_iter()
        .map(|case| {
            let mu = RefinableReal::log_ratio(&case.u, &base_r)?;
            let mut problem =
                ReductionProblem::new(tau.clone(), mu, a.clone(), big_b.clone(), m_bound.clone())?;
            problem.exact = Some(LogForm {
                t: t_r.clone(),
                u: case.u.clone(),
                base: base_r.clone(),
            });
            reduce_case(spec, step, &case, &problem, &mut cf.clone(), opts)
        })
        .collect()
}

fn summary(problem: &ReductionProblem) -> ProblemSummary {
    ProblemSummary {
        tau: problem.tau.label().to_string(),
        mu: problem.mu.label().to_string(),
        a: problem.a.label().to_string(),
        b: problem.b.to_string(),
        m_bound: Some(problem.m_bound.to_string()),
    }
}

/// Nearest integer to `x*tau + mu`.
fn nearest_y(problem: &ReductionProblem, x: &BigInt, policy: &PrecisionPolicy) -> Result<BigInt> {
    let extra = x.bits() as u32 + 8;
    for bits in policy.schedule() {
        let v = problem
            .tau
            .eval(bits + extra)
            .mul_integer(x)
            .add(&problem.mu.eval(bits + extra));
        if let Some(n) = v.floor_nearest() {
            return Ok(n);
        }
    }
    Err(Error::PrecisionExhausted {
        bits: policy.max_bits,
        context: format!("rounding the form at {x}"),
    })
}

fn reduce_case(
    spec: &EquationSpec,
    step: Step,
    case: &StepCase,
    problem: &ReductionProblem,
    cf: &mut ContinuedFraction,
    opts: &SolverOptions,
) -> Result<CaseTrace> {
    let outcome = apply_reduction_with(problem, cf, &opts.policy, opts.strategy)?;
    let eps = outcome.epsilon();
    let mut record = OutcomeRecord {
        kind: OutcomeKind::Bound,
        epsilon_sign: Some(eps.compare_zero()),
        epsilon: Some(interval_string(eps)),
        q: Some(outcome.q_used().q.to_string()),
        m0: None,
        r: None,
        w_threshold: None,
    };
    let (resolution, w, pin) = match &outcome {
        ReductionOutcome::BoundOnW { w_max, .. } => (Resolution::BoundAccepted, *w_max, None),
        ReductionOutcome::NoCandidate {
            m0, w_threshold, r, ..
        } => {
            record.kind = OutcomeKind::NoCandidate;
            record.m0 = Some(m0.to_string());
            record.r = Some(r.to_string());
            record.w_threshold = Some(*w_threshold);
            (Resolution::CandidateContradiction, *w_threshold, None)
        }
        ReductionOutcome::Candidate {
            m0, w_threshold, r, ..
        } => {
            record.kind = OutcomeKind::Candidate;
            record.m0 = Some(m0.to_string());
            record.r = Some(r.to_string());
            record.w_threshold = Some(*w_threshold);
            resolve_candidate(spec, step, case, problem, m0, *w_threshold, &opts.policy)?
        }
    };
    Ok(CaseTrace {
        step: step.kind(),
        d1: case.d1,
        d2: case.d2,
        gap: case.gap,
        problem: summary(problem),
        outcome: record,
        resolution,
        w,
        pin,
    })
}

/// Settles the one `x` that part (b) leaves open: either it cannot reach
/// past the threshold (a contradiction) or the largest `w` it allows is
/// pinned into the bound.
fn resolve_candidate(
    spec: &EquationSpec,
    step: Step,
    case: &StepCase,
    problem: &ReductionProblem,
    x: &BigInt,
    threshold: i64,
    policy: &PrecisionPolicy,
) -> Result<(Resolution, i64, Option<Pin>)> {
    let (x_min, _) = step.xy_minimum();
    if *x < BigInt::from(x_min) {
        return Ok((Resolution::CandidateContradiction, threshold, None));
    }
    let y = nearest_y(problem, x, policy)?;
    if problem.vanishes_at(x, &y) == Some(true) {
        // The form is exactly zero here; the lemma says nothing, the exact
        // equation decides.
        return Ok(match step.vanishing_solution_w(spec, case, x, &y) {
            Some(w) if w > threshold => (
                Resolution::CandidatePinned,
                w,
                Some(Pin {
                    x: x.to_string(),
                    y: y.to_string(),
                    w,
                    vanishing: true,
                }),
            ),
            _ => (Resolution::CandidateContradiction, threshold, None),
        });
    }
    let mut w = threshold;
    while check_candidate_inequality(problem, x, w + 1, policy)? == InequalityCheck::Holds {
        w += 1;
    }
    // The size relation at the largest reachable w caps x; beyond it no
    // w above the threshold is possible either.
    let too_large = step
        .x_limit(spec, w)
        .is_some_and(|lim| *x > BigInt::from(lim));
    if w == threshold || too_large {
        Ok((Resolution::CandidateContradiction, threshold, None))
    } else {
        debug_assert!(!y.is_zero() || !x.is_zero());
        Ok((
            Resolution::CandidatePinned,
            w,
            Some(Pin {
                x: x.to_string(),
                y: y.to_string(),
                w,
                vanishing: false,
            }),
        ))
    }
}
