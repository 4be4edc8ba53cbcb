//! The reduction lemma: turn a huge bound `M` on `m` into a small bound on
//! `w` in
//!
//! ```text
//! 0 < |m*tau - n + mu| < A * B^(-w),    1 <= m <= M,
//! ```
//!
//! using a convergent `p/q` of `tau` with `q > 6M` and
//! `eps = ||mu*q|| - M*||tau*q||`. A positive `eps` bounds `w` outright. A
//! nonpositive one leaves at most one residue `m0` (from `m*p = -r mod q`)
//! that can reach past `log(3Aq)/log B`, and the caller deals with it.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::contfrac::{ContinuedFraction, Convergent};
use crate::error::{Error, Result};
use crate::numerics::{
    interval_log, interval_log_of, rational_floor_nearest, rational_nearest_distance, Interval,
    PrecisionPolicy, RefinableReal, ZeroCmp,
};

/// `tau = log t / log base` and `mu = log u / log base` for positive
/// rationals, kept so that vanishing of the form can be decided exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogForm {
    pub t: BigRational,
    pub u: BigRational,
    pub base: BigRational,
}

/// One instance of the lemma.
///
/// `a` is a real (not necessarily rational) because the pipeline's
/// constants are of the form `c / log g`.
#[derive(Debug, Clone)]
pub struct ReductionProblem {
    pub tau: RefinableReal,
    pub mu: RefinableReal,
    pub a: RefinableReal,
    pub b: BigRational,
    pub m_bound: BigInt,
    pub exact: Option<LogForm>,
}

impl ReductionProblem {
    pub fn new(
        tau: RefinableReal,
        mu: RefinableReal,
        a: RefinableReal,
        b: BigRational,
        m_bound: BigInt,
    ) -> Result<Self> {
        if b <= BigRational::one() {
            return Err(Error::Precondition(format!("B = {b} must exceed 1")));
        }
        if m_bound < BigInt::one() {
            return Err(Error::Precondition(format!(
                "M = {m_bound} must be at least 1"
            )));
        }
        if a.eval(64).compare_zero() != ZeroCmp::Positive {
            return Err(Error::Precondition(format!(
                "A = {} must be positive",
                a.label()
            )));
        }
        Ok(ReductionProblem {
            tau,
            mu,
            a,
            b,
            m_bound,
            exact: None,
        })
    }

    /// Problem with `tau = log t/log base`, `mu = log u/log base`.
    pub fn from_log_form(
        form: LogForm,
        a: RefinableReal,
        b: BigRational,
        m_bound: BigInt,
    ) -> Result<Self> {
        let tau = RefinableReal::log_ratio(&form.t, &form.base)?;
        let mu = RefinableReal::log_ratio(&form.u, &form.base)?;
        let mut p = ReductionProblem::new(tau, mu, a, b, m_bound)?;
        p.exact = Some(form);
        Ok(p)
    }

    /// Whether `m*tau + mu` is exactly the integer `n`. `None` when that
    /// cannot be settled (no exact form, or numbers too large to compare
    /// and no modular witness against it).
    pub fn vanishes_at(&self, m: &BigInt, n: &BigInt) -> Option<bool> {
        if let (Some(t), Some(u)) = (self.tau.witness(), self.mu.witness()) {
            return Some(
                BigRational::from_integer(m.clone()) * t + u
                    == BigRational::from_integer(n.clone()),
            );
        }
        let form = self.exact.as_ref()?;
        power_identity(form, m, n)
    }
}

/// Decides `t^m * u == base^n` for `m >= 0`.
fn power_identity(form: &LogForm, m: &BigInt, n: &BigInt) -> Option<bool> {
    if m.is_negative() {
        return None;
    }
    // Cross-multiplied: tn^m * un * bd^n == td^m * ud * bn^n, with base
    // moved to the other side when n < 0.
    let (tn, td) = (form.t.numer(), form.t.denom());
    let (un, ud) = (form.u.numer(), form.u.denom());
    let (bn, bd) = if n.is_negative() {
        (form.base.denom(), form.base.numer())
    } else {
        (form.base.numer(), form.base.denom())
    };
    let n_abs = n.abs();
    let cost = m.to_f64().unwrap_or(f64::INFINITY) * (tn.bits().max(td.bits()) as f64)
        + n_abs.to_f64().unwrap_or(f64::INFINITY) * (bn.bits().max(bd.bits()) as f64);
    if cost < (1u64 << 22) as f64 {
        let m = m.to_usize()?;
        let n = n_abs.to_usize()?;
        let lhs = num_traits::pow(tn.clone(), m) * un * num_traits::pow(bd.clone(), n);
        let rhs = num_traits::pow(td.clone(), m) * ud * num_traits::pow(bn.clone(), n);
        return Some(lhs == rhs);
    }
    // Equal integers agree modulo every prime; one disagreement refutes.
    const PRIMES: [u64; 5] = [
        2305843009213693951,
        4294967291,
        1000000007,
        998244353,
        1000000009,
    ];
    for p in PRIMES {
        let p = BigInt::from(p);
        let side = |x: &BigInt, y: &BigInt, z: &BigInt| -> BigInt {
            (x.modpow(m, &p) * y % &p * z.modpow(&n_abs, &p)) % &p
        };
        if side(tn, un, bd) != side(td, ud, bn) {
            return Some(false);
        }
    }
    None
}

/// Which convergent feeds the lemma.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum ConvergentStrategy {
    /// Smallest `q > 6M`: exactly the lemma's hypothesis.
    #[default]
    FirstAboveSixM,
    /// Like the default, but if `eps <= 0` try up to `k` further
    /// convergents looking for a positive one.
    RetryNext(usize),
}

#[derive(Debug, Clone)]
pub enum ReductionOutcome {
    /// No solution with `w > w_max`.
    BoundOnW {
        w_max: i64,
        q_used: Convergent,
        epsilon: Interval,
    },
    /// Only `m = m0` can have `w > w_threshold`.
    Candidate {
        m0: BigInt,
        w_threshold: i64,
        r: BigInt,
        q_used: Convergent,
        epsilon: Interval,
    },
    /// The residue exceeds `M`: no solution with `w > w_threshold`.
    NoCandidate {
        m0: BigInt,
        w_threshold: i64,
        r: BigInt,
        q_used: Convergent,
        epsilon: Interval,
    },
}

impl ReductionOutcome {
    pub fn q_used(&self) -> &Convergent {
        match self {
            ReductionOutcome::BoundOnW { q_used, .. }
            | ReductionOutcome::Candidate { q_used, .. }
            | ReductionOutcome::NoCandidate { q_used, .. } => q_used,
        }
    }

    pub fn epsilon(&self) -> &Interval {
        match self {
            ReductionOutcome::BoundOnW { epsilon, .. }
            | ReductionOutcome::Candidate { epsilon, .. }
            | ReductionOutcome::NoCandidate { epsilon, .. } => epsilon,
        }
    }

    /// The bound on `w` that holds for every `m` other than a candidate.
    pub fn generic_w_bound(&self) -> i64 {
        match self {
            ReductionOutcome::BoundOnW { w_max, .. } => *w_max,
            ReductionOutcome::Candidate { w_threshold, .. }
            | ReductionOutcome::NoCandidate { w_threshold, .. } => *w_threshold,
        }
    }
}

/// `||x*q||` at `bits`, exact when `x` is rational.
fn distance_times(x: &RefinableReal, q: &BigInt, bits: u32) -> Option<Interval> {
    if let Some(w) = x.witness() {
        let v = w * BigRational::from_integer(q.clone());
        return Some(Interval::from_rational(
            &rational_nearest_distance(&v),
            bits,
        ));
    }
    x.eval(bits).mul_integer(q).nearest_integer_distance()
}

/// `eps` at one precision, `None` when an enclosure is indeterminate.
pub fn compute_epsilon_at(
    problem: &ReductionProblem,
    c: &Convergent,
    bits: u32,
) -> Option<Interval> {
    let dm = distance_times(&problem.mu, &c.q, bits)?;
    let dt = distance_times(&problem.tau, &c.q, bits)?;
    Some(dm.sub(&dt.mul_integer(&problem.m_bound)))
}

/// `eps`, escalating until its sign is known. Returns the last enclosure
/// (possibly sign-ambiguous) at the top precision, or `None` if even that
/// one is indeterminate.
pub fn compute_epsilon(
    problem: &ReductionProblem,
    c: &Convergent,
    policy: &PrecisionPolicy,
) -> Option<Interval> {
    let mut last = None;
    for bits in policy.schedule() {
        if let Some(eps) = compute_epsilon_at(problem, c, bits) {
            if eps.compare_zero() != ZeroCmp::Ambiguous {
                return Some(eps);
            }
            last = Some(eps);
        }
    }
    last
}

/// `log B`, memoized: every case of a step shares the same `B`.
fn log_base(b: &BigRational, bits: u32) -> Interval {
    static CACHE: OnceLock<Mutex<HashMap<(BigRational, u32), Interval>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (b.clone(), bits);
    if let Some(iv) = cache.lock().unwrap().get(&key) {
        return iv.clone();
    }
    let iv = interval_log(b, bits).expect("B > 1");
    cache.lock().unwrap().insert(key, iv.clone());
    iv
}

/// Part (a) bound: largest `w` with `w < log(A q / eps)/log B` possible.
fn part_a_bound(problem: &ReductionProblem, q: &BigInt, eps: &Interval) -> i64 {
    let bits = eps.precision_bits();
    let aq = problem.a.eval(bits).mul_integer(q);
    let ratio = aq.div(eps).expect("eps is positive");
    let x = interval_log_of(&ratio)
        .expect("positive")
        .div(&log_base(&problem.b, bits))
        .expect("log B > 0");
    x.largest_integer_below().to_i64().expect("w fits in i64")
}

/// Part (b) threshold `floor(log(3 A q)/log B)`, taken from the upper
/// endpoint so it never undershoots.
fn part_b_threshold(problem: &ReductionProblem, q: &BigInt, bits: u32) -> i64 {
    let three_aq = problem.a.eval(bits).mul_integer(&(q * 3));
    let x = interval_log_of(&three_aq)
        .expect("positive")
        .div(&log_base(&problem.b, bits))
        .expect("log B > 0");
    x.hi().floor().to_i64().expect("w fits in i64")
}

fn nearest_of_product(
    problem: &ReductionProblem,
    q: &BigInt,
    policy: &PrecisionPolicy,
) -> Result<BigInt> {
    if let Some(w) = problem.mu.witness() {
        return Ok(rational_floor_nearest(
            &(w * BigRational::from_integer(q.clone())),
        ));
    }
    for bits in policy.schedule() {
        if let Some(r) = problem.mu.eval(bits).mul_integer(q).floor_nearest() {
            return Ok(r);
        }
    }
    Err(Error::PrecisionExhausted {
        bits: policy.max_bits,
        context: format!("rounding {} * {q}", problem.mu.label()),
    })
}

/// Applies the lemma.
pub fn apply_reduction(
    problem: &ReductionProblem,
    policy: &PrecisionPolicy,
    strategy: ConvergentStrategy,
) -> Result<ReductionOutcome> {
    let mut cf = ContinuedFraction::new(problem.tau.clone(), policy.clone());
    apply_reduction_with(problem, &mut cf, policy, strategy)
}

/// As [`apply_reduction`], reusing an expansion of `tau` that may be shared
/// across many problems with the same `tau`.
pub fn apply_reduction_with(
    problem: &ReductionProblem,
    cf: &mut ContinuedFraction,
    policy: &PrecisionPolicy,
    strategy: ConvergentStrategy,
) -> Result<ReductionOutcome> {
    let six_m = &problem.m_bound * 6;
    let first = cf.first_above(&six_m)?;
    let retries = match strategy {
        ConvergentStrategy::FirstAboveSixM => 0,
        ConvergentStrategy::RetryNext(k) => k,
    };
    let mut first_eps = None;
    let mut c = first.clone();
    for attempt in 0..=retries {
        if attempt > 0 {
            c = cf.convergent(c.index + 1)?;
        }
        let eps =
            compute_epsilon(problem, &c, policy).ok_or_else(|| Error::PrecisionExhausted {
                bits: policy.max_bits,
                context: format!("evaluating eps for q = {}", c.q),
            })?;
        if eps.compare_zero() == ZeroCmp::Positive {
            let w_max = part_a_bound(problem, &c.q, &eps);
            return Ok(ReductionOutcome::BoundOnW {
                w_max,
                q_used: c,
                epsilon: eps,
            });
        }
        if first_eps.is_none() {
            first_eps = Some(eps);
        }
    }

    // Part (b) with the first convergent; an ambiguous sign lands here too.
    let epsilon = first_eps.expect("at least one attempt");
    let (p, q) = (&first.p, &first.q);
    let r = nearest_of_product(problem, q, policy)?;
    let inv = mod_inverse(p, q).expect("convergents are coprime");
    let m0 = (-&r * inv).mod_floor(q);
    let w_threshold = part_b_threshold(problem, q, epsilon.precision_bits());
    if m0 > problem.m_bound {
        Ok(ReductionOutcome::NoCandidate {
            m0,
            w_threshold,
            r,
            q_used: first,
            epsilon,
        })
    } else {
        Ok(ReductionOutcome::Candidate {
            m0,
            w_threshold,
            r,
            q_used: first,
            epsilon,
        })
    }
}

fn mod_inverse(p: &BigInt, q: &BigInt) -> Option<BigInt> {
    let e = p.mod_floor(q).extended_gcd(q);
    e.gcd.is_one().then(|| e.x.mod_floor(q))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InequalityCheck {
    Holds,
    Fails,
}

/// Whether some integer `n` gives `0 < |m*tau - n + mu| < A * B^(-w)`.
///
/// The best `n` is the nearest integer to `m*tau + mu`, unless that makes
/// the form vanish, in which case the best nonzero value is exactly 1.
pub fn check_candidate_inequality(
    problem: &ReductionProblem,
    m: &BigInt,
    w: i64,
    policy: &PrecisionPolicy,
) -> Result<InequalityCheck> {
    let scale = |bits: u32| -> Interval {
        // A * B^(-w), exact up to the enclosure of A.
        let bw = if w >= 0 {
            BigRational::one() / num_traits::pow(problem.b.clone(), w as usize)
        } else {
            num_traits::pow(problem.b.clone(), (-w) as usize)
        };
        problem.a.eval(bits).mul_rational(&bw)
    };
    let decide = |d: &Interval, bound: &Interval| d.certainly_less(bound);

    let exact_v = match (problem.tau.witness(), problem.mu.witness()) {
        (Some(t), Some(u)) => Some(BigRational::from_integer(m.clone()) * t + u),
        (_, Some(u)) if m.is_zero() => Some(u.clone()),
        _ => None,
    };
    let extra = m.bits() as u32 + 8;
    for bits in policy.schedule() {
        let bound = scale(bits);
        let d = match &exact_v {
            Some(v) => {
                let d = if v.is_integer() {
                    BigRational::one()
                } else {
                    rational_nearest_distance(v)
                };
                Interval::from_rational(&d, bits)
            }
            None => {
                let v = problem
                    .tau
                    .eval(bits + extra)
                    .mul_integer(m)
                    .add(&problem.mu.eval(bits + extra));
                let Some(d) = v.nearest_integer_distance() else {
                    continue;
                };
                if d.lo().is_zero() {
                    let n = v.floor_nearest().expect("distance was determinate");
                    if problem.vanishes_at(m, &n) == Some(true) {
                        Interval::from_integer(1, bits)
                    } else {
                        continue;
                    }
                } else {
                    d
                }
            }
        };
        match decide(&d, &bound) {
            Some(true) => return Ok(InequalityCheck::Holds),
            Some(false) => return Ok(InequalityCheck::Fails),
            None => continue,
        }
    }
    Err(Error::PrecisionExhausted {
        bits: policy.max_bits,
        context: format!("deciding the inequality at m = {m}, w = {w}"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn small_policy() -> PrecisionPolicy {
        PrecisionPolicy::new(128, 2048, (2, 1)).unwrap()
    }

    #[test]
    fn epsilon_for_root_two_and_a_third() {
        let p = ReductionProblem::new(
            RefinableReal::sqrt(&q(2, 1)).unwrap(),
            RefinableReal::rational(q(1, 3)),
            RefinableReal::integer(1),
            q(2, 1),
            BigInt::from(10),
        )
        .unwrap();
        let c = Convergent {
            p: 99.into(),
            q: 70.into(),
            index: 5,
        };
        let eps = compute_epsilon(&p, &c, &small_policy()).unwrap();
        // 1/3 - 10 * |70 sqrt 2 - 99|
        let expect = 1.0 / 3.0 - 10.0 * (70.0 * 2f64.sqrt() - 99.0).abs();
        assert!((eps.to_f64() - expect).abs() < 1e-12);
        assert_eq!(eps.compare_zero(), ZeroCmp::Positive);
    }

    #[test]
    fn zero_mu_gives_negative_epsilon() {
        let p = ReductionProblem::new(
            RefinableReal::log_ratio(&q(2, 1), &q(10, 1)).unwrap(),
            RefinableReal::integer(0),
            RefinableReal::integer(1),
            q(10, 1),
            BigInt::from(1000),
        )
        .unwrap();
        let out = apply_reduction(&p, &small_policy(), ConvergentStrategy::FirstAboveSixM).unwrap();
        assert_eq!(out.epsilon().compare_zero(), ZeroCmp::Negative);
        match out {
            ReductionOutcome::Candidate { m0, r, .. } => {
                assert!(m0.is_zero());
                assert!(r.is_zero());
            }
            other => panic!("expected a candidate, got {other:?}"),
        }
    }

    #[test]
    fn first_convergent_respects_six_m() {
        let p = ReductionProblem::new(
            RefinableReal::sqrt(&q(3, 1)).unwrap(),
            RefinableReal::rational(q(2, 7)),
            RefinableReal::integer(1),
            q(2, 1),
            BigInt::from(500),
        )
        .unwrap();
        let out = apply_reduction(&p, &small_policy(), ConvergentStrategy::FirstAboveSixM).unwrap();
        assert!(out.q_used().q > BigInt::from(3000));
    }

    #[test]
    fn inequality_at_m_zero_uses_exact_mu() {
        let p = ReductionProblem::new(
            RefinableReal::sqrt(&q(2, 1)).unwrap(),
            RefinableReal::rational(q(1, 3)),
            RefinableReal::integer(1),
            q(10, 1),
            BigInt::from(10),
        )
        .unwrap();
        let policy = small_policy();
        assert_eq!(
            check_candidate_inequality(&p, &BigInt::zero(), 0, &policy).unwrap(),
            InequalityCheck::Holds
        );
        assert_eq!(
            check_candidate_inequality(&p, &BigInt::zero(), 1, &policy).unwrap(),
            InequalityCheck::Fails
        );
    }

    #[test]
    fn vanishing_forms_are_recognised() {
        // tau = log 2/log 10, mu = log(5^3/10)/log 10 = ... choose u so that
        // 2^3 * u = 10^3: u = 125.
        let form = LogForm {
            t: q(2, 1),
            u: q(125, 1),
            base: q(10, 1),
        };
        let p = ReductionProblem::from_log_form(
            form,
            RefinableReal::integer(1),
            q(10, 1),
            BigInt::from(100),
        )
        .unwrap();
        assert_eq!(
            p.vanishes_at(&BigInt::from(3), &BigInt::from(3)),
            Some(true)
        );
        assert_eq!(
            p.vanishes_at(&BigInt::from(4), &BigInt::from(3)),
            Some(false)
        );
        let huge: BigInt = "24739539326994274831296645391029".parse().unwrap();
        let n: BigInt = "7447343416331978597268".parse().unwrap();
        assert_eq!(p.vanishes_at(&huge, &n), Some(false));
        // The form vanishes at m = 3, so the best nonzero value is 1.
        let policy = small_policy();
        assert_eq!(
            check_candidate_inequality(&p, &BigInt::from(3), 0, &policy).unwrap(),
            InequalityCheck::Fails
        );
    }
}
