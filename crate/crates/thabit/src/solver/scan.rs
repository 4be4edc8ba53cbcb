//! Steps for multiplicatively dependent `b = a^eb`, `g = a^eg`.
//!
//! With `tau = eb/eg` the form `x*tau - y + mu` equals
//! `(P x - Q y + nu)/Q` with `nu = log u / log a`, so its values lie on a
//! shifted lattice of spacing `1/Q`. A nonzero value is at least
//! `||nu||/Q`, or `1/Q` when `nu` is an integer; that replaces the
//! continued fraction. When `nu` is an integer the form vanishes on a line
//! of `(x, y)`, and if the exact equation has solutions there the whole
//! line is an infinite family.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;

use super::reduce::interval_string;
use super::steps::{Step, StepCase, StepKind};
use super::{CaseTrace, OutcomeKind, OutcomeRecord, ProblemSummary, Resolution, SolverOptions};
use crate::enumerate::{
    check_solution, EquationSpec, FamilyDescriptor, FamilyKind, Progression, SolutionTuple,
};
use crate::error::{Error, Result};
use crate::numerics::{
    interval_log, interval_log_of, rational_nearest_distance, Interval, RefinableReal, ZeroCmp,
};

/// `b = a^eb`, `g = a^eg` with `gcd(eb, eg) = 1`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct CommonBase {
    pub a: u64,
    pub eb: u64,
    pub eg: u64,
}

impl CommonBase {
    pub fn new(a: u64, eb: u64, eg: u64) -> Self {
        let d = eb.gcd(&eg);
        CommonBase {
            a: a.pow(d as u32),
            eb: eb / d,
            eg: eg / d,
        }
    }

    /// `(P, Q)` of the step.
    fn coefficients(&self, step: Step) -> (u64, u64) {
        match step.kind() {
            StepKind::GapReduction => (self.eb, self.eg),
            StepKind::NReduction => (self.eg, self.eb),
        }
    }
}

/// Smallest `(x, y)` with `P x - Q y = r`, `x >= x_min`, `y >= y_min`.
fn first_lattice_point(p: u64, q: u64, r: i64, x_min: u64, y_min: u64) -> Option<(u64, u64)> {
    let (p, q, r) = (p as i128, q as i128, r as i128);
    let mut x = x_min as i128;
    // x increases by at most q before the residue repeats; the y floor
    // then needs at most |r| + y_min more periods.
    let limit = x + q * (r.abs() + y_min as i128 + 2);
    while x <= limit {
        let num = p * x - r;
        if num % q == 0 {
            let y = num / q;
            if y >= y_min as i128 {
                return Some((x as u64, y as u64));
            }
        }
        x += 1;
    }
    None
}

pub(crate) struct ScanResult {
    pub traces: Vec<CaseTrace>,
    pub lines: Vec<FamilyDescriptor>,
}

pub(crate) fn scan_step(
    spec: &EquationSpec,
    step: Step,
    cases: Vec<StepCase>,
    base: CommonBase,
    opts: &SolverOptions,
) -> Result<ScanResult> {
    let (p, q) = base.coefficients(step);
    let a_r = BigRational::from_integer(base.a.into());
    let (c, k) = step.a_const(spec);
    let big_b = step.big_b(spec);
    let results: Vec<(CaseTrace, Option<FamilyDescriptor>)> = cases
        .into_par_iter()
        .map(|case| {
            let nu = RefinableReal::log_ratio(&case.u, &a_r)?;
            let q_r = BigRational::from_integer(q.into());
            let mut line = None;
            let (delta, label) = match nu.witness() {
                Some(w) if w.is_integer() => {
                    let r = -w.to_integer().to_i64().expect("small exponent");
                    let (x_min, y_min) = step.xy_minimum();
                    line = first_lattice_point(p, q, r, x_min, y_min)
                        .and_then(|(x0, y0)| vanishing_line(spec, step, &case, (x0, y0), (p, q)));
                    (BigRational::one() / &q_r, "1/Q".to_string())
                }
                Some(w) => (rational_nearest_distance(w) / &q_r, "||nu||/Q".to_string()),
                None => (lower_distance(&nu, opts)? / &q_r, "||nu||/Q".to_string()),
            };
            let w = lattice_bound(&c, k, big_b, &delta);
            let trace = CaseTrace {
                step: step.kind(),
                d1: case.d1,
                d2: case.d2,
                gap: case.gap,
                problem: ProblemSummary {
                    tau: format!("{p}/{q}"),
                    mu: nu.label().to_string() + &format!(" / {q}"),
                    a: format!("{c}/log({k})"),
                    b: big_b.to_string(),
                    m_bound: None,
                },
                outcome: OutcomeRecord {
                    kind: OutcomeKind::Lattice,
                    epsilon_sign: Some(ZeroCmp::Positive),
                    epsilon: Some(
                        interval_string(&Interval::from_rational(&delta, 64)) + " (" + &label + ")",
                    ),
                    q: None,
                    m0: None,
                    r: None,
                    w_threshold: None,
                },
                resolution: Resolution::BoundAccepted,
                w,
                pin: None,
            };
            Ok((trace, line))
        })
        .collect::<Result<_>>()?;
    let mut traces = Vec::new();
    let mut lines: Vec<FamilyDescriptor> = Vec::new();
    for (t, l) in results {
        traces.push(t);
        if let Some(l) = l {
            if !lines.contains(&l) {
                lines.push(l);
            }
        }
    }
    Ok(ScanResult { traces, lines })
}

/// A certified positive lower bound on `||nu||`.
fn lower_distance(nu: &RefinableReal, opts: &SolverOptions) -> Result<BigRational> {
    for bits in opts.policy.schedule() {
        if let Some(d) = nu.eval(bits).nearest_integer_distance() {
            if d.lo().signum() > 0 {
                return Ok(d.lo().to_rational());
            }
        }
    }
    Err(Error::PrecisionExhausted {
        bits: opts.policy.max_bits,
        context: format!("separating {} from the integers", nu.label()),
    })
}

/// Largest `w` with `delta < A B^-w` possible, `A = c / log k`.
fn lattice_bound(c: &BigRational, k: u64, big_b: u64, delta: &BigRational) -> i64 {
    const BITS: u32 = 128;
    let log_k = interval_log(&BigRational::from_integer(k.into()), BITS).expect("k > 1");
    let a = Interval::from_rational(c, BITS)
        .div(&log_k)
        .expect("log k > 0");
    let ratio = a
        .div(&Interval::from_rational(delta, BITS))
        .expect("delta > 0");
    let log_b = interval_log(&BigRational::from_integer(big_b.into()), BITS).expect("B > 1");
    let x = interval_log_of(&ratio)
        .expect("positive")
        .div(&log_b)
        .expect("log B > 0");
    x.largest_integer_below().to_i64().expect("small")
}

/// The family on which the form vanishes, if the exact equation holds
/// there.
fn vanishing_line(
    spec: &EquationSpec,
    step: Step,
    case: &StepCase,
    (x0, y0): (u64, u64),
    (p, q): (u64, u64),
) -> Option<FamilyDescriptor> {
    step.vanishing_solution_w(spec, case, &BigInt::from(x0), &BigInt::from(y0))?;
    let (d1, d2) = step.line_digits(spec, case)?;
    let at = |t: u64| step.line_tuple(case, x0 + q * t, y0 + p * t);
    let (l0, m0, n0) = at(0)?;
    let (l1, m1, n1) = at(1)?;
    let fam = FamilyDescriptor {
        kind: FamilyKind::Line,
        spec: *spec,
        d1,
        d2,
        l: Progression::new(l0, l1 - l0),
        m: Progression::new(m0, m1 - m0),
        n: Progression::new(n0, n1 - n0),
        t_min: 0,
    };
    let ok = (0..3).all(|t| {
        let s: SolutionTuple = fam.member(t).expect("t >= 0");
        s.l <= s.m && check_solution(spec, &s)
    });
    debug_assert!(
        ok,
        "vanishing line {} is not a solution family",
        fam.describe()
    );
    ok.then_some(fam)
}
