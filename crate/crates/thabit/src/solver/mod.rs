//! The full pipeline for one equation and for a grid of equations.
//!
//! For `g >= 3` and `log b/log g` irrational: reduce the exponent gap, then
//! `n`; cap `l` and `m` through the size relation; enumerate. When the
//! ratio is rational the reduction lemma does not apply and a lattice
//! argument takes its place.

mod reduce;
pub mod reference;
mod scan;
mod steps;
mod suite;

pub use steps::StepKind;
pub use suite::{n0_extras, run_suite, SuiteCell, SuiteReport, SuiteTable, SuiteTotals, TableRow};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::bounds::{bound_report, relation_m_from_n, theorem_bounds, BoundReport};
use crate::enumerate::{
    detect_families, enumerate_box, g2_search_limit, solve_g2, zero_difference_families,
    EquationSpec, FamilyDescriptor, FamilyKind, Mode, SearchBox, SolutionTuple, Span, TieBreak,
};
use crate::error::Result;
use crate::numerics::{common_power_base, PrecisionPolicy, ZeroCmp};
use crate::reduction::ConvergentStrategy;
use scan::CommonBase;
use steps::Step;

/// `(a, e_b, e_g)` with `b = a^e_b`, `g = a^e_g`, `a` minimal, when
/// `log b / log g` is rational.
pub fn multiplicative_dependence(b: u64, g: u64) -> Option<(u64, u32, u32)> {
    let (a, eb, eg) = common_power_base(&BigInt::from(b), &BigInt::from(g))?;
    Some((a.to_u64().expect("a <= b"), eb, eg))
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SolverOptions {
    pub policy: PrecisionPolicy,
    pub strategy: ConvergentStrategy,
    pub tie: TieBreak,
    /// Evaluate the theorem bound that feeds `M` at this `b` instead of the
    /// equation's own (a grid may use one uniform `M`).
    pub bound_base: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Resolution {
    /// The step's bound applies as computed.
    BoundAccepted,
    /// The single open candidate cannot exceed the threshold.
    CandidateContradiction,
    /// The candidate reaches past the threshold; its `w` joins the bound.
    CandidatePinned,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemSummary {
    pub tau: String,
    pub mu: String,
    pub a: String,
    pub b: String,
    pub m_bound: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutcomeKind {
    /// Positive `eps`: a bound on `w` outright.
    Bound,
    /// Nonpositive `eps` and an open candidate `m0 <= M`.
    Candidate,
    /// Nonpositive `eps`, candidate above `M`.
    NoCandidate,
    /// Rational `tau`: bound from the lattice gap.
    Lattice,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeRecord {
    pub kind: OutcomeKind,
    pub epsilon_sign: Option<ZeroCmp>,
    /// `eps`, or the lattice gap for rational `tau`.
    pub epsilon: Option<String>,
    pub q: Option<String>,
    pub m0: Option<String>,
    pub r: Option<String>,
    pub w_threshold: Option<i64>,
}

/// A candidate that survived: the form at `(x, y)` satisfies the
/// inequality up to `w`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pin {
    pub x: String,
    pub y: String,
    pub w: i64,
    /// The form is exactly zero at `(x, y)` and the equation holds there.
    pub vanishing: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseTrace {
    pub step: StepKind,
    pub d1: Option<u64>,
    pub d2: Option<u64>,
    pub gap: Option<u64>,
    pub problem: ProblemSummary,
    pub outcome: OutcomeRecord,
    pub resolution: Resolution,
    /// The bound on `w` this case contributes.
    pub w: i64,
    pub pin: Option<Pin>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// `g = 2`: parity leaves only `n = 0`.
    BaseTwo,
    /// Two reduction steps.
    Reduction,
    /// Rational `log b/log g`: lattice bounds.
    DirectScan,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Counts {
    pub n_eq_0: u64,
    pub n_ge_1: u64,
    pub max_l: u64,
    pub max_m: u64,
    pub max_n: u64,
}

impl Counts {
    pub fn of(solutions: &[SolutionTuple]) -> Self {
        let mut c = Counts::default();
        for s in solutions {
            if s.n == 0 {
                c.n_eq_0 += 1;
            } else {
                c.n_ge_1 += 1;
            }
            c.max_l = c.max_l.max(s.l);
            c.max_m = c.max_m.max(s.m);
            c.max_n = c.max_n.max(s.n);
        }
        c
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverReport {
    pub spec: EquationSpec,
    pub method: Method,
    pub theorem_bounds: BoundReport,
    /// Step 1 bound: on `m - l` (sum) or `l - m - 2` (diff).
    pub step1_w_max: Option<i64>,
    /// Step 2 bound: on `n - 2` (sum) or `n - 1` (diff).
    pub step2_w_max: Option<i64>,
    /// Largest exponent gap fed to step 2.
    pub gap_cap: Option<u64>,
    pub n_cap: u64,
    pub lm_cap: u64,
    pub final_box: SearchBox,
    pub solutions: Vec<SolutionTuple>,
    pub families: Vec<FamilyDescriptor>,
    pub traces: Vec<CaseTrace>,
    pub counts: Counts,
    pub flags: Vec<String>,
}

fn max_w(traces: &[CaseTrace], kind: StepKind) -> Option<i64> {
    traces.iter().filter(|t| t.step == kind).map(|t| t.w).max()
}

fn to_u64(x: &BigInt) -> u64 {
    x.to_u64().unwrap_or(u64::MAX)
}

/// Solves one equation completely.
pub fn solve(spec: &EquationSpec, opts: &SolverOptions) -> Result<SolverReport> {
    opts.policy.validate()?;
    let EquationSpec { b, g, mode, .. } = *spec;
    let theorem = bound_report(b, g, mode)?;
    let own = theorem_bounds(b, g, mode);
    let zero_families = zero_difference_families(spec);
    let mut flags = Vec::new();
    if !zero_families.is_empty() {
        flags.push(
            "the left side vanishes at n = 0, so (d,d,t,t,0) solves the equation for every t; \
             these members are counted up to the size-relation cap at n = 0"
                .to_string(),
        );
    }

    if g == 2 {
        let solutions = solve_g2(spec, opts.tie)?;
        let lim = g2_search_limit(b);
        let mut final_box = SearchBox::new(2, 0, lim, lim);
        final_box.n = Span::new(0, 0);
        return Ok(SolverReport {
            spec: *spec,
            method: Method::BaseTwo,
            theorem_bounds: theorem,
            step1_w_max: None,
            step2_w_max: None,
            gap_cap: None,
            n_cap: 0,
            lm_cap: lim,
            final_box,
            counts: Counts::of(&solutions),
            solutions,
            families: zero_families,
            traces: Vec::new(),
            flags,
        });
    }

    let mut families = detect_families(spec);
    let tb = theorem_bounds(opts.bound_base.unwrap_or(b), g, mode);
    let (first, second) = (Step::first(mode), Step::second(mode));
    let gap_cap_of = |w1: i64| -> u64 {
        // Step 1 assumes the gap (sum) or l - m - 2 (diff) is at least 3.
        let w = w1.max(2) as u64;
        match mode {
            Mode::Sum => w,
            Mode::Diff => w + 2,
        }
    };

    let (method, traces) = match multiplicative_dependence(b, g) {
        None => {
            let mut traces = reduce::reduce_step(spec, first, first.cases(spec, 0), &tb, opts)?;
            let gap_cap = gap_cap_of(max_w(&traces, StepKind::GapReduction).expect("nonempty"));
            traces.extend(reduce::reduce_step(
                spec,
                second,
                second.cases(spec, gap_cap),
                &tb,
                opts,
            )?);
            (Method::Reduction, traces)
        }
        Some((a, eb, eg)) => {
            let base = CommonBase::new(a, eb as u64, eg as u64);
            let s1 = scan::scan_step(spec, first, first.cases(spec, 0), base, opts)?;
            let gap_cap = gap_cap_of(max_w(&s1.traces, StepKind::GapReduction).expect("nonempty"));
            let s2 = scan::scan_step(spec, second, second.cases(spec, gap_cap), base, opts)?;
            if !(b == 10 && g == 10) {
                flags.push(format!(
                    "log {b}/log {g} is rational; bounds come from the lattice argument, which goes beyond the published cases"
                ));
            }
            for line in s1.lines.into_iter().chain(s2.lines) {
                let covered = families
                    .iter()
                    .any(|f| (0..2).all(|t| line.member(t).is_ok_and(|x| f.contains(&x))));
                if !covered {
                    flags.push(format!(
                        "infinite family outside the classical list: {}",
                        line.describe()
                    ));
                    families.push(line);
                }
            }
            let mut traces = s1.traces;
            traces.extend(s2.traces);
            (Method::DirectScan, traces)
        }
    };

    let w1 = max_w(&traces, StepKind::GapReduction).expect("nonempty");
    let w2 = max_w(&traces, StepKind::NReduction).expect("nonempty");
    let gap_cap = gap_cap_of(w1);
    let n_from_step2 = match mode {
        Mode::Sum => (w2 + 2).max(2),
        Mode::Diff => (w2 + 1).max(2),
    } as u64;
    let n_cap = n_from_step2.min(to_u64(&own.n_max));
    let lm_cap = relation_m_from_n(b, g, n_cap, mode).min(to_u64(&own.lm_max));
    let final_box = SearchBox::new(g, n_cap, lm_cap, lm_cap).with_relation_cap(true);

    for t in traces
        .iter()
        .filter(|t| t.resolution == Resolution::CandidatePinned)
    {
        let pin = t.pin.as_ref().expect("pinned traces carry their pin");
        flags.push(format!(
            "{:?} case d1={:?} d2={:?} gap={:?}: candidate x = {} (y = {}) pins w = {}",
            t.step, t.d1, t.d2, t.gap, pin.x, pin.y, pin.w
        ));
    }

    let exclude: Vec<FamilyDescriptor> = families
        .iter()
        .filter(|f| f.kind != FamilyKind::ZeroDifference)
        .copied()
        .collect();
    let solutions = enumerate_box(spec, &final_box, &exclude, opts.tie);
    families.extend(zero_families);
    Ok(SolverReport {
        spec: *spec,
        method,
        theorem_bounds: theorem,
        step1_w_max: Some(w1),
        step2_w_max: Some(w2),
        gap_cap: Some(gap_cap),
        n_cap,
        lm_cap,
        final_box,
        counts: Counts::of(&solutions),
        solutions,
        families,
        traces,
        flags,
    })
}
