//! Self-checks that need no published numbers: the fast search against the
//! brute-force oracle, the infinite families, the base-2 shortcut and the
//! continued fraction invariants.

use num_rational::BigRational;
use num_traits::{One, Signed};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::contfrac::ContinuedFraction;
use crate::enumerate::{
    check_solution, detect_families, enumerate_box, g2_search_limit, oracle_enumerate,
    zero_difference_families, EquationSpec, FamilyDescriptor, FamilyKind, Mode, SearchBox,
    TieBreak,
};
use crate::numerics::{Dyadic, Interval, PrecisionPolicy, RefinableReal};
use crate::solver::{solve, SolverOptions};

/// Sizes of the checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub b_max: u64,
    pub g_min: u64,
    pub g_max: u64,
    /// Oracle box: `n <= oracle_n`, `l, m <= oracle_lm`.
    pub oracle_n: u64,
    pub oracle_lm: u64,
    /// Family members checked per family: `t <= family_t`.
    pub family_t: u64,
    /// The base-2 check covers `b in [2, g2_b_max]`.
    pub g2_b_max: u64,
    /// Convergents checked per expansion.
    pub convergents: usize,
}

impl VerifyConfig {
    pub fn full() -> Self {
        VerifyConfig {
            b_max: 5,
            g_min: 3,
            g_max: 8,
            oracle_n: 20,
            oracle_lm: 6,
            family_t: 100,
            g2_b_max: 200,
            convergents: 2000,
        }
    }

    pub fn quick() -> Self {
        VerifyConfig {
            b_max: 3,
            g_min: 3,
            g_max: 5,
            oracle_n: 12,
            oracle_lm: 5,
            family_t: 30,
            g2_b_max: 40,
            convergents: 300,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, failures: Vec<String>, ran: usize, unit: &str) -> Self {
        let passed = failures.is_empty();
        let detail = if passed {
            format!("{ran} {unit} checked")
        } else {
            format!(
                "{} of {ran} {unit} failed; first: {}",
                failures.len(),
                failures[0]
            )
        };
        Check {
            name: name.to_string(),
            passed,
            detail,
        }
    }
}

fn every_spec(
    b_range: std::ops::RangeInclusive<u64>,
    g_range: std::ops::RangeInclusive<u64>,
) -> Vec<EquationSpec> {
    let mut out = Vec::new();
    for b in b_range {
        for g in g_range.clone() {
            for mode in [Mode::Sum, Mode::Diff] {
                out.extend(EquationSpec::all_signs(b, g, mode).expect("b, g >= 2"));
            }
        }
    }
    out
}

/// `enumerate_box` and `oracle_enumerate` agree on every box.
pub fn oracle_equivalence(cfg: &VerifyConfig) -> Check {
    let specs = every_spec(2..=cfg.b_max, cfg.g_min..=cfg.g_max);
    let failures: Vec<String> = specs
        .par_iter()
        .flat_map_iter(|spec| {
            let bx = SearchBox::new(spec.g, cfg.oracle_n, cfg.oracle_lm, cfg.oracle_lm);
            let ex = detect_families(spec);
            [TieBreak::Ordered, TieBreak::Unordered]
                .into_iter()
                .filter_map(move |tie| {
                    let fast = enumerate_box(spec, &bx, &ex, tie);
                    match oracle_enumerate(spec, &bx, &ex, tie) {
                        Ok(slow) if slow == fast => None,
                        Ok(slow) => Some(format!(
                            "{spec} ({tie:?}): fast {} vs oracle {}",
                            fast.len(),
                            slow.len()
                        )),
                        Err(e) => Some(format!("{spec}: {e}")),
                    }
                })
        })
        .collect();
    Check::new("oracle equivalence", failures, specs.len() * 2, "boxes")
}

/// Every detected family member satisfies the equation.
pub fn family_members(cfg: &VerifyConfig) -> Check {
    let mut specs = Vec::new();
    for k in 2..=4u32 {
        specs.extend(EquationSpec::all_signs(2, 1 << k, Mode::Sum).expect("valid"));
    }
    for g in 3..=12 {
        specs.extend(EquationSpec::all_signs(g, g, Mode::Sum).expect("valid"));
    }
    for g in 3..=12 {
        specs.extend(EquationSpec::all_signs(2, g, Mode::Diff).expect("valid"));
    }
    let families: Vec<FamilyDescriptor> = specs
        .iter()
        .flat_map(|s| {
            detect_families(s)
                .into_iter()
                .chain(zero_difference_families(s))
        })
        .collect();
    let mut failures = Vec::new();
    for f in &families {
        for t in f.t_min..=cfg.family_t {
            let x = f.member(t).expect("t >= t_min");
            if !check_solution(&f.spec, &x) || !f.contains(&x) {
                failures.push(format!("{} at t = {t}: {x}", f.describe()));
                break;
            }
        }
    }
    let kinds = |p: fn(&FamilyKind) -> bool| families.iter().filter(|f| p(&f.kind)).count();
    if kinds(|k| matches!(k, FamilyKind::A { .. })) == 0
        || kinds(|k| matches!(k, FamilyKind::B { .. })) == 0
        || kinds(|k| matches!(k, FamilyKind::C)) == 0
    {
        failures.push("a classical family kind was not detected".to_string());
    }
    Check::new("family members", failures, families.len(), "families")
}

/// For `g = 2` the solver's answer (only `n = 0`) matches a brute-force
/// search that also allows small positive `n`.
pub fn base_two(cfg: &VerifyConfig) -> Check {
    let specs: Vec<EquationSpec> = (2..=cfg.g2_b_max)
        .flat_map(|b| {
            [Mode::Sum, Mode::Diff]
                .into_iter()
                .flat_map(move |m| EquationSpec::all_signs(b, 2, m).expect("valid"))
        })
        .collect();
    let failures: Vec<String> = specs
        .par_iter()
        .filter_map(|spec| {
            let report = match solve(spec, &SolverOptions::default()) {
                Ok(r) => r,
                Err(e) => return Some(format!("{spec}: {e}")),
            };
            if let Some(s) = report.solutions.iter().find(|s| s.n != 0) {
                return Some(format!("{spec}: solution {s} has n > 0"));
            }
            let lim = g2_search_limit(spec.b) + 2;
            let bx = SearchBox::new(2, 6, lim, lim);
            let oracle = oracle_enumerate(spec, &bx, &[], TieBreak::Ordered);
            match oracle {
                // Members of a recorded infinite family are accounted for
                // by the family, not the list.
                Ok(o)
                    if o.iter().all(|s| {
                        s.n == 0
                            && (report.solutions.contains(s)
                                || report.families.iter().any(|f| f.contains(s)))
                    }) =>
                {
                    None
                }
                Ok(o) => Some(format!(
                    "{spec}: oracle found {} solutions, solver {}",
                    o.len(),
                    report.solutions.len()
                )),
                Err(e) => Some(format!("{spec}: {e}")),
            }
        })
        .collect();
    Check::new("base two", failures, specs.len(), "equations")
}

pub fn convergent_failures(x: &RefinableReal, count: usize) -> Vec<String> {
    // Ten thousand convergents of log 2 / log 10 need about 35000 bits.
    let policy = PrecisionPolicy::new(1024, 1 << 17, (2, 1)).expect("valid policy");
    let mut cf = ContinuedFraction::new(x.clone(), policy.clone());
    let cs = match (0..count)
        .map(|i| cf.convergent(i))
        .collect::<crate::Result<Vec<_>>>()
    {
        Ok(cs) => cs,
        Err(e) => return vec![format!("{}: {e}", x.label())],
    };
    let q_bits = cs.last().map_or(0, |c| c.q.bits() as u32);
    // The first scheduled precision that suffices is usually the one the
    // expansion already evaluated, and the memo makes it free.
    let need = 2 * q_bits + 64;
    let xv = x.eval(
        policy
            .schedule()
            .into_iter()
            .find(|&b| b >= need)
            .unwrap_or(need),
    );
    let mut out = Vec::new();
    let mut prev_side = 0;
    for (i, c) in cs.iter().enumerate() {
        // p_k q_{k-1} - p_{k-1} q_k = +-1 certifies gcd(p_k, q_k) = 1.
        let det = match i {
            0 => c.q.clone(),
            _ => &c.p * &cs[i - 1].q - &cs[i - 1].p * &c.q,
        };
        if !det.abs().is_one() {
            out.push(format!("{}: convergent {i} not reduced", x.label()));
        }
        let d = xv
            .mul_integer(&c.q)
            .sub(&Interval::from_integer(c.p.clone(), xv.precision_bits()));
        // |d| < 1/q, compared exactly as |d| q < 1.
        let q = Dyadic::from_int(c.q.clone());
        let one = Dyadic::from_int(1);
        if !(d.hi().mul(&q) < one && d.lo().mul(&q) > -&one) {
            out.push(format!("{}: |p - q x| >= 1/q at convergent {i}", x.label()));
        }
        // Convergents alternate around x.
        let side = if d.lo().signum() > 0 {
            1
        } else if d.hi().signum() < 0 {
            -1
        } else {
            0
        };
        if side == 0 || side == prev_side {
            out.push(format!("{}: convergent {i} does not alternate", x.label()));
        }
        prev_side = side;
    }
    out
}

/// `|p - q x| < 1/q`, `gcd(p, q) = 1` and alternation, for `sqrt 2` and
/// `log 2 / log 10`.
pub fn convergents(cfg: &VerifyConfig) -> Check {
    let sqrt2 = RefinableReal::sqrt(&BigRational::from_integer(2.into())).expect("positive");
    let lg = RefinableReal::log_ratio(
        &BigRational::from_integer(2.into()),
        &BigRational::from_integer(10.into()),
    )
    .expect("positive");
    let mut failures = convergent_failures(&sqrt2, cfg.convergents);
    failures.extend(convergent_failures(&lg, cfg.convergents));
    Check::new("convergents", failures, 2 * cfg.convergents, "convergents")
}

/// All checks, in a fixed order.
pub fn run_checks(cfg: &VerifyConfig) -> Vec<Check> {
    vec![
        oracle_equivalence(cfg),
        family_members(cfg),
        base_two(cfg),
        convergents(cfg),
    ]
}
