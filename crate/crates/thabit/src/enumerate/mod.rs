//! Exact evaluation of the equations and exhaustive search of a finite box.

mod family;
mod g2;
mod oracle;

pub use family::{
    detect_families, family_member, zero_difference_families, FamilyDescriptor, FamilyKind,
    Progression,
};
pub use g2::{g2_search_limit, solve_g2};
pub use oracle::{oracle_enumerate, ORACLE_BUDGET};

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::relation_m_from_n;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Sum,
    Diff,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Sum => "sum",
            Mode::Diff => "diff",
        })
    }
}

/// `(b + base_sign) b^n + const_sign = d1 R(l) ± d2 R(m)` in base `g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EquationSpec {
    pub b: u64,
    pub g: u64,
    pub base_sign: i8,
    pub const_sign: i8,
    pub mode: Mode,
}

impl EquationSpec {
    pub fn new(b: u64, g: u64, base_sign: i8, const_sign: i8, mode: Mode) -> Result<Self> {
        if b < 2 || g < 2 {
            return Err(Error::InvalidSpec(format!(
                "need b >= 2 and g >= 2, got b = {b}, g = {g}"
            )));
        }
        if base_sign.abs() != 1 || const_sign.abs() != 1 {
            return Err(Error::InvalidSpec("signs must be +1 or -1".into()));
        }
        Ok(EquationSpec {
            b,
            g,
            base_sign,
            const_sign,
            mode,
        })
    }

    /// The four sign choices, in the order `(+,+), (+,-), (-,+), (-,-)`.
    pub fn all_signs(b: u64, g: u64, mode: Mode) -> Result<Vec<EquationSpec>> {
        [(1, 1), (1, -1), (-1, 1), (-1, -1)]
            .into_iter()
            .map(|(s, c)| EquationSpec::new(b, g, s, c, mode))
            .collect()
    }

    /// `b + base_sign`.
    pub fn base_factor(&self) -> u64 {
        (self.b as i64 + self.base_sign as i64) as u64
    }

    pub fn max_digit(&self) -> u64 {
        self.g - 1
    }
}

fn sign_char(s: i8) -> char {
    if s > 0 {
        '+'
    } else {
        '-'
    }
}

impl fmt::Display for EquationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.mode {
            Mode::Sum => '+',
            Mode::Diff => '-',
        };
        write!(
            f,
            "({}{}1)*{}^n{}1 = d1*R{}(l) {} d2*R{}(m)",
            self.b,
            sign_char(self.base_sign),
            self.b,
            sign_char(self.const_sign),
            self.g,
            op,
            self.g
        )
    }
}

/// A solution `(d1, d2, l, m, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[u64; 5]", into = "[u64; 5]")]
pub struct SolutionTuple {
    pub d1: u64,
    pub d2: u64,
    pub l: u64,
    pub m: u64,
    pub n: u64,
}

impl SolutionTuple {
    pub const fn new(d1: u64, d2: u64, l: u64, m: u64, n: u64) -> Self {
        SolutionTuple { d1, d2, l, m, n }
    }

    fn key(&self) -> (u64, u64, u64, u64, u64) {
        (self.n, self.m, self.l, self.d1, self.d2)
    }

    /// The same solution written with the two repdigits swapped.
    pub fn swapped(&self) -> Self {
        SolutionTuple {
            d1: self.d2,
            d2: self.d1,
            l: self.m,
            m: self.l,
            n: self.n,
        }
    }
}

impl From<[u64; 5]> for SolutionTuple {
    fn from(a: [u64; 5]) -> Self {
        SolutionTuple::new(a[0], a[1], a[2], a[3], a[4])
    }
}

impl From<SolutionTuple> for [u64; 5] {
    fn from(t: SolutionTuple) -> Self {
        [t.d1, t.d2, t.l, t.m, t.n]
    }
}

/// Output order: by `n`, then `m`, `l`, `d1`, `d2`.
impl Ord for SolutionTuple {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for SolutionTuple {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SolutionTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{},{},{})",
            self.d1, self.d2, self.l, self.m, self.n
        )
    }
}

/// An inclusive range `lo..=hi`; empty when `lo > hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[u64; 2]", into = "[u64; 2]")]
pub struct Span {
    pub lo: u64,
    pub hi: u64,
}

impl Span {
    pub const fn new(lo: u64, hi: u64) -> Self {
        Span { lo, hi }
    }

    pub fn contains(&self, x: u64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn len(&self) -> u64 {
        if self.is_empty() {
            0
        } else {
            self.hi - self.lo + 1
        }
    }

    fn inflate(&self, k: u64, cap: u64) -> Span {
        Span::new(
            self.lo
                .saturating_sub(k)
                .max(if self.lo >= 1 { 1 } else { 0 }),
            (self.hi + k).min(cap),
        )
    }
}

impl From<[u64; 2]> for Span {
    fn from(a: [u64; 2]) -> Self {
        Span::new(a[0], a[1])
    }
}

impl From<Span> for [u64; 2] {
    fn from(s: Span) -> Self {
        [s.lo, s.hi]
    }
}

/// Ranges to search. With `relation_cap`, `l` and `m` are further limited
/// for each `n` by the size relation between `n` and the repdigit lengths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBox {
    pub n: Span,
    pub l: Span,
    pub m: Span,
    pub d1: Span,
    pub d2: Span,
    pub relation_cap: bool,
}

impl SearchBox {
    /// Full digit ranges for base `g`.
    pub fn new(g: u64, n_max: u64, l_max: u64, m_max: u64) -> Self {
        SearchBox {
            n: Span::new(0, n_max),
            l: Span::new(1, l_max),
            m: Span::new(1, m_max),
            d1: Span::new(1, g - 1),
            d2: Span::new(1, g - 1),
            relation_cap: false,
        }
    }

    pub fn with_relation_cap(mut self, on: bool) -> Self {
        self.relation_cap = on;
        self
    }

    pub fn contains(&self, t: &SolutionTuple) -> bool {
        self.n.contains(t.n)
            && self.l.contains(t.l)
            && self.m.contains(t.m)
            && self.d1.contains(t.d1)
            && self.d2.contains(t.d2)
    }

    /// Every range grown by `k` (digits stay within `[1, g-1]`).
    pub fn inflated(&self, k: u64, g: u64) -> Self {
        SearchBox {
            n: self.n.inflate(k, u64::MAX),
            l: self.l.inflate(k, u64::MAX),
            m: self.m.inflate(k, u64::MAX),
            d1: self.d1.inflate(k, g - 1),
            d2: self.d2.inflate(k, g - 1),
            relation_cap: self.relation_cap,
        }
    }

    /// Number of raw tuples in the box.
    pub fn volume(&self) -> u128 {
        [self.n, self.l, self.m, self.d1, self.d2]
            .iter()
            .map(|s| s.len() as u128)
            .product()
    }
}

/// How to write a sum solution with `l = m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TieBreak {
    /// Every digit pair `(d1, d2)`; the pairs `(a, b)` and `(b, a)` are two
    /// solutions.
    #[default]
    Ordered,
    /// Only `d1 <= d2`.
    Unordered,
}

/// `(g^m - 1)/(g - 1)`.
pub fn repunit(g: u64, m: u64) -> BigInt {
    let r = (num_traits::pow(BigInt::from(g), m as usize) - 1u32) / BigInt::from(g - 1);
    // A deliberately wrong value, so the mutation test can show that
    // `verify` notices a broken build.
    #[cfg(feature = "mutant-repunit")]
    let r = r + u32::from(m >= 2);
    r
}

/// `(b + base_sign) b^n + const_sign`.
pub fn lhs_value(spec: &EquationSpec, n: u64) -> BigInt {
    BigInt::from(spec.base_factor()) * num_traits::pow(BigInt::from(spec.b), n as usize)
        + spec.const_sign as i64
}

/// Whether `t` satisfies the equation (canonical form is not checked).
pub fn check_solution(spec: &EquationSpec, t: &SolutionTuple) -> bool {
    let a = BigInt::from(t.d1) * repunit(spec.g, t.l);
    let b = BigInt::from(t.d2) * repunit(spec.g, t.m);
    let rhs = match spec.mode {
        Mode::Sum => a + b,
        Mode::Diff => a - b,
    };
    lhs_value(spec, t.n) == rhs
}

/// Whether `t` is in the form the search emits.
pub fn is_canonical(spec: &EquationSpec, t: &SolutionTuple, tie: TieBreak) -> bool {
    match spec.mode {
        Mode::Sum => t.l < t.m || (t.l == t.m && (tie == TieBreak::Ordered || t.d1 <= t.d2)),
        Mode::Diff => t.m <= t.l,
    }
}

/// All canonical solutions in `bx`, minus exact members of `exclude`,
/// sorted by `(n, m, l, d1, d2)`.
pub fn enumerate_box(
    spec: &EquationSpec,
    bx: &SearchBox,
    exclude: &[FamilyDescriptor],
    tie: TieBreak,
) -> Vec<SolutionTuple> {
    if [bx.n, bx.l, bx.m, bx.d1, bx.d2].iter().any(Span::is_empty) {
        return Vec::new();
    }
    let lm_top = bx.l.hi.max(bx.m.hi);
    // R[k] for k in 0..=lm_top; R[0] = 0 keeps the indexing simple.
    let reps: Vec<BigInt> = std::iter::once(BigInt::zero())
        .chain(
            std::iter::successors(Some(BigInt::one()), |r| Some(r * spec.g + 1u32))
                .take(lm_top as usize),
        )
        .collect();
    let excluded: HashSet<SolutionTuple> = exclude.iter().flat_map(|f| f.members_in(bx)).collect();

    let per_n: Vec<Vec<SolutionTuple>> = (bx.n.lo..=bx.n.hi)
        .into_par_iter()
        .map(|n| {
            let cap = if bx.relation_cap {
                relation_m_from_n(spec.b, spec.g, n, spec.mode)
            } else {
                u64::MAX
            };
            let l_span = Span::new(bx.l.lo, bx.l.hi.min(cap));
            let m_span = Span::new(bx.m.lo, bx.m.hi.min(cap));
            let target = lhs_value(spec, n);
            let mut found = match spec.mode {
                Mode::Sum => search_sum(spec, &target, n, l_span, m_span, bx, &reps, tie),
                Mode::Diff => search_diff(spec, &target, n, l_span, m_span, bx, &reps),
            };
            found.retain(|t| !excluded.contains(t));
            found
        })
        .collect();
    let mut out: Vec<SolutionTuple> = per_n.into_iter().flatten().collect();
    out.sort();
    out
}

#[allow(clippy::too_many_arguments)]
fn search_sum(
    spec: &EquationSpec,
    target: &BigInt,
    n: u64,
    l_span: Span,
    m_span: Span,
    bx: &SearchBox,
    reps: &[BigInt],
    tie: TieBreak,
) -> Vec<SolutionTuple> {
    let mut out = Vec::new();
    // d1 R(l) >= 1 forces R(m) < target; l <= m and digits <= g-1 force
    // 2 (g-1) R(m) >= target.
    let two_gm1 = BigInt::from(2 * (spec.g - 1));
    for m in m_span.lo..=m_span.hi {
        let rm = &reps[m as usize];
        if rm >= target {
            break;
        }
        if &two_gm1 * rm < *target {
            continue;
        }
        for d2 in bx.d2.lo..=bx.d2.hi {
            let rest = target - rm * d2;
            if rest < BigInt::one() {
                break;
            }
            for l in l_span.lo..=l_span.hi.min(m) {
                let rl = &reps[l as usize];
                if rl > &rest {
                    break;
                }
                let (d1, r) = num_integer::Integer::div_rem(&rest, rl);
                if !r.is_zero() {
                    continue;
                }
                let Ok(d1) = u64::try_from(d1) else { continue };
                let t = SolutionTuple::new(d1, d2, l, m, n);
                if bx.d1.contains(d1) && is_canonical(spec, &t, tie) {
                    out.push(t);
                }
            }
        }
    }
    out
}

fn search_diff(
    spec: &EquationSpec,
    target: &BigInt,
    n: u64,
    l_span: Span,
    m_span: Span,
    bx: &SearchBox,
    reps: &[BigInt],
) -> Vec<SolutionTuple> {
    let mut out = Vec::new();
    if target < &BigInt::zero() {
        return out;
    }
    let gm1 = BigInt::from(spec.g - 1);
    for l in l_span.lo..=l_span.hi {
        let rl = &reps[l as usize];
        // d1 R(l) = target + d2 R(m) > target.
        if &gm1 * rl <= *target {
            continue;
        }
        // With m < l the difference is at least R(l-1) + 1; with m = l it
        // is a multiple of R(l), zero only when target is.
        if !target.is_zero() && reps[l as usize - 1] >= *target {
            break;
        }
        for d1 in bx.d1.lo..=bx.d1.hi {
            let rest = rl * d1 - target;
            if rest < BigInt::one() {
                continue;
            }
            for m in m_span.lo..=m_span.hi.min(l) {
                let rm = &reps[m as usize];
                if rm > &rest {
                    break;
                }
                let (d2, r) = num_integer::Integer::div_rem(&rest, rm);
                if !r.is_zero() {
                    continue;
                }
                if let Ok(d2) = u64::try_from(d2) {
                    if bx.d2.contains(d2) {
                        out.push(SolutionTuple::new(d1, d2, l, m, n));
                    }
                }
            }
        }
    }
    out
}
