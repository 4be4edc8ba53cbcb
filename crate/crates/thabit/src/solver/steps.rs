//! The two reduction steps as linear forms `x*tau - y + mu`.
//!
//! | step | `x`   | `y` | `tau`          | `mu`                                      | `A`                  | `B` | `w`         |
//! |------|-------|-----|----------------|-------------------------------------------|----------------------|-----|-------------|
//! | sum 1  | `n` | `m` | `log b/log g` | `log((g-1)(b±1)/d2)/log g`                | `ceil(g^3/(g-1))/log g` | `g` | `m-l`    |
//! | sum 2  | `l` | `n` | `log g/log b` | `log((d1+d2 g^(m-l))/((g-1)(b±1)))/log b` | `2/log b`            | `b` | `n-2`       |
//! | diff 1 | `n` | `l` | `log b/log g` | `log((g-1)(b±1)/d1)/log g`                | `2/log g`            | `g` | `l-m-2`     |
//! | diff 2 | `m` | `n` | `log g/log b` | `log((d1 g^(l-m)-d2)/((g-1)(b±1)))/log b` | `2/log b`            | `b` | `n-1`       |

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::bounds::{relation_m_from_n, TheoremBounds};
use crate::enumerate::{EquationSpec, Mode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    /// Bounds the exponent gap `m - l` (sum) or `l - m` (diff).
    GapReduction,
    /// Bounds `n` given the gap.
    NReduction,
}

/// One of the four forms in the table above.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Step {
    Sum1,
    Sum2,
    Diff1,
    Diff2,
}

/// The parameters that vary within a step.
#[derive(Debug, Clone)]
pub(crate) struct StepCase {
    pub d1: Option<u64>,
    pub d2: Option<u64>,
    pub gap: Option<u64>,
    /// `mu = log u / log base`.
    pub u: BigRational,
}

fn rat(n: impl Into<BigInt>, d: impl Into<BigInt>) -> BigRational {
    BigRational::new(n.into(), d.into())
}

impl Step {
    pub fn first(mode: Mode) -> Step {
        match mode {
            Mode::Sum => Step::Sum1,
            Mode::Diff => Step::Diff1,
        }
    }

    pub fn second(mode: Mode) -> Step {
        match mode {
            Mode::Sum => Step::Sum2,
            Mode::Diff => Step::Diff2,
        }
    }

    pub fn kind(self) -> StepKind {
        match self {
            Step::Sum1 | Step::Diff1 => StepKind::GapReduction,
            Step::Sum2 | Step::Diff2 => StepKind::NReduction,
        }
    }

    /// `(t, base)` with `tau = log t / log base`.
    pub fn tau(self, spec: &EquationSpec) -> (u64, u64) {
        match self.kind() {
            StepKind::GapReduction => (spec.b, spec.g),
            StepKind::NReduction => (spec.g, spec.b),
        }
    }

    /// `(c, k)` with `A = c / log k`.
    pub fn a_const(self, spec: &EquationSpec) -> (BigRational, u64) {
        let g = spec.g;
        match self {
            Step::Sum1 => {
                let g3 = BigInt::from(g).pow(3);
                (
                    BigRational::from_integer(num_integer::Integer::div_ceil(
                        &g3,
                        &BigInt::from(g - 1),
                    )),
                    g,
                )
            }
            Step::Diff1 => (rat(2, 1), g),
            Step::Sum2 | Step::Diff2 => (rat(2, 1), spec.b),
        }
    }

    /// `B`.
    pub fn big_b(self, spec: &EquationSpec) -> u64 {
        self.tau(spec).1
    }

    /// `M`, the bound on the `x` variable.
    pub fn m_bound(self, tb: &TheoremBounds) -> BigInt {
        match self {
            Step::Sum1 => tb.n_max.clone(),
            Step::Diff1 => tb.n_max.clone().max(tb.lm_max.clone()),
            Step::Sum2 | Step::Diff2 => tb.lm_max.clone(),
        }
    }

    /// Every case of the step; `gap_cap` is only used by the second step.
    /// Diff cases with `d1 g^gap <= d2` are dropped: they make the left
    /// side nonpositive, which only the zero difference at `n = 0` allows.
    pub fn cases(self, spec: &EquationSpec, gap_cap: u64) -> Vec<StepCase> {
        let g = spec.g;
        let gm1 = BigInt::from(g - 1);
        let bpm = BigInt::from(spec.base_factor());
        let digits = 1..g;
        match self {
            Step::Sum1 => digits
                .map(|d2| StepCase {
                    d1: None,
                    d2: Some(d2),
                    gap: None,
                    u: rat(&gm1 * &bpm, d2),
                })
                .collect(),
            Step::Diff1 => digits
                .map(|d1| StepCase {
                    d1: Some(d1),
                    d2: None,
                    gap: None,
                    u: rat(&gm1 * &bpm, d1),
                })
                .collect(),
            Step::Sum2 | Step::Diff2 => {
                let mut out = Vec::new();
                for d1 in 1..g {
                    for d2 in 1..g {
                        for gap in 0..=gap_cap {
                            let gp = BigInt::from(g).pow(gap as u32);
                            let num = if self == Step::Sum2 {
                                d1 + &gp * d2
                            } else {
                                &gp * d1 - d2
                            };
                            if !num.is_positive() {
                                continue;
                            }
                            out.push(StepCase {
                                d1: Some(d1),
                                d2: Some(d2),
                                gap: Some(gap),
                                u: BigRational::new(num, &gm1 * &bpm),
                            });
                        }
                    }
                }
                out
            }
        }
    }

    /// When the form vanishes at `(x, y)`, the exact equation leaves a
    /// solution only in the cases below; returns its `w`.
    ///
    /// Sum 1 vanishing forces `d1 (g^l - 1) = d2 ± (g - 1)`, so the `+1`
    /// equation with `d1 = 2`, `d2 = g - 1`, `l = 1`. Sum 2 forces
    /// `d1 + d2 = g - 1` with the `-1` equation. The difference forms
    /// never vanish at a solution.
    pub fn vanishing_solution_w(
        self,
        spec: &EquationSpec,
        case: &StepCase,
        x: &BigInt,
        y: &BigInt,
    ) -> Option<i64> {
        use num_traits::ToPrimitive;
        let g = spec.g;
        match self {
            Step::Sum1 => {
                let m = y.to_i64()?;
                (case.d2 == Some(g - 1) && spec.const_sign == 1 && m >= 1 && !x.is_negative())
                    .then_some(m - 1)
            }
            Step::Sum2 => {
                let n = y.to_i64()?;
                let digits_ok = case.d1.zip(case.d2).is_some_and(|(a, b)| a + b == g - 1);
                (digits_ok && spec.const_sign == -1 && x.is_positive() && n >= 0).then_some(n - 2)
            }
            Step::Diff1 | Step::Diff2 => None,
        }
    }

    /// The `(x, y)` roles mapped onto a solution, for a vanishing line.
    /// Returns `(l, m, n)` or `None` for the difference forms.
    pub fn line_tuple(self, case: &StepCase, x: u64, y: u64) -> Option<(u64, u64, u64)> {
        match self {
            Step::Sum1 => Some((1, y, x)),
            Step::Sum2 => Some((x, x + case.gap?, y)),
            Step::Diff1 | Step::Diff2 => None,
        }
    }

    /// Digits of the solutions on a vanishing line.
    pub fn line_digits(self, spec: &EquationSpec, case: &StepCase) -> Option<(u64, u64)> {
        match self {
            Step::Sum1 => Some((2, spec.g - 1)),
            Step::Sum2 => case.d1.zip(case.d2),
            Step::Diff1 | Step::Diff2 => None,
        }
    }

    /// Largest `x` compatible with a solution whose step variable equals
    /// `w`. In the second step `x` is `l` or `m` and `w` fixes `n`, so the
    /// size relation caps `x`; the first step has no such cap.
    pub fn x_limit(self, spec: &EquationSpec, w: i64) -> Option<u64> {
        let n = match self {
            Step::Sum2 => w + 2,
            Step::Diff2 => w + 1,
            Step::Sum1 | Step::Diff1 => return None,
        };
        Some(relation_m_from_n(
            spec.b,
            spec.g,
            n.max(0) as u64,
            spec.mode,
        ))
    }

    /// The smallest `(x, y)` with `x, y` in range for this step.
    pub fn xy_minimum(self) -> (u64, u64) {
        match self {
            // n >= 0, m >= 1
            Step::Sum1 => (0, 1),
            // l >= 1, n >= 0
            Step::Sum2 => (1, 0),
            Step::Diff1 => (0, 1),
            Step::Diff2 => (1, 0),
        }
    }
}
