//! Naive brute-force search, kept free of the fast search's shortcuts.

use num_bigint::BigInt;
use num_traits::pow;

use super::{EquationSpec, FamilyDescriptor, Mode, SearchBox, SolutionTuple, TieBreak};
use crate::error::{Error, Result};

/// Largest box the oracle accepts, in raw tuples.
pub const ORACLE_BUDGET: u128 = 10_000_000;

fn big_pow(base: u64, e: u64) -> BigInt {
    pow(BigInt::from(base), e as usize)
}

/// Every canonical solution in `caps` (members of `exclude` removed),
/// sorted like `enumerate_box`. Each candidate is evaluated from scratch.
pub fn oracle_enumerate(
    spec: &EquationSpec,
    caps: &SearchBox,
    exclude: &[FamilyDescriptor],
    tie: TieBreak,
) -> Result<Vec<SolutionTuple>> {
    let volume = caps.volume();
    if volume > ORACLE_BUDGET {
        return Err(Error::CapTooLarge {
            tuples: volume,
            budget: ORACLE_BUDGET,
        });
    }
    let g = spec.g;
    let mut out = Vec::new();
    for n in caps.n.lo..=caps.n.hi {
        for l in caps.l.lo..=caps.l.hi {
            for m in caps.m.lo..=caps.m.hi {
                for d1 in caps.d1.lo..=caps.d1.hi {
                    for d2 in caps.d2.lo..=caps.d2.hi {
                        let canonical = match spec.mode {
                            Mode::Sum => {
                                l < m || (l == m && (tie == TieBreak::Ordered || d1 <= d2))
                            }
                            Mode::Diff => m <= l,
                        };
                        if !canonical {
                            continue;
                        }
                        let lhs = BigInt::from(spec.b as i64 + spec.base_sign as i64)
                            * big_pow(spec.b, n)
                            + BigInt::from(spec.const_sign);
                        let a = BigInt::from(d1) * (big_pow(g, l) - 1) / BigInt::from(g - 1);
                        let b = BigInt::from(d2) * (big_pow(g, m) - 1) / BigInt::from(g - 1);
                        let rhs = if spec.mode == Mode::Sum { a + b } else { a - b };
                        if lhs != rhs {
                            continue;
                        }
                        let t = SolutionTuple { d1, d2, l, m, n };
                        if !exclude.iter().any(|f| f.contains(&t)) {
                            out.push(t);
                        }
                    }
                }
            }
        }
    }
    out.sort_by_key(|t| (t.n, t.m, t.l, t.d1, t.d2));
    Ok(out)
}
