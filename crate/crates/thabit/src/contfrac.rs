//! Certified continued fractions of reals known only through enclosures.
//!
//! A partial quotient is accepted only when every number in the current
//! enclosure has it: with `x` in `[lo, hi]`, `floor(lo) == floor(hi) == a`
//! and `lo > a` give `1/(x - a)` in `[1/(hi - a), 1/(lo - a)]`, and the
//! expansion continues on that interval. When the enclosure is too wide to
//! decide the next quotient, the real is re-evaluated at the next precision
//! of the policy.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{PrecisionPolicy, RefinableReal};

/// `p/q`, the convergent of index `index` (so `p_0/q_0 = a_0/1`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Convergent {
    #[serde(with = "crate::report::bigint_string")]
    pub p: BigInt,
    #[serde(with = "crate::report::bigint_string")]
    pub q: BigInt,
    pub index: usize,
}

/// Lazily extended, certified expansion of one real.
#[derive(Clone)]
pub struct ContinuedFraction {
    x: RefinableReal,
    policy: PrecisionPolicy,
    schedule_pos: usize,
    quotients: Vec<BigInt>,
    convergents: Vec<Convergent>,
    /// For a rational input: the complete (finite) expansion.
    finite: Option<Vec<BigInt>>,
}

impl ContinuedFraction {
    pub fn new(x: RefinableReal, policy: PrecisionPolicy) -> Self {
        let finite = x.witness().map(rational_expansion);
        ContinuedFraction {
            x,
            policy,
            schedule_pos: 0,
            quotients: Vec::new(),
            convergents: Vec::new(),
            finite,
        }
    }

    /// Makes sure at least `count` partial quotients are certified.
    pub fn ensure(&mut self, count: usize) -> Result<()> {
        if self.quotients.len() >= count {
            return Ok(());
        }
        if let Some(all) = &self.finite {
            if all.len() < count {
                return Err(Error::RationalInput {
                    value: self.x.witness().map(|w| w.to_string()).unwrap_or_default(),
                    available: all.len(),
                });
            }
            self.quotients = all[..count].to_vec();
            return Ok(());
        }
        let schedule = self.policy.schedule();
        while self.schedule_pos < schedule.len() {
            let bits = schedule[self.schedule_pos];
            let iv = self.x.eval(bits);
            let prefix = common_prefix(iv.lo().to_rational(), iv.hi().to_rational());
            debug_assert!(
                prefix.iter().zip(&self.quotients).all(|(a, b)| a == b),
                "refinement changed an accepted quotient"
            );
            if prefix.len() > self.quotients.len() {
                self.quotients = prefix;
            }
            if self.quotients.len() >= count {
                return Ok(());
            }
            self.schedule_pos += 1;
        }
        Err(Error::PrecisionExhausted {
            bits: self.policy.max_bits,
            context: format!(
                "expanding {} beyond {} partial quotients (is it rational?)",
                self.x.label(),
                self.quotients.len()
            ),
        })
    }

    pub fn quotients(&self) -> &[BigInt] {
        &self.quotients
    }

    pub fn convergent(&mut self, index: usize) -> Result<Convergent> {
        self.ensure(index + 1)?;
        while self.convergents.len() <= index {
            let k = self.convergents.len();
            let a = &self.quotients[k];
            let (p1, q1, p2, q2) = match k {
                0 => (BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one()),
                1 => {
                    let c = &self.convergents[0];
                    (c.p.clone(), c.q.clone(), BigInt::one(), BigInt::zero())
                }
                _ => {
                    let c1 = &self.convergents[k - 1];
                    let c2 = &self.convergents[k - 2];
                    (c1.p.clone(), c1.q.clone(), c2.p.clone(), c2.q.clone())
                }
            };
            self.convergents.push(Convergent {
                p: a * &p1 + p2,
                q: a * &q1 + q2,
                index: k,
            });
        }
        Ok(self.convergents[index].clone())
    }

    /// The first convergent whose denominator exceeds `threshold`.
    pub fn first_above(&mut self, threshold: &BigInt) -> Result<Convergent> {
        let mut k = 0;
        loop {
            let c = self.convergent(k)?;
            if c.q > *threshold {
                return Ok(c);
            }
            k += 1;
        }
    }
}

/// Longest common prefix of the expansions valid for every point of
/// `[lo, hi]`. Works on unreduced numerator/denominator pairs, so each step
/// is one integer division rather than a gcd.
fn common_prefix(lo: BigRational, hi: BigRational) -> Vec<BigInt> {
    let (mut ln, mut ld) = lo.into_raw();
    let (mut hn, mut hd) = hi.into_raw();
    let mut out = Vec::new();
    loop {
        let (a, lr) = ln.div_mod_floor(&ld);
        let (b, hr) = hn.div_mod_floor(&hd);
        if a != b {
            return out;
        }
        out.push(a);
        if lr.is_zero() {
            return out;
        }
        // x - a = r/d, so the next value is d/r; the endpoints swap.
        (ln, ld, hn, hd) = (hd, hr, ld, lr);
        if ld.is_zero() {
            return out;
        }
    }
}

fn rational_expansion(r: &BigRational) -> Vec<BigInt> {
    let (mut n, mut d) = (r.numer().clone(), r.denom().clone());
    let mut out = Vec::new();
    while !d.is_zero() {
        let (a, rem) = n.div_mod_floor(&d);
        out.push(a);
        n = d;
        d = rem;
    }
    out
}

/// The first `count` partial quotients of `x`.
pub fn cf_partial_quotients(
    x: &RefinableReal,
    count: usize,
    policy: &PrecisionPolicy,
) -> Result<Vec<BigInt>> {
    let mut cf = ContinuedFraction::new(x.clone(), policy.clone());
    cf.ensure(count)?;
    Ok(cf.quotients()[..count].to_vec())
}

/// The convergent of smallest index with `q > threshold`.
pub fn first_convergent_above(
    x: &RefinableReal,
    threshold: &BigInt,
    policy: &PrecisionPolicy,
) -> Result<Convergent> {
    ContinuedFraction::new(x.clone(), policy.clone()).first_above(threshold)
}

/// The convergent following `c` in the expansion of `x`.
pub fn next_convergent(
    c: &Convergent,
    x: &RefinableReal,
    policy: &PrecisionPolicy,
) -> Result<Convergent> {
    let mut cf = ContinuedFraction::new(x.clone(), policy.clone());
    let same = cf.convergent(c.index)?;
    if same != *c {
        return Err(Error::Precondition(format!(
            "{}/{} is not convergent {} of {}",
            c.p,
            c.q,
            c.index,
            x.label()
        )));
    }
    cf.convergent(c.index + 1)
}
