//! Exact integers and rationals plus certified interval arithmetic over the
//! reals.
//!
//! Irrational quantities never exist as floats here. They are
//! [`RefinableReal`]s that produce an [`Interval`] at any requested
//! precision, and every decision (a sign, a floor, a nearest integer) is
//! made only when the enclosure settles it. Undecided cases return `None`
//! and the caller escalates along a [`PrecisionPolicy`].

mod dyadic;
mod interval;
mod log;
mod refinable;
mod roots;

pub use dyadic::{Dyadic, Round};
pub use interval::{sci_string, Interval, ZeroCmp};
pub use log::{interval_log, interval_log_of};
pub use refinable::RefinableReal;
pub use roots::{common_power_base, integer_root, log_ratio_witness, rational_root};

pub use num_bigint::BigInt as Integer;
pub use num_rational::BigRational as Rational;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

/// How precise to start and how far to go before giving up.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionPolicy {
    pub initial_bits: u32,
    pub max_bits: u32,
    /// Multiplier applied at each escalation, as `numerator/denominator`.
    pub escalation_factor: (u32, u32),
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy {
            initial_bits: 1024,
            max_bits: 16384,
            escalation_factor: (2, 1),
        }
    }
}

impl PrecisionPolicy {
    pub fn new(
        initial_bits: u32,
        max_bits: u32,
        escalation_factor: (u32, u32),
    ) -> crate::Result<Self> {
        let p = PrecisionPolicy {
            initial_bits,
            max_bits,
            escalation_factor,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> crate::Result<()> {
        let (n, d) = self.escalation_factor;
        if self.initial_bits < 16 || self.initial_bits > self.max_bits || d == 0 || n <= d {
            return Err(crate::Error::Precondition(format!(
                "precision policy needs 16 <= initial ({}) <= max ({}) and factor {n}/{d} > 1",
                self.initial_bits, self.max_bits
            )));
        }
        Ok(())
    }

    /// The precisions to try, in order, ending exactly at `max_bits`.
    pub fn schedule(&self) -> Vec<u32> {
        let (n, d) = self.escalation_factor;
        let mut out = vec![self.initial_bits];
        let mut p = self.initial_bits as u64;
        while (p as u32) < self.max_bits {
            p = ((p * n as u64).div_ceil(d as u64))
                .max(p + 1)
                .min(self.max_bits as u64);
            out.push(p as u32);
        }
        out
    }
}

/// Exact `floor(x + 1/2)`.
pub fn rational_floor_nearest(x: &BigRational) -> BigInt {
    (x + BigRational::new(BigInt::one(), BigInt::from(2)))
        .floor()
        .to_integer()
}

/// Exact distance from `x` to the nearest integer.
pub fn rational_nearest_distance(x: &BigRational) -> BigRational {
    (x - BigRational::from_integer(rational_floor_nearest(x))).abs()
}
