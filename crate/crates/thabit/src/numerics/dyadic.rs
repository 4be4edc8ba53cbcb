use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Rounding direction for operations that must drop bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
}

/// `mantissa * 2^exponent`, an exact binary fraction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: BigInt,
    exponent: i64,
}

impl Dyadic {
    pub fn new(mantissa: BigInt, exponent: i64) -> Self {
        Dyadic { mantissa, exponent }.normalized()
    }

    pub fn zero() -> Self {
        Dyadic {
            mantissa: BigInt::zero(),
            exponent: 0,
        }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Dyadic::new(n.into(), 0)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.mantissa.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    // Strip trailing zero bits so equal values compare equal structurally.
    fn normalized(mut self) -> Self {
        if self.mantissa.is_zero() {
            self.exponent = 0;
            return self;
        }
        let tz = self.mantissa.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mantissa >>= tz;
            self.exponent += tz as i64;
        }
        self
    }

    /// Round to at most `bits` significant bits in direction `dir`.
    pub fn round(&self, bits: u32, dir: Round) -> Dyadic {
        let len = self.mantissa.bits();
        if len <= bits as u64 {
            return self.clone();
        }
        let shift = len - bits as u64;
        let m = shift_floor(&self.mantissa, shift);
        let m = match dir {
            Round::Down => m,
            Round::Up => {
                if (&m << shift) == self.mantissa {
                    m
                } else {
                    m + 1
                }
            }
        };
        Dyadic::new(m, self.exponent + shift as i64)
    }

    /// Nearest dyadic with `bits` significant bits on the requested side of
    /// the rational `r`.
    pub fn from_rational(r: &BigRational, bits: u32, dir: Round) -> Dyadic {
        if r.is_zero() {
            return Dyadic::zero();
        }
        let num = r.numer();
        let den = r.denom();
        // Pick e so that |r| / 2^e has roughly `bits + 1` integer bits.
        let e = num.bits() as i64 - den.bits() as i64 - bits as i64 - 1;
        let (n, d) = if e >= 0 {
            (num.clone(), den << (e as u64))
        } else {
            (num << ((-e) as u64), den.clone())
        };
        let (q, rem) = n.div_mod_floor(&d);
        let m = match dir {
            Round::Down => q,
            Round::Up => {
                if rem.is_zero() {
                    q
                } else {
                    q + 1
                }
            }
        };
        Dyadic::new(m, e).round(bits, dir)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exponent >= 0 {
            BigRational::from_integer(&self.mantissa << (self.exponent as u64))
        } else {
            // A normalized mantissa is odd, so the fraction is already reduced.
            BigRational::new_raw(
                self.mantissa.clone(),
                BigInt::one() << ((-self.exponent) as u64),
            )
        }
    }

    /// `self / other` rounded to `bits` significant bits in direction `dir`.
    pub fn div_round(&self, other: &Dyadic, bits: u32, dir: Round) -> Dyadic {
        assert!(!other.is_zero(), "division by zero");
        if self.is_zero() {
            return Dyadic::zero();
        }
        // Floor division of the mantissas, shifted so the quotient keeps at
        // least `bits + 2` bits, then one directed rounding.
        let shift = (bits as i64 + 2 + other.mantissa.bits() as i64 - self.mantissa.bits() as i64)
            .max(0) as u64;
        let (q, r) = (&self.mantissa << shift).div_mod_floor(&other.mantissa);
        let q = match dir {
            Round::Up if !r.is_zero() => q + 1,
            _ => q,
        };
        Dyadic::new(q, self.exponent - other.exponent - shift as i64).round(bits, dir)
    }

    /// Largest integer not above the value.
    pub fn floor(&self) -> BigInt {
        if self.exponent >= 0 {
            &self.mantissa << (self.exponent as u64)
        } else {
            shift_floor(&self.mantissa, (-self.exponent) as u64)
        }
    }

    /// Smallest integer not below the value.
    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        let e = self.exponent.min(other.exponent);
        let a = &self.mantissa << ((self.exponent - e) as u64);
        let b = &other.mantissa << ((other.exponent - e) as u64);
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&-other)
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(
            &self.mantissa * &other.mantissa,
            self.exponent + other.exponent,
        )
    }

    pub fn mul_pow2(&self, k: i64) -> Dyadic {
        Dyadic::new(self.mantissa.clone(), self.exponent + k)
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic {
            mantissa: self.mantissa.abs(),
            exponent: self.exponent,
        }
    }

    /// Rough conversion for display and diagnostics only.
    pub fn to_f64(&self) -> f64 {
        let bits = self.mantissa.bits() as i64;
        let drop = (bits - 60).max(0);
        let m = shift_floor(&self.mantissa, drop as u64);
        let m: f64 = m.to_string().parse().unwrap_or(f64::NAN);
        m * 2f64.powi((self.exponent + drop).clamp(i32::MIN as i64, i32::MAX as i64) as i32)
    }
}

/// `floor(m / 2^shift)` for signed `m`.
pub(crate) fn shift_floor(m: &BigInt, shift: u64) -> BigInt {
    // BigInt's right shift rounds toward negative infinity.
    m >> shift
}

impl std::ops::Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            mantissa: -&self.mantissa,
            exponent: self.exponent,
        }
    }
}

impl std::ops::Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        -&self
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exponent.min(other.exponent);
        let a = &self.mantissa << ((self.exponent - e) as u64);
        let b = &other.mantissa << ((other.exponent - e) as u64);
        a.cmp(&b)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rational_rounding_brackets_the_value() {
        for (n, d) in [(1, 3), (-1, 3), (22, 7), (-355, 113), (1, 1 << 20), (5, 1)] {
            let r = q(n, d);
            let lo = Dyadic::from_rational(&r, 40, Round::Down);
            let hi = Dyadic::from_rational(&r, 40, Round::Up);
            assert!(lo.to_rational() <= r && r <= hi.to_rational());
            assert!(lo.mantissa().bits() <= 40 && hi.mantissa().bits() <= 40);
            let width = hi.to_rational() - lo.to_rational();
            assert!(
                width * BigRational::from_integer(BigInt::one() << 38u32) <= r.abs().max(q(1, 1))
            );
        }
    }

    #[test]
    fn exact_values_round_to_themselves() {
        let r = q(3, 8);
        assert_eq!(
            Dyadic::from_rational(&r, 8, Round::Down),
            Dyadic::new(3.into(), -3)
        );
        assert_eq!(
            Dyadic::from_rational(&r, 8, Round::Up),
            Dyadic::new(3.into(), -3)
        );
    }

    #[test]
    fn floor_and_ceil() {
        let x = Dyadic::new((-5).into(), -1); // -2.5
        assert_eq!(x.floor(), BigInt::from(-3));
        assert_eq!(x.ceil(), BigInt::from(-2));
        let y = Dyadic::new(7.into(), 2);
        assert_eq!(y.floor(), BigInt::from(28));
        assert_eq!(y.ceil(), BigInt::from(28));
    }

    #[test]
    fn round_up_and_down_differ_by_one_ulp() {
        let x = Dyadic::new(0b1011_0111.into(), 0);
        let lo = x.round(4, Round::Down);
        let hi = x.round(4, Round::Up);
        assert_eq!(lo, Dyadic::new(0b1011.into(), 4));
        assert_eq!(hi, Dyadic::new(0b1100.into(), 4));
        let neg = (-&x).round(4, Round::Down);
        assert_eq!(neg, Dyadic::new((-0b1100).into(), 4));
    }
}
