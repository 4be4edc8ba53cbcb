use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::dyadic::{Dyadic, Round};

/// Outcome of a sign test on an enclosure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroCmp {
    Negative,
    Positive,
    Ambiguous,
}

/// A closed interval `[lo, hi]` with dyadic endpoints that encloses some
/// real number. Every operation rounds outward, so the exact result of the
/// operation on any enclosed inputs stays inside the output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
    bits: u32,
}

impl Interval {
    /// Builds `[lo, hi]`, rounding both ends outward to `bits` bits.
    pub fn new(lo: Dyadic, hi: Dyadic, bits: u32) -> Self {
        assert!(lo <= hi, "interval endpoints out of order: {lo} > {hi}");
        Interval {
            lo: lo.round(bits, Round::Down),
            hi: hi.round(bits, Round::Up),
            bits,
        }
    }

    pub fn point(x: Dyadic, bits: u32) -> Self {
        Interval::new(x.clone(), x, bits)
    }

    pub fn from_integer(n: impl Into<BigInt>, bits: u32) -> Self {
        Interval::point(Dyadic::from_int(n), bits)
    }

    pub fn from_rational(r: &BigRational, bits: u32) -> Self {
        Interval {
            lo: Dyadic::from_rational(r, bits, Round::Down),
            hi: Dyadic::from_rational(r, bits, Round::Up),
            bits,
        }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn precision_bits(&self) -> u32 {
        self.bits
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn midpoint(&self) -> Dyadic {
        self.lo.add(&self.hi).mul_pow2(-1)
    }

    pub fn contains_rational(&self, r: &BigRational) -> bool {
        self.lo.to_rational() <= *r && *r <= self.hi.to_rational()
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.signum() <= 0 && self.hi.signum() >= 0
    }

    /// True when `self` lies inside `other`.
    pub fn is_within(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn compare_zero(&self) -> ZeroCmp {
        if self.hi.signum() < 0 {
            ZeroCmp::Negative
        } else if self.lo.signum() > 0 {
            ZeroCmp::Positive
        } else {
            ZeroCmp::Ambiguous
        }
    }

    /// Certified `a < b`: `Some(true)` / `Some(false)` when the enclosures
    /// decide it, `None` when they overlap.
    pub fn certainly_less(&self, other: &Interval) -> Option<bool> {
        if self.hi < other.lo {
            Some(true)
        } else if self.lo >= other.hi {
            Some(false)
        } else {
            None
        }
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
            bits: self.bits,
        }
    }

    pub fn add(&self, other: &Interval) -> Interval {
        let bits = self.bits.min(other.bits);
        Interval::new(self.lo.add(&other.lo), self.hi.add(&other.hi), bits)
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let bits = self.bits.min(other.bits);
        let products = [
            self.lo.mul(&other.lo),
            self.lo.mul(&other.hi),
            self.hi.mul(&other.lo),
            self.hi.mul(&other.hi),
        ];
        let lo = products.iter().min().unwrap().clone();
        let hi = products.iter().max().unwrap().clone();
        Interval::new(lo, hi, bits)
    }

    pub fn mul_integer(&self, k: &BigInt) -> Interval {
        let k = Dyadic::from_int(k.clone());
        let (a, b) = (self.lo.mul(&k), self.hi.mul(&k));
        if a <= b {
            Interval::new(a, b, self.bits)
        } else {
            Interval::new(b, a, self.bits)
        }
    }

    pub fn mul_rational(&self, r: &BigRational) -> Interval {
        self.mul(&Interval::from_rational(r, self.bits))
    }

    /// Quotient; `None` if the divisor may be zero.
    pub fn div(&self, other: &Interval) -> Option<Interval> {
        if other.contains_zero() {
            return None;
        }
        let bits = self.bits.min(other.bits);
        let pairs = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let lo = pairs
            .iter()
            .map(|(a, c)| a.div_round(c, bits, Round::Down))
            .min()
            .expect("four quotients");
        let hi = pairs
            .iter()
            .map(|(a, c)| a.div_round(c, bits, Round::Up))
            .max()
            .expect("four quotients");
        Some(Interval { lo, hi, bits })
    }

    /// Square root; `None` if the interval reaches below zero.
    pub fn sqrt(&self) -> Option<Interval> {
        if self.lo.signum() < 0 {
            return None;
        }
        Some(Interval {
            lo: sqrt_dyadic(&self.lo, self.bits, Round::Down),
            hi: sqrt_dyadic(&self.hi, self.bits, Round::Up),
            bits: self.bits,
        })
    }

    /// Interval hull of the two enclosures.
    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
            bits: self.bits.min(other.bits),
        }
    }

    /// Enclosure of the distance to the nearest integer, or `None` when the
    /// two endpoints round to different integers (the enclosure straddles a
    /// half-integer).
    pub fn nearest_integer_distance(&self) -> Option<Interval> {
        let k = self.floor_nearest()?;
        let kd = Dyadic::from_int(k);
        let a = self.lo.sub(&kd);
        let b = self.hi.sub(&kd);
        let (lo, hi) = if a.signum() <= 0 && b.signum() >= 0 {
            let m = if -&a > b { -&a } else { b };
            (Dyadic::zero(), m)
        } else {
            let (x, y) = (a.abs(), b.abs());
            if x <= y {
                (x, y)
            } else {
                (y, x)
            }
        };
        Some(Interval::new(lo, hi, self.bits))
    }

    /// `floor(x + 1/2)` when both endpoints agree on it.
    pub fn floor_nearest(&self) -> Option<BigInt> {
        let half = Dyadic::new(BigInt::one(), -1);
        let a = self.lo.add(&half).floor();
        let b = self.hi.add(&half).floor();
        (a == b).then_some(a)
    }

    /// Largest integer `w` with `w < x` for some enclosed `x`.
    pub fn largest_integer_below(&self) -> BigInt {
        self.hi.ceil() - 1
    }

    pub fn to_f64(&self) -> f64 {
        self.midpoint().to_f64()
    }

    /// Upper endpoint in scientific notation with `digits` significant
    /// digits, rounded up; used for bound reporting.
    pub fn upper_sci(&self, digits: usize) -> String {
        sci_string(&self.hi.to_rational(), digits, Round::Up)
    }

    /// Lower endpoint in scientific notation, rounded down.
    pub fn lower_sci(&self, digits: usize) -> String {
        sci_string(&self.lo.to_rational(), digits, Round::Down)
    }
}

fn sqrt_dyadic(x: &Dyadic, bits: u32, dir: Round) -> Dyadic {
    if x.is_zero() {
        return Dyadic::zero();
    }
    // Scale to an even exponent with plenty of bits, take the integer root.
    let target = 2 * (bits as i64 + 4);
    let have = x.mantissa().bits() as i64;
    let mut shift = (target - have).max(0);
    if (x.exponent() - shift) % 2 != 0 {
        shift += 1;
    }
    let n: BigInt = x.mantissa() << (shift as u64);
    let e = x.exponent() - shift;
    let r = n.sqrt();
    let r = if dir == Round::Up && &r * &r != n {
        r + 1
    } else {
        r
    };
    Dyadic::new(r, e / 2).round(bits, dir)
}

/// Decimal scientific rendering of a rational, rounded in direction `dir`.
pub fn sci_string(r: &BigRational, digits: usize, dir: Round) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    let neg = r.is_negative();
    let a = r.abs();
    let dir = if neg {
        match dir {
            Round::Up => Round::Down,
            Round::Down => Round::Up,
        }
    } else {
        dir
    };
    let ten = BigInt::from(10);
    // Estimate the decimal exponent, then correct it.
    let mut e = ((a.numer().bits() as f64 - a.denom().bits() as f64) * std::f64::consts::LOG10_2)
        .floor() as i64;
    let pow = |k: i64| -> BigRational {
        if k >= 0 {
            BigRational::from_integer(num_traits::pow(ten.clone(), k as usize))
        } else {
            BigRational::new(BigInt::one(), num_traits::pow(ten.clone(), (-k) as usize))
        }
    };
    while pow(e) > a {
        e -= 1;
    }
    while pow(e + 1) <= a {
        e += 1;
    }
    let scaled = &a / pow(e - digits as i64 + 1);
    let mut m = match dir {
        Round::Down => scaled.floor().to_integer(),
        Round::Up => scaled.ceil().to_integer(),
    };
    // Rounding up can carry into a new digit; that only happens at an exact
    // power of ten, so the division below is exact.
    if m.to_string().len() > digits {
        m /= &ten;
        e += 1;
    }
    let s = m.to_string();
    let (head, tail) = s.split_at(1);
    let tail = tail.trim_end_matches('0');
    let sign = if neg { "-" } else { "" };
    if tail.is_empty() {
        format!("{sign}{head}e{e}")
    } else {
        format!("{sign}{head}.{tail}e{e}")
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lower_sci(12), self.upper_sci(12))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn around(n: i64, d: i64) -> Interval {
        Interval::from_rational(&q(n, d), 64)
    }

    fn straddle(center: (i64, i64), eps: (i64, i64)) -> Interval {
        let c = q(center.0, center.1);
        let e = q(eps.0, eps.1);
        Interval::new(
            Dyadic::from_rational(&(&c - &e), 64, Round::Down),
            Dyadic::from_rational(&(&c + &e), 64, Round::Up),
            64,
        )
    }

    #[test]
    fn distance_to_nearest_integer() {
        let d = around(12, 5).nearest_integer_distance().unwrap();
        assert!(d.contains_rational(&q(2, 5)));
        let half = Interval::point(Dyadic::new((-1).into(), -1), 64);
        let d = half.nearest_integer_distance().unwrap();
        assert_eq!(d.lo(), &Dyadic::new(1.into(), -1));
        assert_eq!(d.hi(), &Dyadic::new(1.into(), -1));
        assert!(straddle((5, 2), (1, 10000))
            .nearest_integer_distance()
            .is_none());
    }

    #[test]
    fn distance_across_an_integer_starts_at_zero() {
        let d = straddle((3, 1), (1, 100))
            .nearest_integer_distance()
            .unwrap();
        assert!(d.lo().is_zero());
        assert!(d.contains_rational(&q(1, 100)));
    }

    #[test]
    fn nearest_integer_floor() {
        assert_eq!(around(16, 5).floor_nearest(), Some(BigInt::from(3)));
        assert_eq!(around(-3, 5).floor_nearest(), Some(BigInt::from(-1)));
        assert_eq!(straddle((7, 2), (1, 10000)).floor_nearest(), None);
    }

    #[test]
    fn sign_tests() {
        let iv = |a: (i64, i64), b: (i64, i64)| {
            Interval::new(
                Dyadic::from_rational(&q(a.0, a.1), 64, Round::Down),
                Dyadic::from_rational(&q(b.0, b.1), 64, Round::Up),
                64,
            )
        };
        assert_eq!(iv((1, 10), (2, 10)).compare_zero(), ZeroCmp::Positive);
        assert_eq!(iv((-2, 10), (-1, 10)).compare_zero(), ZeroCmp::Negative);
        assert_eq!(iv((-1, 10), (1, 10)).compare_zero(), ZeroCmp::Ambiguous);
    }

    #[test]
    fn sqrt_brackets_root_two() {
        let r = Interval::from_integer(2, 200).sqrt().unwrap();
        let lo = r.lo().to_rational();
        let hi = r.hi().to_rational();
        let two = q(2, 1);
        assert!(&lo * &lo <= two && &hi * &hi >= two);
        assert!(r.width() < Dyadic::new(1.into(), -195));
    }

    #[test]
    fn division_requires_a_nonzero_divisor() {
        let a = around(1, 1);
        assert!(a.div(&straddle((0, 1), (1, 10))).is_none());
        let third = a.div(&around(3, 1)).unwrap();
        assert!(third.contains_rational(&q(1, 3)));
    }

    #[test]
    fn scientific_rendering_rounds_outward() {
        assert_eq!(sci_string(&q(372280000000, 1), 5, Round::Up), "3.7228e11");
        assert_eq!(sci_string(&q(1, 3), 3, Round::Up), "3.34e-1");
        assert_eq!(sci_string(&q(1, 3), 3, Round::Down), "3.33e-1");
        assert_eq!(sci_string(&q(-1, 3), 3, Round::Down), "-3.34e-1");
        assert_eq!(sci_string(&q(9999, 1), 2, Round::Up), "1e4");
    }
}
