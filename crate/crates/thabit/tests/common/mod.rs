//! Helpers shared by the integration tests. Apart from `brute`, nothing
//! here calls into the library's numerics, so the checks built on it are
//! independent.
#![allow(dead_code)]

pub mod brute;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Parses a plain decimal such as `-2.302585`.
pub fn dec(s: &str) -> BigRational {
    let (neg, s) = s.strip_prefix('-').map_or((false, s), |r| (true, r));
    let (whole, frac) = s.split_once('.').unwrap_or((s, ""));
    let digits: BigInt = format!("{whole}{frac}").parse().expect("decimal digits");
    let r = BigRational::new(digits, num_traits::pow(BigInt::from(10), frac.len()));
    if neg {
        -r
    } else {
        r
    }
}

/// Rounds to a multiple of `2^-bits`, down or up.
fn snap(x: &BigRational, bits: usize, up: bool) -> BigRational {
    let scale = BigInt::one() << bits;
    let scaled = x * BigRational::from_integer(scale.clone());
    let k = if up { scaled.ceil() } else { scaled.floor() };
    BigRational::new(k.to_integer(), scale)
}

/// Rigorous `(lower, upper)` bounds on `exp(y)` from the Taylor series.
pub fn exp_bounds(y: &BigRational) -> (BigRational, BigRational) {
    const BITS: usize = 256;
    if y.is_negative() {
        let (lo, hi) = exp_bounds(&-y);
        return (
            snap(&(BigRational::one() / hi), BITS, false),
            snap(&(BigRational::one() / lo), BITS, true),
        );
    }
    // Halve until z <= 1/2, so every tail term is at most half the previous.
    let mut k = 0u32;
    let mut z = y.clone();
    while z > q(1, 2) {
        z /= int(2);
        k += 1;
    }
    let mut sum = BigRational::zero();
    let mut term = BigRational::one();
    for i in 1..=60 {
        sum += &term;
        term = snap(&(&term * &z / int(i)), BITS + 64, false);
    }
    let mut lo = snap(&sum, BITS, false);
    // Tail <= 2 * next term, plus the truncation of each summed term.
    let mut hi = snap(
        &(&sum
            + &term * int(2)
            + q(61, 1) / BigRational::from_integer(BigInt::one() << (BITS + 64))),
        BITS,
        true,
    );
    for _ in 0..k {
        lo = snap(&(&lo * &lo), BITS, false);
        hi = snap(&(&hi * &hi), BITS, true);
    }
    (lo, hi)
}

/// Whether `[lo, hi]`, widened by `2^-200` to absorb the oracle's own
/// rounding, certainly contains `ln x`.
pub fn encloses_log(x: &BigRational, lo: &BigRational, hi: &BigRational) -> bool {
    let slack = BigRational::new(BigInt::one(), BigInt::one() << 200);
    exp_bounds(&(lo - &slack)).1 <= *x && *x <= exp_bounds(&(hi + &slack)).0
}

/// `||x||` for a rational.
pub fn nearest_distance(x: &BigRational) -> BigRational {
    let f = x.floor();
    let up = &f + BigRational::one() - x;
    let down = x - f;
    up.min(down)
}

/// Exact integer `(g^m - 1)/(g - 1)` by summing powers.
pub fn repunit_sum(g: u64, m: u64) -> BigInt {
    (0..m).fold(BigInt::zero(), |acc, _| acc * g + 1u32)
}

pub fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}
