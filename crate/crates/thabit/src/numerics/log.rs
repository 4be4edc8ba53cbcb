//! Natural logarithm of positive rationals with a proven error bound.
//!
//! `x = 2^k * y` with `y` in `[1/sqrt 2, sqrt 2)`, then
//! `ln y = 2 atanh t` where `t = (y - 1)/(y + 1)` and `|t| < 0.172`.
//! The series is summed in fixed point with `W` fractional bits; each step
//! carries a bounded truncation error, which is added to the result.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::dyadic::Dyadic;
use super::interval::Interval;
use crate::error::{Error, Result};

const GUARD_BITS: u32 = 64;

/// Fixed-point value `v / 2^W` with absolute error at most `err / 2^W`.
#[derive(Clone)]
struct Fixed {
    v: BigInt,
    err: BigInt,
}

/// `atanh(p/q) * 2^w` for `|p/q| <= 1/3`.
fn atanh_fixed(p: &BigInt, q: &BigInt, w: u32) -> Fixed {
    // x_j tracks t^(2j+1) * 2^w with error below 3 ulps: each update
    // multiplies the previous error by t^2 <= 1/9 and adds under 2 ulps.
    let mut x: BigInt = (p << w) / q;
    let u: BigInt = ((p * p) << w) / (q * q);
    let mut sum = BigInt::zero();
    let mut terms: u64 = 0;
    let mut j: u64 = 0;
    while x.abs() > BigInt::one() {
        sum += &x / BigInt::from(2 * j + 1);
        terms += 1;
        x = (&x * &u) >> w;
        j += 1;
    }
    // Each term: 3 ulps inherited plus 1 for the division. The tail beyond
    // the last term is bounded by (|x_j| + 3) / (1 - t^2) < 5 ulps.
    Fixed {
        v: sum,
        err: BigInt::from(4 * terms + 6),
    }
}

fn ln2_fixed(w: u32) -> Fixed {
    static CACHE: OnceLock<Mutex<HashMap<u32, Fixed>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(f) = cache.lock().unwrap().get(&w) {
        return f.clone();
    }
    let a = atanh_fixed(&BigInt::one(), &BigInt::from(3), w);
    let f = Fixed {
        v: a.v << 1,
        err: a.err << 1,
    };
    cache.lock().unwrap().insert(w, f.clone());
    f
}

/// Certified enclosure of `ln x` at `bits` bits of precision.
pub fn interval_log(x: &BigRational, bits: u32) -> Result<Interval> {
    if !x.is_positive() {
        return Err(Error::LogDomain(x.to_string()));
    }
    if x.is_one() {
        return Ok(Interval::from_integer(0, bits));
    }
    let num = x.numer();
    let den = x.denom();
    let mut k = num.bits() as i64 - den.bits() as i64;
    // y = num / (den * 2^k), represented as yn / yd.
    let split = |k: i64| -> (BigInt, BigInt) {
        if k >= 0 {
            (num.clone(), den << (k as u64))
        } else {
            (num << ((-k) as u64), den.clone())
        }
    };
    let (mut yn, mut yd) = split(k);
    let two = BigInt::from(2);
    if &yn * &yn >= &two * &yd * &yd {
        k += 1;
        (yn, yd) = split(k);
    } else if &two * &yn * &yn < &yd * &yd {
        k -= 1;
        (yn, yd) = split(k);
    }
    let kbits = 64 - k.unsigned_abs().leading_zeros();
    let w = bits + GUARD_BITS + kbits;

    let t = atanh_fixed(&(&yn - &yd), &(&yn + &yd), w);
    let mut v: BigInt = t.v << 1;
    let mut err: BigInt = t.err << 1;
    if k != 0 {
        let l2 = ln2_fixed(w);
        v += &l2.v * k;
        err += &l2.err * k.unsigned_abs();
    }
    let lo = Dyadic::new(&v - &err, -(w as i64));
    let hi = Dyadic::new(&v + &err, -(w as i64));
    Ok(Interval::new(lo, hi, bits))
}

/// Enclosure of `ln` over a positive interval (monotone, so endpoints
/// suffice).
pub fn interval_log_of(x: &Interval) -> Result<Interval> {
    if x.lo().signum() <= 0 {
        return Err(Error::LogDomain(x.to_string()));
    }
    let bits = x.precision_bits();
    let lo = interval_log(&x.lo().to_rational(), bits)?;
    let hi = interval_log(&x.hi().to_rational(), bits)?;
    Ok(lo.hull(&hi))
}
