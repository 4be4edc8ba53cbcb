//! Exact perfect-power decomposition, used to decide when a ratio of
//! logarithms is rational.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Writes a positive integer `n >= 2` as `a^e` with `a` not a perfect power.
pub fn integer_root(n: &BigInt) -> (BigInt, u32) {
    assert!(*n >= BigInt::from(2), "integer_root needs n >= 2");
    // n = a^(pq) iff n is a p-th power whose root is a q-th power, so
    // peeling prime exponents one at a time finds the largest e.
    let (mut a, mut e) = (n.clone(), 1u32);
    'peel: loop {
        for p in (2..=a.bits() as u32).filter(|&p| is_prime(p)) {
            let r = a.nth_root(p);
            if r < BigInt::from(2) {
                break;
            }
            if num_traits::pow(r.clone(), p as usize) == a {
                a = r;
                e *= p;
                continue 'peel;
            }
        }
        return (a, e);
    }
}

fn is_prime(p: u32) -> bool {
    p >= 2
        && (2..)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

/// Writes a positive rational `x != 1` as `a^e` with `a > 1` rational and
/// `e` a nonzero integer, `e` as large as possible in absolute value.
pub fn rational_root(x: &BigRational) -> (BigRational, i64) {
    assert!(
        x.is_positive() && !x.is_one(),
        "rational_root needs x > 0, x != 1"
    );
    let (flip, x) = if *x < BigRational::one() {
        (true, x.recip())
    } else {
        (false, x.clone())
    };
    let (n, d) = (x.numer(), x.denom());
    // n = A^i with A not a power, so n is an e-th power iff e | i.
    let (an, en) = integer_root(n);
    let best = if d.is_one() {
        (BigRational::from_integer(an), en)
    } else {
        let (ad, ed) = integer_root(d);
        let e = en.gcd(&ed);
        let pow = |a: BigInt, k: u32| num_traits::pow(a, k as usize);
        (BigRational::new(pow(an, en / e), pow(ad, ed / e)), e)
    };
    let best = (best.0, best.1 as i64);
    if flip {
        (best.0, -best.1)
    } else {
        best
    }
}

/// `ln x / ln y` as an exact rational when it is one.
pub fn log_ratio_witness(x: &BigRational, y: &BigRational) -> Option<BigRational> {
    if x.is_one() {
        return Some(BigRational::zero());
    }
    if !x.is_positive() || !y.is_positive() || y.is_one() {
        return None;
    }
    if y.is_integer() || y.recip().is_integer() {
        return witness_integer_base(x, y);
    }
    let (a, i) = rational_root(x);
    let (b, j) = rational_root(y);
    (a == b).then(|| BigRational::new(BigInt::from(i), BigInt::from(j)))
}

/// Fast path when `y` or `1/y` is an integer `A^e` with `A` not a power:
/// the ratio is rational exactly when `x` or `1/x` is an integer power of
/// `A`, found by repeated division.
fn witness_integer_base(x: &BigRational, y: &BigRational) -> Option<BigRational> {
    let (y_int, y_sign) = if y.is_integer() {
        (y.to_integer(), 1)
    } else {
        (y.recip().to_integer(), -1)
    };
    let (a, e) = integer_root(&y_int);
    let (x_int, x_sign) = if x.is_integer() {
        (x.to_integer(), 1)
    } else if x.numer().is_one() {
        (x.denom().clone(), -1)
    } else {
        return None;
    };
    let mut rest = x_int;
    let mut k: i64 = 0;
    while rest > BigInt::one() {
        let (q, r) = rest.div_rem(&a);
        if !r.is_zero() {
            return None;
        }
        rest = q;
        k += 1;
    }
    Some(BigRational::new(
        BigInt::from(k * x_sign * y_sign),
        BigInt::from(e),
    ))
}

/// `(a, e_b, e_g)` with `b = a^e_b`, `g = a^e_g` and `a` minimal, if any.
pub fn common_power_base(b: &BigInt, g: &BigInt) -> Option<(BigInt, u32, u32)> {
    let (a1, e1) = integer_root(b);
    let (a2, e2) = integer_root(g);
    if a1 != a2 {
        return None;
    }
    Some((a1, e1, e2))
}
