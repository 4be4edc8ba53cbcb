//! Brute-force survivors of a reduction problem. Unlike the rest of the
//! helpers this evaluates `tau` and `mu` through the library, at a fixed
//! high precision, and then compares exactly.

use num_rational::BigRational;
use thabit::numerics::RefinableReal;
use thabit::reduction::ReductionProblem;

use super::int;

/// The largest `w` with `||m tau + mu|| < a b^-w`, if any `w >= -20` holds.
pub fn brute_w(p: &ReductionProblem, a: &BigRational, b: &BigRational, m: u64) -> Option<i64> {
    let x = p.tau.eval(600).mul_integer(&m.into()).add(&p.mu.eval(600));
    let d = x.nearest_integer_distance()?;
    if d.hi().is_zero() {
        return None;
    }
    let dlo = d.lo().to_rational();
    let mut w = -20i64;
    let bound = |w: i64| -> BigRational {
        if w >= 0 {
            a / num_traits::pow(b.clone(), w as usize)
        } else {
            a * num_traits::pow(b.clone(), (-w) as usize)
        }
    };
    if dlo >= bound(w) {
        return None;
    }
    while dlo < bound(w + 1) {
        w += 1;
    }
    Some(w)
}

pub fn tau_of(i: usize) -> RefinableReal {
    match i {
        0 => RefinableReal::sqrt(&int(2)).unwrap(),
        1 => RefinableReal::sqrt(&int(3)).unwrap(),
        _ => RefinableReal::log_ratio(&int(2), &int(3)).unwrap(),
    }
}
