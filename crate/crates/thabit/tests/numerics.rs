mod common;

use common::{dec, encloses_log, int, nearest_distance, q};
use num_rational::BigRational;
use proptest::prelude::*;
use thabit::numerics::{interval_log, Dyadic, Interval, RefinableReal, Round, ZeroCmp};

fn iv(lo: &BigRational, hi: &BigRational) -> Interval {
    Interval::new(
        Dyadic::from_rational(lo, 64, Round::Down),
        Dyadic::from_rational(hi, 64, Round::Up),
        64,
    )
}

fn ends(x: &Interval) -> (BigRational, BigRational) {
    (x.lo().to_rational(), x.hi().to_rational())
}

// 60 digits of ln 10, ln 2 and ln 3 from an independent multiprecision run.
const LN10: &str = "2.302585092994045684017991454684364207601101488628772976033327";
const LN2: &str = "0.693147180559945309417232121458176568075500134360255254120680";
const LN3: &str = "1.098612288668109691395245236922525704647490557822749451734694";

#[test]
fn log_of_one_is_a_tiny_interval_around_zero() {
    let x = interval_log(&int(1), 64).unwrap();
    assert!(x.contains_rational(&int(0)));
    assert!(x.width().to_rational() <= q(1, 1 << 62));
}

#[test]
fn log_matches_reference_constants() {
    for (x, s) in [(10, LN10), (2, LN2), (3, LN3)] {
        let e = interval_log(&int(x), 128).unwrap();
        let r = dec(s);
        let slack = q(1, 1) / BigRational::from_integer(num_traits::pow(10.into(), 58));
        let (lo, hi) = ends(&e);
        assert!(lo <= &r + &slack && &r - &slack <= hi, "ln {x}");
        assert!(e.width().to_rational() < q(1, 1 << 60) * q(1, 1 << 60));
    }
}

#[test]
fn log_of_a_quotient_agrees_with_the_difference() {
    let a = interval_log(&q(9, 7), 128).unwrap();
    let b = interval_log(&int(9), 128)
        .unwrap()
        .sub(&interval_log(&int(7), 128).unwrap());
    assert!(a.lo() <= b.hi() && b.lo() <= a.hi());
}

#[test]
fn log_rejects_nonpositive_arguments() {
    assert!(interval_log(&int(0), 64).is_err());
    assert!(interval_log(&q(-3, 2), 64).is_err());
}

#[test]
fn nearest_distance_examples() {
    let d = Interval::from_rational(&q(12, 5), 128)
        .nearest_integer_distance()
        .unwrap();
    assert!(d.contains_rational(&q(2, 5)));
    let half = Interval::from_rational(&q(-1, 2), 64)
        .nearest_integer_distance()
        .unwrap();
    assert_eq!(ends(&half), (q(1, 2), q(1, 2)));
    assert!(iv(&dec("2.4999"), &dec("2.5001"))
        .nearest_integer_distance()
        .is_none());
}

#[test]
fn floor_nearest_examples() {
    assert_eq!(
        Interval::from_rational(&q(16, 5), 64).floor_nearest(),
        Some(3.into())
    );
    assert_eq!(
        Interval::from_rational(&q(-3, 5), 64).floor_nearest(),
        Some((-1).into())
    );
    assert_eq!(iv(&dec("3.4999"), &dec("3.5001")).floor_nearest(), None);
}

#[test]
fn sign_of_an_interval() {
    assert_eq!(iv(&q(1, 10), &q(2, 10)).compare_zero(), ZeroCmp::Positive);
    assert_eq!(iv(&q(-2, 10), &q(-1, 10)).compare_zero(), ZeroCmp::Negative);
    assert_eq!(iv(&q(-1, 10), &q(1, 10)).compare_zero(), ZeroCmp::Ambiguous);
}

#[test]
fn refinement_never_loses_the_value() {
    let x = RefinableReal::log_ratio(&int(2), &int(10)).unwrap();
    let reference = dec(LN2) / dec(LN10);
    let slack = q(1, 1) / BigRational::from_integer(num_traits::pow(10.into(), 55));
    let mut prev_width = None;
    for bits in [64, 128, 256, 512] {
        let e = x.eval(bits);
        let (lo, hi) = ends(&e);
        assert!(lo <= &reference + &slack && &reference - &slack <= hi);
        let w = e.width().to_rational();
        if let Some(p) = prev_width {
            assert!(w < p);
        }
        prev_width = Some(w);
    }
}

fn rational() -> impl Strategy<Value = BigRational> {
    (1i64..1_000_000_000, 1i64..1_000_000_000).prop_map(|(n, d)| q(n, d))
}

fn signed_rational() -> impl Strategy<Value = BigRational> {
    (-1_000_000i64..1_000_000, 1i64..1_000).prop_map(|(n, d)| q(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn log_enclosure_is_sound_and_tight(x in rational(), bits in prop::sample::select(vec![32u32, 64, 128, 256])) {
        let e = interval_log(&x, bits).unwrap();
        let (lo, hi) = ends(&e);
        prop_assert!(encloses_log(&x, &lo, &hi));
        let scale = BigRational::from_integer(num_bigint::BigInt::from(1) << (bits - 8));
        prop_assert!(e.width().to_rational() * scale < int(64));
    }

    #[test]
    fn interval_ops_contain_the_exact_result(a in signed_rational(), b in signed_rational(), bits in 24u32..200) {
        let (x, y) = (Interval::from_rational(&a, bits), Interval::from_rational(&b, bits));
        prop_assert!(x.add(&y).contains_rational(&(&a + &b)));
        prop_assert!(x.sub(&y).contains_rational(&(&a - &b)));
        prop_assert!(x.mul(&y).contains_rational(&(&a * &b)));
        match x.div(&y) {
            Some(z) => prop_assert!(z.contains_rational(&(&a / &b))),
            None => prop_assert!(y.contains_zero()),
        }
        if a >= int(0) {
            let s = x.sqrt().unwrap();
            let (lo, hi) = ends(&s);
            prop_assert!(&lo * &lo <= a && a <= &hi * &hi);
        }
    }

    #[test]
    fn nearest_distance_of_a_point_is_exact(a in signed_rational()) {
        let x = Interval::from_rational(&a, 256);
        if let Some(d) = x.nearest_integer_distance() {
            prop_assert!(d.contains_rational(&nearest_distance(&a)));
        }
    }

    #[test]
    fn dyadic_rounding_brackets_the_value(a in signed_rational(), bits in 8u32..128) {
        let lo = Dyadic::from_rational(&a, bits, Round::Down).to_rational();
        let hi = Dyadic::from_rational(&a, bits, Round::Up).to_rational();
        prop_assert!(lo <= a && a <= hi);
    }
}

#[test]
fn the_exp_oracle_rejects_a_shifted_enclosure() {
    let x = int(10);
    let (lo, hi) = ends(&interval_log(&x, 256).unwrap());
    assert!(encloses_log(&x, &lo, &hi));
    let shift = q(1, 1 << 40);
    assert!(!encloses_log(&x, &(&lo + &shift), &(&hi + &shift)));
    assert!(!encloses_log(&x, &(&lo - &shift), &(&hi - &shift)));
}
