mod common;

use common::repunit_sum;
use num_bigint::BigInt;
use proptest::prelude::*;
use thabit::enumerate::{
    check_solution, detect_families, enumerate_box, family_member, is_canonical, lhs_value,
    oracle_enumerate, repunit, solve_g2, EquationSpec, FamilyKind, Mode, SearchBox, SolutionTuple,
    Span, TieBreak,
};

fn spec(b: u64, g: u64, s: i8, c: i8, mode: Mode) -> EquationSpec {
    EquationSpec::new(b, g, s, c, mode).unwrap()
}

fn t(d1: u64, d2: u64, l: u64, m: u64, n: u64) -> SolutionTuple {
    SolutionTuple::new(d1, d2, l, m, n)
}

#[test]
fn repunits() {
    assert_eq!(repunit(10, 3), BigInt::from(111));
    assert_eq!(repunit(2, 5), BigInt::from(31));
    for g in 2..40 {
        assert_eq!(repunit(g, 1), BigInt::from(1));
    }
}

#[test]
fn left_sides() {
    assert_eq!(
        lhs_value(&spec(2, 10, 1, -1, Mode::Sum), 3),
        BigInt::from(23)
    );
    assert_eq!(
        lhs_value(&spec(2, 10, -1, -1, Mode::Sum), 8),
        BigInt::from(255)
    );
    assert_eq!(
        lhs_value(&spec(10, 10, -1, 1, Mode::Sum), 1),
        BigInt::from(91)
    );
}

#[test]
fn solution_checks() {
    assert!(check_solution(
        &spec(2, 10, -1, -1, Mode::Sum),
        &t(3, 2, 2, 3, 8)
    ));
    assert!(check_solution(
        &spec(2, 10, -1, -1, Mode::Diff),
        &t(5, 4, 3, 2, 9)
    ));
    // 11 + 22 = 33, not 23.
    assert!(!check_solution(
        &spec(2, 10, 1, -1, Mode::Sum),
        &t(1, 2, 2, 2, 3)
    ));
    assert!(check_solution(
        &spec(10, 10, -1, 1, Mode::Sum),
        &t(3, 8, 1, 2, 1)
    ));
}

#[test]
fn invalid_specs_are_rejected() {
    assert!(EquationSpec::new(1, 10, 1, 1, Mode::Sum).is_err());
    assert!(EquationSpec::new(2, 1, 1, 1, Mode::Sum).is_err());
    assert!(EquationSpec::new(2, 10, 0, 1, Mode::Sum).is_err());
    assert!(EquationSpec::new(2, 10, 1, 2, Mode::Diff).is_err());
}

#[test]
fn family_detection() {
    let a = detect_families(&spec(2, 4, -1, 1, Mode::Sum));
    assert_eq!(a.len(), 1);
    assert_eq!(a[0].kind, FamilyKind::A { k: 2 });
    assert_eq!(family_member(&a[0], 3).unwrap(), t(2, 3, 1, 3, 6));
    let c = detect_families(&spec(10, 10, -1, -1, Mode::Sum));
    assert_eq!(c.len(), 1);
    assert_eq!(c[0].kind, FamilyKind::C);
    assert_eq!(family_member(&c[0], 4).unwrap(), t(1, 8, 4, 5, 4));
    assert!(detect_families(&spec(3, 10, 1, 1, Mode::Sum)).is_empty());
    let b = detect_families(&spec(2, 4, -1, -1, Mode::Sum));
    let b1 = b.iter().find(|f| f.d1 == 1).unwrap();
    assert_eq!(b1.kind, FamilyKind::B { k: 2 });
    assert_eq!(family_member(b1, 2).unwrap(), t(1, 2, 2, 2, 4));
    assert!(family_member(b1, 0).is_err());
}

#[test]
fn family_identities_by_hand() {
    // 9 * 10^4 - 1 = 1111 + 8 * 11111; 2^6 + 1 = 2 + 3 * 21; 2^4 - 1 = 5 + 2 * 5.
    assert_eq!(BigInt::from(89999), repunit(10, 4) + 8 * repunit(10, 5));
    assert_eq!(BigInt::from(65), 2 * repunit(4, 1) + 3 * repunit(4, 3));
    assert_eq!(BigInt::from(15), repunit(4, 2) + 2 * repunit(4, 2));
}

#[test]
fn base_two_sums_have_seventy_one_solutions() {
    let bx = SearchBox::new(10, 121, 49, 49);
    let mut all = Vec::new();
    for s in EquationSpec::all_signs(2, 10, Mode::Sum).unwrap() {
        all.extend(enumerate_box(
            &s,
            &bx,
            &detect_families(&s),
            TieBreak::Ordered,
        ));
    }
    assert_eq!(all.len(), 71);
    let count = |l, m, n| all.iter().filter(|x| (x.l, x.m, x.n) == (l, m, n)).count();
    assert_eq!(
        [
            count(1, 1, 0),
            count(1, 1, 1),
            count(1, 1, 2),
            count(1, 1, 3)
        ],
        [5, 12, 20, 14]
    );
    assert_eq!(all.iter().filter(|x| x.n >= 1).count(), 66);
    assert!(all.iter().all(|x| x.l <= x.m));
}

#[test]
fn base_ten_sums_without_the_family() {
    let bx = SearchBox::new(10, 12, 12, 12);
    let mut all = Vec::new();
    for s in EquationSpec::all_signs(10, 10, Mode::Sum).unwrap() {
        all.extend(enumerate_box(
            &s,
            &bx,
            &detect_families(&s),
            TieBreak::Ordered,
        ));
    }
    assert_eq!(all.len(), 34);
    let odd: Vec<_> = all
        .iter()
        .filter(|x| (x.l, x.m, x.n) != (1, 1, 0))
        .copied()
        .collect();
    assert_eq!(odd, vec![t(1, 1, 1, 2, 0), t(3, 8, 1, 2, 1)]);
}

#[test]
fn base_twelve_differences_have_no_positive_exponent() {
    let mut bx = SearchBox::new(10, 40, 60, 60).with_relation_cap(true);
    bx.n = Span::new(1, 40);
    for s in EquationSpec::all_signs(12, 10, Mode::Diff).unwrap() {
        assert!(
            enumerate_box(&s, &bx, &[], TieBreak::Ordered).is_empty(),
            "{s}"
        );
    }
}

#[test]
fn empty_boxes() {
    let s = spec(3, 5, 1, 1, Mode::Sum);
    let mut bx = SearchBox::new(5, 4, 4, 4);
    bx.l = Span::new(3, 2);
    assert!(oracle_enumerate(&s, &bx, &[], TieBreak::Ordered)
        .unwrap()
        .is_empty());
    assert!(enumerate_box(&s, &bx, &[], TieBreak::Ordered).is_empty());
}

#[test]
fn oracle_refuses_huge_boxes() {
    let s = spec(3, 10, 1, 1, Mode::Sum);
    assert!(oracle_enumerate(
        &s,
        &SearchBox::new(10, 1000, 200, 200),
        &[],
        TieBreak::Ordered
    )
    .is_err());
}

#[test]
fn base_two_digits() {
    let four = solve_g2(&spec(4, 2, 1, 1, Mode::Sum), TieBreak::Ordered).unwrap();
    assert!(four.contains(&t(1, 1, 2, 2, 0)));
    let six = solve_g2(&spec(6, 2, -1, -1, Mode::Sum), TieBreak::Ordered).unwrap();
    assert!(six.contains(&t(1, 1, 1, 2, 0)));
    for s in [1, -1] {
        for c in [1, -1] {
            for mode in [Mode::Sum, Mode::Diff] {
                let sols = solve_g2(&spec(2, 2, s, c, mode), TieBreak::Ordered).unwrap();
                assert!(sols.iter().all(|x| x.n == 0));
            }
        }
    }
    assert!(solve_g2(&spec(4, 3, 1, 1, Mode::Sum), TieBreak::Ordered).is_err());
}

fn any_spec(g_min: u64) -> impl Strategy<Value = EquationSpec> {
    (
        2u64..=12,
        g_min..=10,
        prop::sample::select(vec![1i8, -1]),
        prop::sample::select(vec![1i8, -1]),
        prop::bool::ANY,
    )
        .prop_map(|(b, g, s, c, sum)| spec(b, g, s, c, if sum { Mode::Sum } else { Mode::Diff }))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn repunit_matches_the_digit_sum(g in 2u64..1000, m in 1u64..60) {
        let r = repunit(g, m);
        prop_assert_eq!(&r, &repunit_sum(g, m));
        prop_assert_eq!(r * (g - 1) + 1u32, num_traits::pow(BigInt::from(g), m as usize));
    }

    #[test]
    fn fast_search_matches_the_oracle(
        s in any_spec(2),
        n in 0u64..12,
        l in 1u64..6,
        m in 1u64..6,
        unordered in prop::bool::ANY,
    ) {
        let tie = if unordered { TieBreak::Unordered } else { TieBreak::Ordered };
        let bx = SearchBox::new(s.g, n, l, m);
        let ex = detect_families(&s);
        let fast = enumerate_box(&s, &bx, &ex, tie);
        prop_assert_eq!(&fast, &oracle_enumerate(&s, &bx, &ex, tie).unwrap());
        for x in &fast {
            prop_assert!(check_solution(&s, x) && is_canonical(&s, x, tie) && bx.contains(x));
        }
        // The relation cap only removes tuples the size relation forbids.
        let capped = enumerate_box(&s, &bx.with_relation_cap(true), &ex, tie);
        prop_assert!(capped.iter().all(|x| fast.contains(x)));
    }

    #[test]
    fn family_members_solve_their_equation(b_is_g in prop::bool::ANY, k in 2u32..=4, g in 3u64..=12, t in 1u64..100) {
        let s = if b_is_g { spec(g, g, -1, -1, Mode::Sum) } else { spec(2, 1 << k, -1, if t % 2 == 0 { 1 } else { -1 }, Mode::Sum) };
        for f in detect_families(&s) {
            let x = f.member(t).unwrap();
            prop_assert!(check_solution(&s, &x), "{} at t = {}", f.describe(), t);
            prop_assert!(f.contains(&x));
        }
    }
}
