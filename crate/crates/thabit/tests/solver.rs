use rayon::prelude::*;
use thabit::enumerate::{
    check_solution, enumerate_box, oracle_enumerate, EquationSpec, FamilyKind, Mode, SearchBox,
    SolutionTuple, TieBreak,
};
use thabit::report::report_json;
use thabit::solver::{multiplicative_dependence, solve, Method, SolverOptions, SolverReport};

fn spec(b: u64, g: u64, s: i8, c: i8, mode: Mode) -> EquationSpec {
    EquationSpec::new(b, g, s, c, mode).unwrap()
}

fn solve_all(b: u64, g: u64, mode: Mode) -> Vec<SolverReport> {
    EquationSpec::all_signs(b, g, mode)
        .unwrap()
        .iter()
        .map(|s| solve(s, &SolverOptions::default()).unwrap())
        .collect()
}

/// Drops members of the zero-difference family, which the solver lists up
/// to the size-relation cap while a plain box search finds them all.
fn without_zero_family(r: &SolverReport, xs: &[SolutionTuple]) -> Vec<SolutionTuple> {
    let zero: Vec<_> = r
        .families
        .iter()
        .filter(|f| f.kind == FamilyKind::ZeroDifference)
        .collect();
    xs.iter()
        .filter(|x| !zero.iter().any(|f| f.contains(x)))
        .copied()
        .collect()
}

fn solutions(rs: &[SolverReport]) -> Vec<SolutionTuple> {
    rs.iter()
        .flat_map(|r| r.solutions.iter().copied())
        .collect()
}

#[test]
fn dependence_of_bases() {
    assert_eq!(multiplicative_dependence(8, 4), Some((2, 3, 2)));
    assert_eq!(multiplicative_dependence(10, 10), Some((10, 1, 1)));
    assert_eq!(multiplicative_dependence(12, 10), None);
    assert_eq!(multiplicative_dependence(27, 9), Some((3, 3, 2)));
    assert_eq!(multiplicative_dependence(16, 2), Some((2, 4, 1)));
}

#[test]
fn base_two_sums_in_base_ten() {
    let all = solutions(&solve_all(2, 10, Mode::Sum));
    assert_eq!(all.len(), 71);
    assert_eq!(all.iter().filter(|x| x.n >= 1).count(), 66);
    assert_eq!(all.iter().map(|x| x.n).max(), Some(8));
}

#[test]
fn base_two_differences_in_base_ten() {
    let rs = solve_all(2, 10, Mode::Diff);
    let all = solutions(&rs);
    let n0 = all.iter().filter(|x| x.n == 0).count();
    assert_eq!((n0, all.len() - n0), (40, 68));
    assert_eq!(all.iter().map(|x| x.l).max(), Some(4));
    assert_eq!(all.iter().map(|x| x.m).max(), Some(2));
    assert_eq!(all.iter().map(|x| x.n).max(), Some(10));
    // The zero-difference family is reported, not listed.
    let zero = rs
        .iter()
        .flat_map(|r| &r.families)
        .filter(|f| f.kind == FamilyKind::ZeroDifference)
        .count();
    assert_eq!(zero, 9);
    // Its members with n = 0 are listed up to the size relation, l <= 2.
    let listed = all
        .iter()
        .filter(|x| x.n == 0 && x.d1 == x.d2 && x.l == x.m)
        .count();
    assert_eq!(listed, 18);
}

#[test]
fn base_two_repdigits_force_n_zero() {
    for r in solve_all(7, 2, Mode::Sum)
        .into_iter()
        .chain(solve_all(7, 2, Mode::Diff))
    {
        assert_eq!(r.method, Method::BaseTwo);
        assert!(r.solutions.iter().all(|x| x.n == 0));
    }
}

#[test]
fn equal_bases_use_the_lattice_scan() {
    for mode in [Mode::Sum, Mode::Diff] {
        for r in solve_all(10, 10, mode) {
            assert_eq!(r.method, Method::DirectScan);
            // Our scan gives m - l <= 4 and n <= 5 for sums, l - m <= 4 and
            // n <= 4 for differences.
            let (gap, n) = match mode {
                Mode::Sum => (r.step1_w_max.unwrap(), r.step2_w_max.unwrap() + 2),
                Mode::Diff => (r.step1_w_max.unwrap() + 2, r.step2_w_max.unwrap() + 1),
            };
            assert!(
                gap <= 4 && n <= if mode == Mode::Sum { 5 } else { 4 },
                "{}",
                r.spec
            );
            for x in &r.solutions {
                let g = if mode == Mode::Sum {
                    x.m - x.l
                } else {
                    x.l - x.m
                };
                assert!(g as i64 <= gap && x.n as i64 <= n);
            }
        }
    }
}

#[test]
fn equal_bases_solution_counts() {
    let sum = solutions(&solve_all(10, 10, Mode::Sum));
    assert_eq!(sum.len(), 34);
    let diff = solutions(&solve_all(10, 10, Mode::Diff));
    let by_n = |k| diff.iter().filter(|x| x.n == k).count();
    assert_eq!(
        (by_n(0), by_n(1), diff.iter().filter(|x| x.n >= 2).count()),
        (5, 11, 0)
    );
}

#[test]
fn powers_of_two_scan_matches_the_oracle() {
    for mode in [Mode::Sum, Mode::Diff] {
        for r in solve_all(4, 8, mode) {
            assert_eq!(r.method, Method::DirectScan);
            let bx = r.final_box.inflated(3, 8);
            let raw = SearchBox {
                relation_cap: false,
                ..bx
            };
            let oracle = oracle_enumerate(&r.spec, &raw, &r.families, TieBreak::Ordered).unwrap();
            let inside: Vec<_> = r
                .solutions
                .iter()
                .filter(|x| raw.contains(x))
                .copied()
                .collect();
            assert_eq!(oracle, inside, "{}", r.spec);
        }
    }
}

#[test]
fn every_reported_solution_is_genuine_and_inside_the_box() {
    for (b, g) in [(3, 10), (6, 10), (2, 3), (5, 7)] {
        for mode in [Mode::Sum, Mode::Diff] {
            for r in solve_all(b, g, mode) {
                for x in &r.solutions {
                    assert!(
                        check_solution(&r.spec, x) && r.final_box.contains(x),
                        "{} {x}",
                        r.spec
                    );
                }
                assert!(r.flags.iter().all(|f| !f.contains("failed")));
            }
        }
    }
}

/// Completeness: in a box far beyond what small bases can reach, brute
/// force finds nothing the solver missed.
#[test]
fn small_bases_are_complete() {
    let specs: Vec<EquationSpec> = (2..=5)
        .flat_map(|b| {
            (3..=8).flat_map(move |g| [Mode::Sum, Mode::Diff].into_iter().map(move |m| (b, g, m)))
        })
        .flat_map(|(b, g, m)| EquationSpec::all_signs(b, g, m).unwrap())
        .collect();
    let failures: Vec<String> = specs
        .par_iter()
        .filter_map(|s| {
            let r = solve(s, &SolverOptions::default()).unwrap();
            let bx = SearchBox::new(s.g, 30, 8, 8);
            let oracle = without_zero_family(
                &r,
                &oracle_enumerate(s, &bx, &r.families, TieBreak::Ordered).unwrap(),
            );
            let inside: Vec<_> = r
                .solutions
                .iter()
                .filter(|x| bx.contains(x))
                .copied()
                .collect();
            let inside = without_zero_family(&r, &inside);
            (oracle != inside)
                .then(|| format!("{s}: oracle {} vs solver {}", oracle.len(), inside.len()))
        })
        .collect();
    assert!(failures.is_empty(), "{failures:?}");
}

/// Growing the final box by 3 in every direction adds no solution.
#[test]
fn inflated_boxes_add_nothing() {
    let specs: Vec<EquationSpec> = [2, 3, 11, 12]
        .into_iter()
        .flat_map(|b| [Mode::Sum, Mode::Diff].into_iter().map(move |m| (b, m)))
        .flat_map(|(b, m)| EquationSpec::all_signs(b, 10, m).unwrap())
        .collect();
    for s in specs {
        let r = solve(&s, &SolverOptions::default()).unwrap();
        let bx = SearchBox {
            relation_cap: false,
            ..r.final_box.inflated(3, 10)
        };
        let found = enumerate_box(&s, &bx, &r.families, TieBreak::Ordered);
        assert_eq!(
            without_zero_family(&r, &found),
            without_zero_family(&r, &r.solutions),
            "{s}"
        );
    }
}

#[test]
fn reports_do_not_depend_on_the_thread_count() {
    let s = spec(3, 10, 1, -1, Mode::Sum);
    let many = solve(&s, &SolverOptions::default()).unwrap();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let one = pool.install(|| solve(&s, &SolverOptions::default()).unwrap());
    assert_eq!(report_json(&many), report_json(&one));
    assert_eq!(
        report_json(&many),
        report_json(&solve(&s, &SolverOptions::default()).unwrap())
    );
}

#[test]
fn unordered_ties_drop_mirrored_pairs() {
    let s = spec(2, 10, -1, -1, Mode::Sum);
    let ordered = solve(&s, &SolverOptions::default()).unwrap().solutions;
    let opts = SolverOptions {
        tie: TieBreak::Unordered,
        ..SolverOptions::default()
    };
    let unordered = solve(&s, &opts).unwrap().solutions;
    assert!(unordered.iter().all(|x| x.l < x.m || x.d1 <= x.d2));
    let mirrored = ordered.iter().filter(|x| x.l == x.m && x.d1 > x.d2).count();
    assert_eq!(ordered.len() - unordered.len(), mirrored);
}

#[test]
fn invalid_policies_are_rejected() {
    let mut opts = SolverOptions::default();
    opts.policy.initial_bits = 8;
    assert!(solve(&spec(3, 10, 1, 1, Mode::Sum), &opts).is_err());
}
