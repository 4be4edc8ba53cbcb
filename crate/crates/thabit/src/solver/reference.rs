//! Previously published values for base 10 and `2 <= b <= 12`, used only
//! to flag where a computation disagrees with them.

use crate::enumerate::{Mode, SolutionTuple};

/// Column order of the published tables (`b = 10` is treated apart).
pub const COLUMNS: [u64; 10] = [2, 3, 4, 5, 6, 7, 8, 9, 11, 12];

/// `(mode, row label, values by column)`.
pub const ROWS: &[(Mode, &str, [u64; 10])] = &[
    (Mode::Sum, "m-l<=", [34, 35, 35, 36, 38, 36, 35, 36, 37, 38]),
    (
        Mode::Sum,
        "n-2<=",
        [119, 77, 61, 52, 49, 45, 40, 38, 36, 33],
    ),
    (Mode::Sum, "n_b", [121, 79, 63, 54, 51, 47, 42, 40, 38, 35]),
    (Mode::Sum, "ml_b", [49, 51, 52, 52, 55, 55, 53, 53, 55, 48]),
    (Mode::Sum, "N=", [66, 37, 21, 13, 3, 6, 10, 4, 1, 2]),
    (Mode::Sum, "l<=", [2, 2, 2, 2, 1, 2, 2, 1, 2, 2]),
    (Mode::Sum, "m<=", [3, 2, 3, 3, 2, 2, 3, 2, 3, 3]),
    (Mode::Sum, "n<=", [8, 3, 3, 3, 1, 1, 2, 1, 1, 1]),
    (
        Mode::Diff,
        "l-m-2<=",
        [34, 33, 34, 34, 34, 35, 35, 33, 37, 34],
    ),
    (Mode::Diff, "N0=", [40, 27, 24, 20, 16, 12, 9, 13, 18, 4]),
    (Mode::Diff, "N=", [68, 29, 16, 4, 4, 7, 7, 5, 9, 0]),
    (Mode::Diff, "l<=", [4, 3, 3, 2, 2, 2, 2, 3, 3, 3]),
    (Mode::Diff, "m<=", [2, 2, 2, 1, 1, 2, 2, 2, 3, 2]),
    (Mode::Diff, "n<=", [10, 4, 4, 1, 1, 1, 1, 2, 1, 0]),
];

/// Rows whose published values are bounds produced by the reduction; the
/// others are counts and maxima of the final solution sets.
pub fn is_bound_row(label: &str) -> bool {
    matches!(label, "m-l<=" | "n-2<=" | "n_b" | "ml_b" | "l-m-2<=")
}

pub fn row(mode: Mode, label: &str) -> Option<[u64; 10]> {
    ROWS.iter()
        .find(|(m, l, _)| *m == mode && *l == label)
        .map(|r| r.2)
}

/// Published upper bounds for the difference equations, over all `b`.
pub const DIFF_GAP_MAX: u64 = 39;
pub const DIFF_N_MAX: u64 = 127;

/// Published totals of solutions with `n >= 1`.
pub const SUM_TOTAL: u64 = 163;
pub const DIFF_TOTAL: u64 = 160;

/// Published counts of `n = 0` solutions with `(l, m) != (1, 1)`.
pub const SUM_N0_EXTRAS: [(u64, u64); 2] = [(11, 1), (12, 4)];

/// Published sample representations for `b = 2` as
/// `(mode, base_sign, const_sign, tuple)`.
pub const REPRESENTATIONS: [(Mode, i8, i8, SolutionTuple); 8] = [
    (Mode::Sum, -1, -1, SolutionTuple::new(3, 2, 2, 3, 8)),
    (Mode::Sum, -1, 1, SolutionTuple::new(9, 8, 1, 1, 4)),
    (Mode::Sum, 1, 1, SolutionTuple::new(9, 8, 1, 2, 5)),
    (Mode::Sum, 1, -1, SolutionTuple::new(1, 2, 2, 2, 3)),
    (Mode::Diff, -1, -1, SolutionTuple::new(5, 4, 3, 2, 9)),
    (Mode::Diff, -1, 1, SolutionTuple::new(6, 1, 2, 1, 6)),
    (Mode::Diff, 1, 1, SolutionTuple::new(7, 8, 3, 1, 8)),
    (Mode::Diff, 1, -1, SolutionTuple::new(7, 6, 2, 2, 2)),
];
