//! Base `g = 2`: both digits are 1 and parity forces `n = 0`.

use super::{enumerate_box, EquationSpec, SearchBox, SolutionTuple, Span, TieBreak};
use crate::error::{Error, Result};

/// `ceil(log2(b + 4))`, which bounds `l` and `m` when `g = 2`.
pub fn g2_search_limit(b: u64) -> u64 {
    let x = b + 4;
    (64 - (x - 1).leading_zeros()) as u64
}

/// All solutions for `g = 2`. For `n >= 1` the left side is odd and the
/// right side even, so only `n = 0` is searched.
pub fn solve_g2(spec: &EquationSpec, tie: TieBreak) -> Result<Vec<SolutionTuple>> {
    if spec.g != 2 {
        return Err(Error::Precondition(format!(
            "solve_g2 needs g = 2, got {}",
            spec.g
        )));
    }
    let lim = g2_search_limit(spec.b);
    let mut bx = SearchBox::new(2, 0, lim, lim);
    bx.n = Span::new(0, 0);
    Ok(enumerate_box(spec, &bx, &[], tie))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::Mode;

    #[test]
    fn limits() {
        assert_eq!(g2_search_limit(4), 3);
        assert_eq!(g2_search_limit(2), 3);
        assert_eq!(g2_search_limit(12), 4);
        assert_eq!(g2_search_limit(28), 5);
    }

    #[test]
    fn small_cases() {
        let s = EquationSpec::new(4, 2, 1, 1, Mode::Sum).unwrap();
        assert!(solve_g2(&s, TieBreak::Ordered)
            .unwrap()
            .contains(&SolutionTuple::new(1, 1, 2, 2, 0)));
        let s = EquationSpec::new(6, 2, -1, -1, Mode::Sum).unwrap();
        assert_eq!(
            solve_g2(&s, TieBreak::Ordered).unwrap(),
            vec![SolutionTuple::new(1, 1, 1, 2, 0)]
        );
        let s = EquationSpec::new(6, 10, -1, -1, Mode::Sum).unwrap();
        assert!(solve_g2(&s, TieBreak::Ordered).is_err());
    }
}
