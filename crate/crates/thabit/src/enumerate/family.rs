//! Infinite solution families.

use serde::{Deserialize, Serialize};

use super::{EquationSpec, Mode, SearchBox, SolutionTuple};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum FamilyKind {
    /// `(2, g-1, 1, m, mk)` for `b = 2`, `g = 2^k`.
    A { k: u32 },
    /// `(d1, g-1-d1, m, m, mk)` for `b = 2`, `g = 2^k`.
    B { k: u32 },
    /// `(1, g-2, n, n+1, n)` for `b = g`.
    C,
    /// A line of solutions found by the exact vanishing analysis of a
    /// multiplicatively dependent pair `(b, g)`.
    Line,
    /// `(d, d, t, t, 0)`: the difference equation whose left side is zero.
    ZeroDifference,
}

/// `base + step * t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Progression {
    pub base: u64,
    pub step: u64,
}

impl Progression {
    pub const fn new(base: u64, step: u64) -> Self {
        Progression { base, step }
    }

    pub const fn at(&self, t: u64) -> u64 {
        self.base + self.step * t
    }

    /// The parameter giving `v`: `Some(None)` if every `t` does.
    fn solve(&self, v: u64) -> Option<Option<u64>> {
        if self.step == 0 {
            return (v == self.base).then_some(None);
        }
        if v < self.base || !(v - self.base).is_multiple_of(self.step) {
            return None;
        }
        Some(Some((v - self.base) / self.step))
    }
}

/// The family `t -> (d1, d2, l(t), m(t), n(t))` for `t >= t_min`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilyDescriptor {
    #[serde(flatten)]
    pub kind: FamilyKind,
    pub spec: EquationSpec,
    pub d1: u64,
    pub d2: u64,
    pub l: Progression,
    pub m: Progression,
    pub n: Progression,
    pub t_min: u64,
}

impl FamilyDescriptor {
    pub fn member(&self, t: u64) -> Result<SolutionTuple> {
        if t < self.t_min {
            return Err(Error::Precondition(format!(
                "family parameter {t} below {}",
                self.t_min
            )));
        }
        Ok(self.member_unchecked(t))
    }

    fn member_unchecked(&self, t: u64) -> SolutionTuple {
        SolutionTuple::new(self.d1, self.d2, self.l.at(t), self.m.at(t), self.n.at(t))
    }

    /// Whether `x` is a member, decided from the closed form rather than by
    /// generating members.
    pub fn contains(&self, x: &SolutionTuple) -> bool {
        if x.d1 != self.d1 || x.d2 != self.d2 {
            return false;
        }
        let mut t: Option<u64> = None;
        for (p, v) in [(self.l, x.l), (self.m, x.m), (self.n, x.n)] {
            match p.solve(v) {
                None => return false,
                Some(None) => {}
                Some(Some(s)) => {
                    if t.is_some_and(|u| u != s) {
                        return false;
                    }
                    t = Some(s);
                }
            }
        }
        t.is_none_or(|s| s >= self.t_min)
    }

    /// All members inside `bx`.
    pub fn members_in(&self, bx: &SearchBox) -> Vec<SolutionTuple> {
        if !bx.d1.contains(self.d1) || !bx.d2.contains(self.d2) {
            return Vec::new();
        }
        let moving = self.l.step + self.m.step + self.n.step > 0;
        let mut out = Vec::new();
        let mut t = self.t_min;
        loop {
            let x = self.member_unchecked(t);
            if (self.l.step > 0 && x.l > bx.l.hi)
                || (self.m.step > 0 && x.m > bx.m.hi)
                || (self.n.step > 0 && x.n > bx.n.hi)
            {
                break;
            }
            if bx.contains(&x) {
                out.push(x);
            }
            if !moving {
                break;
            }
            t += 1;
        }
        out
    }

    pub fn describe(&self) -> String {
        fn lin(p: Progression) -> String {
            match (p.base, p.step) {
                (b, 0) => b.to_string(),
                (0, 1) => "t".into(),
                (0, s) => format!("{s}t"),
                (b, 1) => format!("t+{b}"),
                (b, s) => format!("{s}t+{b}"),
            }
        }
        let name = match self.kind {
            FamilyKind::A { k } => format!("A(k={k})"),
            FamilyKind::B { k } => format!("B(k={k})"),
            FamilyKind::C => "C".into(),
            FamilyKind::Line => "line".into(),
            FamilyKind::ZeroDifference => "zero-difference".into(),
        };
        format!(
            "{name}: ({},{},{},{},{}), t >= {}",
            self.d1,
            self.d2,
            lin(self.l),
            lin(self.m),
            lin(self.n),
            self.t_min
        )
    }
}

/// The `t`-th member of `f`.
pub fn family_member(f: &FamilyDescriptor, t: u64) -> Result<SolutionTuple> {
    f.member(t)
}

fn power_of_two_exponent(g: u64) -> Option<u32> {
    g.is_power_of_two().then(|| g.trailing_zeros())
}

/// The classical infinite families of the equation.
pub fn detect_families(spec: &EquationSpec) -> Vec<FamilyDescriptor> {
    let mut out = Vec::new();
    if spec.mode != Mode::Sum || spec.base_sign != -1 {
        return out;
    }
    let g = spec.g;
    if spec.b == 2 {
        if let Some(k) = power_of_two_exponent(g).filter(|&k| k >= 2) {
            let kk = k as u64;
            if spec.const_sign == 1 {
                out.push(FamilyDescriptor {
                    kind: FamilyKind::A { k },
                    spec: *spec,
                    d1: 2,
                    d2: g - 1,
                    l: Progression::new(1, 0),
                    m: Progression::new(0, 1),
                    n: Progression::new(0, kk),
                    t_min: 1,
                });
            } else {
                for d1 in 1..=g - 2 {
                    out.push(FamilyDescriptor {
                        kind: FamilyKind::B { k },
                        spec: *spec,
                        d1,
                        d2: g - 1 - d1,
                        l: Progression::new(0, 1),
                        m: Progression::new(0, 1),
                        n: Progression::new(0, kk),
                        t_min: 1,
                    });
                }
            }
        }
    }
    if spec.const_sign == -1 && spec.b == g && g >= 3 {
        out.push(FamilyDescriptor {
            kind: FamilyKind::C,
            spec: *spec,
            d1: 1,
            d2: g - 2,
            l: Progression::new(0, 1),
            m: Progression::new(1, 1),
            n: Progression::new(0, 1),
            t_min: 1,
        });
    }
    out
}

/// `(d, d, t, t, 0)` for the difference equation with `b = 2` and both
/// signs negative, where the left side vanishes at `n = 0`.
pub fn zero_difference_families(spec: &EquationSpec) -> Vec<FamilyDescriptor> {
    if spec.mode != Mode::Diff || spec.b != 2 || spec.base_sign != -1 || spec.const_sign != -1 {
        return Vec::new();
    }
    (1..spec.g)
        .map(|d| FamilyDescriptor {
            kind: FamilyKind::ZeroDifference,
            spec: *spec,
            d1: d,
            d2: d,
            l: Progression::new(0, 1),
            m: Progression::new(0, 1),
            n: Progression::new(0, 0),
            t_min: 1,
        })
        .collect()
}
