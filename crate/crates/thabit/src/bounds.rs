//! Closed-form bounds: Matveev constants, the log-power transfer lemma, the
//! size relations between `n` and `l, m`, and the theorem-level bounds.
//!
//! Every real is an [`Interval`]; integer bounds are taken from the upper
//! endpoint so rounding can only make them larger.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::enumerate::Mode;
use crate::error::{Error, Result};
use crate::numerics::{interval_log, interval_log_of, Interval};

/// Working precision for bound evaluation; the largest bound is ~10^33.
pub const BOUNDS_BITS: u32 = 256;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn ln(x: u64) -> Interval {
    interval_log(&BigRational::from_integer(x.into()), BOUNDS_BITS).expect("positive")
}

fn c(x: BigRational) -> Interval {
    Interval::from_rational(&x, BOUNDS_BITS)
}

fn pow(x: &Interval, k: u32) -> Interval {
    (0..k).fold(c(q(1, 1)), |acc, _| acc.mul(x))
}

/// `log max(|p|, q)` for a nonzero rational in lowest terms.
pub fn log_height_rational(x: &BigRational) -> Result<Interval> {
    if x.is_zero() {
        return Err(Error::ZeroHeight);
    }
    let h = x.numer().abs().max(x.denom().clone());
    interval_log(&BigRational::from_integer(h), BOUNDS_BITS)
}

/// `1.4 * 30^(s+3) * s^4.5 * D^2 * (1 + log D) * extra`.
pub fn matveev_constant(s: u32, d: u32, extra: &BigRational) -> Interval {
    assert!(s >= 1 && d >= 1 && extra.is_positive());
    let s_iv = c(BigRational::from_integer(s.into()));
    let s45 = pow(&s_iv, 4).mul(&s_iv.sqrt().expect("positive"));
    let thirty = BigRational::from_integer(num_traits::pow(BigInt::from(30), (s + 3) as usize));
    let d2 = BigRational::from_integer(BigInt::from(d) * d);
    let one_plus_log_d = c(q(1, 1)).add(&ln(d as u64));
    c(q(14, 10) * thirty * d2)
        .mul(&s45)
        .mul(&one_plus_log_d)
        .mul_rational(extra)
}

/// `2^l * H * (log H)^l`, the bound on `L` when `L < H (log L)^l`.
pub fn log_power_transfer(l: u32, h: &Interval) -> Result<Interval> {
    let threshold = BigRational::from_integer(num_traits::pow(BigInt::from(4 * l * l), l as usize));
    if l < 1 || h.lo().to_rational() <= threshold {
        return Err(Error::Precondition(format!(
            "log-power transfer needs l >= 1 and H > (4l^2)^l = {threshold}"
        )));
    }
    let log_h = interval_log_of(h)?;
    Ok(c(BigRational::from_integer(BigInt::one() << l))
        .mul(h)
        .mul(&pow(&log_h, l)))
}

fn floor_strict(x: &Interval) -> BigInt {
    x.largest_integer_below()
}

/// Largest `n` allowed by the size relation for a given `m` (sum) or `l`
/// (diff): `n < 2.5 m log g` or `n < 1.5 l log g`.
pub fn relation_n_from_m(g: u64, m: u64, mode: Mode) -> u64 {
    let k = match mode {
        Mode::Sum => q(5, 2),
        Mode::Diff => q(3, 2),
    };
    let x = ln(g).mul_rational(&(k * BigRational::from_integer(m.into())));
    floor_strict(&x).to_u64().unwrap_or(0)
}

/// Largest `m` (sum) or `l` (diff) allowed for a given `n`:
/// `1.3 (n + 1.6) log b / log g + 1` (sum) or `+ 2` (diff).
pub fn relation_m_from_n_interval(b: u64, g: u64, n: u64, mode: Mode) -> Interval {
    let add = match mode {
        Mode::Sum => 1,
        Mode::Diff => 2,
    };
    let factor = q(13, 10) * (BigRational::from_integer(n.into()) + q(8, 5));
    ln(b)
        .div(&ln(g))
        .expect("log g > 0")
        .mul_rational(&factor)
        .add(&c(q(add, 1)))
}

pub fn relation_m_from_n(b: u64, g: u64, n: u64, mode: Mode) -> u64 {
    floor_strict(&relation_m_from_n_interval(b, g, n, mode))
        .to_u64()
        .expect("small")
}

/// Integer bounds of the finiteness theorems.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremBounds {
    #[serde(with = "crate::report::bigint_string")]
    pub n_max: BigInt,
    #[serde(with = "crate::report::bigint_string")]
    pub lm_max: BigInt,
}

/// The real-valued theorem bounds `(n, l/m)`.
pub fn theorem_bounds_interval(b: u64, g: u64, mode: Mode) -> (Interval, Interval) {
    let (cn, clm) = match mode {
        Mode::Sum => (q(208, 100), q(271, 100)),
        Mode::Diff => (q(219, 100), q(285, 100)),
    };
    let e29 = BigRational::from_integer(num_traits::pow(BigInt::from(10), 29));
    let (lb, lg, lmax) = (ln(b), ln(g), ln(b.max(g)));
    let lmax2 = pow(&lmax, 2);
    let n = pow(&lg, 3)
        .mul(&pow(&lb, 2))
        .mul(&lmax2)
        .mul_rational(&(cn * &e29));
    let lm = pow(&lg, 2)
        .mul(&pow(&lb, 3))
        .mul(&lmax2)
        .mul_rational(&(clm * e29));
    (n, lm)
}

/// Theorem bounds as integers: every solution outside the known infinite
/// families has `n <= n_max` and `l, m <= lm_max`.
pub fn theorem_bounds(b: u64, g: u64, mode: Mode) -> TheoremBounds {
    let (n, lm) = theorem_bounds_interval(b, g, mode);
    TheoremBounds {
        n_max: floor_strict(&n),
        lm_max: floor_strict(&lm),
    }
}

/// Step 1 bound on the exponent gap before reduction:
/// `3.73e11 (1 + log(k * m log g)) log b log max(b, g)` with `k = 2.5`
/// (sum) or `1.5` (diff, where `m_cap` bounds `l`).
pub fn intermediate_gap_bound(b: u64, g: u64, m_cap: &BigInt, mode: Mode) -> Interval {
    let k = match mode {
        Mode::Sum => q(5, 2),
        Mode::Diff => q(3, 2),
    };
    let inner = ln(g).mul_rational(&(k * BigRational::from_integer(m_cap.clone())));
    let one_plus = c(q(1, 1)).add(&interval_log_of(&inner).expect("positive"));
    c(q(373, 100) * BigRational::from_integer(num_traits::pow(BigInt::from(10), 11)))
        .mul(&one_plus)
        .mul(&ln(b))
        .mul(&ln(b.max(g)))
}

/// Step 2 bound on `n` before reduction, with the gap folded in:
/// `5.38e22 (1 + log(k m log g))^2 log^2 g log b log max(b, g)`.
pub fn intermediate_n_bound(b: u64, g: u64, m_cap: &BigInt, mode: Mode) -> Interval {
    let k = match mode {
        Mode::Sum => q(5, 2),
        Mode::Diff => q(3, 2),
    };
    let inner = ln(g).mul_rational(&(k * BigRational::from_integer(m_cap.clone())));
    let one_plus = c(q(1, 1)).add(&interval_log_of(&inner).expect("positive"));
    c(q(538, 100) * BigRational::from_integer(num_traits::pow(BigInt::from(10), 22)))
        .mul(&pow(&one_plus, 2))
        .mul(&pow(&ln(g), 2))
        .mul(&ln(b))
        .mul(&ln(b.max(g)))
}

/// The `H` of the transfer step: `1.35e25` (sum) or `1.42e25` (diff) times
/// `log^3 g log^2 b log max(b, g)`.
pub fn transfer_h(b: u64, g: u64, mode: Mode) -> Interval {
    let k = match mode {
        Mode::Sum => q(135, 100),
        Mode::Diff => q(142, 100),
    };
    let e25 = BigRational::from_integer(num_traits::pow(BigInt::from(10), 25));
    pow(&ln(g), 3)
        .mul(&pow(&ln(b), 2))
        .mul(&ln(b.max(g)))
        .mul_rational(&(k * e25))
}

/// The third Matveev height bound `A_3` of the Step 2 form: `(gap + 2) log g`
/// or `2 log b`, per the case split on how `b` compares with `g^gap`.
pub fn step2_a3(b: u64, g: u64, gap: u64) -> Interval {
    let g_pow_gap = num_traits::pow(BigInt::from(g), gap as usize);
    let small_b = b <= g || (gap != 0 && BigInt::from(b) <= g_pow_gap);
    if small_b {
        ln(g).mul_rational(&BigRational::from_integer((gap + 2).into()))
    } else {
        ln(b).mul_rational(&q(2, 1))
    }
}

/// The four linear forms in three logarithms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FormKind {
    Lambda1,
    Lambda2,
    Lambda3,
    Lambda4,
}

/// `gamma_1^e_1 * gamma_2^e_2 * gamma_3^e_3 - 1` with `gamma = (b, g, x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearFormSpec {
    pub kind: FormKind,
    pub gammas: Vec<BigRational>,
    pub exponents: Vec<BigInt>,
}

fn base_factor(b: u64, base_sign: i8) -> BigInt {
    BigInt::from(b) + base_sign as i64
}

impl LinearFormSpec {
    /// `(b±1) b^n (g-1) / (d2 g^m) - 1`.
    pub fn lambda1(b: u64, g: u64, base_sign: i8, d2: u64, n: u64, m: u64) -> Self {
        let x = BigRational::new(base_factor(b, base_sign) * (g - 1), d2.into());
        Self::new(
            FormKind::Lambda1,
            b,
            g,
            x,
            [BigInt::from(n), -BigInt::from(m)],
        )
    }

    /// `(d1 + d2 g^(m-l)) g^l / ((g-1)(b±1) b^n) - 1`.
    #[allow(clippy::too_many_arguments)]
    pub fn lambda2(
        b: u64,
        g: u64,
        base_sign: i8,
        d1: u64,
        d2: u64,
        l: u64,
        m: u64,
        n: u64,
    ) -> Self {
        let num = BigInt::from(d1)
            + BigInt::from(d2) * num_traits::pow(BigInt::from(g), (m - l) as usize);
        let x = BigRational::new(num, base_factor(b, base_sign) * (g - 1));
        Self::new(
            FormKind::Lambda2,
            b,
            g,
            x,
            [-BigInt::from(n), BigInt::from(l)],
        )
    }

    /// `(b±1) b^n (g-1) / (d1 g^l) - 1`.
    pub fn lambda3(b: u64, g: u64, base_sign: i8, d1: u64, n: u64, l: u64) -> Self {
        let x = BigRational::new(base_factor(b, base_sign) * (g - 1), d1.into());
        Self::new(
            FormKind::Lambda3,
            b,
            g,
            x,
            [BigInt::from(n), -BigInt::from(l)],
        )
    }

    /// `(d1 g^(l-m) - d2) g^m / ((g-1)(b±1) b^n) - 1`.
    #[allow(clippy::too_many_arguments)]
    pub fn lambda4(
        b: u64,
        g: u64,
        base_sign: i8,
        d1: u64,
        d2: u64,
        l: u64,
        m: u64,
        n: u64,
    ) -> Self {
        let num = BigInt::from(d1) * num_traits::pow(BigInt::from(g), (l - m) as usize)
            - BigInt::from(d2);
        let x = BigRational::new(num, base_factor(b, base_sign) * (g - 1));
        Self::new(
            FormKind::Lambda4,
            b,
            g,
            x,
            [-BigInt::from(n), BigInt::from(m)],
        )
    }

    fn new(kind: FormKind, b: u64, g: u64, x: BigRational, e: [BigInt; 2]) -> Self {
        LinearFormSpec {
            kind,
            gammas: vec![
                BigRational::from_integer(b.into()),
                BigRational::from_integer(g.into()),
                x,
            ],
            exponents: vec![e[0].clone(), e[1].clone(), BigInt::one()],
        }
    }

    /// Whether the form is exactly zero (exponents must be modest).
    pub fn vanishes(&self) -> bool {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for (gamma, e) in self.gammas.iter().zip(&self.exponents) {
            let k = e.abs().to_usize().expect("exponent too large to expand");
            let (a, b) = (
                num_traits::pow(gamma.numer().clone(), k),
                num_traits::pow(gamma.denom().clone(), k),
            );
            if e.is_negative() {
                num *= b;
                den *= a;
            } else {
                num *= a;
                den *= b;
            }
        }
        num == den
    }

    /// Input to the lower bound with `A_j = max(h(gamma_j), |log gamma_j|,
    /// 0.16)` (degree 1) and `B = max |e_j|`.
    pub fn matveev_input(&self) -> Result<MatveevInput> {
        let floor = c(q(16, 100));
        let mut a_list = Vec::new();
        for gamma in &self.gammas {
            if !gamma.is_positive() {
                return Err(Error::Precondition(format!(
                    "gamma {gamma} must be positive"
                )));
            }
            let h = log_height_rational(gamma)?;
            let l = interval_log(gamma, BOUNDS_BITS)?;
            let abs_l = if l.lo().signum() < 0 { l.neg() } else { l };
            a_list.push(max_iv(&max_iv(&h, &abs_l), &floor));
        }
        let b = self
            .exponents
            .iter()
            .map(|e| e.abs())
            .max()
            .unwrap_or_default()
            .max(BigInt::one());
        MatveevInput::new(self.gammas.len() as u32, 1, a_list, b)
    }
}

fn max_iv(a: &Interval, b: &Interval) -> Interval {
    if a.hi() >= b.hi() {
        a.clone()
    } else {
        b.clone()
    }
}

/// Parameters of the Matveev lower bound
/// `log |Lambda| > -C(s, D) (1 + log B) A_1 ... A_s`.
#[derive(Debug, Clone)]
pub struct MatveevInput {
    pub s: u32,
    pub d: u32,
    pub a_list: Vec<Interval>,
    pub b: BigInt,
}

impl MatveevInput {
    pub fn new(s: u32, d: u32, a_list: Vec<Interval>, b: BigInt) -> Result<Self> {
        let floor = BigRational::new(16.into(), 100.into());
        if a_list.len() != s as usize
            || a_list.iter().any(|a| a.hi().to_rational() < floor)
            || b < BigInt::one()
        {
            return Err(Error::Precondition(
                "Matveev input needs s values A_j >= 0.16 and B >= 1".into(),
            ));
        }
        Ok(MatveevInput { s, d, a_list, b })
    }

    /// Upper bound on `-log |Lambda|` for a nonzero form.
    pub fn neg_log_lower_bound(&self) -> Interval {
        let cst = matveev_constant(self.s, self.d, &q(1, 1));
        let log_b =
            interval_log(&BigRational::from_integer(self.b.clone()), BOUNDS_BITS).expect("B >= 1");
        self.a_list
            .iter()
            .fold(cst.mul(&c(q(1, 1)).add(&log_b)), |acc, a| acc.mul(a))
    }
}

/// Every bound of the finiteness argument for one `(b, g, mode)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    /// Matveev constant with the `2.6` height factor folded in.
    pub c1: String,
    pub c2: String,
    /// Step 1 gap bound before reduction, evaluated at `m = lm_max`.
    #[serde(with = "crate::report::bigint_string")]
    pub gap_bound: BigInt,
    /// Step 2 `n` bound before reduction, evaluated at `m = lm_max`.
    #[serde(with = "crate::report::bigint_string")]
    pub step2_n_bound: BigInt,
    pub h: String,
    /// `4 H log^2 H`, the transfer-lemma bound on `n + 1.6`.
    pub l_bound: String,
    #[serde(with = "crate::report::bigint_string")]
    pub n_max: BigInt,
    #[serde(with = "crate::report::bigint_string")]
    pub lm_max: BigInt,
}

pub fn bound_report(b: u64, g: u64, mode: Mode) -> Result<BoundReport> {
    let tb = theorem_bounds(b, g, mode);
    let c1 = matveev_constant(3, 1, &q(26, 10));
    let c2 = matveev_constant(3, 1, &q(1, 1));
    let h = transfer_h(b, g, mode);
    let l_bound = log_power_transfer(2, &h)?;
    Ok(BoundReport {
        c1: c1.upper_sci(6),
        c2: c2.upper_sci(6),
        gap_bound: floor_strict(&intermediate_gap_bound(b, g, &tb.lm_max, mode)),
        step2_n_bound: floor_strict(&intermediate_n_bound(b, g, &tb.lm_max, mode)),
        h: h.upper_sci(6),
        l_bound: l_bound.upper_sci(6),
        n_max: tb.n_max,
        lm_max: tb.lm_max,
    })
}
