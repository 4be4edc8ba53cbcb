use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::interval::Interval;
use super::log::interval_log;
use super::roots::log_ratio_witness;
use crate::error::{Error, Result};

type Evaluator = Box<dyn Fn(u32) -> Interval + Send + Sync>;

struct Inner {
    label: String,
    witness: Option<BigRational>,
    eval: Evaluator,
    memo: Mutex<HashMap<u32, Interval>>,
}

/// A real number known through enclosures at any requested precision.
///
/// Cloning is cheap and clones share one memo table, so a quantity such as
/// `log 10` is evaluated once per precision no matter how many reduction
/// problems refer to it. When the number is known to be rational the exact
/// value is kept as a witness.
#[derive(Clone)]
pub struct RefinableReal(Arc<Inner>);

impl RefinableReal {
    pub fn new(
        label: impl Into<String>,
        witness: Option<BigRational>,
        eval: impl Fn(u32) -> Interval + Send + Sync + 'static,
    ) -> Self {
        RefinableReal(Arc::new(Inner {
            label: label.into(),
            witness,
            eval: Box::new(eval),
            memo: Mutex::new(HashMap::new()),
        }))
    }

    pub fn rational(r: BigRational) -> Self {
        let label = r.to_string();
        let value = r.clone();
        RefinableReal::new(label, Some(r), move |bits| {
            Interval::from_rational(&value, bits)
        })
    }

    pub fn integer(n: i64) -> Self {
        RefinableReal::rational(BigRational::from_integer(n.into()))
    }

    /// `ln x` for a positive rational `x`.
    pub fn log(x: &BigRational) -> Result<Self> {
        if !x.is_positive() {
            return Err(Error::LogDomain(x.to_string()));
        }
        let witness = x.is_one().then(BigRational::zero);
        let value = x.clone();
        Ok(RefinableReal::new(
            format!("log({x})"),
            witness,
            move |bits| interval_log(&value, bits).expect("argument checked positive"),
        ))
    }

    /// `ln x / ln y`, with an exact witness whenever the ratio is rational.
    pub fn log_ratio(x: &BigRational, y: &BigRational) -> Result<Self> {
        if y.is_one() {
            return Err(Error::Precondition(
                "log ratio with log(1) in the denominator".into(),
            ));
        }
        let num = RefinableReal::log(x)?;
        let den = RefinableReal::log(y)?;
        let witness = log_ratio_witness(x, y);
        Ok(RefinableReal::quotient_with(&num, &den, witness))
    }

    /// `a / b`; the denominator must be nonzero.
    pub fn quotient(a: &RefinableReal, b: &RefinableReal) -> Self {
        let witness = match (a.witness(), b.witness()) {
            (Some(x), Some(y)) if !y.is_zero() => Some(x / y),
            (Some(x), _) if x.is_zero() => Some(BigRational::zero()),
            _ => None,
        };
        RefinableReal::quotient_with(a, b, witness)
    }

    fn quotient_with(a: &RefinableReal, b: &RefinableReal, witness: Option<BigRational>) -> Self {
        let label = format!("{}/{}", a.label(), b.label());
        let (a, b) = (a.clone(), b.clone());
        RefinableReal::new(label, witness, move |bits| {
            let mut p = bits + 8;
            loop {
                if let Some(q) = a.eval(p).div(&b.eval(p)) {
                    return q;
                }
                // A zero-straddling divisor only happens when the caller
                // passed a denominator that is zero or absurdly close to it.
                assert!(
                    p < bits.saturating_mul(64),
                    "denominator {} not separable from zero",
                    b.label()
                );
                p *= 2;
            }
        })
    }

    /// Nonnegative square root of a rational.
    pub fn sqrt(x: &BigRational) -> Result<Self> {
        if x.is_negative() {
            return Err(Error::Precondition(format!("square root of negative {x}")));
        }
        let witness = exact_sqrt(x);
        let value = x.clone();
        Ok(RefinableReal::new(
            format!("sqrt({x})"),
            witness,
            move |bits| {
                Interval::from_rational(&value, bits + 4)
                    .sqrt()
                    .expect("nonnegative")
            },
        ))
    }

    /// `(1 + sqrt 5) / 2`.
    pub fn golden_ratio() -> Self {
        RefinableReal::new("phi", None, |bits| {
            let s = Interval::from_integer(5, bits + 4)
                .sqrt()
                .expect("positive");
            let half = BigRational::new(BigInt::one(), BigInt::from(2));
            s.add(&Interval::from_integer(1, bits + 4))
                .mul_rational(&half)
        })
    }

    pub fn eval(&self, bits: u32) -> Interval {
        if let Some(iv) = self.0.memo.lock().unwrap().get(&bits) {
            return iv.clone();
        }
        let iv = (self.0.eval)(bits);
        self.0.memo.lock().unwrap().insert(bits, iv.clone());
        iv
    }

    pub fn witness(&self) -> Option<&BigRational> {
        self.0.witness.as_ref()
    }

    pub fn label(&self) -> &str {
        &self.0.label
    }
}

fn exact_sqrt(x: &BigRational) -> Option<BigRational> {
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    (&n * &n == *x.numer() && &d * &d == *x.denom()).then(|| BigRational::new(n, d))
}

impl fmt::Debug for RefinableReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RefinableReal")
            .field("label", &self.0.label)
            .field("witness", &self.0.witness)
            .finish()
    }
}
