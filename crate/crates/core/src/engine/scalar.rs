use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive};

/// Number type the engine computes in: exact rationals or `f64`.
pub trait Scalar: Clone + PartialOrd + Num + fmt::Debug + Send + Sync + 'static {
    fn from_ratio(r: &BigRational) -> Self;

    fn to_f64(&self) -> f64;

    /// The exact value, when this scalar is exact.
    fn exact(&self) -> Option<BigRational>;

    /// `self > other`, with a small slack for inexact types.
    fn strictly_exceeds(&self, other: &Self) -> bool;

    fn abs_val(&self) -> Self {
        if *self < Self::zero() {
            Self::zero() - self.clone()
        } else {
            self.clone()
        }
    }

    fn half() -> Self {
        Self::one() / (Self::one() + Self::one())
    }
}

/// Slack used when comparing floating-point values.
pub const FLOAT_SLACK: f64 = 1e-12;

impl Scalar for BigRational {
    fn from_ratio(r: &BigRational) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn exact(&self) -> Option<BigRational> {
        Some(self.clone())
    }

    fn strictly_exceeds(&self, other: &Self) -> bool {
        self > other
    }

    fn abs_val(&self) -> Self {
        self.abs()
    }
}

impl Scalar for f64 {
    fn from_ratio(r: &BigRational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn exact(&self) -> Option<BigRational> {
        None
    }

    fn strictly_exceeds(&self, other: &Self) -> bool {
        *self > *other + FLOAT_SLACK
    }

    fn abs_val(&self) -> Self {
        self.abs()
    }
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Formats an exact value as `num/den` (or a bare integer).
pub fn format_ratio(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Twelve significant digits, the precision used in emitted files.
pub fn format_decimal(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let digits = 12i32;
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (digits - 1 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}
