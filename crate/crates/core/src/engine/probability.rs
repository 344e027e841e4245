use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::scalar::{format_ratio, Scalar};
use crate::error::{Error, Result};

/// An exact probability in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Probability(BigRational);

impl Probability {
    pub fn new(value: BigRational) -> Result<Self> {
        if value.is_negative() || value > BigRational::one() {
            return Err(Error::InvalidProbability(format!(
                "{} is outside [0, 1]",
                format_ratio(&value)
            )));
        }
        Ok(Self(value))
    }

    pub fn from_ratio(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidProbability("zero denominator".into()));
        }
        Self::new(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Exact value of the shortest decimal representation of `x`.
    pub fn from_f64(x: f64) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::InvalidProbability(format!("{x} is not finite")));
        }
        format!("{x}").parse()
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn one() -> Self {
        Self(BigRational::one())
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        Scalar::to_f64(&self.0)
    }

    pub fn to_scalar<S: Scalar>(&self) -> S {
        S::from_ratio(&self.0)
    }

    pub fn complement(&self) -> Self {
        Self(BigRational::one() - &self.0)
    }
}

fn parse_decimal(s: &str) -> Option<BigRational> {
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.bytes().all(|b| b.is_ascii_digit()) || !frac.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    // Longer inputs cannot be probabilities anyway and would only cost time.
    if int.len() + frac.len() > 64 {
        return None;
    }
    let digits = format!("{int}{frac}");
    let numer: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().ok()?
    };
    let denom = num_traits::pow(BigInt::from(10), frac.len());
    Some(BigRational::new(numer, denom))
}

impl FromStr for Probability {
    type Err = Error;

    /// Accepts `num/den`, plain decimals (`0.75`, `.5`) and integers.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = || Error::InvalidProbability(format!("cannot parse {t:?}"));
        let value = if let Some((n, d)) = t.split_once('/') {
            let n = parse_decimal(n.trim()).ok_or_else(bad)?;
            let d = parse_decimal(d.trim()).ok_or_else(bad)?;
            if d.is_zero() {
                return Err(Error::InvalidProbability(format!(
                    "zero denominator in {t:?}"
                )));
            }
            n / d
        } else {
            parse_decimal(t).ok_or_else(bad)?
        };
        Self::new(value)
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_ratio(&self.0))
    }
}

impl Serialize for Probability {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Probability {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Literal {
            Int(i64),
            Float(f64),
            Text(String),
        }
        match Literal::deserialize(deserializer)? {
            Literal::Int(i) => Probability::from_ratio(i, 1),
            Literal::Float(x) => Probability::from_f64(x),
            Literal::Text(s) => s.parse(),
        }
        .map_err(serde::de::Error::custom)
    }
}
