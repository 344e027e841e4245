//! Fairness metrics, parameter sweeps, critical sudden-death thresholds and
//! tie probabilities.

mod fairness;
mod threshold;

pub use fairness::{
    empirical_bars, fairness_bias, q_grid, sweep_q, table3, tie_probability, EmpiricalBar,
    FairnessReport, SuddenDeathMode, SweepPoint, Table3, Table3Row,
};
pub use threshold::{
    alpha_threshold, region_boundary, region_curve, Comparison, RegionPoint, Threshold,
    ThresholdResult,
};

use num_rational::BigRational;
use serde::{Serialize, Serializer};

use crate::engine::{format_decimal, format_ratio, Scalar};

/// A computed quantity: its decimal value plus the exact fraction when the
/// computation ran in rational arithmetic.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportedValue {
    pub value: f64,
    pub exact: Option<BigRational>,
}

impl ReportedValue {
    pub fn from_scalar<S: Scalar>(x: &S) -> Self {
        Self {
            value: x.to_f64(),
            exact: x.exact(),
        }
    }

    pub fn decimal(&self) -> String {
        format_decimal(self.value)
    }

    /// `num/den`, or an empty string in floating-point mode.
    pub fn rational(&self) -> String {
        self.exact.as_ref().map(format_ratio).unwrap_or_default()
    }
}

impl Serialize for ReportedValue {
    fn serialize<Se: Serializer>(&self, s: Se) -> Result<Se::Ok, Se::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("ReportedValue", 2)?;
        st.serialize_field("decimal", &self.decimal())?;
        st.serialize_field("rational", &self.exact.as_ref().map(format_ratio))?;
        st.end()
    }
}
