//! Validated, ascending-sorted samples of nonnegative observations.

use crate::error::{Error, Result};

/// A nonempty sample of nonnegative, finite observations kept in ascending
/// order. Duplicates are preserved.
#[derive(Debug, Clone, PartialEq)]
pub struct SortedSample {
    values: Vec<f64>,
}

impl SortedSample {
    /// Validates and sorts `values`.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        for (index, &value) in values.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFinite { index });
            }
            if value < 0.0 {
                return Err(Error::NegativeValue { index, value });
            }
        }
        values.sort_unstable_by(f64::total_cmp);
        // -0.0 sorts before 0.0 under total_cmp; normalize so ties compare equal bitwise too.
        for v in values.iter_mut() {
            if *v == 0.0 {
                *v = 0.0;
            }
        }
        Ok(Self { values })
    }

    pub fn from_slice(values: &[f64]) -> Result<Self> {
        Self::new(values.to_vec())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Multiplies every observation by `factor`, which must be positive and finite.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "scale factor must be positive and finite, got {factor}"
            )));
        }
        Self::new(self.values.iter().map(|v| v * factor).collect())
    }

    /// Number of observations strictly below `t`.
    pub fn count_below(&self, t: f64) -> usize {
        self.values.partition_point(|&v| v < t)
    }

    /// Number of observations less than or equal to `t`.
    pub fn count_at_most(&self, t: f64) -> usize {
        self.values.partition_point(|&v| v <= t)
    }
}

impl TryFrom<Vec<f64>> for SortedSample {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}
