//! One-dimensional real sample with provenance metadata.

use serde::{Deserialize, Serialize};

use crate::Scalar;

/// A one-dimensional real sample `x_1..x_n` plus a provenance note
/// (file path, simulator parameters, ...).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries<F> {
    values: Vec<F>,
    provenance: String,
}

impl<F: Scalar> TimeSeries<F> {
    pub fn new(values: Vec<F>, provenance: impl Into<String>) -> Self {
        Self { values, provenance: provenance.into() }
    }

    pub fn values(&self) -> &[F] {
        &self.values
    }

    pub fn into_values(self) -> Vec<F> {
        self.values
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> F {
        if self.values.is_empty() {
            return F::zero();
        }
        self.values.iter().copied().sum::<F>() / F::of_usize(self.values.len())
    }

    /// Sample standard deviation (denominator n-1).
    pub fn sd(&self) -> F {
        let n = self.values.len();
        if n < 2 {
            return F::zero();
        }
        let mean = self.mean();
        let ss = self
            .values
            .iter()
            .map(|&v| (v - mean) * (v - mean))
            .sum::<F>();
        (ss / F::of_usize(n - 1)).sqrt()
    }
}
