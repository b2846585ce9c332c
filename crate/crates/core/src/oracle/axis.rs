use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Smallest number of samples allowed on an axis.
pub const MIN_SAMPLES: usize = 64;

/// Uniform sample positions `start + i·step`, `i < n`, with `n` a power of two.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub start: f64,
    pub step: f64,
    pub n: usize,
}

impl Axis {
    pub fn new(start: f64, step: f64, n: usize) -> Result<Self> {
        if !(step.is_finite() && step > 0.0) {
            return Err(invalid("step", format!("must be finite and > 0, got {step}")));
        }
        if !start.is_finite() {
            return Err(invalid("start", format!("must be finite, got {start}")));
        }
        if n < MIN_SAMPLES || !n.is_power_of_two() {
            return Err(invalid("n", format!("must be a power of two >= {MIN_SAMPLES}, got {n}")));
        }
        Ok(Self { start, step, n })
    }

    /// Axis of `n` samples with spacing `step` whose middle sample
    /// (index `n/2`) sits at `centre`.
    pub fn centred(centre: f64, step: f64, n: usize) -> Result<Self> {
        Self::new(centre - (n / 2) as f64 * step, step, n)
    }

    pub fn value(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.value(i)).collect()
    }

    pub fn centre(&self) -> f64 {
        self.value(self.n / 2)
    }

    pub fn end(&self) -> f64 {
        self.value(self.n - 1)
    }

    /// The FFT-conjugate axis centred at `centre`: `step' = 2π/(n·step)`.
    pub fn dual(&self, centre: f64) -> Self {
        let step = 2.0 * std::f64::consts::PI / (self.n as f64 * self.step);
        Self { start: centre - (self.n / 2) as f64 * step, step, n: self.n }
    }

    /// Same middle sample, twice the samples at half the spacing.
    pub fn refined(&self) -> Self {
        let centre = self.centre();
        let step = 0.5 * self.step;
        let n = 2 * self.n;
        Self { start: centre - (n / 2) as f64 * step, step, n }
    }

    /// True when `other` has the same samples up to rounding.
    pub fn matches(&self, other: &Axis) -> bool {
        self.n == other.n
            && (self.step - other.step).abs() <= 1e-12 * self.step
            && (self.start - other.start).abs() <= 1e-9 * self.step.max(self.start.abs() * 1e-3)
    }

    pub fn is_dual_of(&self, other: &Axis) -> bool {
        self.n == other.n
            && (self.step * other.step * self.n as f64 - 2.0 * std::f64::consts::PI).abs() < 1e-12
    }
}
