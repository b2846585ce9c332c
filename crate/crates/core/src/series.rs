//! Compensated summation of slowly-starting alternating series.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SfgError};

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_TERMS: usize = 400;
/// Floor for the relative stopping test, so an all-zero series terminates.
pub const MAGNITUDE_FLOOR: f64 = 1e-300;
/// Consecutive small, non-growing terms required before stopping.
const SETTLE_TERMS: usize = 3;

/// A truncated series sum together with how it was truncated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesValue {
    pub value: f64,
    pub terms_used: usize,
    /// Magnitude of the last term added (or the error estimate for
    /// quadrature-backed values).
    pub last_term: f64,
    pub converged: bool,
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Sums `term(1) + term(2) + ...` until three consecutive terms are both
/// below `tol * max(|partial|, 1e-300)` and no larger than their
/// predecessor. Terms may grow before they shrink.
pub fn sum_series<F>(mut term: F, tol: f64, max_terms: usize) -> Result<SeriesValue>
where
    F: FnMut(usize) -> f64,
{
    let mut acc = CompensatedSum::new();
    let mut settled = 0;
    let mut previous = f64::INFINITY;
    let mut last = 0.0;
    for k in 1..=max_terms {
        let t = term(k);
        acc.add(t);
        last = t.abs();
        let partial = acc.value();
        if last < tol * partial.abs().max(MAGNITUDE_FLOOR) && last <= previous {
            settled += 1;
            if settled >= SETTLE_TERMS {
                return Ok(SeriesValue { value: partial, terms_used: k, last_term: last, converged: true });
            }
        } else {
            settled = 0;
        }
        previous = last;
    }
    Err(SfgError::NoConvergence { terms: max_terms, partial: acc.value(), last_term: last })
}
