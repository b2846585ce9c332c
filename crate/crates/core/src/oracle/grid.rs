use ndarray::Array2;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::axis::Axis;
use crate::error::{Result, SfgError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Domain {
    Time,
    Frequency,
}

impl Domain {
    pub fn flipped(self) -> Self {
        match self {
            Domain::Time => Domain::Frequency,
            Domain::Frequency => Domain::Time,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Domain::Time => "time",
            Domain::Frequency => "frequency",
        }
    }
}

/// Sampled two-photon amplitude. Rows follow the signal axis `axis_a`,
/// columns the herald axis `axis_h`. Each axis carries the conjugate axis
/// a transform lands on.
#[derive(Debug, Clone, PartialEq)]
pub struct JointGrid {
    pub axis_a: Axis,
    pub axis_h: Axis,
    pub dual_a: Axis,
    pub dual_h: Axis,
    pub data: Array2<C64>,
    pub domain: Domain,
}

impl JointGrid {
    pub fn new(axis_a: Axis, axis_h: Axis, dual_a: Axis, dual_h: Axis, data: Array2<C64>, domain: Domain) -> Result<Self> {
        if data.dim() != (axis_a.n, axis_h.n) {
            return Err(SfgError::AxisMismatch(format!(
                "data is {:?} but axes have {} x {} samples",
                data.dim(),
                axis_a.n,
                axis_h.n
            )));
        }
        if !axis_a.is_dual_of(&dual_a) || !axis_h.is_dual_of(&dual_h) {
            return Err(SfgError::AxisMismatch("conjugate axes are not FFT duals".into()));
        }
        Ok(Self { axis_a, axis_h, dual_a, dual_h, data, domain })
    }

    /// Samples `f(x_a, x_h)` on the given axes.
    pub fn from_fn<F>(axis_a: Axis, axis_h: Axis, dual_a: Axis, dual_h: Axis, domain: Domain, f: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> C64 + Sync + Send,
    {
        let mut data = Array2::<C64>::zeros((axis_a.n, axis_h.n));
        let slice = data.as_slice_mut().expect("fresh array is contiguous");
        crate::exec::for_each_chunk_mut(slice, axis_h.n, |i, row| {
            let xa = axis_a.value(i);
            for (j, v) in row.iter_mut().enumerate() {
                *v = f(xa, axis_h.value(j));
            }
        });
        Self::new(axis_a, axis_h, dual_a, dual_h, data, domain)
    }

    /// Same axes and domain, new samples.
    pub fn with_data(&self, data: Array2<C64>) -> Result<Self> {
        Self::new(self.axis_a, self.axis_h, self.dual_a, self.dual_h, data, self.domain)
    }

    /// Area element `Δa·Δh`.
    pub fn cell(&self) -> f64 {
        self.axis_a.step * self.axis_h.step
    }

    pub fn same_axes(&self, other: &JointGrid) -> bool {
        self.domain == other.domain && self.axis_a.matches(&other.axis_a) && self.axis_h.matches(&other.axis_h)
    }

    pub fn require_domain(&self, domain: Domain) -> Result<()> {
        if self.domain == domain {
            Ok(())
        } else {
            Err(SfgError::AxisMismatch(format!("expected a {} grid, got {}", domain.as_str(), self.domain.as_str())))
        }
    }
}

/// Sampled escort field on one axis.
#[derive(Debug, Clone, PartialEq)]
pub struct EscortGrid {
    pub axis: Axis,
    pub dual: Axis,
    pub data: Vec<C64>,
    pub domain: Domain,
}

impl EscortGrid {
    pub fn new(axis: Axis, dual: Axis, data: Vec<C64>, domain: Domain) -> Result<Self> {
        if data.len() != axis.n {
            return Err(SfgError::AxisMismatch(format!("{} samples on an axis of {}", data.len(), axis.n)));
        }
        if !axis.is_dual_of(&dual) {
            return Err(SfgError::AxisMismatch("conjugate axis is not the FFT dual".into()));
        }
        Ok(Self { axis, dual, data, domain })
    }

    pub fn norm_sqr(&self) -> f64 {
        super::measures::trapezoid_1d(&self.data.iter().map(|v| v.norm_sqr()).collect::<Vec<_>>(), self.axis.step)
    }
}
