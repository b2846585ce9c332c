//! Dispersion design: time lens, time-to-frequency conversion and the
//! first-order estimate of bandwidth compression.
//!
//! Chirp convention: spectral phase `e^{+iA(ω−ω₀)²}` on every mode.

use serde::{Deserialize, Serialize};

use crate::error::{require_finite, require_positive, Result, SfgError};

/// Below this magnitude `4B − 1/A₁` is treated as zero (afocal setup).
pub const AFOCAL_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LensDesign {
    #[serde(rename = "A1")]
    pub a1: f64,
    #[serde(rename = "A2")]
    pub a2: f64,
    #[serde(rename = "A3")]
    pub a3: f64,
    pub sigma2: f64,
    #[serde(rename = "B")]
    pub b: f64,
    /// Temporal magnification of the image, `−A₃/A₁`.
    pub magnification: f64,
    /// `16A₂²σ₂⁴`; the thin-lens forms hold when this is large.
    pub lcl_ratio: f64,
}

impl LensDesign {
    /// `1/(2A₁) + 1/(2A₃) − 2B`, zero for an exact solution.
    pub fn imaging_residual(&self) -> f64 {
        0.5 / self.a1 + 0.5 / self.a3 - 2.0 * self.b
    }

    /// `−A₁/A₃`, the reciprocal of [`LensDesign::magnification`].
    pub fn inverse_magnification(&self) -> f64 {
        -self.a1 / self.a3
    }
}

/// Coefficient `B` of the quadratic temporal phase `Bt²` carried by a
/// chirped escort: `B = −4A₂σ₂⁴/(1+16A₂²σ₂⁴)`.
pub fn temporal_phase_coefficient(a2: f64, sigma2: f64) -> f64 {
    let s4 = sigma2.powi(4);
    -4.0 * a2 * s4 / (1.0 + 16.0 * a2 * a2 * s4)
}

/// Output chirp `A₃` that images the input through the escort lens:
/// `1/(2A₁) + 1/(2A₃) = 2B`.
pub fn solve_time_lens(a1: f64, a2: f64, sigma2: f64) -> Result<LensDesign> {
    require_finite("A1", a1)?;
    require_finite("A2", a2)?;
    require_positive("sigma2", sigma2)?;
    if a1 == 0.0 {
        return Err(SfgError::Degenerate("input chirp A1 = 0 leaves nothing to image"));
    }
    let b = temporal_phase_coefficient(a2, sigma2);
    let denominator = 4.0 * b - 1.0 / a1;
    if denominator.abs() < AFOCAL_THRESHOLD {
        return Err(SfgError::Afocal { denominator });
    }
    let a3 = 1.0 / denominator;
    Ok(LensDesign {
        a1,
        a2,
        a3,
        sigma2,
        b,
        magnification: -a3 / a1,
        lcl_ratio: 16.0 * a2 * a2 * sigma2.powi(4),
    })
}

/// Input chirp `A₁ = 1/(4B)` that maps arrival time onto frequency.
pub fn time_to_frequency_chirp(a2: f64, sigma2: f64) -> Result<f64> {
    require_finite("A2", a2)?;
    require_positive("sigma2", sigma2)?;
    let b = temporal_phase_coefficient(a2, sigma2);
    if b == 0.0 {
        return Err(SfgError::Degenerate("unchirped escort imparts no temporal phase"));
    }
    Ok(0.25 / b)
}

/// First-order bandwidth of the upconverted photon for opposite chirps
/// `A₁ = −A₂ = A`: `√((σ₁²+σ₂²)/(1+16A²σ₁²σ₂²))`.
pub fn compressed_bandwidth_first_order(sigma1: f64, sigma2: f64, a: f64) -> Result<f64> {
    require_positive("sigma1", sigma1)?;
    require_positive("sigma2", sigma2)?;
    require_finite("A", a)?;
    let (s1, s2) = (sigma1 * sigma1, sigma2 * sigma2);
    Ok(((s1 + s2) / (1.0 + 16.0 * a * a * s1 * s2)).sqrt())
}

/// Opposite-chirp magnitude `A ≥ 0` that turns `q₀ = σ₂²/σ₁²` into `q` for a
/// separable photon with `σ₁ = 1`, or `None` when no real chirp does.
///
/// `q = q₀(1+16A²)/(1+16A²q₀²)` moves monotonically from `q₀` towards
/// `1/q₀` as `|A|` grows, so only `q` between the two is accessible.
pub fn compression_chirp(q0: f64, q: f64) -> Option<f64> {
    if !(q0 > 0.0 && q > 0.0 && q0.is_finite() && q.is_finite()) {
        return None;
    }
    if (q - q0).abs() <= 1e-15 * q0 {
        return Some(0.0);
    }
    let x = (q0 - q) / (q * q0 * q0 - q0);
    (x.is_finite() && x > 0.0).then(|| x.sqrt() / 4.0)
}
