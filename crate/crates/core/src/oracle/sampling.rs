//! Sampling of the input and escort spectra and automatic grid sizing.

use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::axis::Axis;
use super::fourier::{ft_1d, ft_inverse};
use super::grid::{Domain, EscortGrid, JointGrid};
use super::measures::{border_fraction, grid_norm};
use crate::analytic::waveform::InputWaveform;
use crate::error::{Result, SfgError};
use crate::model::{reduce, EscortSpec, PhotonSpec, Realization};

/// Largest energy a sampled field may lose to truncation.
pub const ENERGY_BUDGET: f64 = 1e-8;
/// Half-spans are this many standard deviations of the relevant envelope.
pub const SPAN_WIDTHS: f64 = 10.0;
const MIN_SIGNAL_SAMPLES: usize = 256;
const MIN_HERALD_SAMPLES: usize = 64;

/// Signal and herald time axes for one simulation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPlan {
    pub signal: Axis,
    pub herald: Axis,
}

fn samples_for(span: f64, step: f64, min: usize) -> usize {
    ((span / step).ceil() as usize).next_power_of_two().max(min)
}

impl GridPlan {
    /// Time axes wide enough for the photon and the escort and fine enough
    /// for the upconverted bandwidth.
    pub fn for_realization(r: &Realization) -> Result<Self> {
        let p = reduce(&r.photon, &r.escort, r.gamma)?.p;
        let (var_t, var_h) = InputWaveform::new(&r.photon).intensity_variances();
        let escort_centre = -r.escort.delay;
        let escort_sd = r.escort.time_std();
        let lo = (-SPAN_WIDTHS * var_t.sqrt()).min(escort_centre - SPAN_WIDTHS * escort_sd);
        let hi = (SPAN_WIDTHS * var_t.sqrt()).max(escort_centre + SPAN_WIDTHS * escort_sd);
        let omega_max = SPAN_WIDTHS * (r.photon.sigma1 + r.escort.sigma2 * (1.0 + 0.5 * p));
        let signal = Self::axis_covering(lo, hi, omega_max, MIN_SIGNAL_SAMPLES)?;
        let half_h = SPAN_WIDTHS * var_h.sqrt();
        let herald = Self::axis_covering(-half_h, half_h, SPAN_WIDTHS * r.photon.sigma_h, MIN_HERALD_SAMPLES)?;
        Ok(Self { signal, herald })
    }

    /// Power-of-two axis over `[lo, hi]` whose conjugate reaches `±omega_max`.
    pub fn axis_covering(lo: f64, hi: f64, omega_max: f64, min_samples: usize) -> Result<Axis> {
        let step = PI / omega_max;
        let n = samples_for(hi - lo, step, min_samples);
        Axis::centred(0.5 * (lo + hi), step, n)
    }

    /// Twice the samples per axis at half the spacing.
    pub fn refined(&self) -> Self {
        Self { signal: self.signal.refined(), herald: self.herald.refined() }
    }
}

/// Downconversion joint spectrum `F_i(ω₁, ω_h)`.
pub fn input_spectrum(photon: &PhotonSpec, w1: f64, wh: f64) -> C64 {
    let (d1, dh) = (w1 - photon.omega01, wh - photon.omega0h);
    let (s1, sh, s) = (photon.sigma1, photon.sigma_h, photon.pump_width);
    let norm = photon.sigma_in_sq().powf(0.25) / (2.0 * PI * s * s1 * sh).sqrt();
    let envelope = (-d1 * d1 / (4.0 * s1 * s1) - dh * dh / (4.0 * sh * sh) - (d1 + dh) * (d1 + dh) / (4.0 * s * s)).exp();
    C64::from_polar(norm * envelope, photon.chirp * d1 * d1)
}

/// Escort spectrum `G(ω)`, including the delay phase `e^{iωτ}`.
pub fn escort_spectrum(escort: &EscortSpec, w: f64) -> C64 {
    let d = w - escort.omega02;
    let s2 = escort.sigma2 * escort.sigma2;
    let amp = (2.0 * PI * s2).powf(-0.25) * (-d * d / (4.0 * s2)).exp();
    C64::from_polar(amp, w * escort.delay + escort.chirp * d * d)
}

fn check_captured(captured: f64) -> Result<()> {
    let missing = 1.0 - captured;
    if missing.abs() > ENERGY_BUDGET {
        Err(SfgError::GridTooSmall { captured, missing })
    } else {
        Ok(())
    }
}

/// Input spectrum sampled on the conjugates of the given time axes,
/// centred at the carriers.
pub fn sample_input_spectrum(photon: &PhotonSpec, time_a: &Axis, time_h: &Axis) -> Result<JointGrid> {
    photon.validate()?;
    let wa = time_a.dual(photon.omega01);
    let wh = time_h.dual(photon.omega0h);
    let p = *photon;
    let grid = JointGrid::from_fn(wa, wh, *time_a, *time_h, Domain::Frequency, move |w1, w2| input_spectrum(&p, w1, w2))?;
    check_captured(grid_norm(&grid))?;
    Ok(grid)
}

/// Joint temporal amplitude obtained by transforming the sampled spectrum.
pub fn sample_input(photon: &PhotonSpec, time_a: &Axis, time_h: &Axis) -> Result<JointGrid> {
    let time = ft_inverse(&sample_input_spectrum(photon, time_a, time_h)?)?;
    let edge = border_fraction(&time);
    if edge > ENERGY_BUDGET {
        return Err(SfgError::GridTooSmall { captured: 1.0 - edge, missing: edge });
    }
    Ok(time)
}

/// Escort spectrum sampled on the conjugate of `time`, centred at `ω₀₂`.
pub fn sample_escort_spectrum(escort: &EscortSpec, time: &Axis) -> Result<EscortGrid> {
    escort.validate()?;
    let w = time.dual(escort.omega02);
    let data = w.values().iter().map(|&x| escort_spectrum(escort, x)).collect();
    let grid = EscortGrid::new(w, *time, data, Domain::Frequency)?;
    check_captured(grid.norm_sqr())?;
    Ok(grid)
}

/// Temporal escort field obtained by transforming the sampled spectrum.
pub fn sample_escort(escort: &EscortSpec, time: &Axis) -> Result<EscortGrid> {
    let g = ft_1d(&sample_escort_spectrum(escort, time)?)?;
    let n = g.data.len();
    let band = n / 16;
    let total: f64 = g.data.iter().map(|v| v.norm_sqr()).sum();
    let edge: f64 = g.data[..band].iter().chain(&g.data[n - band..]).map(|v| v.norm_sqr()).sum::<f64>() / total;
    if edge > ENERGY_BUDGET {
        return Err(SfgError::GridTooSmall { captured: 1.0 - edge, missing: edge });
    }
    check_captured(g.norm_sqr())?;
    Ok(g)
}

/// Samples an analytic function of time on a plan's axes, with the
/// conjugate signal axis centred at `signal_carrier`.
pub fn sample_time_fn<F>(plan: &GridPlan, signal_carrier: f64, herald_carrier: f64, f: F) -> Result<JointGrid>
where
    F: Fn(f64, f64) -> C64 + Sync + Send,
{
    JointGrid::from_fn(
        plan.signal,
        plan.herald,
        plan.signal.dual(signal_carrier),
        plan.herald.dual(herald_carrier),
        Domain::Time,
        f,
    )
}

/// Zero grid with the same layout.
pub fn zeros_like(grid: &JointGrid) -> JointGrid {
    grid.with_data(Array2::zeros(grid.data.dim())).expect("same shape")
}
