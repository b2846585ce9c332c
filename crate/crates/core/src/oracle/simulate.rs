//! End-to-end grid simulations: upconversion of a sampled pair, bandwidth
//! compression and time-lens imaging.

use serde::{Deserialize, Serialize};

use super::axis::Axis;
use super::fourier::{apply_signal_spectral_phase, apply_spectral_chirp};
use super::grid::{EscortGrid, JointGrid};
use super::measures::{effective_width, grid_efficiency, moments, spectral_marginal, temporal_marginal};
use super::recursion::{recursion_depth, recursion_upconvert};
use super::sampling::{sample_escort, sample_input, sample_time_fn, GridPlan, SPAN_WIDTHS};
use crate::analytic::waveform::{EscortWaveform, Upconversion};
use crate::design::{compressed_bandwidth_first_order, solve_time_lens, LensDesign};
use crate::error::{invalid, Result};
use crate::model::{gamma_for_p, reduce, EscortSpec, PhotonSpec, Realization};

/// Sampled input, escort and both output modes of one realization.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub realization: Realization,
    pub plan: GridPlan,
    pub depth: usize,
    pub input: JointGrid,
    pub escort: EscortGrid,
    pub mode1: JointGrid,
    pub mode3: JointGrid,
}

impl Simulation {
    /// Runs the recursion on an automatically planned grid.
    pub fn run(r: &Realization) -> Result<Self> {
        Self::run_on(r, GridPlan::for_realization(r)?)
    }

    pub fn run_on(r: &Realization, plan: GridPlan) -> Result<Self> {
        let input = sample_input(&r.photon, &plan.signal, &plan.herald)?;
        let escort = sample_escort(&r.escort, &plan.signal)?;
        let depth = recursion_depth(r.gamma, EscortWaveform::new(&r.escort).peak());
        let (mode1, mode3) = recursion_upconvert(&input, &escort, r.gamma, depth)?;
        Ok(Self { realization: *r, plan, depth, input, escort, mode1, mode3 })
    }

    /// Closed-form `f₃f` on the same grid as [`Simulation::mode3`].
    pub fn closed_form_mode3(&self) -> Result<JointGrid> {
        let r = &self.realization;
        let up = Upconversion::new(&r.photon, &r.escort, r.gamma);
        sample_time_fn(&self.plan, self.mode3.dual_a.centre(), self.mode3.dual_h.centre(), move |t, th| up.f3f(t, th))
    }

    pub fn efficiency(&self) -> f64 {
        grid_efficiency(&self.mode3)
    }
}

/// Grid efficiency on the planned grid and on its refinement.
pub fn efficiency_with_doubling(r: &Realization) -> Result<(f64, f64)> {
    let plan = GridPlan::for_realization(r)?;
    let coarse = Simulation::run_on(r, plan)?.efficiency();
    let fine = Simulation::run_on(r, plan.refined())?.efficiency();
    Ok((coarse, fine))
}

/// Upconverted bandwidth against the first-order prediction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WidthRatio {
    pub width: f64,
    pub first_order: f64,
    pub ratio: f64,
    pub efficiency: f64,
    pub q: f64,
}

/// Separable photon and escort with opposite chirps `A₁ = −A₂ = a`, run at
/// coupling `p`; compares the mode-3 spectral width with first order.
pub fn compression_width_ratio(sigma1: f64, sigma2: f64, a: f64, p: f64) -> Result<WidthRatio> {
    let photon = PhotonSpec::separable(sigma1, sigma1, a)?;
    let escort = EscortSpec::new(sigma2, -a, 0.0)?;
    let r = Realization { photon, escort, gamma: gamma_for_p(&escort, p) };
    let sim = Simulation::run(&r)?;
    let (axis, marginal) = spectral_marginal(&sim.mode3)?;
    let width = effective_width(&axis, &marginal);
    let first_order = compressed_bandwidth_first_order(sigma1, sigma2, a)?;
    Ok(WidthRatio { width, first_order, ratio: width / first_order, efficiency: sim.efficiency(), q: r.params().q })
}

/// Measured imaging through the escort lens.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LensOutcome {
    pub design: LensDesign,
    pub q: f64,
    pub delay: f64,
    pub width_in: f64,
    pub width_out: f64,
    pub centroid_in: f64,
    pub centroid_out: f64,
    /// `w_out/w_in`, signed by the centroid map when the object is delayed.
    pub magnification: f64,
    pub efficiency: f64,
}

/// Images a transform-limited photon of bandwidth `sigma1`, delayed by
/// `delay`, through chirp `a1`, an escort of bandwidth `sigma2` and chirp
/// `a2`, and the output chirp that solves the imaging condition.
pub fn simulate_time_lens(sigma1: f64, a1: f64, sigma2: f64, a2: f64, delay: f64, p: f64) -> Result<LensOutcome> {
    let design = solve_time_lens(a1, a2, sigma2)?;
    let photon = PhotonSpec::separable(sigma1, sigma1, 0.0)?;
    let escort = EscortSpec::new(sigma2, a2, 0.0)?;
    let gamma = gamma_for_p(&escort, p);
    let chirped = PhotonSpec { chirp: a1, ..photon };
    let q = reduce(&chirped, &escort, gamma)?.q;

    let w_in = 0.5 / sigma1;
    let w_chirped = (1.0 + 16.0 * a1 * a1 * sigma1.powi(4)).sqrt() * w_in;
    let m = design.magnification.abs();
    let reach = (delay.abs() + SPAN_WIDTHS * w_chirped)
        .max(m * (delay.abs() + SPAN_WIDTHS * w_in))
        .max(SPAN_WIDTHS * escort.time_std());
    let omega_max = SPAN_WIDTHS * (sigma1 + sigma2);
    let signal = GridPlan::axis_covering(-reach, reach, omega_max, 256)?;
    let half_h = SPAN_WIDTHS * w_in;
    let herald = GridPlan::axis_covering(-half_h, half_h, SPAN_WIDTHS * sigma1, 64)?;

    let base = sample_input(&photon, &signal, &herald)?;
    let object = apply_signal_spectral_phase(&base, |w| -w * delay)?;
    let f0 = apply_signal_spectral_phase(&base, |w| a1 * w * w - w * delay)?;
    let g = sample_escort(&escort, &signal)?;
    let depth = recursion_depth(gamma, EscortWaveform::new(&escort).peak());
    let (_, f3) = recursion_upconvert(&f0, &g, gamma, depth)?;
    let image = apply_spectral_chirp(&f3, design.a3, f3.dual_a.centre())?;

    let (_, c_in, width_in) = moments(&signal, &temporal_marginal(&object));
    let (_, c_out, width_out) = moments(&signal, &temporal_marginal(&image));
    let sign = if delay != 0.0 { (c_out / c_in).signum() } else { design.magnification.signum() };
    Ok(LensOutcome {
        design,
        q,
        delay,
        width_in,
        width_out,
        centroid_in: c_in,
        centroid_out: c_out,
        magnification: sign * width_out / width_in,
        efficiency: grid_efficiency(&f3),
    })
}

/// Marginal widths of a grid in time and frequency, for reporting.
pub fn widths(grid: &JointGrid) -> Result<(f64, f64)> {
    let tw = effective_width(&grid.axis_a, &temporal_marginal(grid));
    let (axis, marginal): (Axis, Vec<f64>) = spectral_marginal(grid)?;
    Ok((tw, effective_width(&axis, &marginal)))
}

/// Rejects a coupling outside the range the oracle is meant for.
pub fn check_p(p: f64) -> Result<()> {
    if !(p.is_finite() && p >= 0.0) {
        return Err(invalid("p", "must be finite and non-negative"));
    }
    Ok(())
}
