//! Continuous Fourier transform on uniform grids with the convention
//! `f(t) = (2π)^{-1/2} ∫ F(ω) e^{+iωt} dω`.
//!
//! With `t_j = t₀ + j·Δt` and `ω_k = ω₀ + k·Δω`, `Δω = 2π/(nΔt)`:
//!
//! `F_k = Δt/√(2π) · e^{−iω₀t₀} e^{−ikΔωt₀} · DFT[f_j e^{−iω₀jΔt}]_k`
//!
//! and the inverse mirrors it with the unnormalized inverse DFT, so the round
//! trip is exact up to rounding.

use std::sync::Arc;

use ndarray::Array2;
use num_complex::Complex64 as C64;
use rustfft::{Fft, FftPlanner};

use super::axis::Axis;
use super::grid::{Domain, EscortGrid, JointGrid};
use crate::error::{Result, SfgError};
use crate::exec::for_each_chunk_mut;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Time to frequency.
    Forward,
    /// Frequency to time.
    Inverse,
}

/// A planned transform between one time axis and its dual.
pub struct AxisTransform {
    fft: Arc<dyn Fft<f64>>,
    pre: Vec<C64>,
    post: Vec<C64>,
}

impl AxisTransform {
    pub fn new(from: &Axis, to: &Axis, direction: Direction) -> Result<Self> {
        if !from.is_dual_of(to) {
            return Err(SfgError::AxisMismatch("target axis is not the FFT dual of the source".into()));
        }
        let n = from.n;
        let mut planner = FftPlanner::new();
        let (time, freq, sign, fft) = match direction {
            Direction::Forward => (from, to, -1.0, planner.plan_fft_forward(n)),
            Direction::Inverse => (to, from, 1.0, planner.plan_fft_inverse(n)),
        };
        let (t0, dt, w0, dw) = (time.start, time.step, freq.start, freq.step);
        let scale = from.step / (2.0 * std::f64::consts::PI).sqrt();
        let global = C64::from_polar(scale, sign * w0 * t0);
        let (pre, post): (Vec<C64>, Vec<C64>) = match direction {
            // pre runs over the time index, post over the frequency index.
            Direction::Forward => (
                (0..n).map(|j| C64::from_polar(1.0, sign * w0 * j as f64 * dt)).collect(),
                (0..n).map(|k| global * C64::from_polar(1.0, sign * k as f64 * dw * t0)).collect(),
            ),
            Direction::Inverse => (
                (0..n).map(|k| C64::from_polar(1.0, sign * k as f64 * dw * t0)).collect(),
                (0..n).map(|j| global * C64::from_polar(1.0, sign * w0 * j as f64 * dt)).collect(),
            ),
        };
        Ok(Self { fft, pre, post })
    }

    /// Transforms `data` in place; `data.len()` must equal the axis length.
    pub fn apply(&self, data: &mut [C64]) {
        debug_assert_eq!(data.len(), self.pre.len());
        for (v, p) in data.iter_mut().zip(&self.pre) {
            *v *= p;
        }
        self.fft.process(data);
        for (v, p) in data.iter_mut().zip(&self.post) {
            *v *= p;
        }
    }

    /// Transforms every contiguous row of a row-major buffer.
    pub fn apply_rows(&self, data: &mut [C64]) {
        let n = self.pre.len();
        for_each_chunk_mut(data, n, |_, row| self.apply(row));
    }
}

fn transform_columns(data: &Array2<C64>, tr: &AxisTransform) -> Array2<C64> {
    let mut t = data.t().as_standard_layout().into_owned();
    tr.apply_rows(t.as_slice_mut().expect("standard layout"));
    t.t().as_standard_layout().into_owned()
}

fn transform_rows(mut data: Array2<C64>, tr: &AxisTransform) -> Array2<C64> {
    if !data.is_standard_layout() {
        data = data.as_standard_layout().into_owned();
    }
    tr.apply_rows(data.as_slice_mut().expect("standard layout"));
    data
}

fn transform_2d(grid: &JointGrid, direction: Direction) -> Result<JointGrid> {
    let expected = match direction {
        Direction::Forward => Domain::Time,
        Direction::Inverse => Domain::Frequency,
    };
    grid.require_domain(expected)?;
    let ta = AxisTransform::new(&grid.axis_a, &grid.dual_a, direction)?;
    let th = AxisTransform::new(&grid.axis_h, &grid.dual_h, direction)?;
    let data = transform_rows(grid.data.clone(), &th);
    let data = transform_columns(&data, &ta);
    JointGrid::new(grid.dual_a, grid.dual_h, grid.axis_a, grid.axis_h, data, grid.domain.flipped())
}

/// Joint time amplitude to joint spectrum.
pub fn ft_forward(grid: &JointGrid) -> Result<JointGrid> {
    transform_2d(grid, Direction::Forward)
}

/// Joint spectrum to joint time amplitude.
pub fn ft_inverse(grid: &JointGrid) -> Result<JointGrid> {
    transform_2d(grid, Direction::Inverse)
}

/// Transforms a 1-D sampled field between time and frequency.
pub fn ft_1d(grid: &EscortGrid) -> Result<EscortGrid> {
    let direction = match grid.domain {
        Domain::Time => Direction::Forward,
        Domain::Frequency => Direction::Inverse,
    };
    let tr = AxisTransform::new(&grid.axis, &grid.dual, direction)?;
    let mut data = grid.data.clone();
    tr.apply(&mut data);
    EscortGrid::new(grid.dual, grid.axis, data, grid.domain.flipped())
}

/// Signal-axis spectrum of a time grid: rows become `ω` on `dual_a`,
/// columns stay herald time.
pub fn signal_spectrum(grid: &JointGrid) -> Result<Array2<C64>> {
    grid.require_domain(Domain::Time)?;
    let tr = AxisTransform::new(&grid.axis_a, &grid.dual_a, Direction::Forward)?;
    Ok(transform_columns(&grid.data, &tr))
}

/// Multiplies the signal-axis spectrum of a time grid by `e^{i·phase(ω)}`
/// and returns to time. A chirp `A` is `phase(ω) = A(ω − ω₀)²`; a delay `d`
/// adds `−ω·d`.
pub fn apply_signal_spectral_phase<P>(grid: &JointGrid, phase: P) -> Result<JointGrid>
where
    P: Fn(f64) -> f64,
{
    let mut spec = signal_spectrum(grid)?;
    for (i, mut row) in spec.outer_iter_mut().enumerate() {
        let factor = C64::from_polar(1.0, phase(grid.dual_a.value(i)));
        row.map_inplace(|v| *v *= factor);
    }
    let back = AxisTransform::new(&grid.dual_a, &grid.axis_a, Direction::Inverse)?;
    grid.with_data(transform_columns(&spec, &back))
}

/// Applies chirp `A` about `centre` on the signal axis of a time grid.
pub fn apply_spectral_chirp(grid: &JointGrid, chirp: f64, centre: f64) -> Result<JointGrid> {
    apply_signal_spectral_phase(grid, |w| chirp * (w - centre) * (w - centre))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::measures::relative_l2;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn gaussian_spectrum(axis: Axis) -> EscortGrid {
        let data = axis
            .values()
            .iter()
            .map(|&w| C64::from((2.0 * PI).powf(-0.25) * (-w * w / 4.0).exp()))
            .collect();
        EscortGrid::new(axis, Axis::centred(0.0, 2.0 * PI / (axis.n as f64 * axis.step), axis.n).unwrap(), data, Domain::Frequency).unwrap()
    }

    #[test]
    fn gaussian_transforms_to_gaussian() {
        let w = Axis::centred(0.0, 0.1, 256).unwrap();
        let spec = gaussian_spectrum(w);
        let time = ft_1d(&spec).unwrap();
        assert_eq!(time.domain, Domain::Time);
        for (i, v) in time.data.iter().enumerate() {
            let t = time.axis.value(i);
            let expected = (2.0 / PI).powf(0.25) * (-t * t).exp();
            assert!((v - C64::from(expected)).norm() < 1e-13, "t={t}: {v}");
        }
        assert!((time.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn offset_axes_keep_phase_right() {
        // Spectrum centred at ω₀ = 7 on an axis starting off-grid: the time
        // signal is the baseband one times e^{iω₀t}.
        let w = Axis::centred(7.0, 0.1, 256).unwrap();
        let data: Vec<C64> =
            w.values().iter().map(|&x| C64::from((2.0 * PI).powf(-0.25) * (-(x - 7.0) * (x - 7.0) / 4.0).exp())).collect();
        let t_axis = w.dual(0.3);
        let grid = EscortGrid::new(w, t_axis, data, Domain::Frequency).unwrap();
        let time = ft_1d(&grid).unwrap();
        for (i, v) in time.data.iter().enumerate() {
            let t = time.axis.value(i);
            let expected = C64::from_polar((2.0 / PI).powf(0.25) * (-t * t).exp(), 7.0 * t);
            assert!((v - expected).norm() < 1e-12, "t={t}");
        }
    }

    #[test]
    fn round_trip_on_random_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = Axis::centred(0.4, 0.07, 128).unwrap();
        let h = Axis::centred(-1.0, 0.11, 64).unwrap();
        let data = Array2::from_shape_fn((128, 64), |(i, j)| {
            let env = (-(a.value(i) - 0.4).powi(2) - (h.value(j) + 1.0).powi(2)).exp();
            C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5) * env
        });
        let grid = JointGrid::new(a, h, a.dual(2.0), h.dual(-3.0), data, Domain::Time).unwrap();
        let back = ft_inverse(&ft_forward(&grid).unwrap()).unwrap();
        assert!(back.same_axes(&grid));
        assert!(relative_l2(&back.data, &grid.data) < 1e-12);
    }

    #[test]
    fn forward_preserves_norm() {
        let a = Axis::centred(0.0, 0.1, 128).unwrap();
        let h = Axis::centred(0.0, 0.1, 128).unwrap();
        let grid = JointGrid::from_fn(a, h, a.dual(0.0), h.dual(0.0), Domain::Time, |t, th| {
            C64::from_polar((2.0 / PI).sqrt() * (-t * t - th * th).exp(), 0.3 * t * t)
        })
        .unwrap();
        let spec = ft_forward(&grid).unwrap();
        let n_t = crate::oracle::measures::grid_norm(&grid);
        let n_w = crate::oracle::measures::grid_norm(&spec);
        assert!((n_t - 1.0).abs() < 1e-10 && (n_w - n_t).abs() < 1e-12);
    }

    #[test]
    fn domain_is_checked() {
        let a = Axis::centred(0.0, 0.1, 64).unwrap();
        let grid = JointGrid::from_fn(a, a, a.dual(0.0), a.dual(0.0), Domain::Frequency, |_, _| C64::from(0.0)).unwrap();
        assert!(ft_inverse(&grid).is_ok());
        assert!(matches!(ft_forward(&grid), Err(SfgError::AxisMismatch(_))));
    }

    #[test]
    fn spectral_delay_shifts_in_time() {
        let a = Axis::centred(0.0, 0.05, 512).unwrap();
        let h = Axis::centred(0.0, 0.2, 64).unwrap();
        let f = |t: f64, th: f64| C64::from((-t * t - th * th).exp());
        let grid = JointGrid::from_fn(a, h, a.dual(0.0), h.dual(0.0), Domain::Time, f).unwrap();
        let shifted = apply_signal_spectral_phase(&grid, |w| -w * 2.0).unwrap();
        let expected = JointGrid::from_fn(a, h, a.dual(0.0), h.dual(0.0), Domain::Time, |t, th| f(t - 2.0, th)).unwrap();
        assert!(relative_l2(&shifted.data, &expected.data) < 1e-12);
    }
}
