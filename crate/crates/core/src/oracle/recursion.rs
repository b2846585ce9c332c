//! Order-by-order construction of the output state.
//!
//! In time the recursion is a pointwise product:
//! `f⁽ᵏ⁺²⁾ = −2πγ²/((k+1)(k+2)) · f⁽ᵏ⁾ |g|²`, started from `f⁽⁰⁾ = f_i` and
//! `f⁽¹⁾ = i√(2π)γ f_i g`. Even orders stay in mode 1, odd orders populate
//! mode 3. The frequency-domain form of the same step is a double integral
//! against the escort spectrum and is implemented separately as a check.

use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64 as C64;

use super::axis::Axis;
use super::grid::{Domain, EscortGrid, JointGrid};
use super::sampling::escort_spectrum;
use crate::error::{Result, SfgError};
use crate::exec::map_collect;
use crate::model::EscortSpec;

/// Depth `max(15, ⌈3·√(2π)γ·max|g|⌉)`; the sine series needs about three
/// times its argument in terms.
pub fn recursion_depth(gamma: f64, escort_peak: f64) -> usize {
    let x = (2.0 * PI).sqrt() * gamma.abs() * escort_peak;
    15usize.max((3.0 * x).ceil() as usize)
}

/// [`recursion_depth`] expressed through `p` (the peak argument is `p/2`).
pub fn recursion_depth_for_p(p: f64) -> usize {
    15usize.max((1.5 * p).ceil() as usize)
}

/// Mode-1 and mode-3 grids summed up to order `k_max`.
pub fn recursion_upconvert(f0: &JointGrid, g: &EscortGrid, gamma: f64, k_max: usize) -> Result<(JointGrid, JointGrid)> {
    if k_max < 1 {
        return Err(crate::error::invalid("K", "recursion needs at least the first order"));
    }
    f0.require_domain(Domain::Time)?;
    if g.domain != Domain::Time {
        return Err(SfgError::AxisMismatch("escort must be sampled in time".into()));
    }
    if !g.axis.matches(&f0.axis_a) {
        return Err(SfgError::AxisMismatch("escort and signal time axes differ".into()));
    }
    let coupling = C64::new(0.0, (2.0 * PI).sqrt() * gamma);
    let (na, nh) = f0.data.dim();
    let rows: Vec<usize> = (0..na).collect();
    let per_row = map_collect(&rows, |&i| {
        let gi = g.data[i];
        let m2 = gi.norm_sqr();
        let row = f0.data.row(i);
        let mut even: Vec<C64> = row.to_vec();
        let mut odd: Vec<C64> = row.iter().map(|v| coupling * v * gi).collect();
        let mut mode1 = even.clone();
        let mut mode3 = odd.clone();
        let mut k = 0;
        while k + 2 <= k_max {
            let f_even = -2.0 * PI * gamma * gamma * m2 / (((k + 1) * (k + 2)) as f64);
            even.iter_mut().for_each(|v| *v *= f_even);
            mode1.iter_mut().zip(&even).for_each(|(a, b)| *a += b);
            if k + 3 <= k_max {
                let f_odd = -2.0 * PI * gamma * gamma * m2 / (((k + 2) * (k + 3)) as f64);
                odd.iter_mut().for_each(|v| *v *= f_odd);
                mode3.iter_mut().zip(&odd).for_each(|(a, b)| *a += b);
            }
            k += 2;
        }
        (mode1, mode3)
    });
    let mut d1 = Array2::<C64>::zeros((na, nh));
    let mut d3 = Array2::<C64>::zeros((na, nh));
    for (i, (m1, m3)) in per_row.into_iter().enumerate() {
        d1.row_mut(i).iter_mut().zip(m1).for_each(|(a, b)| *a = b);
        d3.row_mut(i).iter_mut().zip(m3).for_each(|(a, b)| *a = b);
    }
    let mode1 = f0.with_data(d1)?;
    let dual3 = f0.axis_a.dual(f0.dual_a.centre() + g.dual.centre());
    let mode3 = JointGrid::new(f0.axis_a, f0.axis_h, dual3, f0.dual_h, d3, Domain::Time)?;
    Ok((mode1, mode3))
}

/// Which mode a frequency-domain recursion step acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    /// Mode 1: `∬ dω₁ dω₃' F(ω₁) G(ω₃'−ω₁) G*(ω₃'−ω₁'')`.
    Even,
    /// Mode 3: `∬ dω₁' dω₃ F(ω₃) G*(ω₃−ω₁') G(ω₃''−ω₁')`.
    Odd,
}

/// One step `F⁽ᵏ⁾ → F⁽ᵏ⁺²⁾` of the spectral recursion for a single-photon
/// amplitude sampled on `axis`, by direct discretization of the double
/// integral over the intermediate frequency.
pub fn frequency_recursion_step(
    spectrum: &[C64],
    axis: &Axis,
    escort: &EscortSpec,
    gamma: f64,
    k: usize,
    parity: Parity,
) -> Result<Vec<C64>> {
    if spectrum.len() != axis.n {
        return Err(SfgError::AxisMismatch("spectrum length differs from its axis".into()));
    }
    let n = axis.n;
    let dw = axis.step;
    // The intermediate photon lives one escort carrier away.
    let shift = match parity {
        Parity::Even => escort.omega02,
        Parity::Odd => -escort.omega02,
    };
    let mid = Axis { start: axis.start + shift, step: dw, n };
    // G at (mid_j − axis_i) for Even and at (axis_i − mid_j) for Odd; both
    // are differences of grid points, tabulated once.
    let diff = |offset: isize| -> f64 {
        match parity {
            Parity::Even => mid.start - axis.start + offset as f64 * dw,
            Parity::Odd => axis.start - mid.start + offset as f64 * dw,
        }
    };
    let table: Vec<C64> = (-(n as isize - 1)..n as isize).map(|o| escort_spectrum(escort, diff(o))).collect();
    let g_at = |o: isize| table[(o + n as isize - 1) as usize];

    let indices: Vec<usize> = (0..n).collect();
    // Inner integral over the source frequency.
    let inner: Vec<C64> = map_collect(&indices, |&j| {
        let mut s = C64::new(0.0, 0.0);
        for (i, f) in spectrum.iter().enumerate() {
            let kernel = match parity {
                Parity::Even => g_at(j as isize - i as isize),
                Parity::Odd => g_at(i as isize - j as isize).conj(),
            };
            s += f * kernel;
        }
        s * dw
    });
    let scale = -gamma * gamma / (((k + 1) * (k + 2)) as f64);
    let out = map_collect(&indices, |&l| {
        let mut s = C64::new(0.0, 0.0);
        for (j, h) in inner.iter().enumerate() {
            let kernel = match parity {
                Parity::Even => g_at(j as isize - l as isize).conj(),
                Parity::Odd => g_at(l as isize - j as isize),
            };
            s += h * kernel;
        }
        s * dw * scale
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::waveform::{EscortWaveform, Upconversion};
    use crate::model::{gamma_for_p, PhotonSpec, Realization};
    use crate::oracle::fourier::{ft_1d, AxisTransform, Direction};
    use crate::oracle::measures::{grid_norm, relative_l2};
    use crate::oracle::sampling::{sample_escort, sample_input, sample_time_fn, GridPlan};

    fn setup(p: f64, q: f64, t: f64) -> (Realization, GridPlan, JointGrid, EscortGrid) {
        let r = Realization::separable(p, q, t).unwrap();
        let plan = GridPlan::for_realization(&r).unwrap();
        let f0 = sample_input(&r.photon, &plan.signal, &plan.herald).unwrap();
        let g = sample_escort(&r.escort, &plan.signal).unwrap();
        (r, plan, f0, g)
    }

    #[test]
    fn depth_heuristic() {
        assert_eq!(recursion_depth_for_p(4.0), 15);
        assert_eq!(recursion_depth_for_p(20.0), 30);
        let e = crate::model::EscortSpec::new(0.7, 2.0, 0.0).unwrap();
        let peak = EscortWaveform::new(&e).peak();
        let gamma = gamma_for_p(&e, 14.0);
        assert_eq!(recursion_depth(gamma, peak), recursion_depth_for_p(14.0));
    }

    #[test]
    fn first_order_base_case() {
        let (r, _, f0, g) = setup(2.0, 1.0, 0.5);
        let (m1, m3) = recursion_upconvert(&f0, &g, r.gamma, 1).unwrap();
        assert_eq!(m1.data, f0.data);
        let c = C64::new(0.0, (2.0 * PI).sqrt() * r.gamma);
        for ((i, _), v) in m3.data.indexed_iter() {
            let _ = v;
            let expected = c * f0.data[(i, 0)] * g.data[i];
            assert_eq!(m3.data[(i, 0)], expected);
        }
    }

    #[test]
    fn zero_coupling() {
        let (_, _, f0, g) = setup(1.0, 1.0, 0.0);
        let (m1, m3) = recursion_upconvert(&f0, &g, 0.0, 15).unwrap();
        assert_eq!(m1.data, f0.data);
        assert!(m3.data.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn converges_to_closed_form() {
        for &(p, q, t) in &[(2.0, 1.0, 0.0), (4.0, 0.01, 1.0)] {
            let (r, plan, f0, g) = setup(p, q, t);
            let (m1, m3) = recursion_upconvert(&f0, &g, r.gamma, recursion_depth_for_p(p)).unwrap();
            let up = Upconversion::new(&r.photon, &r.escort, r.gamma);
            let exact = sample_time_fn(&plan, 0.0, 0.0, |a, b| up.f3f(a, b)).unwrap();
            assert!(relative_l2(&m3.data, &exact.data) < 1e-8);
            assert!((grid_norm(&m1) + grid_norm(&m3) - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn convergence_in_depth_is_monotone() {
        let (r, plan, f0, g) = setup(4.0, 1.0, 0.0);
        let up = Upconversion::new(&r.photon, &r.escort, r.gamma);
        let exact = sample_time_fn(&plan, 0.0, 0.0, |a, b| up.f3f(a, b)).unwrap();
        let errors: Vec<f64> = (1..=8)
            .map(|j| {
                let (_, m3) = recursion_upconvert(&f0, &g, r.gamma, 2 * j + 1).unwrap();
                relative_l2(&m3.data, &exact.data)
            })
            .collect();
        for w in errors.windows(2).skip(1) {
            assert!(w[1] < w[0], "{errors:?}");
        }
    }

    #[test]
    fn spectral_step_matches_time_step() {
        // Single-photon amplitude: a chirped Gaussian on a carrier, escort
        // delayed and chirped on another carrier.
        let photon = PhotonSpec::separable(1.0, 1.0, 0.8).unwrap().with_carriers(2.0, 0.0).unwrap();
        let escort = EscortSpec::new(0.9, -0.6, 0.4).unwrap().with_carrier(5.0).unwrap();
        let gamma = 0.3;
        let t_axis = Axis::centred(0.0, 0.1, 512).unwrap();
        let g = sample_escort(&escort, &t_axis).unwrap();
        let f = |t: f64| crate::analytic::waveform::input_time(&photon, t, 0.0);
        let check = |f_k: Vec<C64>, carrier: f64, parity: Parity, k: usize| {
            let w_axis = t_axis.dual(carrier);
            let fwd = AxisTransform::new(&t_axis, &w_axis, Direction::Forward).unwrap();
            let mut spec = f_k.clone();
            fwd.apply(&mut spec);
            let stepped = frequency_recursion_step(&spec, &w_axis, &escort, gamma, k, parity).unwrap();
            let mut expected: Vec<C64> = f_k
                .iter()
                .zip(&g.data)
                .map(|(v, gv)| v * gv.norm_sqr() * (-2.0 * PI * gamma * gamma / (((k + 1) * (k + 2)) as f64)))
                .collect();
            fwd.apply(&mut expected);
            let num: f64 = stepped.iter().zip(&expected).map(|(a, b)| (a - b).norm_sqr()).sum();
            let den: f64 = expected.iter().map(|b| b.norm_sqr()).sum();
            assert!((num / den).sqrt() < 1e-10, "{parity:?}: {}", (num / den).sqrt());
        };
        let f_even: Vec<C64> = t_axis.values().iter().map(|&t| f(t)).collect();
        check(f_even.clone(), 2.0, Parity::Even, 0);
        let c = C64::new(0.0, (2.0 * PI).sqrt() * gamma);
        let f_odd: Vec<C64> = f_even.iter().zip(&g.data).map(|(v, gv)| c * v * gv).collect();
        check(f_odd, 7.0, Parity::Odd, 1);
        let _ = ft_1d(&g).unwrap();
    }

    #[test]
    fn mismatched_axes_are_rejected() {
        let (r, plan, f0, _) = setup(1.0, 1.0, 0.0);
        let other = Axis::centred(0.0, plan.signal.step * 0.5, plan.signal.n).unwrap();
        let g = sample_escort(&r.escort, &other.refined()).unwrap_or_else(|_| sample_escort(&r.escort, &plan.signal.refined()).unwrap());
        assert!(matches!(recursion_upconvert(&f0, &g, r.gamma, 3), Err(SfgError::AxisMismatch(_))));
        assert!(recursion_upconvert(&f0, &sample_escort(&r.escort, &plan.signal).unwrap(), r.gamma, 0).is_err());
    }
}
