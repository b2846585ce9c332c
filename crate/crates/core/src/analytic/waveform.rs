//! Time-domain closed forms of the input pair, the escort field and the
//! two output modes.
//!
//! Fourier convention: `f(t) = (2π)^{-1/2} ∫ F(ω) e^{+iωt} dω`, applied per
//! variable, so `∫|f|² = ∫|F|²`.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::model::{EscortSpec, PhotonSpec};

/// One sample of a two-photon temporal amplitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveformSample {
    pub t: f64,
    pub t_h: f64,
    pub amplitude: C64,
}

/// Joint temporal amplitude `f_i(t, t_h)` of the input pair.
///
/// The spectrum is a 2-D complex Gaussian, so the transform is
/// `f_i = c · exp(−[e_t t² + e_d (t − t_h)² + e_h t_h²])`; the grouping keeps
/// the narrow anti-diagonal term separate, which stays well conditioned
/// when the pump width is tiny.
#[derive(Debug, Clone, Copy)]
pub struct InputWaveform {
    prefactor: C64,
    e_t: C64,
    e_d: C64,
    e_h: C64,
    omega01: f64,
    omega0h: f64,
}

impl InputWaveform {
    pub fn new(photon: &PhotonSpec) -> Self {
        let x1 = C64::new(0.25 / photon.sigma1.powi(2), -photon.chirp);
        let xh = 0.25 / photon.sigma_h.powi(2);
        let c = 0.25 / photon.pump_width.powi(2);
        // det [[x1 + c, c], [c, xh + c]] without the c² cancellation.
        let det = x1 * xh + c * (x1 + xh);
        let norm = photon.sigma_in_sq().powf(0.25)
            / (2.0 * PI * photon.pump_width * photon.sigma1 * photon.sigma_h).sqrt();
        let four_det = 4.0 * det;
        Self {
            prefactor: norm / (2.0 * det.sqrt()),
            e_t: C64::from(xh) / four_det,
            e_d: C64::from(c) / four_det,
            e_h: x1 / four_det,
            omega01: photon.omega01,
            omega0h: photon.omega0h,
        }
    }

    pub fn at(&self, t: f64, t_h: f64) -> C64 {
        let d = t - t_h;
        let exponent = -(self.e_t * t * t + self.e_d * d * d + self.e_h * t_h * t_h);
        let carrier = self.omega01 * t + self.omega0h * t_h;
        self.prefactor * (exponent + C64::new(0.0, carrier)).exp()
    }

    /// Marginal variances `(var_t, var_h)` of `|f_i|²`.
    pub fn intensity_variances(&self) -> (f64, f64) {
        // |f_i|² = |c|² exp(−kᵀ M k) with M = 2 Re[[e_t+e_d, −e_d], [−e_d, e_h+e_d]].
        let m_tt = 2.0 * (self.e_t + self.e_d).re;
        let m_hh = 2.0 * (self.e_h + self.e_d).re;
        let m_th = -2.0 * self.e_d.re;
        let det = m_tt * m_hh - m_th * m_th;
        // Covariance is (2M)⁻¹.
        (m_hh / (2.0 * det), m_tt / (2.0 * det))
    }
}

/// Temporal escort field `g(t)`: a chirped Gaussian centred at `t = −τ`.
#[derive(Debug, Clone, Copy)]
pub struct EscortWaveform {
    peak: f64,
    width: f64,
    quadratic_phase: f64,
    constant_phase: f64,
    omega02: f64,
    delay: f64,
}

impl EscortWaveform {
    pub fn new(escort: &EscortSpec) -> Self {
        let s2 = escort.sigma2 * escort.sigma2;
        let stretch = escort.stretch();
        Self {
            peak: (2.0 * s2 / (PI * stretch)).powf(0.25),
            width: s2 / stretch,
            quadratic_phase: crate::design::temporal_phase_coefficient(escort.chirp, escort.sigma2),
            constant_phase: -0.5 * escort.zeta().arg(),
            omega02: escort.omega02,
            delay: escort.delay,
        }
    }

    pub fn magnitude(&self, t: f64) -> f64 {
        let u = t + self.delay;
        self.peak * (-self.width * u * u).exp()
    }

    /// `arg g(t)`, defined everywhere including where `|g|` underflows.
    pub fn phase(&self, t: f64) -> f64 {
        let u = t + self.delay;
        self.omega02 * u + self.quadratic_phase * u * u + self.constant_phase
    }

    pub fn at(&self, t: f64) -> C64 {
        C64::from_polar(self.magnitude(t), self.phase(t))
    }

    pub fn peak(&self) -> f64 {
        self.peak
    }
}

/// Upconversion of one photon pair by one escort at coupling `gamma`.
#[derive(Debug, Clone, Copy)]
pub struct Upconversion {
    pub input: InputWaveform,
    pub escort: EscortWaveform,
    /// `√(2π) γ`.
    coupling: f64,
}

/// Values of every waveform at one `(t, t_h)`.
#[derive(Debug, Clone, Copy)]
pub struct ModeAmplitudes {
    pub input: C64,
    pub mode1: C64,
    pub mode3: C64,
    pub mode3_first_order: C64,
}

impl Upconversion {
    pub fn new(photon: &PhotonSpec, escort: &EscortSpec, gamma: f64) -> Self {
        Self {
            input: InputWaveform::new(photon),
            escort: EscortWaveform::new(escort),
            coupling: (2.0 * PI).sqrt() * gamma,
        }
    }

    pub fn amplitudes(&self, t: f64, t_h: f64) -> ModeAmplitudes {
        let fi = self.input.at(t, t_h);
        let mag = self.escort.magnitude(t);
        let phase = C64::from_polar(1.0, self.escort.phase(t));
        let x = self.coupling * mag;
        let i = C64::i();
        ModeAmplitudes {
            input: fi,
            mode1: fi * x.cos(),
            mode3: i * fi * phase * x.sin(),
            mode3_first_order: i * fi * phase * x,
        }
    }

    pub fn f1f(&self, t: f64, t_h: f64) -> C64 {
        self.input.at(t, t_h) * (self.coupling * self.escort.magnitude(t)).cos()
    }

    pub fn f3f(&self, t: f64, t_h: f64) -> C64 {
        self.amplitudes(t, t_h).mode3
    }

    pub fn f3_first_order(&self, t: f64, t_h: f64) -> C64 {
        self.amplitudes(t, t_h).mode3_first_order
    }
}

/// `g(t)` for the escort.
pub fn escort_time(escort: &EscortSpec, t: f64) -> C64 {
    EscortWaveform::new(escort).at(t)
}

/// Input joint temporal amplitude `f_i(t, t_h)`.
pub fn input_time(photon: &PhotonSpec, t: f64, t_h: f64) -> C64 {
    InputWaveform::new(photon).at(t, t_h)
}

/// Remaining mode-1 amplitude `f_i cos(√(2π) γ |g(t)|)`.
pub fn f1f(photon: &PhotonSpec, escort: &EscortSpec, gamma: f64, t: f64, t_h: f64) -> C64 {
    Upconversion::new(photon, escort, gamma).f1f(t, t_h)
}

/// Upconverted amplitude `i f_i (g/|g|) sin(√(2π) γ |g(t)|)`.
pub fn f3f(photon: &PhotonSpec, escort: &EscortSpec, gamma: f64, t: f64, t_h: f64) -> C64 {
    Upconversion::new(photon, escort, gamma).f3f(t, t_h)
}

/// First-order upconverted amplitude `i √(2π) γ f_i g`.
pub fn f3_first_order(photon: &PhotonSpec, escort: &EscortSpec, gamma: f64, t: f64, t_h: f64) -> C64 {
    Upconversion::new(photon, escort, gamma).f3_first_order(t, t_h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::reduce;
    use crate::quad::{integrate, integrate_2d, QuadOptions};
    use approx::assert_relative_eq;

    fn escort(sigma2: f64, chirp: f64, delay: f64) -> EscortSpec {
        EscortSpec::new(sigma2, chirp, delay).unwrap()
    }

    #[test]
    fn unchirped_escort_peak() {
        let g = escort_time(&escort(1.0, 0.0, 0.0), 0.0);
        assert_relative_eq!(g.norm(), (2.0 / PI).powf(0.25), max_relative = 1e-15);
        assert_relative_eq!(g.norm(), 0.8932, epsilon = 1e-4);
    }

    #[test]
    fn chirped_escort_peak() {
        let g = escort_time(&escort(1.0, 5.0, 0.0), 0.0);
        assert_relative_eq!(g.norm(), (2.0 / (PI * 401.0)).powf(0.25), max_relative = 1e-15);
        assert_relative_eq!(g.norm(), 0.199_610_755_128_122_25, max_relative = 1e-14);
    }

    #[test]
    fn escort_is_normalized_and_centred_at_minus_tau() {
        for &(s, a, tau) in &[(1.0, 0.0, 0.0), (0.3, 7.0, 2.0), (2.5, -1.5, -4.0)] {
            let e = escort(s, a, tau);
            let w = EscortWaveform::new(&e);
            let span = 12.0 * e.time_std();
            let r = integrate(
                |t| {
                    let m2 = w.magnitude(t).powi(2);
                    [m2, t * m2]
                },
                -tau - span,
                -tau + span,
                &QuadOptions { abs_tol: 1e-14, ..Default::default() },
            );
            assert_relative_eq!(r.value[0], 1.0, epsilon = 1e-12);
            assert_relative_eq!(r.value[1], -tau, epsilon = 1e-10);
        }
    }

    #[test]
    fn input_is_normalized() {
        for &(s1, sh, s, a1) in &[(1.0, 1.0, 1e9, 0.0), (1.0, 1.0, 1.0, 0.0), (0.7, 1.3, 0.4, 2.0), (1.0, 2.0, 5.0, -3.0)] {
            let ph = PhotonSpec::new(s1, sh, s, a1).unwrap();
            let fi = InputWaveform::new(&ph);
            let (vt, vh) = fi.intensity_variances();
            let (lt, lh) = (12.0 * vt.sqrt(), 12.0 * vh.sqrt());
            let r = integrate_2d(
                |t, th| [fi.at(t, th).norm_sqr()],
                (-lt, lt),
                (-lh, lh),
                &QuadOptions { abs_tol: 1e-11, ..Default::default() },
            );
            assert_relative_eq!(r.value[0], 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn marginal_variance_matches_reduction() {
        // q = 4σ₂² var_t / |ζ₂|² ties the closed form to the reduction.
        let ph = PhotonSpec::new(0.8, 1.4, 0.9, 3.5).unwrap();
        let es = escort(1.1, -2.0, 0.0);
        let (vt, _) = InputWaveform::new(&ph).intensity_variances();
        let q = reduce(&ph, &es, 1.0).unwrap().q;
        assert_relative_eq!(4.0 * es.sigma2.powi(2) * vt / es.stretch(), q, max_relative = 1e-12);
        assert_relative_eq!(vt, ph.signal_time_variance(), max_relative = 1e-12);
    }

    #[test]
    fn separable_input_factorizes() {
        // S → ∞ with no chirp: f_i = (2σ₁σ_h/π)^{1/2} exp(−σ₁²t² − σ_h²t_h²).
        let ph = PhotonSpec::separable(1.0, 2.0, 0.0).unwrap();
        let fi = InputWaveform::new(&ph);
        for &(t, th) in &[(0.0f64, 0.0f64), (0.7, -0.2), (-1.1, 0.4)] {
            let expected = (2.0 * 2.0 / PI).sqrt() * (-(t * t) - 4.0 * th * th).exp();
            assert_relative_eq!(fi.at(t, th).re, expected, max_relative = 1e-9);
            assert!(fi.at(t, th).im.abs() < 1e-12);
        }
    }

    #[test]
    fn no_coupling_means_no_conversion() {
        let ph = PhotonSpec::new(1.0, 1.0, 2.0, 1.0).unwrap();
        let es = escort(1.0, 3.0, 0.5);
        for &(t, th) in &[(0.0, 0.0), (0.3, 1.0), (-2.0, 0.1)] {
            assert_eq!(f3f(&ph, &es, 0.0, t, th), C64::new(0.0, 0.0));
            assert_eq!(f1f(&ph, &es, 0.0, t, th), input_time(&ph, t, th));
            assert_eq!(f3_first_order(&ph, &es, 0.0, t, th), C64::new(0.0, 0.0));
        }
    }

    #[test]
    fn peak_conversion_matches_sine_of_peak_argument() {
        let ph = PhotonSpec::new(1.0, 1.0, 1e9, 0.0).unwrap();
        let es = escort(1.0, 0.0, 0.0);
        let up = Upconversion::new(&ph, &es, 1.0);
        let a = up.amplitudes(0.0, 0.0);
        let ratio = a.mode3.norm() / a.input.norm();
        assert_relative_eq!(ratio, ((2.0 * PI).sqrt() * (2.0 / PI).powf(0.25)).sin(), max_relative = 1e-14);
        assert_relative_eq!(ratio, 0.784_917_139_578_966_3, max_relative = 1e-13);
    }

    #[test]
    fn full_and_first_order_share_phase() {
        let ph = PhotonSpec::new(1.0, 0.5, 3.0, 2.0).unwrap();
        let es = escort(0.8, -4.0, 0.3);
        let gamma = 0.9;
        let up = Upconversion::new(&ph, &es, gamma);
        for &t in &[-3.0, -0.4, 0.0, 1.7] {
            let a = up.amplitudes(t, 0.2);
            let x = (2.0 * PI).sqrt() * gamma * up.escort.magnitude(t);
            let ratio = a.mode3 / a.mode3_first_order;
            assert!(ratio.im.abs() < 1e-14);
            assert_relative_eq!(ratio.re, x.sin() / x, max_relative = 1e-13);
            // Sine remainder bound.
            let diff = (a.mode3 - a.mode3_first_order).norm();
            assert!(diff <= x.powi(3) / 6.0 * a.input.norm() * (1.0 + 1e-12));
        }
    }

    #[test]
    fn far_tail_phase_is_finite() {
        let es = escort(1.0, 2.0, 0.0);
        let ph = PhotonSpec::new(1.0, 1.0, 1e9, 0.0).unwrap();
        let w = EscortWaveform::new(&es);
        assert_eq!(w.magnitude(1e4), 0.0);
        assert!(w.phase(1e4).is_finite());
        let up = Upconversion::new(&ph, &es, 1.0);
        assert!(up.f3f(1e4, 0.0).re.is_finite());
    }
}
