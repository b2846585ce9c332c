//! Physical parameter records and their reduction to the dimensionless
//! coupling `p`, delay `T` and pulse-length ratio `q`.
//!
//! Units: time in ps, angular frequency in rad/ps, chirp (group-delay
//! dispersion) in ps², coupling constant `gamma` in √ps. Nothing below
//! converts units; every formula assumes this set.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, require_finite, require_positive, Result};

/// Pump bandwidth multiplier used to model the separable (unentangled) limit.
pub const SEPARABLE_PUMP_FACTOR: f64 = 1e9;

/// Heralded photon pair from downconversion followed by Gaussian filters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhotonSpec {
    /// Signal filter bandwidth [rad/ps].
    pub sigma1: f64,
    /// Herald filter bandwidth [rad/ps].
    pub sigma_h: f64,
    /// Pump bandwidth [rad/ps]; large values give a separable pair.
    #[serde(rename = "S")]
    pub pump_width: f64,
    #[serde(default)]
    pub omega01: f64,
    #[serde(default)]
    pub omega0h: f64,
    /// Chirp applied to the signal photon [ps²].
    #[serde(rename = "A1", default)]
    pub chirp: f64,
}

/// Strong classical escort pulse with a normalized Gaussian spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EscortSpec {
    pub sigma2: f64,
    #[serde(default)]
    pub omega02: f64,
    #[serde(rename = "A2", default)]
    pub chirp: f64,
    /// Delay of the escort relative to the photon [ps].
    #[serde(rename = "tau", default)]
    pub delay: f64,
}

/// Scaled coupling `p`, dimensionless delay `T`, pulse length ratio `q`, and
/// the absolute coupling `gamma` they were derived from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionlessParams {
    pub p: f64,
    #[serde(rename = "T")]
    pub t_delay: f64,
    pub q: f64,
    #[serde(default)]
    pub gamma: f64,
}

impl PhotonSpec {
    pub fn new(sigma1: f64, sigma_h: f64, pump_width: f64, chirp: f64) -> Result<Self> {
        let spec = Self { sigma1, sigma_h, pump_width, omega01: 0.0, omega0h: 0.0, chirp };
        spec.validate()?;
        Ok(spec)
    }

    /// Unentangled pair: pump width set to `1e9 * max(sigma1, sigma_h)`.
    pub fn separable(sigma1: f64, sigma_h: f64, chirp: f64) -> Result<Self> {
        Self::new(sigma1, sigma_h, SEPARABLE_PUMP_FACTOR * sigma1.max(sigma_h), chirp)
    }

    pub fn with_carriers(mut self, omega01: f64, omega0h: f64) -> Result<Self> {
        self.omega01 = omega01;
        self.omega0h = omega0h;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("sigma1", self.sigma1)?;
        require_positive("sigma_h", self.sigma_h)?;
        require_positive("S", self.pump_width)?;
        require_finite("A1", self.chirp)?;
        require_finite("omega01", self.omega01)?;
        require_finite("omega0h", self.omega0h)
    }

    /// `S² + σ₁² + σ_h²`.
    pub fn sigma_in_sq(&self) -> f64 {
        self.pump_width.powi(2) + self.sigma1.powi(2) + self.sigma_h.powi(2)
    }

    /// Variance of the signal's temporal intensity marginal, `∫∫ t² |f_i|²`.
    pub fn signal_time_variance(&self) -> f64 {
        let (s1, sh, s) = (self.sigma1, self.sigma_h, self.pump_width);
        let chirp_term = 16.0 * self.chirp.powi(2) * s1.powi(4) * (s * s + sh * sh)
            / self.sigma_in_sq();
        (1.0 + (s1 / s).powi(2) + chirp_term) / (4.0 * s1 * s1)
    }
}

impl EscortSpec {
    pub fn new(sigma2: f64, chirp: f64, delay: f64) -> Result<Self> {
        let spec = Self { sigma2, omega02: 0.0, chirp, delay };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_carrier(mut self, omega02: f64) -> Result<Self> {
        self.omega02 = omega02;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("sigma2", self.sigma2)?;
        require_finite("A2", self.chirp)?;
        require_finite("tau", self.delay)?;
        require_finite("omega02", self.omega02)
    }

    /// `ζ₂ = 1 − 4iA₂σ₂²`.
    pub fn zeta(&self) -> C64 {
        C64::new(1.0, -4.0 * self.chirp * self.sigma2 * self.sigma2)
    }

    /// `|ζ₂|² = 1 + 16A₂²σ₂⁴`, the chirp stretch factor of the temporal intensity.
    pub fn stretch(&self) -> f64 {
        1.0 + 16.0 * self.chirp.powi(2) * self.sigma2.powi(4)
    }

    /// Standard deviation of `|g(t)|²`.
    pub fn time_std(&self) -> f64 {
        self.stretch().sqrt() / (2.0 * self.sigma2)
    }
}

impl DimensionlessParams {
    pub fn new(p: f64, q: f64, t_delay: f64) -> Result<Self> {
        let params = Self { p, t_delay, q, gamma: f64::NAN };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p.is_finite() && self.p >= 0.0) {
            return Err(invalid("p", format!("must be finite and >= 0, got {}", self.p)));
        }
        require_positive("q", self.q)?;
        require_finite("T", self.t_delay)
    }
}

/// Maps the physical description onto `(p, T, q)`.
pub fn reduce(photon: &PhotonSpec, escort: &EscortSpec, gamma: f64) -> Result<DimensionlessParams> {
    photon.validate()?;
    escort.validate()?;
    require_finite("gamma", gamma)?;
    let stretch = escort.stretch();
    let s2sq = escort.sigma2 * escort.sigma2;
    let p = 2.0 * (8.0 * PI).powf(0.25) * (s2sq / stretch).powf(0.25) * gamma.abs();
    let t_delay = 2f64.sqrt() * escort.sigma2 * escort.delay / stretch.sqrt();
    let (s1, sh, s) = (photon.sigma1, photon.sigma_h, photon.pump_width);
    let bracket = 1.0
        + (s1 / s).powi(2)
        + 16.0 * photon.chirp.powi(2) * s1.powi(4) * (s * s + sh * sh) / photon.sigma_in_sq();
    let q = s2sq / (s1 * s1) * bracket / stretch;
    Ok(DimensionlessParams { p, t_delay, q, gamma })
}

/// `q₀ = σ₂²/σ₁²`, the pulse length ratio before any chirp is applied.
pub fn q_zero_chirp(photon: &PhotonSpec, escort: &EscortSpec) -> f64 {
    (escort.sigma2 / photon.sigma1).powi(2)
}

/// Coupling constant that produces scaled coupling `p` for this escort.
pub fn gamma_for_p(escort: &EscortSpec, p: f64) -> f64 {
    p / (2.0 * (8.0 * PI).powf(0.25) * (escort.sigma2.powi(2) / escort.stretch()).powf(0.25))
}

/// A concrete physical configuration reproducing a dimensionless point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Realization {
    pub photon: PhotonSpec,
    pub escort: EscortSpec,
    pub gamma: f64,
}

impl Realization {
    pub fn params(&self) -> DimensionlessParams {
        reduce(&self.photon, &self.escort, self.gamma).expect("realization holds valid parameters")
    }

    /// Separable, unchirped realization with `σ₁ = σ_h = 1`.
    pub fn separable(p: f64, q: f64, t_delay: f64) -> Result<Self> {
        require_finite("T", t_delay)?;
        let mut r = Self::entangled(p, q, SEPARABLE_PUMP_FACTOR, 1.0, 1.0)?;
        r.escort.delay = t_delay / (2f64.sqrt() * r.escort.sigma2);
        Ok(r)
    }

    /// Unchirped realization with a finite pump width, for entanglement
    /// studies. Requires `τ = 0`.
    pub fn entangled(p: f64, q: f64, pump_width: f64, sigma1: f64, sigma_h: f64) -> Result<Self> {
        DimensionlessParams::new(p, q, 0.0)?;
        let photon = PhotonSpec::new(sigma1, sigma_h, pump_width, 0.0)?;
        let sigma2 = sigma1 * (q / (1.0 + (sigma1 / pump_width).powi(2))).sqrt();
        let escort = EscortSpec::new(sigma2, 0.0, 0.0)?;
        Ok(Self { photon, escort, gamma: gamma_for_p(&escort, p) })
    }

    /// Realization with prescribed chirps `A₁` (photon) and `A₂` (escort).
    ///
    /// The escort bandwidth starts at 1 rad/ps and is reduced when the
    /// requested `q` is below what the photon chirp allows; the photon
    /// bandwidth is then solved on the short-pulse branch. `pump_width`
    /// defaults to the separable limit.
    pub fn with_chirps(
        p: f64,
        q: f64,
        t_delay: f64,
        chirp1: f64,
        chirp2: f64,
        sigma_h: f64,
        pump_width: Option<f64>,
    ) -> Result<Self> {
        DimensionlessParams::new(p, q, t_delay)?;
        require_finite("A1", chirp1)?;
        require_finite("A2", chirp2)?;
        require_positive("sigma_h", sigma_h)?;

        let photon_at = |sigma1: f64| PhotonSpec {
            sigma1,
            sigma_h,
            pump_width: pump_width.unwrap_or(SEPARABLE_PUMP_FACTOR * sigma1.max(sigma_h)),
            omega01: 0.0,
            omega0h: 0.0,
            chirp: chirp1,
        };
        // 4v(σ₁) = q|ζ₂|²/σ₂², decreasing in σ₁ below the turning point.
        let photon_factor = |sigma1: f64| {
            let ph = photon_at(sigma1);
            4.0 * ph.signal_time_variance()
        };
        let turning = if chirp1 == 0.0 { f64::INFINITY } else { (16.0 * chirp1 * chirp1).powf(-0.25) };
        let floor = if turning.is_finite() { photon_factor(turning) } else { 0.0 };

        let mut sigma2: f64 = 1.0;
        let required = |s2: f64| {
            let esc = EscortSpec { sigma2: s2, omega02: 0.0, chirp: chirp2, delay: 0.0 };
            q * esc.stretch() / (s2 * s2)
        };
        while required(sigma2) < 2.0 * floor {
            sigma2 *= 0.5;
            if sigma2 < 1e-12 {
                return Err(invalid("q", "cannot realize this q with the requested chirps"));
            }
        }
        let target = required(sigma2);

        // photon_factor(σ₁) = target, bisected in log σ₁.
        let g = |ls: f64| photon_factor(ls.exp()).ln() - target.ln();
        let mut hi = if turning.is_finite() { turning.ln() } else { 50.0 };
        let mut lo = hi - 1.0;
        while g(lo) < 0.0 {
            lo -= 1.0;
            if lo < -200.0 {
                return Err(invalid("q", "photon bandwidth solve failed"));
            }
        }
        if g(hi) > 0.0 {
            return Err(invalid("q", "photon bandwidth solve failed"));
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let sigma1 = (0.5 * (lo + hi)).exp();
        let photon = photon_at(sigma1);
        photon.validate()?;
        let mut escort = EscortSpec::new(sigma2, chirp2, 0.0)?;
        escort.delay = t_delay * escort.stretch().sqrt() / (2f64.sqrt() * sigma2);
        Ok(Self { photon, escort, gamma: gamma_for_p(&escort, p) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unit_photon(chirp: f64) -> PhotonSpec {
        PhotonSpec::new(1.0, 1.0, 1e9, chirp).unwrap()
    }

    #[test]
    fn reduce_collapses_to_unit_values() {
        let r = reduce(&unit_photon(0.0), &EscortSpec::new(1.0, 0.0, 0.0).unwrap(), 1.0).unwrap();
        assert_relative_eq!(r.p, 2.0 * (8.0 * PI).powf(0.25), max_relative = 1e-15);
        assert_relative_eq!(r.p, 4.478_060_539_680_99, max_relative = 1e-14);
        assert_eq!(r.t_delay, 0.0);
        assert_relative_eq!(r.q, 1.0, max_relative = 1e-15);
    }

    #[test]
    fn reduce_delay() {
        let r = reduce(&unit_photon(0.0), &EscortSpec::new(1.0, 0.0, 2.0).unwrap(), 1.0).unwrap();
        assert_relative_eq!(r.t_delay, 2.0 * 2f64.sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn reduce_opposite_chirps() {
        let r = reduce(&unit_photon(5.0), &EscortSpec::new(1.0, -5.0, 0.0).unwrap(), 1.0).unwrap();
        assert_relative_eq!(r.q, 1.0, max_relative = 1e-12);
        // 2 (8π)^{1/4} 401^{-1/4}
        assert_relative_eq!(r.p, 1.000_699_925_449_192_4, max_relative = 1e-13);
    }

    #[test]
    fn q0_ratio() {
        let e = |s| EscortSpec::new(s, 0.0, 0.0).unwrap();
        let ph = |s| PhotonSpec::new(s, 1.0, 1e9, 0.0).unwrap();
        assert_eq!(q_zero_chirp(&ph(1.0), &e(1.0)), 1.0);
        assert_eq!(q_zero_chirp(&ph(1.0), &e(2.0)), 4.0);
        assert_relative_eq!(q_zero_chirp(&ph(3.0), &e(1.0)), 1.0 / 9.0, max_relative = 1e-15);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(PhotonSpec::new(0.0, 1.0, 1.0, 0.0).is_err());
        assert!(PhotonSpec::new(1.0, -1.0, 1.0, 0.0).is_err());
        assert!(PhotonSpec::new(1.0, 1.0, 1.0, f64::NAN).is_err());
        assert!(EscortSpec::new(-1.0, 0.0, 0.0).is_err());
        assert!(DimensionlessParams::new(-0.1, 1.0, 0.0).is_err());
        assert!(DimensionlessParams::new(1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn separable_limit_q() {
        let photon = PhotonSpec::separable(1.3, 0.7, 0.0).unwrap();
        let escort = EscortSpec::new(0.9, 3.0, 0.0).unwrap();
        let q = reduce(&photon, &escort, 1.0).unwrap().q;
        let expected = 0.81 / (1.69 * (1.0 + 16.0 * 9.0 * 0.9f64.powi(4)));
        assert_relative_eq!(q, expected, max_relative = 1e-12);
    }

    #[test]
    fn json_field_names() {
        let json = serde_json::to_string(&unit_photon(2.0)).unwrap();
        for key in ["\"sigma1\"", "\"sigma_h\"", "\"S\"", "\"omega01\"", "\"omega0h\"", "\"A1\""] {
            assert!(json.contains(key), "{json} lacks {key}");
        }
        let escort: EscortSpec =
            serde_json::from_str(r#"{"sigma2": 2.0, "A2": -1.5, "tau": 0.25}"#).unwrap();
        assert_eq!(escort, EscortSpec { sigma2: 2.0, omega02: 0.0, chirp: -1.5, delay: 0.25 });
        let params: DimensionlessParams =
            serde_json::from_str(r#"{"p": 1.0, "T": 0.5, "q": 2.0}"#).unwrap();
        assert_eq!(params.t_delay, 0.5);
    }
    #[test]
    fn chirped_realization_reproduces_requested_params() {
        for &(p, q, t, a1, a2) in &[
            (2.0, 1.0, 0.5, 5.0, -5.0),
            (0.3, 1e-4, -2.0, -20.0, 13.0),
            (5.5, 1e4, 3.0, 0.0, -20.0),
            (1.0, 0.02, 0.0, 17.0, 0.0),
        ] {
            let r = Realization::with_chirps(p, q, t, a1, a2, 1.0, None).unwrap();
            let d = r.params();
            assert_relative_eq!(d.p, p, max_relative = 1e-12);
            assert_relative_eq!(d.q, q, max_relative = 1e-9);
            assert_relative_eq!(d.t_delay, t, max_relative = 1e-12, epsilon = 1e-15);
            assert_eq!((r.photon.chirp, r.escort.chirp), (a1, a2));
        }
    }
}
