//! Overlap between the full upconverted state and its first-order form.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::analytic::efficiency::gaussian_average;
use crate::analytic::waveform::Upconversion;
use crate::error::{Result, SfgError};
use crate::model::{reduce, DimensionlessParams, EscortSpec, PhotonSpec};
use crate::quad::{integrate_2d, QuadOptions};
use crate::series::CompensatedSum;

/// Below this upconversion probability the fidelity is not reported.
pub const MIN_EFFICIENCY: f64 = 1e-12;
/// Absolute tolerance of the 2-D quadrature, relative to `⟨n̂₃⟩`.
pub const FIDELITY_QUAD_TOL: f64 = 1e-9;

/// Fidelity of `f3f` against `f3_first_order`, by adaptive 2-D quadrature of
/// the closed-form waveforms over ±10 standard deviations of the widest
/// envelope.
pub fn fidelity_first_order(photon: &PhotonSpec, escort: &EscortSpec, gamma: f64) -> Result<f64> {
    let params = reduce(photon, escort, gamma)?;
    let expected = crate::analytic::efficiency::efficiency(&params, 1e-12)?.value;
    if expected < MIN_EFFICIENCY {
        return Err(SfgError::UndefinedFidelity { efficiency: expected });
    }
    let up = Upconversion::new(photon, escort, gamma);
    let (var_t, var_h) = up.input.intensity_variances();
    let (sd_t, sd_h) = (var_t.sqrt(), var_h.sqrt());
    let (centre_e, sd_e) = (-escort.delay, escort.time_std());

    // Outer (signal time) pieces split at the escort so a short escort is
    // never stepped over.
    let mut breaks = vec![
        (-10.0 * sd_t).min(centre_e - 10.0 * sd_e),
        (10.0 * sd_t).max(centre_e + 10.0 * sd_e),
    ];
    for b in [centre_e - 10.0 * sd_e, centre_e - 2.0 * sd_e, centre_e, centre_e + 2.0 * sd_e, centre_e + 10.0 * sd_e, 0.0] {
        if b > breaks[0] && b < breaks[1] {
            breaks.push(b);
        }
    }
    breaks.sort_by(|a, b| a.total_cmp(b));
    breaks.dedup();

    let opts = QuadOptions {
        abs_tol: FIDELITY_QUAD_TOL * expected / (breaks.len() - 1) as f64,
        rel_tol: 1e-11,
        initial_panels: 4,
        max_panels: 4000,
    };
    let mut acc = [CompensatedSum::new(); 4];
    for w in breaks.windows(2) {
        let r = integrate_2d(
            |t, th| {
                let a = up.amplitudes(t, th);
                let overlap = a.mode3.conj() * a.mode3_first_order;
                [overlap.re, overlap.im, a.mode3.norm_sqr(), a.mode3_first_order.norm_sqr()]
            },
            (w[0], w[1]),
            (-10.0 * sd_h, 10.0 * sd_h),
            &opts,
        )
        .into_result(opts.abs_tol)?;
        for (a, v) in acc.iter_mut().zip(r.value) {
            a.add(v);
        }
    }
    let [re, im, n3, n3_first] = acc.map(|a| a.value());
    if n3 < MIN_EFFICIENCY {
        return Err(SfgError::UndefinedFidelity { efficiency: n3 });
    }
    Ok(((re * re + im * im) / (n3 * n3_first)).min(1.0))
}

/// The same fidelity through the dimensionless reduction: with
/// `x(y) = (p/2) e^{−(y + T/√2)²}` and `y ~ N(0, q/4)`,
/// `F = E[x sin x]² / (E[sin² x] E[x²])`.
pub fn fidelity_reduced(params: &DimensionlessParams) -> Result<f64> {
    params.validate()?;
    let (p, t) = (params.p, params.t_delay);
    let shift = t * FRAC_1_SQRT_2;
    let [cross, n3, n3_first] = gaussian_average(
        |y| {
            let x = 0.5 * p * (-(y + shift) * (y + shift)).exp();
            let s = x.sin();
            [x * s, s * s, x * x]
        },
        0.25 * params.q,
        -shift,
        1e-12,
    )?;
    if n3 < MIN_EFFICIENCY {
        return Err(SfgError::UndefinedFidelity { efficiency: n3 });
    }
    Ok((cross * cross / (n3 * n3_first)).min(1.0))
}

/// [`fidelity_reduced`] at `(p, q, T)`.
pub fn fidelity_at(p: f64, q: f64, t_delay: f64) -> Result<f64> {
    fidelity_reduced(&DimensionlessParams::new(p, q, t_delay)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::efficiency::optimal_p_paper;
    use crate::model::Realization;
    use approx::assert_relative_eq;

    #[test]
    fn reduced_reference_values() {
        // 40-digit quadrature of the same three averages.
        let cases = [
            (1e-3, 0.999_999_887_216_96),
            (0.1, 0.999_178_870_408_99),
            (1.0, 0.984_162_500_776_88),
            (10.0, 0.961_600_386_839_75),
            (1000.0, 0.956_241_886_762_81),
        ];
        for (q, expected) in cases {
            let p = optimal_p_paper(q, 0.0).unwrap();
            assert_relative_eq!(fidelity_at(p, q, 0.0).unwrap(), expected, epsilon = 1e-11);
        }
        let p = optimal_p_paper(1.0, 2.0).unwrap();
        assert_relative_eq!(fidelity_at(p, 1.0, 2.0).unwrap(), 0.886_306_856_188_86, epsilon = 1e-11);
    }

    #[test]
    fn two_dimensional_route_matches_reduction() {
        for &(p, q, t) in &[(3.46, 1.0, 0.0), (2.0, 10.0, 1.0), (3.9, 0.05, -0.7)] {
            let r = Realization::separable(p, q, t).unwrap();
            let direct = fidelity_first_order(&r.photon, &r.escort, r.gamma).unwrap();
            assert!((direct - fidelity_at(p, q, t).unwrap()).abs() < 1e-8, "p={p} q={q} T={t}");
        }
        // Entangled and chirped inputs reduce the same way.
        let r = Realization::entangled(3.0, 2.0, 0.7, 1.0, 1.3).unwrap();
        let reduced = fidelity_reduced(&r.params()).unwrap();
        assert!((fidelity_first_order(&r.photon, &r.escort, r.gamma).unwrap() - reduced).abs() < 1e-8);
    }

    #[test]
    fn weak_coupling_is_faithful() {
        let r = Realization::separable(1e-4, 1.0, 0.0).unwrap();
        let f = fidelity_first_order(&r.photon, &r.escort, r.gamma).unwrap();
        assert!((f - 1.0).abs() < 1e-8, "{f}");
        assert!((fidelity_at(1e-4, 30.0, 2.0).unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn no_coupling_is_undefined() {
        assert!(matches!(fidelity_at(0.0, 1.0, 0.0), Err(SfgError::UndefinedFidelity { .. })));
        let r = Realization::separable(0.0, 1.0, 0.0).unwrap();
        assert!(matches!(
            fidelity_first_order(&r.photon, &r.escort, r.gamma),
            Err(SfgError::UndefinedFidelity { .. })
        ));
    }
}
