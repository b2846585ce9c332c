//! Upconversion probability `⟨n̂₃⟩(p, q, T)`, its low-q limit and the
//! coupling that maximizes it.
//!
//! Two evaluation routes are provided. The power series
//! `½ Σ_k (−1)^{k−1} e^{−kT²/(1+qk)} p^{2k} / ((2k)! √(1+qk))` is summed for
//! moderate `p`. Above [`SERIES_CROSSOVER`] its terms grow to `~e^p` and
//! cancel, so the equivalent Gaussian average
//! `⟨n̂₃⟩ = E[sin²((p/2) e^{−(y + T/√2)²})]`, `y ~ N(0, q/4)`, is integrated
//! directly instead.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{require_positive, Result, SfgError};
use crate::model::DimensionlessParams;
use crate::optimize::{bisect, first_descending_crossing, golden_section_max};
use crate::quad::{integrate, QuadOptions};
use crate::series::{sum_series, CompensatedSum, SeriesValue, DEFAULT_MAX_TERMS, DEFAULT_TOL};

/// Above this `p` the series loses more than ~1e-11 to cancellation and the
/// quadrature route is used.
pub const SERIES_CROSSOVER: f64 = 12.0;
/// Upper end of the coupling range searched for an efficiency peak.
pub const DEFAULT_P_MAX: f64 = 25.0;
/// Scan step used to bracket roots and maxima in `p`.
const SCAN_STEP: f64 = 0.01;

/// Signed coefficient of `p^{2k}` in `2⟨n̂₃⟩`, without the factorial.
fn damping(k: usize, q: f64, t_delay: f64) -> f64 {
    let kf = k as f64;
    let denom = 1.0 + q * kf;
    (-kf * t_delay * t_delay / denom).exp() / denom.sqrt()
}

/// `⟨n̂₃⟩` by direct summation of the series, at any `p`.
///
/// Terms are formed in log space so `p^{2k}/(2k)!` never overflows.
pub fn efficiency_series(params: &DimensionlessParams, tol: f64) -> Result<SeriesValue> {
    params.validate()?;
    require_positive("tol", tol)?;
    if params.p == 0.0 {
        return Ok(SeriesValue { value: 0.0, terms_used: 1, last_term: 0.0, converged: true });
    }
    let ln_p = params.p.ln();
    let mut ln_fact = 0.0;
    let series = sum_series(
        |k| {
            let two_k = 2 * k;
            ln_fact += ((two_k - 1) as f64).ln() + (two_k as f64).ln();
            let magnitude = (two_k as f64 * ln_p - ln_fact).exp() * damping(k, params.q, params.t_delay);
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            0.5 * sign * magnitude
        },
        tol,
        DEFAULT_MAX_TERMS,
    )?;
    debug_assert!(series.value > -1e-9 && series.value < 1.0 + 1e-9, "efficiency {} out of range", series.value);
    Ok(series)
}

/// Expectation `E[f(y)]` for `y ~ N(0, var)`, with extra breakpoints at
/// `peak ± {1, 3, 8}` where `f` has structure on unit scale.
pub(crate) fn gaussian_average<const N: usize, F>(f: F, var: f64, peak: f64, rel_tol: f64) -> Result<[f64; N]>
where
    F: Fn(f64) -> [f64; N],
{
    let sd = var.sqrt();
    let half = 12.0 * sd;
    let mut breaks = vec![-half, 0.0, half];
    for d in [0.0, -8.0, -3.0, -1.0, 1.0, 3.0, 8.0] {
        let b = peak + d;
        if b > -half && b < half {
            breaks.push(b);
        }
    }
    breaks.sort_by(|a, b| a.total_cmp(b));
    breaks.dedup();
    let norm = 1.0 / (2.0 * PI * var).sqrt();
    let opts = QuadOptions { abs_tol: 1e-16, rel_tol, initial_panels: 4, max_panels: 4000 };
    let mut acc: [CompensatedSum; N] = [CompensatedSum::new(); N];
    for w in breaks.windows(2) {
        let r = integrate(
            |y| {
                let weight = norm * (-0.5 * y * y / var).exp();
                let mut v = f(y);
                for x in v.iter_mut() {
                    *x *= weight;
                }
                v
            },
            w[0],
            w[1],
            &opts,
        )
        .into_result(rel_tol)?;
        for (a, v) in acc.iter_mut().zip(r.value) {
            a.add(v);
        }
    }
    Ok(acc.map(|a| a.value()))
}

/// Argument `x(y) = (p/2) e^{−(y + T/√2)²}` of the reduced sine.
fn reduced_argument(p: f64, t_delay: f64) -> impl Fn(f64) -> f64 {
    let shift = t_delay * FRAC_1_SQRT_2;
    move |y: f64| 0.5 * p * (-(y + shift) * (y + shift)).exp()
}

/// `⟨n̂₃⟩` as a one-dimensional Gaussian average, valid at any `p`.
pub fn efficiency_quadrature(params: &DimensionlessParams, tol: f64) -> Result<SeriesValue> {
    params.validate()?;
    require_positive("tol", tol)?;
    let x = reduced_argument(params.p, params.t_delay);
    let [value] = gaussian_average(|y| [x(y).sin().powi(2)], 0.25 * params.q, -params.t_delay * FRAC_1_SQRT_2, tol)?;
    Ok(SeriesValue { value, terms_used: 1, last_term: tol * value.abs(), converged: true })
}

/// Upconversion probability `⟨n̂₃⟩`. Uses the series up to
/// [`SERIES_CROSSOVER`] and the quadrature route beyond.
pub fn efficiency(params: &DimensionlessParams, tol: f64) -> Result<SeriesValue> {
    if params.p > SERIES_CROSSOVER {
        efficiency_quadrature(params, tol.max(1e-13))
    } else {
        efficiency_series(params, tol)
    }
}

/// Convenience wrapper returning only the value at the default tolerance.
pub fn efficiency_at(p: f64, q: f64, t_delay: f64) -> Result<f64> {
    Ok(efficiency(&DimensionlessParams::new(p, q, t_delay)?, DEFAULT_TOL)?.value)
}

/// Monochromatic-escort limit `sin²(½ e^{−T²/2} p)`.
pub fn efficiency_lowq(p: f64, t_delay: f64) -> f64 {
    (0.5 * (-0.5 * t_delay * t_delay).exp() * p).sin().powi(2)
}

/// Derivative in `p` of the four-term truncation, divided by `p`.
fn truncated_slope(q: f64, t_delay: f64) -> impl Fn(f64) -> f64 {
    // d/dp ½ c_k p^{2k} / (2k)! = k c_k p^{2k−1} / (2k)!
    let coeff: Vec<f64> = (1..=4)
        .map(|k| {
            let fact: f64 = (1..=2 * k).map(|j| j as f64).product();
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            sign * k as f64 * damping(k, q, t_delay) / fact
        })
        .collect();
    move |p: f64| {
        let u = p * p;
        coeff[0] + u * (coeff[1] + u * (coeff[2] + u * coeff[3]))
    }
}

/// Coupling estimate from the four-term truncation of the series: the first
/// positive stationary point of the truncated polynomial in `(0, p_max]`.
pub fn optimal_p_paper_with(q: f64, t_delay: f64, p_max: f64) -> Result<f64> {
    require_positive("q", q)?;
    crate::error::require_finite("T", t_delay)?;
    require_positive("p_max", p_max)?;
    let slope = truncated_slope(q, t_delay);
    match first_descending_crossing(&slope, SCAN_STEP, p_max, SCAN_STEP) {
        Some((lo, hi)) => Ok(bisect(&slope, lo, hi, 1e-14)),
        None => Err(SfgError::NoPeak { q, t_delay, p_max }),
    }
}

/// [`optimal_p_paper_with`] on `(0, 25]`.
pub fn optimal_p_paper(q: f64, t_delay: f64) -> Result<f64> {
    optimal_p_paper_with(q, t_delay, DEFAULT_P_MAX)
}

/// Golden-section refinement of the full-series maximum, seeded by the
/// four-term estimate; falls back to [`dense_scan_max`] when the seed is
/// missing or the maximum lands on the bracket edge.
pub fn optimal_p_refined(q: f64, t_delay: f64) -> Result<(f64, f64)> {
    let eff = |p: f64| efficiency_at(p, q, t_delay);
    if let Ok(seed) = optimal_p_paper(q, t_delay) {
        let (a, b) = ((seed - 1.5).max(SCAN_STEP), seed + 1.5);
        let (p, _) = golden_section_max(|p| eff(p).unwrap_or(f64::NEG_INFINITY), a, b, 1e-9);
        let edge = 1e-6 * (b - a);
        if p - a > edge && b - p > edge {
            return Ok((p, eff(p)?));
        }
    }
    dense_scan_max(q, t_delay, DEFAULT_P_MAX)
}

/// Best efficiency over `p ∈ (0, p_max]`: a scan with step 0.05 followed by
/// golden-section polishing around the best sample.
pub fn dense_scan_max(q: f64, t_delay: f64, p_max: f64) -> Result<(f64, f64)> {
    require_positive("p_max", p_max)?;
    let step = 0.05;
    let n = (p_max / step).ceil() as usize;
    let mut best = (0.0, f64::NEG_INFINITY);
    for i in 1..=n {
        let p = (i as f64 * step).min(p_max);
        let e = efficiency_at(p, q, t_delay)?;
        if e > best.1 {
            best = (p, e);
        }
    }
    let (a, b) = ((best.0 - step).max(0.0), (best.0 + step).min(p_max));
    let (p, e) = golden_section_max(|p| efficiency_at(p, q, t_delay).unwrap_or(f64::NEG_INFINITY), a, b, 1e-9);
    Ok(if e >= best.1 { (p, e) } else { best })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params(p: f64, q: f64, t: f64) -> DimensionlessParams {
        DimensionlessParams::new(p, q, t).unwrap()
    }

    #[test]
    fn zero_coupling_is_exactly_zero() {
        let v = efficiency(&params(0.0, 1.0, 0.0), DEFAULT_TOL).unwrap();
        assert_eq!(v.value, 0.0);
        assert!(v.terms_used >= 1);
    }

    #[test]
    fn reference_values() {
        // 40-digit summation of the same series.
        assert_relative_eq!(efficiency_at(2.0, 1.0, 0.0).unwrap(), 0.535_515_205_846_097_7, epsilon = 1e-14);
        assert_relative_eq!(efficiency_at(2.0, 0.01, 1.0).unwrap(), 0.325_556_306_325_132, epsilon = 1e-14);
    }

    #[test]
    fn series_and_quadrature_agree() {
        for &(p, q, t) in &[(0.5, 0.01, 0.0), (2.0, 1.0, 0.0), (4.0, 100.0, 1.0), (3.0, 1e-4, 2.0), (9.0, 3.0, -0.5), (11.5, 0.3, 1.5)] {
            let pr = params(p, q, t);
            let s = efficiency_series(&pr, 1e-14).unwrap().value;
            let g = efficiency_quadrature(&pr, 1e-13).unwrap().value;
            assert!((s - g).abs() < 1e-10, "p={p} q={q} T={t}: {s} vs {g}");
        }
    }

    #[test]
    fn crossover_is_continuous() {
        let below = efficiency_at(SERIES_CROSSOVER, 0.7, 0.3).unwrap();
        let above = efficiency_at(SERIES_CROSSOVER + 1e-9, 0.7, 0.3).unwrap();
        assert!((below - above).abs() < 1e-9);
    }

    #[test]
    fn large_p_stays_in_range() {
        for &p in &[15.0, 25.0, 40.0, 80.0] {
            let e = efficiency_at(p, 1.0, 0.0).unwrap();
            assert!((0.0..=1.0).contains(&e));
        }
    }

    #[test]
    fn low_q_limit() {
        assert!((efficiency_at(PI, 1e-6, 0.0).unwrap() - 1.0).abs() < 1e-5);
        assert_eq!(efficiency_lowq(0.0, 0.3), 0.0);
        assert_relative_eq!(efficiency_lowq(PI, 0.0), 1.0, epsilon = 1e-15);
        assert_relative_eq!(efficiency_lowq(PI, (2.0 * 2f64.ln()).sqrt()), 0.5, epsilon = 1e-15);
        // The finite-q correction is first order in q.
        for &q in &[1e-4, 1e-5, 1e-6] {
            for &p in &[1.0, 2.0, PI, 5.0] {
                let gap = (efficiency_at(p, q, 0.5).unwrap() - efficiency_lowq(p, 0.5)).abs();
                assert!(gap < 2.0 * q, "q={q} p={p}: {gap}");
            }
        }
    }

    #[test]
    fn even_in_delay() {
        for &t in &[0.3, 1.0, 2.5] {
            assert_eq!(efficiency_at(2.5, 0.4, t).unwrap(), efficiency_at(2.5, 0.4, -t).unwrap());
        }
    }

    #[test]
    fn truncation_error_bounded_by_next_term() {
        for &p in &[0.5, 1.5, 3.0] {
            let pr = params(p, 1.0, 0.0);
            let exact = efficiency_series(&pr, 1e-15).unwrap().value;
            let mut partial = 0.0;
            for k in 1..12usize {
                let fact: f64 = (1..=2 * k).map(|j| j as f64).product();
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                partial += 0.5 * sign * damping(k, 1.0, 0.0) * p.powi(2 * k as i32) / fact;
                let fact_next: f64 = fact * ((2 * k + 1) * (2 * k + 2)) as f64;
                let next = 0.5 * damping(k + 1, 1.0, 0.0) * p.powi(2 * k as i32 + 2) / fact_next;
                assert!((exact - partial).abs() <= next * (1.0 + 1e-9) + 1e-16, "p={p} k={k}");
            }
        }
    }

    #[test]
    fn truncated_estimator_values() {
        // Roots of the cubic in p² found independently in 40-digit arithmetic.
        let cases = [
            (1.0, 0.0, 3.460_242_528_813_907),
            (1.0, 2.0, 5.053_510_385_916_482),
            (1e-3, 0.0, 3.079_411_223_367_507),
            (0.1, 0.0, 3.148_818_762_518_756),
            (10.0, 0.0, 3.748_649_414_850_037),
            (1000.0, 0.0, 3.808_137_410_701_955),
        ];
        for (q, t, expected) in cases {
            assert_relative_eq!(optimal_p_paper(q, t).unwrap(), expected, epsilon = 1e-10);
        }
        assert!(optimal_p_paper(1.0, 0.0).unwrap() > PI && optimal_p_paper(1.0, 0.0).unwrap() < 2.0 * PI);
    }

    #[test]
    fn truncated_estimator_in_monochromatic_limit() {
        // The truncated sine peaks at 3.0786, not exactly at π.
        assert_relative_eq!(optimal_p_paper(1e-8, 0.0).unwrap(), 3.078_642_312_178_119, epsilon = 1e-9);
    }

    #[test]
    fn truncated_estimator_at_large_delay() {
        // The truncation still has a stationary point at T = 3, although the
        // full series keeps rising there.
        let p = optimal_p_paper(1.0, 3.0).unwrap();
        assert_relative_eq!(p, 7.026_115_132_525_121, epsilon = 1e-9);
        assert!(efficiency_at(p + 0.5, 1.0, 3.0).unwrap() > efficiency_at(p, 1.0, 3.0).unwrap());
        assert!(matches!(optimal_p_paper_with(1.0, 3.0, 5.0), Err(SfgError::NoPeak { .. })));
    }

    #[test]
    fn refined_optimum() {
        let (p, e) = optimal_p_refined(1e-6, 0.0).unwrap();
        assert!((p - PI).abs() < 1e-4 && (e - 1.0).abs() < 1e-4);
        let (p, e) = optimal_p_refined(100.0, 0.0).unwrap();
        assert_relative_eq!(p, 4.049_492_009_509_648, epsilon = 1e-6);
        assert_relative_eq!(e, 0.151_036_134_803_228_77, epsilon = 1e-12);
        let (p, e) = optimal_p_refined(10.0, 0.0).unwrap();
        assert_relative_eq!(p, 3.965_277_787_987_946, epsilon = 1e-6);
        assert_relative_eq!(e, 0.444_400_176_041_464_2, epsilon = 1e-12);
        let (p, e) = optimal_p_refined(1.0, 0.0).unwrap();
        assert_relative_eq!(p, 3.573_161_749_789_657_6, epsilon = 1e-6);
        assert_relative_eq!(e, 0.889_066_030_571_512_6, epsilon = 1e-12);
    }

    #[test]
    fn dense_scan_finds_same_peak() {
        let (p, e) = dense_scan_max(1.0, 0.0, DEFAULT_P_MAX).unwrap();
        let (pr, er) = optimal_p_refined(1.0, 0.0).unwrap();
        assert!((p - pr).abs() < 1e-6 && (e - er).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_tolerance() {
        assert!(efficiency(&params(1.0, 1.0, 0.0), 0.0).is_err());
        assert!(optimal_p_paper(-1.0, 0.0).is_err());
    }
}
