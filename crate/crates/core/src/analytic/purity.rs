//! Signal–herald purity and Rényi-2 entropy before and after upconversion.

use serde::{Deserialize, Serialize};

use crate::analytic::efficiency::{efficiency_series, SERIES_CROSSOVER};
use crate::error::{invalid, require_positive, Result, SfgError};
use crate::model::DimensionlessParams;
use crate::series::{sum_series, SeriesValue, DEFAULT_MAX_TERMS};

/// Purities above 1 by no more than this are rounding and are set to 1.
const PURITY_ROUNDING: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PurityResult {
    pub purity: f64,
    /// `−ln(purity)`.
    pub renyi2: f64,
    pub series: Option<SeriesValue>,
}

impl PurityResult {
    pub fn from_purity(purity: f64, series: Option<SeriesValue>) -> Result<Self> {
        if !(purity > 0.0 && purity <= 1.0 + PURITY_ROUNDING) {
            return Err(SfgError::UndefinedPurity("purity outside (0, 1]; evaluation lost precision"));
        }
        let purity = purity.min(1.0);
        Ok(Self { purity, renyi2: -purity.ln(), series })
    }
}

/// Purity of the filtered downconversion pair,
/// `S √(S²+σ₁²+σ_h²) / (√(S²+σ₁²) √(S²+σ_h²))`.
pub fn input_purity(pump_width: f64, sigma1: f64, sigma_h: f64) -> Result<PurityResult> {
    require_positive("S", pump_width)?;
    require_positive("sigma1", sigma1)?;
    require_positive("sigma_h", sigma_h)?;
    let s2 = pump_width * pump_width;
    let (a, b) = (sigma1 * sigma1, sigma_h * sigma_h);
    // Written as a product of ratios so nothing overflows at S = 1e9 or
    // underflows at S = 1e-9.
    let purity = pump_width / (s2 + a).sqrt() * ((s2 + a + b) / (s2 + b)).sqrt();
    PurityResult::from_purity(purity, None)
}

/// Purity of the upconverted photon and the herald for an unchirped,
/// undelayed escort.
///
/// Evaluates the double series over `(m, n) ≥ 1` of
/// `(−1)^{m+n} c_m c_n / √(2(1+mq)(1+nq) + (2+mq+nq) r)`, with
/// `c_m = p^{2m}/(2m)!` and `r = σ₁²σ_h²/(S²(S²+σ₁²+σ_h²))`, normalized by
/// `2√2 ⟨n̂₃⟩²`. The window `m, n ≤ N` is grown one rim at a time until the
/// rim contribution drops below `tol` relative to the partial sum.
pub fn upconverted_purity(
    pump_width: f64,
    sigma1: f64,
    sigma_h: f64,
    p: f64,
    q: f64,
    tol: f64,
) -> Result<PurityResult> {
    require_positive("S", pump_width)?;
    require_positive("sigma1", sigma1)?;
    require_positive("sigma_h", sigma_h)?;
    require_positive("tol", tol)?;
    let params = DimensionlessParams::new(p, q, 0.0)?;
    if p == 0.0 {
        return Err(SfgError::UndefinedPurity("no upconverted photon at p = 0"));
    }
    if p > SERIES_CROSSOVER {
        return Err(SfgError::PrecisionLoss { p, crossover: SERIES_CROSSOVER });
    }
    let (a, b) = (sigma1 * sigma1, sigma_h * sigma_h);
    let s2 = pump_width * pump_width;
    let r = (a / s2) * (b / (s2 + a + b));
    if !r.is_finite() {
        return Err(invalid("S", "too small for the purity series"));
    }

    // Signed c_m, built up in log space.
    let ln_p = p.ln();
    let mut coeff = Vec::with_capacity(DEFAULT_MAX_TERMS + 1);
    coeff.push(0.0);
    let mut ln_fact = 0.0;
    for m in 1..=DEFAULT_MAX_TERMS {
        ln_fact += ((2 * m - 1) as f64).ln() + ((2 * m) as f64).ln();
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        coeff.push(sign * (2.0 * m as f64 * ln_p - ln_fact).exp());
    }
    let term = |m: usize, n: usize| {
        let (mq, nq) = (m as f64 * q, n as f64 * q);
        coeff[m] * coeff[n] / (2.0 * (1.0 + mq) * (1.0 + nq) + (2.0 + mq + nq) * r).sqrt()
    };
    let series = sum_series(
        |big_n| {
            let mut rim = term(big_n, big_n);
            for m in 1..big_n {
                rim += 2.0 * term(m, big_n);
            }
            rim
        },
        tol,
        DEFAULT_MAX_TERMS,
    )?;

    let n3 = efficiency_series(&params, tol.min(1e-12))?.value;
    if n3 <= 0.0 {
        return Err(SfgError::UndefinedPurity("upconversion probability vanishes"));
    }
    let purity = series.value / (2.0 * std::f64::consts::SQRT_2 * n3 * n3);
    PurityResult::from_purity(purity, Some(series))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::efficiency::optimal_p_paper;
    use approx::assert_relative_eq;

    const TOL: f64 = 1e-13;

    #[test]
    fn input_purity_closed_form() {
        let r = input_purity(1.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(r.purity, 3f64.sqrt() / 2.0, epsilon = 1e-15);
        assert_relative_eq!(r.renyi2, 0.143_841_036_225_890_5, epsilon = 1e-12);
        assert!((input_purity(1e9, 1.0, 1.0).unwrap().purity - 1.0).abs() < 1e-15);
        assert!(input_purity(1e-9, 1.0, 1.0).unwrap().purity < 1e-8);
        assert_relative_eq!(input_purity(0.5, 1.0, 1.0).unwrap().purity, 0.6, epsilon = 1e-15);
    }

    #[test]
    fn input_entropy_falls_with_pump_width() {
        let mut last = f64::INFINITY;
        for i in 0..40 {
            let s = 10f64.powf(-3.0 + 0.15 * i as f64);
            let h = input_purity(s, 1.0, 0.8).unwrap().renyi2;
            assert!(h >= 0.0 && h < last);
            last = h;
        }
    }

    #[test]
    fn output_purity_matches_singular_values() {
        // Reference: fourth moment of the Schmidt coefficients of finely
        // sampled f3f grids.
        let cases = [
            (1.0, 1.0, 3.46, 0.900_939_595_783_845_4),
            (1.0, 10.0, 3.75, 0.976_930_741_734_741_9),
            (1.0, 1e-3, 3.08, 0.866_030_716_010_747_4),
            (0.5, 1.0, 3.0, 0.683_275_665_503_993_4),
            (2.0, 0.3, 2.0, 0.983_397_240_274_273_3),
        ];
        for (s, q, p, expected) in cases {
            let r = upconverted_purity(s, 1.0, 1.0, p, q, TOL).unwrap();
            assert_relative_eq!(r.purity, expected, epsilon = 1e-9);
            assert_relative_eq!(r.renyi2, -r.purity.ln(), epsilon = 1e-15);
            assert!(r.series.unwrap().converged);
        }
    }

    #[test]
    fn limits_of_pump_width() {
        let p = optimal_p_paper(1.0, 0.0).unwrap();
        let sep = upconverted_purity(1e9, 1.0, 1.0, p, 1.0, TOL).unwrap();
        assert!((sep.purity - 1.0).abs() < 1e-10);
        // Narrow pump: both entropies diverge like −ln S and the gap between
        // them settles to a constant, so their ratio tends to one.
        let gap = |s: f64| {
            let out = upconverted_purity(s, 1.0, 1.0, p, 1.0, TOL).unwrap().renyi2;
            let inp = input_purity(s, 1.0, 1.0).unwrap().renyi2;
            (out - inp, out / inp)
        };
        let (g6, r6) = gap(1e-6);
        let (g9, r9) = gap(1e-9);
        assert!((g6 - g9).abs() < 1e-9);
        assert!((1.0 - r9).abs() < (1.0 - r6).abs() && (1.0 - r9).abs() < 1e-2);
    }

    #[test]
    fn short_escort_lowers_entanglement() {
        let input = input_purity(1.0, 1.0, 1.0).unwrap().renyi2;
        let p = optimal_p_paper(1e-3, 0.0).unwrap();
        let low = upconverted_purity(1.0, 1.0, 1.0, p, 1e-3, TOL).unwrap().renyi2;
        assert!((low - input).abs() < 1e-3);
        let p = optimal_p_paper(10.0, 0.0).unwrap();
        let high = upconverted_purity(1.0, 1.0, 1.0, p, 10.0, TOL).unwrap().renyi2;
        assert!(high < input);
    }

    #[test]
    fn undefined_and_out_of_range() {
        assert!(matches!(upconverted_purity(1.0, 1.0, 1.0, 0.0, 1.0, TOL), Err(SfgError::UndefinedPurity(_))));
        assert!(matches!(upconverted_purity(1.0, 1.0, 1.0, 20.0, 1.0, TOL), Err(SfgError::PrecisionLoss { .. })));
        assert!(input_purity(0.0, 1.0, 1.0).is_err());
    }
}
