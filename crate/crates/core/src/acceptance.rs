//! Acceptance checks shared by the `acceptance` test target and `sfg verify`.
//!
//! Each criterion returns a list of [`Check`]s carrying the measured value,
//! the target and the pinned tolerance, so a failure reports by how much it
//! missed. Criteria listed in [`KNOWN_UNATTAINABLE`] are implemented as
//! stated and currently fail; the reasons are in the README.

use std::f64::consts::PI;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analytic::{
    efficiency, efficiency_at, fidelity_at, input_purity, optimal_p_paper, optimal_p_refined, upconverted_purity,
    Upconversion,
};
use crate::design::{solve_time_lens, time_to_frequency_chirp};
use crate::error::Result;
use crate::exec::map_collect;
use crate::model::{gamma_for_p, reduce, EscortSpec, PhotonSpec, Realization};
use crate::optimize::golden_section_max;
use crate::oracle::measures::{grid_purity, relative_l2};
use crate::oracle::simulate::{compression_width_ratio, simulate_time_lens, Simulation};
use crate::quad::{integrate_2d, QuadOptions};
use crate::series::DEFAULT_TOL;

/// Criteria that fail when implemented as stated.
pub const KNOWN_UNATTAINABLE: &[u32] = &[3, 4, 9, 10];

pub const UNITARITY_POINTWISE_TOL: f64 = 1e-12;
pub const UNITARITY_NORM_TOL: f64 = 1e-6;
pub const TAYLOR_L2_TOL: f64 = 1e-8;
pub const LOW_Q_TOL: f64 = 1e-6;
pub const LOW_Q_PEAK_TOL: f64 = 1e-5;
pub const CEILING_TARGET: f64 = 0.887;
pub const CEILING_TOL: f64 = 0.002;
pub const FIDELITY_FLOOR: f64 = 0.95;
pub const LOW_Q_FIDELITY_TOL: f64 = 1e-4;
pub const WIDTH_RATIO_TOL: f64 = 0.01;
pub const ENTROPY_IDENTITY_TOL: f64 = 1e-2;
pub const PURITY_AGREEMENT_TOL: f64 = 1e-3;
pub const GRID_EFFICIENCY_TOL: f64 = 1e-6;
pub const LENS_RESIDUAL_TOL: f64 = 1e-12;
pub const MAGNIFICATION_TOL: f64 = 0.02;
pub const T2F_TOL: f64 = 1e-3;

/// One measured quantity against its target.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub label: String,
    pub measured: f64,
    pub target: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Distance to the threshold relative to its scale; negative on failure.
    pub margin: f64,
    /// Reported for context; does not affect the verdict.
    pub informational: bool,
}

impl Check {
    /// `|measured − target| ≤ tolerance` (absolute).
    pub fn within(label: impl Into<String>, measured: f64, target: f64, tolerance: f64) -> Self {
        let margin = (tolerance - (measured - target).abs()) / tolerance;
        Self::graded(label, measured, target, tolerance, margin)
    }

    fn graded(label: impl Into<String>, measured: f64, target: f64, tolerance: f64, margin: f64) -> Self {
        let passed = margin >= 0.0;
        let margin = if margin.is_nan() { f64::NEG_INFINITY } else { margin };
        Self { label: label.into(), measured, target, tolerance, passed: passed && margin.is_finite(), margin, informational: false }
    }

    fn bound_scale(bound: f64) -> f64 {
        bound.abs().max(f64::MIN_POSITIVE)
    }

    /// `|measured/target − 1| ≤ tolerance`.
    pub fn within_rel(label: impl Into<String>, measured: f64, target: f64, tolerance: f64) -> Self {
        let margin = (tolerance - (measured / target - 1.0).abs()) / tolerance;
        Self::graded(label, measured, target, tolerance, margin)
    }

    /// `measured ≤ bound`.
    pub fn at_most(label: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self::graded(label, measured, bound, 0.0, (bound - measured) / Self::bound_scale(bound))
    }

    /// `measured ≥ bound`.
    pub fn at_least(label: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self::graded(label, measured, bound, 0.0, (measured - bound) / Self::bound_scale(bound))
    }

    pub fn informational(mut self) -> Self {
        self.informational = true;
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionReport {
    pub id: u32,
    pub title: &'static str,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub error: Option<String>,
    pub seconds: f64,
}

impl CriterionReport {
    /// The graded check with the smallest margin: the worst failure, or
    /// the tightest pass.
    pub fn worst(&self) -> Option<&Check> {
        self.checks.iter().filter(|c| !c.informational).min_by(|a, b| a.margin.total_cmp(&b.margin))
    }

    /// One-line summary: verdict, criterion, check count and worst check.
    pub fn line(&self) -> String {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        let detail = match (&self.error, self.worst()) {
            (Some(e), _) => format!("error: {e}"),
            (None, Some(c)) => format!(
                "worst {}: measured {:.9e}, target {:.9e}, tol {:.1e}",
                c.label, c.measured, c.target, c.tolerance
            ),
            (None, None) => "no checks".into(),
        };
        format!(
            "{verdict} criterion {:>2} {} ({} checks, {:.1}s): {detail}",
            self.id,
            self.title,
            self.checks.len(),
            self.seconds
        )
    }
}

pub const TITLES: [(u32, &str); 9] = [
    (1, "unitarity"),
    (2, "taylor sufficiency"),
    (3, "low-q limit"),
    (4, "compression ceiling"),
    (5, "fidelity floor"),
    (6, "width ratio"),
    (7, "entanglement conservation"),
    (8, "grid efficiency agreement"),
    (9, "design solvers"),
];

/// Runs criterion `id` (1 to 9).
pub fn run(id: u32) -> CriterionReport {
    let start = Instant::now();
    let title = TITLES.iter().find(|(i, _)| *i == id).map(|(_, t)| *t).unwrap_or("unknown");
    let outcome = match id {
        1 => unitarity(),
        2 => taylor_sufficiency(),
        3 => low_q_limit(),
        4 => compression_ceiling(),
        5 => fidelity_floor(),
        6 => width_ratio(),
        7 => entanglement(),
        8 => grid_efficiency_agreement(),
        9 => design_solvers(),
        _ => Err(crate::error::invalid("criterion", "no such criterion")),
    };
    let seconds = start.elapsed().as_secs_f64();
    match outcome {
        Ok(checks) => {
            let passed = !checks.is_empty() && checks.iter().all(|c| c.passed || c.informational);
            CriterionReport { id, title, passed, checks, error: None, seconds }
        }
        Err(e) => CriterionReport { id, title, passed: false, checks: Vec::new(), error: Some(e.to_string()), seconds },
    }
}

/// Runs criteria 1 to 9 in order.
pub fn run_all() -> Vec<CriterionReport> {
    TITLES.iter().map(|(id, _)| run(*id)).collect()
}

/// Lattice shared by the Taylor-sufficiency and grid-efficiency criteria.
pub fn oracle_lattice() -> Vec<(f64, f64, f64)> {
    let mut out = Vec::new();
    for p in [1.0, 2.0, 4.0] {
        for q in [0.01, 1.0, 100.0] {
            for t in [0.0, 1.0] {
                out.push((p, q, t));
            }
        }
    }
    out
}

fn unitarity() -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    let cases: Vec<(f64, f64, f64, f64, f64)> = (0..50)
        .map(|_| {
            let p = rng.random_range(0.0..6.0);
            let q = 10f64.powf(rng.random_range(-4.0..4.0));
            let t = rng.random_range(-3.0..3.0);
            let a1 = rng.random_range(-20.0..20.0);
            let a2 = rng.random_range(-20.0..20.0);
            (p, q, t, a1, a2)
        })
        .collect();
    let results = map_collect(&cases, |&(p, q, t, a1, a2)| -> Result<Vec<Check>> {
        let r = Realization::with_chirps(p, q, t, a1, a2, 1.0, None)?;
        let up = Upconversion::new(&r.photon, &r.escort, r.gamma);
        let (var_t, var_h) = up.input.intensity_variances();
        let (sd_t, sd_h) = (var_t.sqrt(), var_h.sqrt());
        let (ce, sde) = (-r.escort.delay, r.escort.time_std());
        let tag = format!("p={p:.3} q={q:.3e} T={t:.3} A1={a1:.2} A2={a2:.2}");

        // Pointwise identity on points spread over the photon and the escort.
        let mut prng = ChaCha8Rng::seed_from_u64(p.to_bits() ^ q.to_bits());
        let mut worst: f64 = 0.0;
        for k in 0..400 {
            let t_s = if k % 2 == 0 { rng_normal(&mut prng) * 3.0 * sd_t } else { ce + rng_normal(&mut prng) * 3.0 * sde };
            let th = rng_normal(&mut prng) * 3.0 * sd_h;
            let a = up.amplitudes(t_s, th);
            let fi = a.input.norm_sqr();
            if fi < 1e-250 {
                continue;
            }
            worst = worst.max(((a.mode1.norm_sqr() + a.mode3.norm_sqr()) - fi).abs() / fi);
        }

        // Total norm of the output state by adaptive quadrature.
        let lo = (-10.0 * sd_t).min(ce - 10.0 * sde);
        let hi = (10.0 * sd_t).max(ce + 10.0 * sde);
        let mut breaks = vec![lo, hi];
        for b in [ce - 10.0 * sde, ce, ce + 10.0 * sde, 0.0] {
            if b > lo && b < hi {
                breaks.push(b);
            }
        }
        breaks.sort_by(|a, b| a.total_cmp(b));
        let opts = QuadOptions { abs_tol: 1e-9, rel_tol: 1e-10, initial_panels: 4, max_panels: 4000 };
        let mut total = 0.0;
        for w in breaks.windows(2) {
            let integral = integrate_2d(
                |x, y| {
                    let a = up.amplitudes(x, y);
                    [a.mode1.norm_sqr() + a.mode3.norm_sqr()]
                },
                (w[0], w[1]),
                (-10.0 * sd_h, 10.0 * sd_h),
                &opts,
            );
            total += integral.value[0];
        }
        Ok(vec![
            Check::at_most(format!("pointwise {tag}"), worst, UNITARITY_POINTWISE_TOL),
            Check::within(format!("norm {tag}"), total, 1.0, UNITARITY_NORM_TOL),
        ])
    });
    Ok(results.into_iter().collect::<Result<Vec<_>>>()?.into_iter().flatten().collect())
}

fn rng_normal(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller; the check only needs spread, not a specific law.
    let u: f64 = rng.random_range(f64::EPSILON..1.0);
    let v: f64 = rng.random();
    (-2.0 * u.ln()).sqrt() * (2.0 * PI * v).cos()
}

fn taylor_sufficiency() -> Result<Vec<Check>> {
    let lattice = oracle_lattice();
    let results = lattice
        .iter()
        .map(|&(p, q, t)| -> Result<Check> {
            let sim = Simulation::run(&Realization::separable(p, q, t)?)?;
            let exact = sim.closed_form_mode3()?;
            let err = relative_l2(&sim.mode3.data, &exact.data);
            Ok(Check::at_most(format!("p={p} q={q} T={t} K={}", sim.depth), err, TAYLOR_L2_TOL))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(results)
}

fn low_q_limit() -> Result<Vec<Check>> {
    let q = 1e-6;
    let mut points = Vec::new();
    for i in 0..=64 {
        for j in 0..=20 {
            points.push((2.0 * PI * i as f64 / 64.0, 2.0 * j as f64 / 20.0));
        }
    }
    let values = map_collect(&points, |&(p, t)| -> Result<(f64, f64, f64)> {
        let eta = efficiency_at(p, q, t)?;
        let limit = (0.5 * (-t * t / 2.0).exp() * p).sin().powi(2);
        Ok((p, t, (eta - limit).abs()))
    });
    let values = values.into_iter().collect::<Result<Vec<_>>>()?;
    let (p, t, worst) = values.iter().copied().max_by(|a, b| a.2.total_cmp(&b.2)).expect("non-empty grid");
    Ok(vec![
        Check::at_most(format!("max deviation from sin^2 over {} points (at p={p:.4} T={t:.2})", values.len()), worst, LOW_Q_TOL),
        Check::within("efficiency(pi, 1e-6, 0)", efficiency_at(PI, q, 0.0)?, 1.0, LOW_Q_PEAK_TOL),
    ])
}

/// Peak efficiency of a separable photon and escort with `σ₁ = σ₂ = 1` and
/// opposite chirps `±a`, maximised over the coupling strength γ.
pub fn chirped_peak_efficiency(a: f64) -> Result<(f64, f64, f64)> {
    let photon = PhotonSpec::separable(1.0, 1.0, a)?;
    let escort = EscortSpec::new(1.0, -a, 0.0)?;
    let eta_at = |gamma: f64| -> f64 {
        reduce(&photon, &escort, gamma)
            .and_then(|d| efficiency(&d, DEFAULT_TOL))
            .map(|s| s.value)
            .unwrap_or(f64::NAN)
    };
    // Bracket in γ around the low-q optimum p = π.
    let g0 = gamma_for_p(&escort, PI);
    let (gamma, eta) = golden_section_max(eta_at, 0.5 * g0, 2.0 * g0, 1e-10 * g0);
    let q = reduce(&photon, &escort, gamma)?.q;
    Ok((gamma, eta, q))
}

fn compression_ceiling() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for a in [1.0, 5.0, 20.0, 100.0] {
        let (gamma, eta, q) = chirped_peak_efficiency(a)?;
        checks.push(Check::within(format!("max efficiency A={a} (q={q:.6}, gamma={gamma:.6e})"), eta, CEILING_TARGET, CEILING_TOL));
    }
    // Same peak on the sampled grid at one chirp.
    let a = 5.0;
    let (gamma, eta, _) = chirped_peak_efficiency(a)?;
    let photon = PhotonSpec::separable(1.0, 1.0, a)?;
    let escort = EscortSpec::new(1.0, -a, 0.0)?;
    let sim = Simulation::run(&Realization { photon, escort, gamma })?;
    checks.push(Check::within("grid efficiency at the A=5 peak vs analytic", sim.efficiency(), eta, GRID_EFFICIENCY_TOL).informational());
    Ok(checks)
}

fn fidelity_floor() -> Result<Vec<Check>> {
    let qs = [1e-3, 1e-1, 1.0, 10.0, 1e3];
    let values = map_collect(&qs, |&q| -> Result<(f64, f64, f64)> {
        let p = optimal_p_paper(q, 0.0)?;
        Ok((q, p, fidelity_at(p, q, 0.0)?))
    });
    let mut checks = Vec::new();
    for v in values {
        let (q, p, f) = v?;
        checks.push(Check::at_least(format!("fidelity q={q:e} p={p:.6}"), f, FIDELITY_FLOOR));
        if q == 1e-3 {
            checks.push(Check::within("fidelity q=1e-3 near unity", f, 1.0, LOW_Q_FIDELITY_TOL));
        }
    }
    Ok(checks)
}

fn width_ratio() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    // Unchirped escort narrower than the photon: q = σ₂²/σ₁².
    for sigma2 in [0.1, 0.05] {
        let q = sigma2 * sigma2;
        let (p, _) = optimal_p_refined(q, 0.0)?;
        let w = compression_width_ratio(1.0, sigma2, 0.0, p)?;
        checks.push(Check::within(format!("ratio q={:.4} p={p:.6}", w.q), w.ratio, 1.0, WIDTH_RATIO_TOL));
    }
    let (p, _) = optimal_p_refined(1.0, 0.0)?;
    let w = compression_width_ratio(1.0, 1.0, 5.0, p)?;
    checks.push(Check::at_most(format!("ratio sigma1=sigma2 A=5 p={p:.6}"), w.ratio, 1.0 - 1e-9));
    Ok(checks)
}

/// Pump widths giving input Rényi-2 entropies across `[0, 2]` for
/// `σ₁ = σ_h = 1`.
pub const ENTROPY_SWEEP_S: [f64; 9] = [1e9, 10.0, 2.0, 1.0, 0.5, 0.3, 0.2, 0.15, 0.1];

/// `(q, S)` points where the purity series is checked against the grid.
pub const PURITY_SPOTS: [(f64, f64); 5] = [(1e-3, 1.0), (0.1, 0.5), (1.0, 1.0), (10.0, 1.0), (1.0, 0.3)];

fn entanglement() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let (p, _) = optimal_p_refined(1e-3, 0.0)?;
    for s in ENTROPY_SWEEP_S {
        let r_in = input_purity(s, 1.0, 1.0)?.renyi2;
        let r_out = upconverted_purity(s, 1.0, 1.0, p, 1e-3, DEFAULT_TOL)?.renyi2;
        checks.push(Check::within(format!("q=1e-3 S={s:e} renyi2 in={r_in:.6}"), r_out, r_in, ENTROPY_IDENTITY_TOL));
    }
    let spots = map_collect(&PURITY_SPOTS, |&(q, s)| -> Result<Check> {
        let (p, _) = optimal_p_refined(q, 0.0)?;
        let analytic = upconverted_purity(s, 1.0, 1.0, p, q, DEFAULT_TOL)?.purity;
        let sim = Simulation::run(&Realization::entangled(p, q, s, 1.0, 1.0)?)?;
        let grid = grid_purity(&sim.mode3)?;
        Ok(Check::within(format!("purity q={q:e} S={s} series vs grid"), grid, analytic, PURITY_AGREEMENT_TOL))
    });
    for c in spots {
        checks.push(c?);
    }
    for q in [1e-3, 0.1, 1.0, 10.0, 1e3] {
        let (p, _) = optimal_p_refined(q, 0.0)?;
        for s in ENTROPY_SWEEP_S {
            let r_in = input_purity(s, 1.0, 1.0)?.renyi2;
            let r_out = upconverted_purity(s, 1.0, 1.0, p, q, DEFAULT_TOL)?.renyi2;
            checks.push(Check::at_most(format!("renyi2 out <= in q={q:e} S={s:e}"), r_out, r_in + 1e-12));
        }
    }
    Ok(checks)
}

fn grid_efficiency_agreement() -> Result<Vec<Check>> {
    let lattice = oracle_lattice();
    let mut checks = Vec::new();
    for &(p, q, t) in &lattice {
        let r = Realization::separable(p, q, t)?;
        let analytic = efficiency_at(p, q, t)?;
        let coarse = Simulation::run(&r)?;
        let fine = Simulation::run_on(&r, coarse.plan.refined())?;
        let (e1, e2) = (coarse.efficiency(), fine.efficiency());
        checks.push(Check::within(format!("p={p} q={q} T={t} grid vs series"), e1, analytic, GRID_EFFICIENCY_TOL));
        checks.push(Check::within(format!("p={p} q={q} T={t} doubling"), e2, e1, GRID_EFFICIENCY_TOL));
    }
    Ok(checks)
}

/// Lens configuration used by the end-to-end imaging check:
/// `(σ₁, A₁, σ₂, A₂, object delay, p)`.
pub const LENS_CASE: (f64, f64, f64, f64, f64, f64) = (0.0707, 50.0, 1.0, -100.0, 20.0, 1.0);

fn design_solvers() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (a1, a2, s2) in [(10.0, -10.0, 1.0), (50.0, -100.0, 1.0), (-3.0, 7.0, 0.5), (1.0, 0.0, 1.0), (200.0, -100.0, 1.0)] {
        let d = solve_time_lens(a1, a2, s2)?;
        let scale = (0.5 / a1).abs().max((0.5 / d.a3).abs()).max((2.0 * d.b).abs());
        checks.push(Check::at_most(format!("imaging residual A1={a1} A2={a2} sigma2={s2}"), d.imaging_residual().abs() / scale, LENS_RESIDUAL_TOL));
    }

    let (s1, a1, s2, a2, delay, p) = LENS_CASE;
    let lens = simulate_time_lens(s1, a1, s2, a2, delay, p)?;
    let lcl = lens.design.lcl_ratio;
    checks.push(Check::at_least("lens lcl_ratio", lcl, 1e4).informational());
    checks.push(Check::at_most("lens q", lens.q, 1e-2).informational());
    checks.push(Check::within_rel(
        "simulated magnification vs -A1/A3",
        lens.magnification,
        lens.design.inverse_magnification(),
        MAGNIFICATION_TOL,
    ));
    checks.push(
        Check::within_rel("simulated magnification vs -A3/A1", lens.magnification, lens.design.magnification, MAGNIFICATION_TOL)
            .informational(),
    );
    checks.push(
        Check::within_rel("image centroid vs -A3/A1 times delay", lens.centroid_out, lens.design.magnification * delay, MAGNIFICATION_TOL)
            .informational(),
    );

    let a2 = -25.0;
    let a1 = time_to_frequency_chirp(a2, 1.0)?;
    checks.push(Check::within_rel("time-to-frequency A1 vs -A2 at lcl_ratio 1e4", a1, -a2, T2F_TOL));
    Ok(checks)
}
