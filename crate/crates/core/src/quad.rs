//! Adaptive Gauss–Kronrod (7/15) quadrature for vector-valued integrands,
//! with a nested rule for rectangles.

// Nodes and weights are tabulated to 30 digits.
#![allow(clippy::excessive_precision)]

use crate::error::{Result, SfgError};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
/// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Number of equal panels the interval is split into before adapting.
    pub initial_panels: usize,
    pub max_panels: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self { abs_tol: 1e-10, rel_tol: 1e-12, initial_panels: 8, max_panels: 4000 }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Integral<const N: usize> {
    pub value: [f64; N],
    /// Sum over panels of the Kronrod–Gauss difference, max over components.
    pub error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl<const N: usize> Integral<N> {
    pub fn into_result(self, tol: f64) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(SfgError::Quadrature { tolerance: tol, estimate: self.value[0], error: self.error })
        }
    }
}

struct Panel<const N: usize> {
    a: f64,
    b: f64,
    value: [f64; N],
    error: f64,
}

fn gk15<const N: usize, F: Fn(f64) -> [f64; N]>(f: &F, a: f64, b: f64) -> Panel<N> {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut kronrod = [0.0; N];
    let mut gauss = [0.0; N];
    let fc = f(centre);
    for c in 0..N {
        kronrod[c] = WGK[7] * fc[c];
        gauss[c] = WG[3] * fc[c];
    }
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let f1 = f(centre - dx);
        let f2 = f(centre + dx);
        for c in 0..N {
            let s = f1[c] + f2[c];
            kronrod[c] += w * s;
            if j % 2 == 1 {
                gauss[c] += WG[j / 2] * s;
            }
        }
    }
    let mut error: f64 = 0.0;
    for c in 0..N {
        kronrod[c] *= half;
        gauss[c] *= half;
        error = error.max((kronrod[c] - gauss[c]).abs());
    }
    Panel { a, b, value: kronrod, error }
}

/// Integrates `f` over `[a, b]` by global adaptive bisection of the panel
/// with the largest error estimate.
pub fn integrate<const N: usize, F>(f: F, a: f64, b: f64, opts: &QuadOptions) -> Integral<N>
where
    F: Fn(f64) -> [f64; N],
{
    if a == b {
        return Integral { value: [0.0; N], error: 0.0, evaluations: 0, converged: true };
    }
    let panels = opts.initial_panels.max(1);
    let width = (b - a) / panels as f64;
    let mut work: Vec<Panel<N>> = (0..panels)
        .map(|i| {
            let lo = a + width * i as f64;
            let hi = if i + 1 == panels { b } else { lo + width };
            gk15(&f, lo, hi)
        })
        .collect();
    let mut evaluations = 15 * panels;
    loop {
        let mut total = [0.0; N];
        let mut error = 0.0;
        let mut worst = 0;
        for (i, p) in work.iter().enumerate() {
            for (t, v) in total.iter_mut().zip(p.value) {
                *t += v;
            }
            error += p.error;
            if p.error > work[worst].error {
                worst = i;
            }
        }
        let scale = total.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let target = opts.abs_tol.max(opts.rel_tol * scale);
        if error <= target || work.len() >= opts.max_panels {
            return Integral { value: total, error, evaluations, converged: error <= target };
        }
        let p = work.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a || mid >= p.b {
            // Panel cannot be split further in floating point.
            return Integral { value: total, error, evaluations, converged: false };
        }
        work.push(gk15(&f, p.a, mid));
        work.push(gk15(&f, mid, p.b));
        evaluations += 30;
    }
}

/// Iterated integral over `[a, b] × [c, d]`: the outer rule in the first
/// variable integrates an inner adaptive rule in the second.
pub fn integrate_2d<const N: usize, F>(
    f: F,
    (a, b): (f64, f64),
    (c, d): (f64, f64),
    opts: &QuadOptions,
) -> Integral<N>
where
    F: Fn(f64, f64) -> [f64; N],
{
    let inner_opts = QuadOptions {
        abs_tol: 0.1 * opts.abs_tol / (b - a).abs().max(1e-300),
        rel_tol: 0.1 * opts.rel_tol,
        ..*opts
    };
    let inner_ok = std::cell::Cell::new(true);
    let inner_evals = std::cell::Cell::new(0usize);
    let outer = integrate(
        |x| {
            let r = integrate(|y| f(x, y), c, d, &inner_opts);
            if !r.converged {
                inner_ok.set(false);
            }
            inner_evals.set(inner_evals.get() + r.evaluations);
            r.value
        },
        a,
        b,
        opts,
    );
    Integral {
        value: outer.value,
        error: outer.error,
        evaluations: inner_evals.get(),
        converged: outer.converged && inner_ok.get(),
    }
}
