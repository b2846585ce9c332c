//! Integrals and entanglement measures on sampled grids.

use nalgebra::DMatrix;
use ndarray::Array2;
use num_complex::Complex64 as C64;

use super::axis::Axis;
use super::fourier::signal_spectrum;
use super::grid::JointGrid;
use crate::error::{Result, SfgError};
use crate::series::CompensatedSum;

/// Trapezoid rule on uniform samples.
pub fn trapezoid_1d(values: &[f64], step: f64) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => 0.0,
        n => {
            let mut acc: CompensatedSum = values[1..n - 1].iter().copied().collect();
            acc.add(0.5 * (values[0] + values[n - 1]));
            acc.value() * step
        }
    }
}

fn edge_weight(i: usize, n: usize) -> f64 {
    if i == 0 || i + 1 == n {
        0.5
    } else {
        1.0
    }
}

/// 2-D trapezoid rule of `f(value)` over the grid.
fn trapezoid_2d<F: Fn(C64) -> f64>(data: &Array2<C64>, cell: f64, f: F) -> f64 {
    let (na, nh) = data.dim();
    let mut acc = CompensatedSum::new();
    for ((i, j), &v) in data.indexed_iter() {
        acc.add(edge_weight(i, na) * edge_weight(j, nh) * f(v));
    }
    acc.value() * cell
}

/// `∫∫ |f|²`.
pub fn grid_norm(grid: &JointGrid) -> f64 {
    trapezoid_2d(&grid.data, grid.cell(), |v| v.norm_sqr())
}

/// Upconversion probability `∫∫ |f₃|²` of a mode-3 grid.
pub fn grid_efficiency(f3: &JointGrid) -> f64 {
    grid_norm(f3)
}

/// `⟨a|b⟩` by the trapezoid rule.
pub fn grid_inner(a: &JointGrid, b: &JointGrid) -> Result<C64> {
    if !a.same_axes(b) {
        return Err(SfgError::AxisMismatch("inner product of grids on different axes".into()));
    }
    let (na, nh) = a.data.dim();
    let (mut re, mut im) = (CompensatedSum::new(), CompensatedSum::new());
    for (((i, j), x), y) in a.data.indexed_iter().zip(b.data.iter()) {
        let v = x.conj() * y * (edge_weight(i, na) * edge_weight(j, nh));
        re.add(v.re);
        im.add(v.im);
    }
    Ok(C64::new(re.value(), im.value()) * a.cell())
}

/// `|⟨a|b⟩|² / (⟨a|a⟩⟨b|b⟩)`.
pub fn grid_fidelity(a: &JointGrid, b: &JointGrid) -> Result<f64> {
    let ab = grid_inner(a, b)?;
    let (na, nb) = (grid_norm(a), grid_norm(b));
    if na <= 0.0 || nb <= 0.0 {
        return Err(SfgError::UndefinedFidelity { efficiency: na.min(nb) });
    }
    Ok(ab.norm_sqr() / (na * nb))
}

/// `‖a − b‖ / ‖b‖` over raw samples.
pub fn relative_l2(a: &Array2<C64>, b: &Array2<C64>) -> f64 {
    let diff: f64 = a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm_sqr()).sum();
    let base: f64 = b.iter().map(|y| y.norm_sqr()).sum();
    (diff / base).sqrt()
}

/// Amplitude matrix scaled by `√(Δa Δh)`, so its Frobenius norm squared is
/// the Riemann-sum norm of the grid.
fn scaled_matrix(grid: &JointGrid) -> DMatrix<C64> {
    let (na, nh) = grid.data.dim();
    let s = grid.cell().sqrt();
    DMatrix::from_fn(na, nh, |i, j| grid.data[(i, j)] * s)
}

/// Normalized Schmidt weights `λᵢ = sᵢ²/Σs²`, largest first.
pub fn schmidt_weights(grid: &JointGrid) -> Result<Vec<f64>> {
    let m = scaled_matrix(grid);
    let sv = m.singular_values();
    let mut w: Vec<f64> = sv.iter().map(|s| s * s).collect();
    let total: f64 = w.iter().sum();
    if total <= 0.0 {
        return Err(SfgError::UndefinedPurity("empty grid"));
    }
    w.iter_mut().for_each(|x| *x /= total);
    w.sort_by(|a, b| b.total_cmp(a));
    Ok(w)
}

/// Subsystem purity `Σλᵢ²` from the singular values of the amplitude matrix.
pub fn grid_purity(grid: &JointGrid) -> Result<f64> {
    Ok(schmidt_weights(grid)?.iter().map(|l| l * l).sum())
}

/// Subsystem purity from the reduced density matrix `ρ = MM†`:
/// `Tr ρ² / (Tr ρ)²`.
pub fn grid_purity_gram(grid: &JointGrid) -> Result<f64> {
    let m = scaled_matrix(grid);
    let rho = &m * m.adjoint();
    let trace = rho.trace().re;
    if trace <= 0.0 {
        return Err(SfgError::UndefinedPurity("empty grid"));
    }
    let tr_sq: f64 = rho.iter().map(|v| v.norm_sqr()).sum();
    Ok(tr_sq / (trace * trace))
}

/// Subsystem purity by the literal four-fold sum
/// `Σ f(a,h) f*(a',h) f(a',h') f*(a,h')`. Cost `O(n⁴)`; for small grids.
pub fn grid_purity_direct(grid: &JointGrid) -> Result<f64> {
    let d = &grid.data;
    let (na, nh) = d.dim();
    let mut acc = CompensatedSum::new();
    let mut norm = CompensatedSum::new();
    for a in 0..na {
        for h in 0..nh {
            norm.add(d[(a, h)].norm_sqr());
        }
    }
    for a in 0..na {
        for ap in 0..na {
            // Σ_h f(a,h) f*(a',h), and the trace needs its modulus squared.
            let mut s = C64::new(0.0, 0.0);
            for h in 0..nh {
                s += d[(a, h)] * d[(ap, h)].conj();
            }
            acc.add(s.norm_sqr());
        }
    }
    let n = norm.value();
    if n <= 0.0 {
        return Err(SfgError::UndefinedPurity("empty grid"));
    }
    Ok(acc.value() / (n * n))
}

/// Mean and standard deviation of a sampled density on `axis`.
pub fn moments(axis: &Axis, density: &[f64]) -> (f64, f64, f64) {
    let xs = axis.values();
    let mass = trapezoid_1d(density, axis.step);
    let mean = trapezoid_1d(&xs.iter().zip(density).map(|(x, d)| x * d).collect::<Vec<_>>(), axis.step) / mass;
    let var = trapezoid_1d(
        &xs.iter().zip(density).map(|(x, d)| (x - mean) * (x - mean) * d).collect::<Vec<_>>(),
        axis.step,
    ) / mass;
    (mass, mean, var.max(0.0).sqrt())
}

/// Standard deviation `√(⟨x²⟩ − ⟨x⟩²)` of a sampled marginal.
pub fn effective_width(axis: &Axis, marginal: &[f64]) -> f64 {
    moments(axis, marginal).2
}

/// Signal-time marginal `∫ |f(t, t_h)|² dt_h` of a time grid.
pub fn temporal_marginal(grid: &JointGrid) -> Vec<f64> {
    grid.data
        .outer_iter()
        .map(|row| trapezoid_1d(&row.iter().map(|v| v.norm_sqr()).collect::<Vec<_>>(), grid.axis_h.step))
        .collect()
}

/// Signal spectral marginal `∫ |F(ω, ω_h)|² dω_h` of a time grid, on the
/// grid's conjugate signal axis. The herald stays in time (Parseval).
pub fn spectral_marginal(grid: &JointGrid) -> Result<(Axis, Vec<f64>)> {
    let spec = signal_spectrum(grid)?;
    let marginal = spec
        .outer_iter()
        .map(|row| trapezoid_1d(&row.iter().map(|v| v.norm_sqr()).collect::<Vec<_>>(), grid.axis_h.step))
        .collect();
    Ok((grid.dual_a, marginal))
}

/// Fraction of `∫∫|f|²` lying in the outer `1/16` of either axis; a large
/// value signals truncation or wrap-around.
pub fn border_fraction(grid: &JointGrid) -> f64 {
    let (na, nh) = grid.data.dim();
    let (ba, bh) = (na / 16, nh / 16);
    let mut edge = 0.0;
    let mut total = 0.0;
    for ((i, j), v) in grid.data.indexed_iter() {
        let e = v.norm_sqr();
        total += e;
        if i < ba || i >= na - ba || j < bh || j >= nh - bh {
            edge += e;
        }
    }
    if total > 0.0 {
        edge / total
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::grid::Domain;
    use std::f64::consts::PI;

    fn grid_of<F: Fn(f64, f64) -> C64 + Sync + Send>(n: usize, step: f64, f: F) -> JointGrid {
        let a = Axis::centred(0.0, step, n).unwrap();
        JointGrid::from_fn(a, a, a.dual(0.0), a.dual(0.0), Domain::Time, f).unwrap()
    }

    #[test]
    fn trapezoid_of_gaussian() {
        let axis = Axis::centred(0.0, 0.1, 256).unwrap();
        let v: Vec<f64> = axis.values().iter().map(|x| (-x * x).exp()).collect();
        assert!((trapezoid_1d(&v, 0.1) - PI.sqrt()).abs() < 1e-14);
        assert_eq!(trapezoid_1d(&[], 1.0), 0.0);
    }

    #[test]
    fn zero_grid_has_no_efficiency() {
        let g = grid_of(64, 0.1, |_, _| C64::new(0.0, 0.0));
        assert_eq!(grid_efficiency(&g), 0.0);
    }

    #[test]
    fn separable_grid_is_pure() {
        let g = grid_of(64, 0.2, |a, h| C64::from_polar((-a * a - 2.0 * h * h).exp(), 0.4 * a));
        assert!((grid_purity(&g).unwrap() - 1.0).abs() < 1e-12);
        let w = schmidt_weights(&g).unwrap();
        assert!(w[0] > 1.0 - 1e-12);
    }

    #[test]
    fn purity_routes_agree() {
        let g = grid_of(64, 0.25, |a, h| {
            C64::from_polar((-(a * a) - h * h - 0.8 * a * h).exp(), 0.2 * a * h - 0.1 * h * h)
        });
        let svd = grid_purity(&g).unwrap();
        let gram = grid_purity_gram(&g).unwrap();
        let direct = grid_purity_direct(&g).unwrap();
        assert!((svd - gram).abs() < 1e-12 && (svd - direct).abs() < 1e-12);
        assert!(svd < 0.99);
    }

    #[test]
    fn purity_invariances() {
        let f = |a: f64, h: f64| (-(a * a) - h * h - 0.9 * a * h).exp();
        let g = grid_of(64, 0.25, move |a, h| C64::from(f(a, h)));
        let swapped = grid_of(64, 0.25, move |a, h| C64::from(f(h, a)));
        let phased = grid_of(64, 0.25, move |a, h| C64::from_polar(f(a, h), 1.234));
        let p = grid_purity(&g).unwrap();
        assert!((p - grid_purity(&swapped).unwrap()).abs() < 1e-12);
        assert!((p - grid_purity(&phased).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn fidelity_limits() {
        let g = grid_of(64, 0.2, |a, h| C64::from((-a * a - h * h).exp()));
        assert!((grid_fidelity(&g, &g).unwrap() - 1.0).abs() < 1e-14);
        let left = grid_of(64, 0.2, |a, _| C64::from(if a < 0.0 { 1.0 } else { 0.0 }));
        let right = grid_of(64, 0.2, |a, _| C64::from(if a > 0.0 { 1.0 } else { 0.0 }));
        assert_eq!(grid_fidelity(&left, &right).unwrap(), 0.0);
    }

    #[test]
    fn width_of_unit_gaussian() {
        // Intensity e^{−ω²/2} has standard deviation 1.
        let axis = Axis::centred(0.0, 0.05, 1024).unwrap();
        let m: Vec<f64> = axis.values().iter().map(|w| (-w * w / 2.0).exp()).collect();
        assert!((effective_width(&axis, &m) - 1.0).abs() < 1e-6);
    }
}
