//! Figure data: efficiency and fidelity maps, bandwidth compression and
//! entanglement after upconversion.

use anyhow::{bail, Result};
use sfg_core::analytic::{
    dense_scan_max, efficiency, efficiency_at, fidelity_at, input_purity, optimal_p_paper_with, optimal_p_refined,
    upconverted_purity,
};
use sfg_core::design::{compressed_bandwidth_first_order, compression_chirp};
use sfg_core::exec::map_collect;
use sfg_core::model::{reduce, EscortSpec, PhotonSpec};
use sfg_core::oracle::compression_width_ratio;
use sfg_core::series::DEFAULT_TOL;
use sfg_core::SfgError;

use crate::config::{Fig2Config, Fig3Config, Fig4Config};
use crate::table::{fmt_f64, Table};

/// Separable-limit pump width used for the unentangled endpoint.
pub const SEPARABLE_S: f64 = 1e9;

/// Estimated optimum, falling back to a dense scan where the estimator
/// finds no peak. The status says which one was used.
pub fn optimum(q: f64, t: f64, p_max: f64) -> Result<(f64, &'static str)> {
    match optimal_p_paper_with(q, t, p_max) {
        Ok(p) => Ok((p, "peak")),
        Err(SfgError::NoPeak { .. }) => Ok((dense_scan_max(q, t, p_max)?.0, "no_peak_dense_scan")),
        Err(e) => Err(e.into()),
    }
}

fn efficiency_curves(cfg: &Fig2Config, command: &str, pairs: &[(f64, f64)]) -> Result<Table> {
    let ps = cfg.p.values();
    let points: Vec<(f64, f64, f64)> =
        pairs.iter().flat_map(|&(q, t)| ps.iter().map(move |&p| (q, t, p))).collect();
    let values = map_collect(&points, |&(q, t, p)| efficiency_at(p, q, t));
    let mut table = Table::new(command, cfg, &["q", "T", "p", "efficiency"])?;
    for (&(q, t, p), v) in points.iter().zip(values) {
        table.push(vec![fmt_f64(q), fmt_f64(t), fmt_f64(p), fmt_f64(v?)]);
    }
    Ok(table)
}

pub fn fig2(panel: &str, cfg: &Fig2Config) -> Result<Table> {
    cfg.validate()?;
    let command = format!("fig2 panel={panel}");
    match panel {
        "a" => {
            let pairs: Vec<(f64, f64)> = cfg.q_values.iter().map(|&q| (q, 0.0)).collect();
            efficiency_curves(cfg, &command, &pairs)
        }
        "b" => {
            let pairs: Vec<(f64, f64)> = cfg.t_values.iter().map(|&t| (1.0, t)).collect();
            efficiency_curves(cfg, &command, &pairs)
        }
        "c" | "d" => {
            let qs = cfg.q.values();
            let ts = cfg.t.values();
            let points: Vec<(f64, f64)> = qs.iter().flat_map(|&q| ts.iter().map(move |&t| (q, t))).collect();
            let fidelity = panel == "d";
            let rows = map_collect(&points, |&(q, t)| -> Result<Vec<String>> {
                let (p, status) = optimum(q, t, cfg.p_max)?;
                let (value, status) = if fidelity {
                    match fidelity_at(p, q, t) {
                        Ok(f) => (f, status),
                        Err(SfgError::UndefinedFidelity { .. }) => (f64::NAN, "undefined_fidelity"),
                        Err(e) => return Err(e.into()),
                    }
                } else {
                    (efficiency_at(p, q, t)?, status)
                };
                Ok(vec![fmt_f64(q), fmt_f64(t), fmt_f64(p), fmt_f64(value), status.to_string()])
            });
            let column = if fidelity { "fidelity" } else { "efficiency" };
            let mut table = Table::new(&command, cfg, &["q", "T", "p_opt", column, "status"])?;
            for row in rows {
                table.push(row?);
            }
            Ok(table)
        }
        other => bail!("fig2 has panels a, b, c, d; got `{other}`"),
    }
}

pub fn fig3(panel: &str, cfg: &Fig3Config) -> Result<Table> {
    cfg.validate()?;
    let command = format!("fig3 panel={panel}");
    match panel {
        "a" => {
            let gammas = cfg.gamma.values();
            let points: Vec<(f64, f64)> =
                cfg.chirps.iter().flat_map(|&a| gammas.iter().map(move |&g| (a, g))).collect();
            let rows = map_collect(&points, |&(a, gamma)| -> Result<Vec<String>> {
                let photon = PhotonSpec::separable(cfg.sigma, cfg.sigma, a)?;
                let escort = EscortSpec::new(cfg.sigma, -a, 0.0)?;
                let d = reduce(&photon, &escort, gamma)?;
                let eta = efficiency(&d, DEFAULT_TOL)?.value;
                Ok(vec![fmt_f64(a), fmt_f64(gamma), fmt_f64(d.p), fmt_f64(d.q), fmt_f64(eta)])
            });
            let mut table = Table::new(&command, cfg, &["A", "gamma", "p", "q", "efficiency"])?;
            for row in rows {
                table.push(row?);
            }
            Ok(table)
        }
        "b" => {
            let q0s = cfg.q0.values();
            let qs = cfg.q.values();
            let points: Vec<(f64, f64)> = q0s.iter().flat_map(|&q0| qs.iter().map(move |&q| (q0, q))).collect();
            let rows = map_collect(&points, |&(q0, q)| -> Result<Vec<String>> {
                let sigma2 = q0.sqrt();
                let nan = fmt_f64(f64::NAN);
                let Some(a) = compression_chirp(q0, q) else {
                    return Ok(vec![fmt_f64(q0), fmt_f64(q), nan.clone(), nan.clone(), nan.clone(), nan.clone(), nan, "inaccessible".into()]);
                };
                let first = compressed_bandwidth_first_order(1.0, sigma2, a)?;
                if a > cfg.max_chirp {
                    return Ok(vec![fmt_f64(q0), fmt_f64(q), fmt_f64(a), nan.clone(), nan.clone(), fmt_f64(first), nan, "chirp_too_large".into()]);
                }
                let (p, _) = optimal_p_refined(q, 0.0)?;
                let w = compression_width_ratio(1.0, sigma2, a, p)?;
                Ok(vec![
                    fmt_f64(q0),
                    fmt_f64(q),
                    fmt_f64(a),
                    fmt_f64(p),
                    fmt_f64(w.width),
                    fmt_f64(w.first_order),
                    fmt_f64(w.ratio),
                    "ok".into(),
                ])
            });
            let mut table =
                Table::new(&command, cfg, &["q0", "q", "A", "p_opt", "sigma3", "sigma3_first_order", "ratio", "status"])?;
            table.note("sigma1 = 1, sigma2 = sqrt(q0), A1 = -A2 = A, tau = 0; sigma3 from the grid oracle");
            for row in rows {
                table.push(row?);
            }
            Ok(table)
        }
        other => bail!("fig3 has panels a, b; got `{other}`"),
    }
}

pub fn fig4(cfg: &Fig4Config) -> Result<Table> {
    cfg.validate()?;
    let mut ss = cfg.s.values();
    if cfg.include_separable {
        ss.push(SEPARABLE_S);
    }
    let points: Vec<(f64, f64)> = cfg.q_values.iter().flat_map(|&q| ss.iter().map(move |&s| (q, s))).collect();
    let rows = map_collect(&points, |&(q, s)| -> Result<Vec<String>> {
        let (p, _) = optimal_p_refined(q, 0.0)?;
        let r_in = input_purity(s, 1.0, 1.0)?.renyi2;
        let r_out = upconverted_purity(s, 1.0, 1.0, p, q, DEFAULT_TOL)?.renyi2;
        Ok(vec![fmt_f64(q), fmt_f64(s), fmt_f64(p), fmt_f64(r_in), fmt_f64(r_out)])
    });
    let mut table = Table::new("fig4", cfg, &["q", "S", "p_opt", "renyi2_in", "renyi2_out"])?;
    table.note("sigma1 = sigma_h = 1, tau = 0");
    for row in rows {
        table.push(row?);
    }
    Ok(table)
}
