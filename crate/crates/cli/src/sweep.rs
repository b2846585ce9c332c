//! Parameter sweeps driven by a [`SweepConfig`].

use std::collections::BTreeMap;

use anyhow::{Context, Result};
use sfg_core::analytic::{efficiency_at, fidelity_at, input_purity, optimal_p_refined, upconverted_purity};
use sfg_core::exec::map_collect;
use sfg_core::model::{reduce, EscortSpec, PhotonSpec};
use sfg_core::oracle::compression_width_ratio;
use sfg_core::series::DEFAULT_TOL;

use crate::config::{Quantity, SweepConfig};
use crate::figures::optimum;
use crate::table::{fmt_f64, Table};

fn get(point: &BTreeMap<String, f64>, name: &str) -> Result<f64> {
    point.get(name).copied().with_context(|| format!("missing parameter `{name}`"))
}

/// Output columns of each quantity, after the swept parameters.
fn outputs(q: Quantity) -> &'static [&'static str] {
    match q {
        Quantity::Efficiency => &["efficiency"],
        Quantity::OptimalEfficiency => &["p_opt", "efficiency", "status"],
        Quantity::Fidelity => &["p", "fidelity"],
        Quantity::WidthRatio => &["p", "q", "sigma3", "sigma3_first_order", "ratio"],
        Quantity::Renyi2 => &["p", "renyi2_in", "renyi2_out"],
    }
}

fn evaluate(quantity: Quantity, pt: &BTreeMap<String, f64>) -> Result<Vec<String>> {
    Ok(match quantity {
        Quantity::Efficiency => vec![fmt_f64(efficiency_at(get(pt, "p")?, get(pt, "q")?, get(pt, "T")?)?)],
        Quantity::OptimalEfficiency => {
            let (q, t) = (get(pt, "q")?, get(pt, "T")?);
            let (p, status) = optimum(q, t, sfg_core::analytic::DEFAULT_P_MAX)?;
            vec![fmt_f64(p), fmt_f64(efficiency_at(p, q, t)?), status.into()]
        }
        Quantity::Fidelity => {
            let (q, t) = (get(pt, "q")?, get(pt, "T")?);
            let p = match pt.get("p") {
                Some(&p) => p,
                None => optimum(q, t, sfg_core::analytic::DEFAULT_P_MAX)?.0,
            };
            vec![fmt_f64(p), fmt_f64(fidelity_at(p, q, t)?)]
        }
        Quantity::WidthRatio => {
            let (s1, s2, a) = (get(pt, "sigma1")?, get(pt, "sigma2")?, get(pt, "A")?);
            let p = match pt.get("p") {
                Some(&p) => p,
                None => {
                    let photon = PhotonSpec::separable(s1, s1, a)?;
                    let escort = EscortSpec::new(s2, -a, 0.0)?;
                    optimal_p_refined(reduce(&photon, &escort, 1.0)?.q, 0.0)?.0
                }
            };
            let w = compression_width_ratio(s1, s2, a, p)?;
            vec![fmt_f64(p), fmt_f64(w.q), fmt_f64(w.width), fmt_f64(w.first_order), fmt_f64(w.ratio)]
        }
        Quantity::Renyi2 => {
            let (q, s) = (get(pt, "q")?, get(pt, "S")?);
            let s1 = pt.get("sigma1").copied().unwrap_or(1.0);
            let sh = pt.get("sigma_h").copied().unwrap_or(1.0);
            let p = match pt.get("p") {
                Some(&p) => p,
                None => optimal_p_refined(q, 0.0)?.0,
            };
            let r_in = input_purity(s, s1, sh)?.renyi2;
            let r_out = upconverted_purity(s, s1, sh, p, q, DEFAULT_TOL)?.renyi2;
            vec![fmt_f64(p), fmt_f64(r_in), fmt_f64(r_out)]
        }
    })
}

pub fn run(cfg: &SweepConfig) -> Result<Table> {
    cfg.validate()?;
    let names: Vec<&str> = cfg.axes.iter().map(|a| a.name.as_str()).collect();
    let mut header: Vec<&str> = names.clone();
    header.extend_from_slice(outputs(cfg.quantity));
    let mut table = Table::new("sweep", cfg, &header)?;
    let points = cfg.points();
    let rows = map_collect(&points, |pt| evaluate(cfg.quantity, pt));
    for (pt, row) in points.iter().zip(rows) {
        let mut cells: Vec<String> = names.iter().map(|n| fmt_f64(pt[*n])).collect();
        cells.extend(row.with_context(|| format!("at {pt:?}"))?);
        table.push(cells);
    }
    Ok(table)
}
