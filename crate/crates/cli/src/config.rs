//! JSON configuration for figure commands and sweeps.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

/// Reads a JSON config, or the defaults when no path is given.
pub fn load<C: DeserializeOwned + Default>(path: Option<&Path>) -> Result<C> {
    match path {
        None => Ok(C::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing {}", p.display()))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Linear,
    Log,
}

/// Evenly spaced samples on a linear or logarithmic scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
    #[serde(default = "linear")]
    pub scale: Scale,
}

fn linear() -> Scale {
    Scale::Linear
}

impl Range {
    pub fn linear(min: f64, max: f64, steps: usize) -> Self {
        Self { min, max, steps, scale: Scale::Linear }
    }

    pub fn log(min: f64, max: f64, steps: usize) -> Self {
        Self { min, max, steps, scale: Scale::Log }
    }

    pub fn validate(&self, what: &str) -> Result<()> {
        ensure!(self.steps >= 2, "{what}: steps must be at least 2");
        ensure!(self.min.is_finite() && self.max.is_finite(), "{what}: bounds must be finite");
        ensure!(self.min < self.max, "{what}: min must be below max");
        if self.scale == Scale::Log {
            ensure!(self.min > 0.0, "{what}: log scale needs min > 0");
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let n = self.steps - 1;
        (0..=n)
            .map(|i| {
                let f = i as f64 / n as f64;
                if i == n {
                    return self.max;
                }
                match self.scale {
                    Scale::Linear => self.min + f * (self.max - self.min),
                    Scale::Log => snap((self.min.ln() + f * (self.max.ln() - self.min.ln())).exp()),
                }
            })
            .collect()
    }
}

/// Rounds to 12 significant digits so log-spaced decades print exactly.
fn snap(x: f64) -> f64 {
    format!("{x:.11e}").parse().unwrap_or(x)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Fig2Config {
    /// Coupling axis for panels (a) and (b).
    pub p: Range,
    /// Pulse-length ratios for panel (a), at `T = 0`.
    pub q_values: Vec<f64>,
    /// Delays for panel (b), at `q = 1`.
    pub t_values: Vec<f64>,
    /// Plane for panels (c) and (d).
    pub q: Range,
    pub t: Range,
    /// Upper end of the optimum search and of the fallback scan.
    pub p_max: f64,
}

impl Default for Fig2Config {
    fn default() -> Self {
        Self {
            p: Range::linear(0.0, 10.0, 201),
            q_values: vec![1e-6, 1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0, 1e3],
            t_values: vec![0.0, 0.5, 1.0, 1.5, 2.0, 2.5],
            q: Range::log(1e-3, 1e3, 61),
            t: Range::linear(-3.0, 3.0, 61),
            p_max: 400.0,
        }
    }
}

impl Fig2Config {
    pub fn validate(&self) -> Result<()> {
        self.p.validate("p")?;
        ensure!(self.p.min >= 0.0, "p: must be non-negative");
        self.q.validate("q")?;
        ensure!(self.q.min > 0.0, "q: must be positive");
        self.t.validate("t")?;
        ensure!(self.q_values.iter().all(|q| q.is_finite() && *q > 0.0), "q_values must be positive");
        ensure!(self.t_values.iter().all(|t| t.is_finite()), "t_values must be finite");
        ensure!(self.p_max > 0.0, "p_max must be positive");
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Fig3Config {
    /// Absolute coupling axis for panel (a).
    pub gamma: Range,
    /// Opposite chirps `A₁ = −A₂ = A` for panel (a).
    pub chirps: Vec<f64>,
    /// Common bandwidth `σ₁ = σ₂` for panel (a).
    pub sigma: f64,
    /// Axes of panel (b).
    pub q0: Range,
    pub q: Range,
    /// Panel (b) cells needing a larger chirp are skipped and flagged.
    pub max_chirp: f64,
}

impl Default for Fig3Config {
    fn default() -> Self {
        Self {
            gamma: Range::linear(0.0, 10.0, 201),
            chirps: vec![0.0, 1.0, 5.0, 20.0],
            sigma: 1.0,
            q0: Range::log(1e-2, 1e2, 13),
            q: Range::log(1e-2, 1e2, 13),
            max_chirp: 50.0,
        }
    }
}

impl Fig3Config {
    pub fn validate(&self) -> Result<()> {
        self.gamma.validate("gamma")?;
        ensure!(self.gamma.min >= 0.0, "gamma: must be non-negative");
        ensure!(!self.chirps.is_empty() && self.chirps.iter().all(|a| a.is_finite()), "chirps must be finite");
        ensure!(self.sigma.is_finite() && self.sigma > 0.0, "sigma must be positive");
        self.q0.validate("q0")?;
        self.q.validate("q")?;
        ensure!(self.q0.min > 0.0 && self.q.min > 0.0, "q0 and q must be positive");
        ensure!(self.max_chirp > 0.0, "max_chirp must be positive");
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Fig4Config {
    pub q_values: Vec<f64>,
    /// Pump widths; `σ₁ = σ_h = 1`.
    pub s: Range,
    /// Adds the separable endpoint `S = 1e9`.
    pub include_separable: bool,
}

impl Default for Fig4Config {
    fn default() -> Self {
        Self { q_values: vec![1e-3, 0.1, 1.0, 10.0, 100.0], s: Range::log(0.1, 1e3, 41), include_separable: true }
    }
}

impl Fig4Config {
    pub fn validate(&self) -> Result<()> {
        ensure!(!self.q_values.is_empty() && self.q_values.iter().all(|q| q.is_finite() && *q > 0.0), "q_values must be positive");
        self.s.validate("s")?;
        ensure!(self.s.min > 0.0, "s: must be positive");
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Efficiency,
    OptimalEfficiency,
    Fidelity,
    WidthRatio,
    Renyi2,
}

impl Quantity {
    /// Parameters that must be supplied, swept or fixed.
    pub fn required(self) -> &'static [&'static str] {
        match self {
            Quantity::Efficiency => &["p", "q", "T"],
            Quantity::OptimalEfficiency => &["q", "T"],
            Quantity::Fidelity => &["q", "T"],
            Quantity::WidthRatio => &["sigma1", "sigma2", "A"],
            Quantity::Renyi2 => &["q", "S"],
        }
    }

    /// Parameters that may be supplied; a missing `p` means the optimum.
    pub fn optional(self) -> &'static [&'static str] {
        match self {
            Quantity::Efficiency | Quantity::OptimalEfficiency => &[],
            Quantity::Fidelity | Quantity::WidthRatio => &["p"],
            Quantity::Renyi2 => &["p", "sigma1", "sigma_h"],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    pub name: String,
    #[serde(flatten)]
    pub range: Range,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub quantity: Quantity,
    pub axes: Vec<SweepAxis>,
    #[serde(default)]
    pub fixed: BTreeMap<String, f64>,
    pub output_path: String,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        ensure!((1..=2).contains(&self.axes.len()), "a sweep needs one or two axes");
        let allowed: Vec<&str> = self.quantity.required().iter().chain(self.quantity.optional()).copied().collect();
        let mut seen: Vec<&str> = Vec::new();
        for axis in &self.axes {
            axis.range.validate(&axis.name)?;
            seen.push(&axis.name);
        }
        for name in self.fixed.keys() {
            seen.push(name);
        }
        for (i, name) in seen.iter().enumerate() {
            if !allowed.contains(name) {
                bail!("parameter `{name}` is not used by {:?} (allowed: {})", self.quantity, allowed.join(", "));
            }
            if seen[..i].contains(name) {
                bail!("parameter `{name}` is given more than once");
            }
        }
        for name in self.quantity.required() {
            ensure!(seen.contains(name), "{:?} needs parameter `{name}`", self.quantity);
        }
        for (name, value) in &self.fixed {
            ensure!(value.is_finite(), "fixed `{name}` must be finite");
        }
        ensure!(!self.output_path.is_empty(), "output_path must not be empty");
        Ok(())
    }

    /// Every point of the sweep as a full parameter map, first axis slowest.
    pub fn points(&self) -> Vec<BTreeMap<String, f64>> {
        let mut out = vec![self.fixed.clone()];
        for axis in &self.axes {
            let values = axis.range.values();
            out = out
                .into_iter()
                .flat_map(|base| {
                    values.iter().map(move |&v| {
                        let mut m = base.clone();
                        m.insert(axis.name.clone(), v);
                        m
                    })
                })
                .collect();
        }
        out
    }
}
