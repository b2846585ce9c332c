//! CSV snapshots of sampled grids.
//!
//! Layout: `#` comment lines with the axes and caller provenance, a header
//! row `a,h,re,im`, then one row per sample in row-major order. Numbers use
//! Rust's shortest round-trip formatting, so output is byte-stable.

use std::io::{self, Write};

use super::axis::Axis;
use super::grid::{EscortGrid, JointGrid};

fn axis_line(name: &str, axis: &Axis) -> String {
    format!("# {name}: start={} step={} n={}", axis.start, axis.step, axis.n)
}

/// Writes a joint grid with extra `key=value` provenance lines.
pub fn write_grid_csv<W: Write>(grid: &JointGrid, provenance: &[(&str, String)], mut out: W) -> io::Result<()> {
    writeln!(out, "# domain={}", grid.domain.as_str())?;
    writeln!(out, "{}", axis_line("axis_a", &grid.axis_a))?;
    writeln!(out, "{}", axis_line("axis_h", &grid.axis_h))?;
    for (k, v) in provenance {
        writeln!(out, "# {k}={v}")?;
    }
    writeln!(out, "a,h,re,im")?;
    for ((i, j), v) in grid.data.indexed_iter() {
        writeln!(out, "{},{},{},{}", grid.axis_a.value(i), grid.axis_h.value(j), v.re, v.im)?;
    }
    Ok(())
}

/// Writes a 1-D escort grid as `x,re,im`.
pub fn write_escort_csv<W: Write>(grid: &EscortGrid, provenance: &[(&str, String)], mut out: W) -> io::Result<()> {
    writeln!(out, "# domain={}", grid.domain.as_str())?;
    writeln!(out, "{}", axis_line("axis", &grid.axis))?;
    for (k, v) in provenance {
        writeln!(out, "# {k}={v}")?;
    }
    writeln!(out, "x,re,im")?;
    for (i, v) in grid.data.iter().enumerate() {
        writeln!(out, "{},{},{}", grid.axis.value(i), v.re, v.im)?;
    }
    Ok(())
}
