//! Grid sweeps: spec parsing, grid generation, concurrent evaluation, CSV
//! emission.

use crate::context::Context;
use crate::quantity;
use litrunc::{Error, Result};
use rayon::prelude::*;
use serde::Deserialize;
use std::io::Write;
use std::path::Path;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Spacing {
    Linear,
    Log,
    EveryInteger,
}

/// A declarative sweep: the figure files under `figures/` deserialize into
/// this.
#[derive(Clone, Debug, Deserialize)]
pub struct SweepSpec {
    pub lo: u64,
    pub hi: u64,
    #[serde(default)]
    pub points: u32,
    pub spacing: Spacing,
    pub columns: Vec<String>,
    /// Human note on the expected runtime at desk scale.
    #[serde(default)]
    pub budget: Option<String>,
    /// Requires --allow-slow (pi-dependent work above 1e10).
    #[serde(default)]
    pub allow_slow: bool,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.lo < 2 {
            return Err(Error::domain("sweep", format!("lo = {} must be >= 2", self.lo)));
        }
        if self.hi <= self.lo {
            return Err(Error::domain(
                "sweep",
                format!("hi = {} must exceed lo = {}", self.hi, self.lo),
            ));
        }
        if self.spacing != Spacing::EveryInteger && self.points < 2 {
            return Err(Error::domain(
                "sweep",
                format!("points = {} must be >= 2 for sampled spacing", self.points),
            ));
        }
        if self.columns.is_empty() {
            return Err(Error::domain("sweep", "no columns requested".to_string()));
        }
        for c in &self.columns {
            if !quantity::is_column(c) {
                return Err(Error::domain(
                    "sweep",
                    format!("unknown column {c:?}; known: {}", quantity::COLUMNS.join(", ")),
                ));
            }
        }
        Ok(())
    }

    pub fn from_toml_file(path: &Path) -> Result<SweepSpec> {
        let text = std::fs::read_to_string(path)?;
        let spec: SweepSpec = toml::from_str(&text).map_err(|e| Error::Parse {
            line: 0,
            message: format!("{}: {e}", path.display()),
        })?;
        spec.validate()?;
        Ok(spec)
    }

    /// The integer grid: deduplicated, increasing.
    pub fn grid(&self) -> Vec<u64> {
        let mut grid = Vec::new();
        match self.spacing {
            Spacing::EveryInteger => grid.extend(self.lo..=self.hi),
            Spacing::Linear => {
                let span = (self.hi - self.lo) as f64;
                for i in 0..self.points {
                    let n = self.lo + (span * i as f64 / (self.points - 1) as f64).round() as u64;
                    grid.push(n.min(self.hi));
                }
            }
            Spacing::Log => {
                let ratio = self.hi as f64 / self.lo as f64;
                for i in 0..self.points {
                    let n = (self.lo as f64 * ratio.powf(i as f64 / (self.points - 1) as f64))
                        .round() as u64;
                    grid.push(n.clamp(self.lo, self.hi));
                }
            }
        }
        grid.dedup();
        grid
    }
}

pub struct SweepOutput {
    pub rows: usize,
    pub warnings: Vec<String>,
}

/// Evaluate the sweep concurrently (bounded pool, grid order preserved) and
/// write CSV: `#`-prefixed provenance comments, a header row, one row per
/// grid point. Per-point domain errors become empty cells plus a warning.
pub fn run_sweep(
    spec: &SweepSpec,
    ctx: &Context,
    threads: usize,
    out: &mut dyn Write,
    command_line: &str,
) -> Result<SweepOutput> {
    spec.validate()?;
    let grid = spec.grid();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::domain("sweep", format!("thread pool: {e}")))?;

    type Row = (u64, Vec<std::result::Result<f64, String>>);
    let rows: Vec<Row> = pool.install(|| {
        grid.par_iter()
            .map(|&n| {
                let cells = spec
                    .columns
                    .iter()
                    .map(|c| quantity::evaluate(c, n, ctx).map_err(|e| e.to_string()))
                    .collect();
                (n, cells)
            })
            .collect()
    });

    writeln!(out, "# {command_line}")?;
    writeln!(out, "# version: litrunc {}", env!("CARGO_PKG_VERSION"))?;
    writeln!(out, "# date: {}", chrono::Utc::now().format("%Y-%m-%d"))?;
    writeln!(out, "n,{}", spec.columns.join(","))?;
    let mut warnings = Vec::new();
    for (n, cells) in &rows {
        write!(out, "{n}")?;
        for (cell, col) in cells.iter().zip(&spec.columns) {
            match cell {
                Ok(v) => write!(out, ",{v:.14e}")?,
                Err(msg) => {
                    write!(out, ",")?;
                    warnings.push(format!("n={n}: {col}: {msg}"));
                }
            }
        }
        writeln!(out)?;
    }
    Ok(SweepOutput {
        rows: rows.len(),
        warnings,
    })
}
