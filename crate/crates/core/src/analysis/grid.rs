use std::fmt::Write as _;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::thresholds::{classify, Region, RegionVerdict};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Alpha,
    Beta,
    S,
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "alpha" | "a" => Ok(Axis::Alpha),
            "beta" | "b" => Ok(Axis::Beta),
            "s" => Ok(Axis::S),
            other => Err(Error::param(format!("unknown axis `{other}` (alpha, beta, s)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridAxis {
    pub param: Axis,
    pub min: f64,
    pub max: f64,
    /// Number of grid values, endpoints included.
    pub resolution: usize,
}

impl GridAxis {
    pub fn values(&self) -> Vec<f64> {
        let r = self.resolution;
        if r == 1 {
            return vec![self.min];
        }
        (0..r).map(|i| self.min + (self.max - self.min) * i as f64 / (r - 1) as f64).collect()
    }
}

/// Two swept parameters; the third comes from the fixed values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseGridSpec {
    pub x: GridAxis,
    pub y: GridAxis,
    pub alpha: f64,
    pub beta: f64,
    pub s: f64,
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseGrid {
    pub spec: PhaseGridSpec,
    pub x_values: Vec<f64>,
    pub y_values: Vec<f64>,
    /// Row-major over `y`, then `x`.
    pub cells: Vec<RegionVerdict>,
}

pub fn phase_grid(spec: &PhaseGridSpec) -> Result<PhaseGrid> {
    if spec.x.param == spec.y.param {
        return Err(Error::param("grid axes must be two different parameters"));
    }
    for ax in [spec.x, spec.y] {
        if ax.resolution == 0 || ax.min.is_nan() || ax.max.is_nan() || ax.min > ax.max {
            return Err(Error::param(format!("bad range for {:?}: [{}, {}] x {}", ax.param, ax.min, ax.max, ax.resolution)));
        }
    }
    let x_values = spec.x.values();
    let y_values = spec.y.values();
    let rows: Vec<Vec<RegionVerdict>> = y_values
        .par_iter()
        .map(|&y| {
            x_values
                .iter()
                .map(|&x| {
                    let (mut a, mut b, mut s) = (spec.alpha, spec.beta, spec.s);
                    for (ax, v) in [(spec.x.param, x), (spec.y.param, y)] {
                        match ax {
                            Axis::Alpha => a = v,
                            Axis::Beta => b = v,
                            Axis::S => s = v,
                        }
                    }
                    classify(a, b, s, spec.k)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(PhaseGrid { spec: *spec, x_values, y_values, cells: rows.into_iter().flatten().collect() })
}

impl PhaseGrid {
    pub fn get(&self, ix: usize, iy: usize) -> &RegionVerdict {
        &self.cells[iy * self.x_values.len() + ix]
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["x", "y", "region", "matching_feasible", "single", "pair", "k_union"])?;
        for (iy, y) in self.y_values.iter().enumerate() {
            for (ix, x) in self.x_values.iter().enumerate() {
                let v = self.get(ix, iy);
                w.write_record([
                    x.to_string(),
                    y.to_string(),
                    v.region.to_string(),
                    v.matching_feasible.to_string(),
                    v.single_graph.to_string(),
                    v.pair_union.to_string(),
                    v.k_union.to_string(),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }

    /// Heat map with `x` to the right and `y` upwards.
    pub fn to_svg(&self, cell_px: usize) -> String {
        let (nx, ny) = (self.x_values.len(), self.y_values.len());
        let (w, h) = (nx * cell_px, ny * cell_px);
        let mut svg = format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\" shape-rendering=\"crispEdges\">\n"
        );
        for iy in 0..ny {
            for ix in 0..nx {
                let colour = match self.get(ix, iy).region {
                    Region::Green => "#2ca02c",
                    Region::Cyan => "#17becf",
                    Region::Yellow => "#ffd92f",
                    Region::Red => "#d62728",
                    Region::BoundaryIndeterminate => "#7f7f7f",
                };
                let _ = writeln!(
                    svg,
                    "<rect x=\"{}\" y=\"{}\" width=\"{cell_px}\" height=\"{cell_px}\" fill=\"{colour}\"/>",
                    ix * cell_px,
                    (ny - 1 - iy) * cell_px
                );
            }
        }
        svg.push_str("</svg>\n");
        svg
    }
}
