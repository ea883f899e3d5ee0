//! Phase portraits on the 2-torus and CSV export.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::classical::island::Island;
use crate::classical::map::{map_step_torus, MapParams, PhasePoint};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PortraitGrid {
    pub n_theta: usize,
    pub n_j: usize,
    pub n_kicks: u64,
    /// Keep every `stride`-th iterate.
    pub stride: u64,
}

impl Default for PortraitGrid {
    fn default() -> Self {
        PortraitGrid {
            n_theta: 12,
            n_j: 12,
            n_kicks: 1000,
            stride: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PortraitPoint {
    pub orbit: usize,
    pub theta: f64,
    pub j: f64,
}

/// Orbits of a regular θ×J grid of initial points (cell centres).
pub fn phase_portrait(mp: &MapParams, grid: &PortraitGrid) -> Vec<PortraitPoint> {
    let stride = grid.stride.max(1);
    let n = grid.n_theta * grid.n_j;
    let orbits: Vec<Vec<PortraitPoint>> = (0..n)
        .into_par_iter()
        .map(|orbit| {
            let (i, j) = (orbit / grid.n_j, orbit % grid.n_j);
            let mut p = PhasePoint::new(
                TAU * (i as f64 + 0.5) / grid.n_theta as f64,
                TAU * (j as f64 + 0.5) / grid.n_j as f64,
            );
            let mut pts = vec![PortraitPoint { orbit, theta: p.theta, j: p.j }];
            for t in 1..=grid.n_kicks {
                p = map_step_torus(p, mp);
                if t % stride == 0 {
                    pts.push(PortraitPoint { orbit, theta: p.theta, j: p.j });
                }
            }
            pts
        })
        .collect();
    orbits.into_iter().flatten().collect()
}

pub fn write_portrait_csv<W: Write>(mut w: W, points: &[PortraitPoint]) -> Result<()> {
    writeln!(w, "orbit[1],theta[rad],J[rad]")?;
    for p in points {
        writeln!(w, "{},{},{}", p.orbit, p.theta, p.j)?;
    }
    Ok(())
}

pub fn write_boundary_csv<W: Write>(mut w: W, island: &Island) -> Result<()> {
    writeln!(w, "phi[rad],I[rad],valid[1]")?;
    for ((phi, r), v) in island.boundary.iter().zip(&island.valid) {
        writeln!(w, "{phi},{r},{}", *v as u8)?;
    }
    Ok(())
}
