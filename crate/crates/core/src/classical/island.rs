//! Island boundary as the minimum-radius envelope of exterior orbits, in
//! polar coordinates about the stable fixed point.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

use crate::classical::map::{
    fixed_point, map_step_torus, saddle_point, wrap_angle, wrap_centered, MapParams, PhasePoint,
};
use crate::error::{Error, Result};
use crate::rotor::RotorParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IslandSpec {
    /// Exterior trajectories launched.
    pub n_traj: usize,
    /// Iterations per trajectory.
    pub n_kicks: u64,
    /// Angular bin width of the envelope.
    pub d_phi: f64,
}

impl Default for IslandSpec {
    fn default() -> Self {
        IslandSpec {
            n_traj: 8,
            n_kicks: 1_000_000,
            d_phi: TAU / 720.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IslandStatus {
    Found,
    NoFixedPoint,
    Unstable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Island {
    pub status: IslandStatus,
    pub theta0: f64,
    pub stable: bool,
    /// `(φ_i, I_i)` at the lower edge of every angular bin.
    pub boundary: Vec<(f64, f64)>,
    /// False where no orbit point fell in the bin and `I_i` was interpolated.
    pub valid: Vec<bool>,
    pub d_phi: f64,
    pub area: f64,
    pub diagnostics: Option<IslandDiagnostics>,
}

/// Convergence checks computed from the same orbits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IslandDiagnostics {
    /// Area with bins of half the width.
    pub area_half_dphi: f64,
    /// Area from the first half of every orbit.
    pub area_half_kicks: f64,
}

impl IslandDiagnostics {
    /// Largest relative change of the area under either refinement.
    pub fn max_relative_change(&self, area: f64) -> f64 {
        if area == 0.0 {
            return 0.0;
        }
        ((self.area_half_dphi - area).abs() / area).max((self.area_half_kicks - area).abs() / area)
    }
}

/// Polar coordinates `(φ, I)` of `p` about `(theta0, 0)` on the torus.
#[inline]
pub fn polar_about(p: PhasePoint, theta0: f64) -> (f64, f64) {
    let dx = wrap_centered(p.theta - theta0);
    let dy = wrap_centered(p.j);
    (wrap_angle(dy.atan2(dx)), dx.hypot(dy))
}

impl Island {
    fn empty(status: IslandStatus, theta0: f64, stable: bool, d_phi: f64) -> Self {
        Island {
            status,
            theta0,
            stable,
            boundary: Vec::new(),
            valid: Vec::new(),
            d_phi,
            area: 0.0,
            diagnostics: None,
        }
    }

    /// Area is within `tol` (relative) under both refinements.
    pub fn converged(&self, tol: f64) -> bool {
        match self.diagnostics {
            Some(d) => d.max_relative_change(self.area) <= tol,
            None => true,
        }
    }

    pub fn exists(&self) -> bool {
        self.status == IslandStatus::Found
    }

    pub fn invalid_bins(&self) -> usize {
        self.valid.iter().filter(|v| !**v).count()
    }

    pub fn mean_radius(&self) -> f64 {
        if self.boundary.is_empty() {
            return 0.0;
        }
        self.boundary.iter().map(|b| b.1).sum::<f64>() / self.boundary.len() as f64
    }

    /// Boundary radius at angle `phi`.
    pub fn radius_at(&self, phi: f64) -> f64 {
        if self.boundary.is_empty() {
            return 0.0;
        }
        let i = ((wrap_angle(phi) / self.d_phi) as usize).min(self.boundary.len() - 1);
        self.boundary[i].1
    }

    /// Strictly inside the envelope.
    pub fn contains(&self, p: PhasePoint) -> bool {
        if !self.exists() {
            return false;
        }
        let (phi, r) = polar_about(p, self.theta0);
        r < self.radius_at(phi)
    }
}

/// Launch points outside the island: near the saddle, plus a ring at twice
/// the linearised half-width.
fn launch_points(mp: &MapParams, theta0: f64, n_traj: usize) -> Vec<PhasePoint> {
    let saddle = saddle_point(mp).unwrap_or(wrap_angle(theta0 + PI));
    let n_saddle = n_traj.div_ceil(2);
    let kc = (mp.k_tilde * theta0.cos()).abs();
    let ring = (4.0 * kc.sqrt()).clamp(0.05, 0.9 * PI);
    let mut out = Vec::with_capacity(n_traj);
    // all four quadrants around the saddle, so both separatrix branches are
    // shadowed even when the chaotic layer is too thin to connect them
    for i in 0..n_saddle {
        let d = 1e-3 * (i as f64 / 4.0 + 1.0);
        let s_theta = if i % 2 == 0 { 1.0 } else { -1.0 };
        let s_j = if (i / 2) % 2 == 0 { 1.0 } else { -1.0 };
        out.push(PhasePoint::new(saddle + s_theta * d, s_j * d).on_torus());
    }
    let n_ring = n_traj - n_saddle;
    for i in 0..n_ring {
        let a = TAU * (i as f64 + 0.5) / n_ring as f64;
        out.push(PhasePoint::new(theta0 + ring * a.cos(), ring * a.sin()).on_torus());
    }
    out
}

/// Per-orbit envelopes: `(fine, half_kicks, finer)` where `finer` uses
/// twice as many bins.
struct Envelopes {
    main: Vec<f64>,
    half_kicks: Vec<f64>,
    finer: Vec<f64>,
}

/// Minimum polar radius per bin over the orbit of `start`.
fn orbit_envelope(mp: &MapParams, theta0: f64, start: PhasePoint, n_kicks: u64, bins: usize) -> Envelopes {
    let mut main = vec![f64::INFINITY; bins];
    let mut finer = vec![f64::INFINITY; 2 * bins];
    let mut half_kicks = Vec::new();
    let scale = 2.0 * bins as f64 / TAU;
    let mut p = start;
    for step in 1..=n_kicks {
        p = map_step_torus(p, mp);
        let (phi, r) = polar_about(p, theta0);
        let i2 = ((phi * scale) as usize).min(2 * bins - 1);
        if r < finer[i2] {
            finer[i2] = r;
            if r < main[i2 / 2] {
                main[i2 / 2] = r;
            }
        }
        if step == n_kicks / 2 {
            half_kicks = main.clone();
        }
    }
    if half_kicks.is_empty() {
        half_kicks = main.clone();
    }
    Envelopes { main, half_kicks, finer }
}

fn merge(into: &mut [f64], from: &[f64]) {
    for (a, b) in into.iter_mut().zip(from) {
        *a = a.min(*b);
    }
}

fn polar_area(env: &[f64]) -> f64 {
    let d = TAU / env.len() as f64;
    env.iter().map(|r| 0.5 * r * r * d).sum()
}

/// Fills non-finite entries by linear interpolation between the nearest
/// finite neighbours on the circle.
fn fill_circular(env: &mut [f64]) -> Vec<bool> {
    let n = env.len();
    let valid: Vec<bool> = env.iter().map(|v| v.is_finite()).collect();
    let known: Vec<usize> = (0..n).filter(|&i| valid[i]).collect();
    if known.is_empty() {
        env.iter_mut().for_each(|v| *v = 0.0);
        return valid;
    }
    for i in 0..n {
        if valid[i] {
            continue;
        }
        let pos = known.partition_point(|&k| k < i);
        let next = known[pos % known.len()];
        let prev = known[(pos + known.len() - 1) % known.len()];
        let gap = (next + n - prev) % n;
        let off = (i + n - prev) % n;
        env[i] = if gap == 0 {
            env[prev]
        } else {
            env[prev] + (env[next] - env[prev]) * off as f64 / gap as f64
        };
    }
    valid
}

/// Island around the stable period-one fixed point of `mp`.
///
/// An absent or unstable fixed point gives area 0 with the matching status.
pub fn island_boundary(mp: &MapParams, spec: &IslandSpec) -> Result<Island> {
    if spec.n_traj == 0 || spec.n_kicks == 0 {
        return Err(Error::invalid("island estimation needs n_traj >= 1 and n_kicks >= 1"));
    }
    if !(spec.d_phi > 0.0 && spec.d_phi <= PI) {
        return Err(Error::invalid("angular bin width must lie in (0, π]"));
    }
    let Some(fp) = fixed_point(mp) else {
        return Ok(Island::empty(IslandStatus::NoFixedPoint, f64::NAN, false, spec.d_phi));
    };
    if !fp.stable {
        return Ok(Island::empty(IslandStatus::Unstable, fp.theta0, false, spec.d_phi));
    }
    let bins = (TAU / spec.d_phi).round() as usize;
    let d_phi = TAU / bins as f64;
    let starts = launch_points(mp, fp.theta0, spec.n_traj);
    let envs: Vec<Envelopes> = starts
        .par_iter()
        .map(|&s| orbit_envelope(mp, fp.theta0, s, spec.n_kicks, bins))
        .collect();
    let mut env = vec![f64::INFINITY; bins];
    let mut half = vec![f64::INFINITY; bins];
    let mut finer = vec![f64::INFINITY; 2 * bins];
    for e in &envs {
        merge(&mut env, &e.main);
        merge(&mut half, &e.half_kicks);
        merge(&mut finer, &e.finer);
    }
    let valid = fill_circular(&mut env);
    fill_circular(&mut half);
    fill_circular(&mut finer);
    let area = polar_area(&env);
    let diagnostics = IslandDiagnostics {
        area_half_dphi: polar_area(&finer),
        area_half_kicks: polar_area(&half),
    };
    Ok(Island {
        status: IslandStatus::Found,
        theta0: fp.theta0,
        stable: true,
        boundary: env.iter().enumerate().map(|(i, &r)| (i as f64 * d_phi, r)).collect(),
        valid,
        d_phi,
        area,
        diagnostics: Some(diagnostics),
    })
}

/// One point of an area-versus-k scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub k: f64,
    pub k_tilde: f64,
    pub status: IslandStatus,
    pub area: f64,
    pub invalid_bins: usize,
    /// Largest relative area change under δφ/2 and half the iterations.
    pub max_relative_change: f64,
    pub diagnostics: Option<IslandDiagnostics>,
}

impl ScanPoint {
    pub fn converged(&self, tol: f64) -> bool {
        self.max_relative_change <= tol
    }
}

/// Kick strengths `[k_min, k_max]` for which the stable period-one mode
/// exists: `τη <= k̃` and `k̃|cos θ0| <= 4`.
pub fn existence_range(params: &RotorParams) -> Option<(f64, f64)> {
    let eps = params.epsilon().abs();
    if eps == 0.0 {
        return None;
    }
    let te = params.tau_eta();
    Some((te / eps, (16.0 + te * te).sqrt() / eps))
}

/// Island area for every `k` in `ks`, other parameters from `params`.
pub fn island_area_scan(params: &RotorParams, ks: &[f64], spec: &IslandSpec) -> Result<Vec<ScanPoint>> {
    ks.par_iter()
        .map(|&k| {
            let p = params.with_k(k)?;
            let mp = MapParams::from_rotor(&p)?;
            let isl = island_boundary(&mp, spec)?;
            Ok(ScanPoint {
                k,
                k_tilde: p.k_tilde(),
                status: isl.status,
                area: isl.area,
                invalid_bins: isl.invalid_bins(),
                max_relative_change: isl.diagnostics.map_or(0.0, |d| d.max_relative_change(isl.area)),
                diagnostics: isl.diagnostics,
            })
        })
        .collect()
}

/// True when `values` rises to a single maximum and then falls, allowing
/// reversals up to `tol` times the maximum.
pub fn is_unimodal(values: &[f64], tol: f64) -> bool {
    let Some((peak, &max)) = values.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)) else {
        return true;
    };
    let slack = tol * max;
    let rising = values[..=peak].windows(2).all(|w| w[1] >= w[0] - slack);
    let falling = values[peak..].windows(2).all(|w| w[1] <= w[0] + slack);
    rising && falling
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::map::Sign;

    #[test]
    fn interpolation_wraps_around() {
        let mut env = vec![f64::INFINITY, 1.0, f64::INFINITY, 3.0, f64::INFINITY];
        let valid = fill_circular(&mut env);
        assert_eq!(valid, vec![false, true, false, true, false]);
        assert_eq!(env[2], 2.0);
        // gap from bin 3 (3.0) to bin 1 (1.0) across the origin, 3 steps
        assert!((env[4] - (3.0 - 2.0 / 3.0)).abs() < 1e-15);
        assert!((env[0] - (3.0 - 4.0 / 3.0)).abs() < 1e-15);
    }

    #[test]
    fn missing_island_has_zero_area() {
        let mp = MapParams::new(0.1, 0.2, Sign::Minus).unwrap();
        let isl = island_boundary(&mp, &IslandSpec::default()).unwrap();
        assert_eq!(isl.status, IslandStatus::NoFixedPoint);
        assert_eq!(isl.area, 0.0);
        let mp = MapParams::new(5.0, 0.0, Sign::Minus).unwrap();
        let isl = island_boundary(&mp, &IslandSpec::default()).unwrap();
        assert_eq!(isl.status, IslandStatus::Unstable);
        assert_eq!(isl.area, 0.0);
    }

    #[test]
    fn unimodality() {
        assert!(is_unimodal(&[0.0, 1.0, 3.0, 2.0, 0.5], 0.0));
        assert!(!is_unimodal(&[0.0, 1.0, 3.0, 2.0, 2.5], 0.0));
        assert!(is_unimodal(&[0.0, 1.0, 3.0, 2.0, 2.05], 0.02));
        assert!(is_unimodal(&[], 0.0));
    }

    #[test]
    fn polar_coordinates_wrap() {
        let (phi, r) = polar_about(PhasePoint::new(0.1, TAU - 0.1), TAU - 0.1);
        assert!((r - 0.2_f64.hypot(0.1)).abs() < 1e-12);
        assert!(phi > 1.5 * PI);
    }
}
