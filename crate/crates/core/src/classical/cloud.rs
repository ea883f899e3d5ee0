//! Overlap measures of two islands estimated with a cloud of classical points.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::classical::island::Island;
use crate::classical::map::{map_step_torus, MapParams, PhasePoint};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CloudSpec {
    pub n_points: usize,
    /// Centre; `None` uses the first island's fixed point.
    pub center: Option<PhasePoint>,
    /// Widths; `None` uses a third of the first island's mean radius.
    pub sigma_theta: Option<f64>,
    pub sigma_j: Option<f64>,
    pub n_kicks: u64,
    pub seed: u64,
}

impl Default for CloudSpec {
    fn default() -> Self {
        CloudSpec {
            n_points: 10_000,
            center: None,
            sigma_theta: None,
            sigma_j: None,
            n_kicks: 500,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OverlapMeasures {
    /// μ(A1 \ A2)
    pub mu_1_only: f64,
    /// μ(A2 \ A1)
    pub mu_2_only: f64,
    /// μ(A1 ∩ A2)
    pub mu_both: f64,
    /// Area the trapped fractions are scaled by, `2π σθ σJ`.
    pub reference_area: f64,
    pub n_points: usize,
    pub sigma_theta: f64,
    pub sigma_j: f64,
}

impl OverlapMeasures {
    pub fn total(&self) -> f64 {
        self.mu_1_only + self.mu_2_only + self.mu_both
    }
}

/// True when the orbit of `p` under `mp` stays inside `island` for `n_kicks`.
pub fn stays_trapped(p: PhasePoint, mp: &MapParams, island: &Island, n_kicks: u64) -> bool {
    if !island.contains(p) {
        return false;
    }
    let mut q = p;
    for _ in 0..n_kicks {
        q = map_step_torus(q, mp);
        if !island.contains(q) {
            return false;
        }
    }
    true
}

/// Seeded Gaussian cloud on the torus.
pub fn sample_cloud(center: PhasePoint, sigma_theta: f64, sigma_j: f64, n: usize, seed: u64) -> Result<Vec<PhasePoint>> {
    if !(sigma_theta > 0.0 && sigma_j > 0.0) {
        return Err(Error::invalid("cloud widths must be > 0"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nt = Normal::new(center.theta, sigma_theta).map_err(|e| Error::invalid(e.to_string()))?;
    let nj = Normal::new(center.j, sigma_j).map_err(|e| Error::invalid(e.to_string()))?;
    Ok((0..n)
        .map(|_| {
            let th = nt.sample(&mut rng);
            let j = nj.sample(&mut rng);
            PhasePoint::new(th, j).on_torus()
        })
        .collect())
}

/// Measures of `A1\A2`, `A2\A1`, `A1∩A2` from dual trapping of a cloud:
/// each point is iterated independently under both maps.
pub fn cloud_measures(
    mp1: &MapParams,
    mp2: &MapParams,
    islands: (&Island, &Island),
    spec: &CloudSpec,
) -> Result<OverlapMeasures> {
    let (a1, a2) = islands;
    if !a1.exists() {
        return Err(Error::invalid("cloud measures need a stable first island"));
    }
    if spec.n_points == 0 {
        return Err(Error::invalid("cloud needs n_points >= 1"));
    }
    let default_sigma = a1.mean_radius() / 3.0;
    let sigma_theta = spec.sigma_theta.unwrap_or(default_sigma);
    let sigma_j = spec.sigma_j.unwrap_or(default_sigma);
    let center = spec.center.unwrap_or(PhasePoint::new(a1.theta0, 0.0));
    let cloud = sample_cloud(center, sigma_theta, sigma_j, spec.n_points, spec.seed)?;
    let flags: Vec<(bool, bool)> = cloud
        .par_iter()
        .map(|&p| {
            (
                stays_trapped(p, mp1, a1, spec.n_kicks),
                stays_trapped(p, mp2, a2, spec.n_kicks),
            )
        })
        .collect();
    let count = |f: &dyn Fn(&(bool, bool)) -> bool| flags.iter().filter(|x| f(x)).count();
    let n1 = count(&|x| x.0 && !x.1);
    let n2 = count(&|x| !x.0 && x.1);
    let nb = count(&|x| x.0 && x.1);
    let reference_area = TAU * sigma_theta * sigma_j;
    let scale = reference_area / spec.n_points as f64;
    Ok(OverlapMeasures {
        mu_1_only: n1 as f64 * scale,
        mu_2_only: n2 as f64 * scale,
        mu_both: nb as f64 * scale,
        reference_area,
        n_points: spec.n_points,
        sigma_theta,
        sigma_j,
    })
}
