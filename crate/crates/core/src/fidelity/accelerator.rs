use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fidelity::coevolve::CoEvolution;
use crate::fidelity::trace::{FidelityTrace, TraceMeta};
use crate::rotor::{
    gaussian_accelerator_state, smallest_nonnegative_sheet, survival_probability, PacketTracker,
    RotorParams, SurvivalWindow, DEFAULT_HALF_WIDTH, DEFAULT_SIGMA2,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AcceleratorRunSpec {
    pub kicks: u64,
    /// Sheet of the mode centre; `None` picks the smallest non-negative one.
    pub m: Option<i64>,
    pub sigma2: f64,
    pub half_width: i64,
}

impl Default for AcceleratorRunSpec {
    fn default() -> Self {
        AcceleratorRunSpec {
            kicks: 100_000,
            m: None,
            sigma2: DEFAULT_SIGMA2,
            half_width: DEFAULT_HALF_WIDTH,
        }
    }
}

/// Fidelity and both survival probabilities of one two-branch run started
/// on the accelerator mode of the first branch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcceleratorRun {
    pub fidelity: FidelityTrace,
    pub survival1: FidelityTrace,
    pub survival2: FidelityTrace,
    /// Centroid of the packet trapped in the first branch, per kick.
    pub packet_center: Vec<f64>,
    pub n0: f64,
    pub theta0: f64,
    pub window: SurvivalWindow,
    /// True if a survival window ever left the lattice.
    pub clipped: bool,
    pub final_sites: usize,
}

pub fn run_accelerator_pair(
    params1: &RotorParams,
    params2: &RotorParams,
    spec: &AcceleratorRunSpec,
) -> Result<AcceleratorRun> {
    let m = match spec.m {
        Some(m) => m,
        None => smallest_nonnegative_sheet(params1)?,
    };
    let acc = gaussian_accelerator_state(params1, m, spec.sigma2)?;
    let window = SurvivalWindow::new(acc.n0, SurvivalWindow::for_mode(params1, acc.n0).velocity, spec.half_width)?;
    let mut tracker = PacketTracker::new(acc.n0, spec.half_width)?;
    let mut run = CoEvolution::new(params1, params2, &acc.state)?;
    let n = spec.kicks as usize + 1;
    let (mut f, mut s1, mut s2, mut c) = (
        Vec::with_capacity(n),
        Vec::with_capacity(n),
        Vec::with_capacity(n),
        Vec::with_capacity(n),
    );
    let mut clipped = false;
    for t in 0..=spec.kicks {
        if t > 0 {
            run.step()?;
        }
        let (a, b) = run.branches();
        let (x, y) = (survival_probability(a, t, &window), survival_probability(b, t, &window));
        clipped |= x.clipped || y.clipped;
        f.push(if t == 0 { 1.0 } else { run.fidelity() });
        s1.push(x.value);
        s2.push(y.value);
        c.push(tracker.update(a));
    }
    let meta = TraceMeta {
        params1: Some(*params1),
        params2: Some(*params2),
        initial_state: Some(acc.descriptor()),
        ..Default::default()
    };
    let final_sites = run.branches().0.len();
    Ok(AcceleratorRun {
        fidelity: FidelityTrace::from_values(f).with_meta(meta.clone()),
        survival1: FidelityTrace::from_values(s1).with_meta(meta.clone()),
        survival2: FidelityTrace::from_values(s2).with_meta(meta),
        packet_center: c,
        n0: acc.n0,
        theta0: acc.theta0,
        window,
        clipped,
        final_sites,
    })
}
