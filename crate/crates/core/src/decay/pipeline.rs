//! From a two-branch accelerator run to a calibrated tunneling ansatz.

use serde::{Deserialize, Serialize};

use crate::classical::{cloud_measures, island_boundary, CloudSpec, IslandSpec, MapParams, OverlapMeasures};
use crate::decay::ansatz::{calibrate_ansatz, compare, AnsatzModel, Comparison, CALIBRATION_WINDOW};
use crate::decay::fit::{fit_exponential, DecayFit};
use crate::error::{Error, Result};
use crate::fidelity::{moving_average, AcceleratorRun, FidelityTrace};
use crate::rotor::RotorParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnsatzPipelineSpec {
    /// Survival fit window; the end is cut where the survival drops below
    /// `survival_floor`.
    pub fit_window: (u64, u64),
    pub survival_floor: f64,
    pub island: IslandSpec,
    pub cloud: CloudSpec,
    pub calibrate_window: (u64, u64),
    pub compare_window: (u64, u64),
    pub smooth: usize,
}

impl Default for AnsatzPipelineSpec {
    fn default() -> Self {
        AnsatzPipelineSpec {
            fit_window: (1000, 100_000),
            survival_floor: 1e-9,
            island: IslandSpec::default(),
            cloud: CloudSpec::default(),
            calibrate_window: CALIBRATION_WINDOW,
            compare_window: (1000, 100_000),
            smooth: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnsatzReport {
    pub gamma1: DecayFit,
    pub gamma2: DecayFit,
    pub area1: f64,
    pub area2: f64,
    pub measures: OverlapMeasures,
    pub model: AnsatzModel,
    pub comparison: Comparison,
    #[serde(skip)]
    pub smoothed: FidelityTrace,
}

/// Exponential fit of a survival trace on `window`, ending before the
/// first sample below `floor`.
pub fn survival_rate(trace: &FidelityTrace, window: (u64, u64), floor: f64) -> Result<DecayFit> {
    let end = trace
        .t
        .iter()
        .zip(&trace.f)
        .find(|(t, f)| **t >= window.0 && **f < floor)
        .map_or(window.1, |(t, _)| (*t).saturating_sub(1).min(window.1));
    fit_exponential(trace, (window.0, end))
}

pub fn ansatz_pipeline(
    run: &AcceleratorRun,
    params1: &RotorParams,
    params2: &RotorParams,
    spec: &AnsatzPipelineSpec,
) -> Result<AnsatzReport> {
    let gamma1 = survival_rate(&run.survival1, spec.fit_window, spec.survival_floor)?;
    let gamma2 = survival_rate(&run.survival2, spec.fit_window, spec.survival_floor)?;
    let (mp1, mp2) = (MapParams::from_rotor(params1)?, MapParams::from_rotor(params2)?);
    let a1 = island_boundary(&mp1, &spec.island)?;
    let a2 = island_boundary(&mp2, &spec.island)?;
    if !(a1.exists() && a2.exists()) {
        return Err(Error::invalid("both kick strengths need a stable accelerator island"));
    }
    let measures = cloud_measures(&mp1, &mp2, (&a1, &a2), &spec.cloud)?;
    let raw = AnsatzModel::new(measures, gamma1.rate_or_slope, gamma2.rate_or_slope)?;
    let smoothed = moving_average(&run.fidelity, spec.smooth);
    let model = calibrate_ansatz(&smoothed, &raw, spec.calibrate_window)?;
    let comparison = compare(&smoothed, &model, spec.compare_window)?;
    Ok(AnsatzReport {
        gamma1,
        gamma2,
        area1: a1.area,
        area2: a2.area,
        measures,
        model,
        comparison,
        smoothed,
    })
}
