//! Two-branch and quasi-momentum-ensemble fidelity, with time averaging.

pub mod accelerator;
pub mod coevolve;
pub mod ensemble;
pub mod smoothing;
pub mod trace;

pub use accelerator::{run_accelerator_pair, AcceleratorRun, AcceleratorRunSpec};
pub use coevolve::{fidelity_single, overlap_series, CoEvolution};
pub use ensemble::{
    analytic_fidelity_trace, analytic_overlaps, ensemble_overlaps, fidelity_ensemble,
    uses_analytic_route, BetaDensity, BetaSampling, EnsembleSpec, InitialStateSpec,
};
pub use smoothing::{moving_average, time_average};
pub use trace::{FidelityTrace, TraceMeta};
