//! Decay fits, the tunneling ansatz and its comparison to smoothed fidelity.

pub mod ansatz;
pub mod fit;
pub mod pipeline;

pub use ansatz::{
    ansatz_eval, calibrate_ansatz, compare, split_regimes, AnsatzModel, Comparison, RegimeSplit,
    CALIBRATION_WINDOW, TWO_REGIME_RATIO,
};
pub use fit::{
    fit_exponential, fit_power_law, linear_fit, DecayFit, DecayModel, LogCorrection, MIN_SAMPLES,
};
pub use pipeline::{ansatz_pipeline, survival_rate, AnsatzPipelineSpec, AnsatzReport};
