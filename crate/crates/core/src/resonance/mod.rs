//! Closed-form dynamics at exact quantum resonance.

pub mod analytic;
pub mod bessel;
pub mod regime;
pub mod weyl;

pub use analytic::{analytic_fidelity, analytic_overlap, analytic_state, state_from_weyl};
pub use bessel::{bessel_j, bessel_j0, bessel_j_orders};
pub use regime::{
    classify_regime, rational_approximation, EtaClass, EtaInput, FidelityLaw,
    RationalityTolerance, RegimeReport,
};
pub use weyl::{
    rational_decomposition, weyl_partial_sums, weyl_phase_phi, weyl_series, weyl_series_rational,
    RationalDecomposition, WeylSeries,
};
