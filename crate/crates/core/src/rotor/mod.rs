//! β-rotor domain types, Floquet propagation and observables.

pub mod initial;
pub mod observables;
pub mod params;
pub mod propagator;
pub mod state;

pub use initial::{
    gaussian_accelerator_state, mode_center, smallest_nonnegative_sheet, AcceleratorState,
    DEFAULT_SIGMA2,
};
pub use observables::{
    observables, survival_probability, ObservableRecord, PacketTracker, Survival, SurvivalWindow,
    DEFAULT_HALF_WIDTH,
};
pub use params::RotorParams;
pub use propagator::{floquet_step, FreePhase, KickOperator, Propagator, PropagatorConfig};
pub use state::{QuantumState, StateDescriptor};
