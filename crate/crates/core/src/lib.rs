pub mod classical;
pub mod cli;
pub mod dd;
pub mod decay;
pub mod error;
pub mod fidelity;
pub mod resonance;
pub mod rotor;

pub use error::{Error, Result};
