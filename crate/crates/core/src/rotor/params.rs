use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// Physical parameters of one β-rotor (units with ħ = 1).
///
/// The kicking period is stored through its resonance decomposition
/// `tau = 2π·l + epsilon`; `epsilon == 0.0` marks exact resonance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotorParams {
    tau: f64,
    l: u32,
    epsilon: f64,
    k: f64,
    eta: f64,
    beta: f64,
}

impl RotorParams {
    /// Parameters from an explicit period; the detuning is `tau - 2π·l`.
    pub fn from_tau(tau: f64, l: u32, k: f64, eta: f64, beta: f64) -> Result<Self> {
        let p = RotorParams {
            tau,
            l,
            epsilon: tau - TAU * l as f64,
            k,
            eta,
            beta,
        };
        p.validate()?;
        Ok(p)
    }

    /// Parameters at detuning `epsilon` from the resonance of order `l`.
    pub fn near_resonance(l: u32, epsilon: f64, k: f64, eta: f64, beta: f64) -> Result<Self> {
        let p = RotorParams {
            tau: TAU * l as f64 + epsilon,
            l,
            epsilon,
            k,
            eta,
            beta,
        };
        p.validate()?;
        Ok(p)
    }

    /// Exactly resonant parameters, `tau = 2π·l`.
    pub fn resonant(l: u32, k: f64, eta: f64, beta: f64) -> Result<Self> {
        Self::near_resonance(l, 0.0, k, eta, beta)
    }

    fn validate(&self) -> Result<()> {
        if self.l == 0 {
            return Err(Error::invalid("resonance order l must be >= 1"));
        }
        if !(self.tau.is_finite() && self.tau > 0.0) {
            return Err(Error::invalid(format!("tau must be > 0, got {}", self.tau)));
        }
        if !(self.k.is_finite() && self.k >= 0.0) {
            return Err(Error::invalid(format!("k must be >= 0, got {}", self.k)));
        }
        if !(self.eta.is_finite() && self.eta >= 0.0) {
            return Err(Error::invalid(format!("eta must be >= 0, got {}", self.eta)));
        }
        if !(0.0..1.0).contains(&self.beta) {
            return Err(Error::invalid(format!(
                "beta must lie in [0, 1), got {}",
                self.beta
            )));
        }
        Ok(())
    }

    pub fn with_k(self, k: f64) -> Result<Self> {
        let p = RotorParams { k, ..self };
        p.validate()?;
        Ok(p)
    }

    pub fn with_beta(self, beta: f64) -> Result<Self> {
        let p = RotorParams { beta, ..self };
        p.validate()?;
        Ok(p)
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }
    pub fn l(&self) -> u32 {
        self.l
    }
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
    pub fn k(&self) -> f64 {
        self.k
    }
    pub fn eta(&self) -> f64 {
        self.eta
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Rescaled kick strength `|epsilon|·k`.
    pub fn k_tilde(&self) -> f64 {
        self.epsilon.abs() * self.k
    }

    pub fn tau_eta(&self) -> f64 {
        self.tau * self.eta
    }

    pub fn is_resonant(&self) -> bool {
        self.epsilon == 0.0
    }

    /// True when `other` describes the same dynamics up to the kick strength.
    pub fn same_except_k(&self, other: &RotorParams) -> bool {
        self.tau == other.tau
            && self.l == other.l
            && self.epsilon == other.epsilon
            && self.eta == other.eta
            && self.beta == other.beta
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decomposition_is_consistent() {
        let p = RotorParams::from_tau(5.86, 1, 0.7 * std::f64::consts::PI, 0.0925, 0.49).unwrap();
        assert_eq!(p.tau() - TAU - p.epsilon(), 0.0);
        assert_eq!(p.k_tilde(), p.epsilon().abs() * p.k());
        assert!(p.epsilon() < 0.0);

        let q = RotorParams::near_resonance(2, -0.5, 1.0, 0.001, 0.1).unwrap();
        assert!((q.tau() - 2.0 * TAU - q.epsilon()).abs() < 4.0 * f64::EPSILON * q.tau());
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(RotorParams::resonant(1, 1.0, 0.1, 1.0).is_err());
        assert!(RotorParams::resonant(1, 1.0, 0.1, -0.1).is_err());
        assert!(RotorParams::resonant(0, 1.0, 0.1, 0.1).is_err());
        assert!(RotorParams::resonant(1, -1.0, 0.1, 0.1).is_err());
        assert!(RotorParams::from_tau(-1.0, 1, 1.0, 0.1, 0.1).is_err());
    }
}
