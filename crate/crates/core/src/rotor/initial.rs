use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

use crate::classical::map::{fixed_point, MapParams};
use crate::error::{Error, Result};
use crate::rotor::params::RotorParams;
use crate::rotor::state::{QuantumState, StateDescriptor, DEFAULT_MARGIN};

/// Default Gaussian width σ² of the accelerator-mode initial state.
pub const DEFAULT_SIGMA2: f64 = 0.25;

/// Gaussian state sitting on an accelerator mode, with its centre.
#[derive(Debug, Clone)]
pub struct AcceleratorState {
    pub state: QuantumState,
    /// Angle of the stable fixed point the packet sits on.
    pub theta0: f64,
    /// Momentum centre (real-valued).
    pub n0: f64,
    pub sigma2: f64,
    pub m: i64,
}

impl AcceleratorState {
    pub fn descriptor(&self) -> StateDescriptor {
        StateDescriptor::Gaussian {
            n0: self.n0,
            theta0: self.theta0,
            sigma2: self.sigma2,
            m: self.m,
        }
    }
}

/// Momentum of the accelerator mode at `t = 0` on the J-torus sheet `m`.
pub fn mode_center(params: &RotorParams, m: i64) -> Result<f64> {
    let eps = params.epsilon();
    if eps == 0.0 {
        return Err(Error::invalid("accelerator modes need a non-zero detuning"));
    }
    let tau = params.tau();
    let offset = PI * params.l() as f64 + tau * (params.beta() + params.eta() / 2.0);
    Ok(TAU * m as f64 / eps.abs() - offset / eps)
}

/// Sheet index `m` giving the smallest non-negative mode centre.
pub fn smallest_nonnegative_sheet(params: &RotorParams) -> Result<i64> {
    let at_zero = mode_center(params, 0)?;
    let spacing = TAU / params.epsilon().abs();
    Ok((-at_zero / spacing).ceil() as i64)
}

/// Gaussian `exp(-(n-n0)²/4σ²)` centred on the stable accelerator mode.
///
/// The packet is placed at angle θ0 in the `<θ|n> = e^{inθ}/√(2π)`
/// convention, i.e. with amplitude phase `e^{-i n θ0}`.
pub fn gaussian_accelerator_state(
    params: &RotorParams,
    m: i64,
    sigma2: f64,
) -> Result<AcceleratorState> {
    if !(sigma2.is_finite() && sigma2 > 0.0) {
        return Err(Error::invalid(format!("sigma2 must be > 0, got {sigma2}")));
    }
    let mp = MapParams::from_rotor(params)?;
    let fp = fixed_point(&mp).ok_or(Error::NoAcceleratorMode {
        tau_eta: mp.tau_eta,
        k_tilde: mp.k_tilde,
    })?;
    let n0 = mode_center(params, m)?;
    let sigma = sigma2.sqrt();
    let reach = (6.0 * sigma).ceil() as i64 + DEFAULT_MARGIN;
    let centre = n0.round() as i64;
    let mut state = QuantumState::zeros_covering(centre - reach, centre + reach);
    let n_min = state.n_min();
    for (j, a) in state.amplitudes_mut().iter_mut().enumerate() {
        let n = (n_min + j as i64) as f64;
        let d = n - n0;
        let (s, c) = (-n * fp.theta0).sin_cos();
        *a = Complex64::new(c, s) * (-d * d / (4.0 * sigma2)).exp();
    }
    state.normalize()?;
    Ok(AcceleratorState {
        state,
        theta0: fp.theta0,
        n0,
        sigma2,
        m,
    })
}
