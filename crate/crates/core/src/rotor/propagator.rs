//! One-kick Floquet propagation in the momentum basis.
//!
//! A step applies `exp(-i k cos θ) · exp(-i τ/2 (N + β + η t + η/2)^2)`.
//! The free part is diagonal; its phase is reduced modulo one turn in
//! double-double arithmetic, so the step stays accurate when the quadratic
//! argument reaches 1e10 and beyond. The kick is a cyclic convolution
//! carried out with a pair of FFTs.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::dd::{Dd, TWO_PI};
use crate::error::{Error, Result};
use crate::rotor::params::RotorParams;
use crate::rotor::state::QuantumState;

/// Sites per exact phase re-seed in the free evolution.
const PHASE_BLOCK: usize = 16;

/// Window management for the truncated lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagatorConfig {
    /// Hard cap on the lattice length.
    pub max_sites: usize,
    /// Outermost sites inspected by the tail guard.
    pub guard_sites: usize,
    /// Largest tolerated probability in the guarded sites.
    pub tail_tol: f64,
}

impl Default for PropagatorConfig {
    fn default() -> Self {
        PropagatorConfig {
            max_sites: 1 << 20,
            guard_sites: 8,
            tail_tol: 1e-12,
        }
    }
}

#[inline]
fn cis_turns(turns: Dd) -> Complex64 {
    let (s, c) = (-turns.turns_to_radians()).sin_cos();
    Complex64::new(c, s)
}

/// Diagonal free evolution `exp(-i τ/2 (n + β + η t + η/2)^2)`.
#[derive(Debug, Clone)]
pub struct FreePhase {
    /// τ/(4π) = l/2 + ε/(4π), in turns per unit x².
    coeff: Dd,
    beta: f64,
    eta: f64,
    /// exp(-2πi · 2·coeff)
    step_ratio: Complex64,
}

impl FreePhase {
    pub fn new(params: &RotorParams) -> Self {
        let coeff = Dd::from_f64(0.5 * params.l() as f64)
            + Dd::from_f64(params.epsilon()).div(TWO_PI.mul_f64(2.0));
        FreePhase {
            coeff,
            beta: params.beta(),
            eta: params.eta(),
            step_ratio: cis_turns(coeff.mul_f64(2.0).fract()),
        }
    }

    /// β + η (t + 1/2), exactly rounded to double-double.
    fn shift(&self, t: u64) -> Dd {
        Dd::prod(self.eta, t as f64 + 0.5) + Dd::from_f64(self.beta)
    }

    /// Phase in turns for momentum `n` at kick counter `t`.
    pub fn turns(&self, n: i64, t: u64) -> Dd {
        let x = Dd::from_f64(n as f64) + self.shift(t);
        (self.coeff * (x * x)).fract()
    }

    /// Fills `out[j]` with the free factor at `n = n_min + j`.
    pub fn factors(&self, n_min: i64, t: u64, out: &mut [Complex64]) {
        let c = self.shift(t);
        for (b, chunk) in out.chunks_mut(PHASE_BLOCK).enumerate() {
            let x0 = Dd::from_f64((n_min + (b * PHASE_BLOCK) as i64) as f64) + c;
            let mut z = cis_turns((self.coeff * (x0 * x0)).fract());
            // ratio between consecutive sites: coeff·(2x + 1)
            let mut r = cis_turns((self.coeff * (x0.mul_f64(2.0) + Dd::from_f64(1.0))).fract());
            for slot in chunk.iter_mut() {
                *slot = z;
                z *= r;
                r *= self.step_ratio;
            }
        }
    }
}

/// The kick `exp(-i k cos θ)` on a lattice of fixed length.
pub struct KickOperator {
    k: f64,
    factors: Vec<Complex64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
}

impl KickOperator {
    pub fn new(k: f64, len: usize, planner: &mut FftPlanner<f64>) -> Self {
        let forward = planner.plan_fft_forward(len);
        let inverse = planner.plan_fft_inverse(len);
        let scratch_len = forward
            .get_inplace_scratch_len()
            .max(inverse.get_inplace_scratch_len());
        let norm = 1.0 / len as f64;
        let factors = (0..len)
            .map(|j| {
                let theta = std::f64::consts::TAU * j as f64 / len as f64;
                let (s, c) = (-k * theta.cos()).sin_cos();
                Complex64::new(c * norm, s * norm)
            })
            .collect();
        KickOperator {
            k,
            factors,
            forward,
            inverse,
            scratch: vec![Complex64::new(0.0, 0.0); scratch_len],
        }
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn apply(&mut self, amps: &mut [Complex64]) {
        debug_assert_eq!(amps.len(), self.factors.len());
        // momentum -> angle: sum_n psi_n e^{i n θ_j}
        self.inverse.process_with_scratch(amps, &mut self.scratch);
        for (a, f) in amps.iter_mut().zip(&self.factors) {
            *a *= f;
        }
        self.forward.process_with_scratch(amps, &mut self.scratch);
    }
}

/// Expands the lattice until the guarded tails are below tolerance.
/// Returns true when the lattice changed.
pub(crate) fn guard_tails(
    state: &mut QuantumState,
    config: &PropagatorConfig,
    t: u64,
) -> Result<bool> {
    let (left, right) = state.tail_mass(config.guard_sites);
    let grow_left = left > config.tail_tol;
    let grow_right = right > config.tail_tol;
    if !(grow_left || grow_right) {
        return Ok(false);
    }
    if state.len() * 2 > config.max_sites {
        return Err(Error::BasisOverflow {
            t,
            cap: config.max_sites,
        });
    }
    state.grow(grow_left, grow_right);
    Ok(true)
}

/// Reusable propagator for one parameter set. Holds the FFT plans and kick
/// factors for the current lattice length.
pub struct Propagator {
    params: RotorParams,
    config: PropagatorConfig,
    free: FreePhase,
    planner: FftPlanner<f64>,
    kick: Option<KickOperator>,
    phase_buf: Vec<Complex64>,
}

impl Propagator {
    pub fn new(params: &RotorParams) -> Self {
        Self::with_config(params, PropagatorConfig::default())
    }

    pub fn with_config(params: &RotorParams, config: PropagatorConfig) -> Self {
        Propagator {
            params: *params,
            config,
            free: FreePhase::new(params),
            planner: FftPlanner::new(),
            kick: None,
            phase_buf: Vec::new(),
        }
    }

    pub fn params(&self) -> &RotorParams {
        &self.params
    }

    pub fn config(&self) -> &PropagatorConfig {
        &self.config
    }

    /// Applies the Floquet operator with kick counter `t` in place.
    pub fn step(&mut self, state: &mut QuantumState, t: u64) -> Result<()> {
        guard_tails(state, &self.config, t)?;
        let len = state.len();
        if self.phase_buf.len() != len {
            self.phase_buf.resize(len, Complex64::new(0.0, 0.0));
        }
        self.free.factors(state.n_min(), t, &mut self.phase_buf);
        let amps = state.amplitudes_mut();
        for (a, f) in amps.iter_mut().zip(&self.phase_buf) {
            *a *= f;
        }
        if self.params.k() != 0.0 {
            let kick = match &mut self.kick {
                Some(k) if k.len() == len => k,
                slot => slot.insert(KickOperator::new(self.params.k(), len, &mut self.planner)),
            };
            kick.apply(amps);
        }
        guard_tails(state, &self.config, t)?;
        Ok(())
    }

    /// Applies kicks `t_start, t_start+1, ..., t_start+count-1`.
    pub fn evolve(&mut self, state: &mut QuantumState, t_start: u64, count: u64) -> Result<()> {
        for t in t_start..t_start + count {
            self.step(state, t)?;
        }
        Ok(())
    }
}

/// One Floquet step `U(t)|psi>` returning a new state.
pub fn floquet_step(state: &QuantumState, params: &RotorParams, t: u64) -> Result<QuantumState> {
    let mut out = state.clone();
    Propagator::new(params).step(&mut out, t)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_recurrence_matches_direct_phase() {
        let p = RotorParams::from_tau(5.86, 1, 2.0, 0.0925, 0.49).unwrap();
        let free = FreePhase::new(&p);
        let n_min = 123_456;
        let t = 98_765;
        let mut buf = vec![Complex64::new(0.0, 0.0); 256];
        free.factors(n_min, t, &mut buf);
        for (j, z) in buf.iter().enumerate() {
            let direct = cis_turns(free.turns(n_min + j as i64, t));
            assert!((z - direct).norm() < 5e-14, "site {j}: {}", (z - direct).norm());
        }
    }

    #[test]
    fn free_evolution_is_diagonal() {
        let p = RotorParams::from_tau(5.86, 1, 0.0, 0.3, 0.2).unwrap();
        let s = QuantumState::plane_wave(4);
        let out = floquet_step(&s, &p, 17).unwrap();
        assert!((out.amplitude(4).norm() - 1.0).abs() < 1e-15);
        assert_eq!(out.norm_sqr(), out.amplitude(4).norm_sqr());
    }

    #[test]
    fn overflow_names_the_kick() {
        let p = RotorParams::resonant(1, 3.0, 0.0, 0.5).unwrap();
        let config = PropagatorConfig {
            max_sites: 256,
            ..Default::default()
        };
        let mut prop = Propagator::with_config(&p, config);
        let mut s = QuantumState::plane_wave(0);
        let err = prop.evolve(&mut s, 0, 1000).unwrap_err();
        match err {
            Error::BasisOverflow { t, cap } => {
                assert_eq!(cap, 256);
                assert!(t > 0 && t < 1000);
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
