use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::resonance::bessel::{bessel_j0, bessel_j_orders};
use crate::resonance::weyl::weyl_series;
use crate::rotor::{QuantumState, RotorParams};

/// Plane wave `|n0>` after `t` kicks at exact resonance:
/// `<n|psi> = e^{i n arg W_t} (-i)^{n0-n} J_{n0-n}(k|W_t|)`, up to a global phase.
pub fn analytic_state(params: &RotorParams, n0: i64, t: u64) -> Result<QuantumState> {
    if !params.is_resonant() {
        return Err(Error::invalid(
            "analytic state requires exact resonance (epsilon = 0)",
        ));
    }
    if t == 0 {
        return Ok(QuantumState::plane_wave(n0));
    }
    let series = weyl_series(params.eta(), params.beta(), params.l(), t as usize)?;
    let w = series.w[t as usize];
    Ok(state_from_weyl(params.k(), w, n0))
}

/// Resonant state for a given `W_t`.
pub fn state_from_weyl(k: f64, w: Complex64, n0: i64) -> QuantumState {
    let x = k * w.norm();
    let reach = (x + 40.0 + 10.0 * x.cbrt()).ceil() as i64;
    let mut state = QuantumState::zeros_covering(n0 - reach, n0 + reach);
    let bessel = bessel_j_orders(x, reach as usize).expect("order sweep within domain");
    let arg = w.arg();
    let n_min = state.n_min();
    for (j, a) in state.amplitudes_mut().iter_mut().enumerate() {
        let n = n_min + j as i64;
        let m = n0 - n;
        let mag = m.unsigned_abs() as usize;
        if mag > reach as usize {
            continue;
        }
        // J_{-m} = (-1)^m J_m
        let jm = if m < 0 && mag % 2 == 1 {
            -bessel[mag]
        } else {
            bessel[mag]
        };
        // (-i)^m
        let rot = match m.rem_euclid(4) {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, -1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, 1.0),
        };
        let (s, c) = (n as f64 * arg).sin_cos();
        *a = Complex64::new(c, s) * rot * jm;
    }
    state
}

/// Single-rotor fidelity `J0(Δk |W_t|)²` at exact resonance.
#[inline]
pub fn analytic_fidelity(delta_k: f64, w_abs: f64) -> f64 {
    let j = bessel_j0(delta_k * w_abs);
    j * j
}

/// Overlap `<U_1^t psi | U_2^t psi> = J0(Δk |W_t|)` (real at resonance).
#[inline]
pub fn analytic_overlap(delta_k: f64, w_abs: f64) -> f64 {
    bessel_j0(delta_k * w_abs)
}
