use serde::{Deserialize, Serialize};

use crate::classical::map::mode_velocity;
use crate::error::{Error, Result};
use crate::rotor::params::RotorParams;
use crate::rotor::state::QuantumState;

/// Default half-width of the co-moving survival window.
pub const DEFAULT_HALF_WIDTH: i64 = 15;

/// Momentum window that follows an accelerator mode, `n(t) = n0 + v t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurvivalWindow {
    pub n0: f64,
    pub velocity: f64,
    pub half_width: i64,
}

impl SurvivalWindow {
    pub fn new(n0: f64, velocity: f64, half_width: i64) -> Result<Self> {
        if half_width < 1 {
            return Err(Error::invalid("survival half-width must be >= 1"));
        }
        Ok(SurvivalWindow {
            n0,
            velocity,
            half_width,
        })
    }

    /// Window riding the mode of `params`; stationary at exact resonance.
    pub fn for_mode(params: &RotorParams, n0: f64) -> Self {
        let velocity = if params.epsilon() == 0.0 {
            0.0
        } else {
            mode_velocity(params).unwrap_or(0.0)
        };
        SurvivalWindow {
            n0,
            velocity,
            half_width: DEFAULT_HALF_WIDTH,
        }
    }

    pub fn bounds(&self, t: u64) -> (i64, i64) {
        let c = (self.n0 + self.velocity * t as f64).round() as i64;
        (c - self.half_width, c + self.half_width)
    }
}

/// Probability in the window at kick `t`, with a flag set when the window
/// stuck out of the lattice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Survival {
    pub value: f64,
    pub clipped: bool,
}

pub fn survival_probability(state: &QuantumState, t: u64, window: &SurvivalWindow) -> Survival {
    let (lo, hi) = window.bounds(t);
    let (value, clipped) = state.mass_in(lo, hi);
    Survival {
        value: value.clamp(0.0, 1.0),
        clipped,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObservableRecord {
    pub t: u64,
    pub mean_momentum: f64,
    /// ½⟨(n + β + η t)²⟩
    pub energy: f64,
    pub survival: f64,
    pub survival_clipped: bool,
}

pub fn observables(
    state: &QuantumState,
    t: u64,
    params: &RotorParams,
    window: &SurvivalWindow,
) -> ObservableRecord {
    let shift = params.beta() + params.eta() * t as f64;
    let (mut p0, mut p1, mut p2) = (0.0, 0.0, 0.0);
    for (n, a) in state.iter() {
        let w = a.norm_sqr();
        let n = n as f64;
        p0 += w;
        p1 += w * n;
        p2 += w * (n + shift) * (n + shift);
    }
    let s = survival_probability(state, t, window);
    ObservableRecord {
        t,
        mean_momentum: p1 / p0,
        energy: 0.5 * p2 / p0,
        survival: s.value,
        survival_clipped: s.clipped,
    }
}

/// Follows a wave packet by re-centring a momentum window on the packet's
/// own centroid at every update, without assuming its velocity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PacketTracker {
    center: f64,
    half_width: i64,
}

impl PacketTracker {
    pub fn new(n0: f64, half_width: i64) -> Result<Self> {
        if half_width < 1 {
            return Err(Error::invalid("tracker half-width must be >= 1"));
        }
        Ok(PacketTracker { center: n0, half_width })
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    /// Re-centres on the mean momentum inside the current window and
    /// returns it. The window is left in place if it holds no probability.
    pub fn update(&mut self, state: &QuantumState) -> f64 {
        let c = self.center.round() as i64;
        let (mut p0, mut p1) = (0.0, 0.0);
        for n in c - self.half_width..=c + self.half_width {
            let w = state.amplitude(n).norm_sqr();
            p0 += w;
            p1 += w * n as f64;
        }
        if p0 > 0.0 {
            self.center = p1 / p0;
        }
        self.center
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn plane_wave_momentum() {
        let p = RotorParams::resonant(1, 1.0, 0.0, 0.0).unwrap();
        let s = QuantumState::plane_wave(7);
        let w = SurvivalWindow::for_mode(&p, 7.0);
        let r = observables(&s, 0, &p, &w);
        assert_eq!(r.mean_momentum, 7.0);
        assert_eq!(r.energy, 24.5);
        assert_eq!(r.survival, 1.0);
        assert!(!r.survival_clipped);
    }

    #[test]
    fn symmetric_state_has_zero_mean() {
        let p = RotorParams::resonant(1, 1.0, 0.0, 0.0).unwrap();
        let mut amps = vec![Complex64::new(0.0, 0.0); 64];
        for n in -5_i64..=5 {
            amps[(n + 32) as usize] = Complex64::new((-(n * n) as f64 / 7.0).exp(), 0.3);
        }
        let mut s = QuantumState::from_amplitudes(-32, amps).unwrap();
        s.normalize().unwrap();
        let r = observables(&s, 3, &p, &SurvivalWindow::for_mode(&p, 0.0));
        assert!(r.mean_momentum.abs() < 1e-15);
    }

    #[test]
    fn window_follows_velocity() {
        let w = SurvivalWindow::new(10.2, 1.5, 15).unwrap();
        assert_eq!(w.bounds(0), (-5, 25));
        assert_eq!(w.bounds(10), (10, 40));
        assert!(SurvivalWindow::new(0.0, 0.0, 0).is_err());
    }

    #[test]
    fn tracker_finds_displaced_packet() {
        let s = QuantumState::plane_wave(9);
        let mut tr = PacketTracker::new(0.0, 15).unwrap();
        assert_eq!(tr.update(&s), 9.0);
        let mut far = PacketTracker::new(-40.0, 15).unwrap();
        assert_eq!(far.update(&s), -40.0);
    }
}
