//! The ε-classical map governing near-resonant dynamics, its period-one
//! fixed points and their linear stability.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::rotor::RotorParams;

/// Sign of the detuning ε.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn of(x: f64) -> Sign {
        if x < 0.0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MapParams {
    pub k_tilde: f64,
    pub tau_eta: f64,
    pub sgn_eps: Sign,
}

impl MapParams {
    pub fn new(k_tilde: f64, tau_eta: f64, sgn_eps: Sign) -> Result<Self> {
        if !(k_tilde.is_finite() && k_tilde >= 0.0) {
            return Err(Error::invalid(format!("k_tilde must be >= 0, got {k_tilde}")));
        }
        if !(tau_eta.is_finite() && tau_eta >= 0.0) {
            return Err(Error::invalid(format!("tau*eta must be >= 0, got {tau_eta}")));
        }
        Ok(MapParams {
            k_tilde,
            tau_eta,
            sgn_eps,
        })
    }

    /// The pseudo-classical map of a detuned rotor.
    pub fn from_rotor(p: &RotorParams) -> Result<Self> {
        if p.epsilon() == 0.0 {
            return Err(Error::invalid(
                "the pseudo-classical map needs a non-zero detuning epsilon",
            ));
        }
        Self::new(p.k_tilde(), p.tau_eta(), Sign::of(p.epsilon()))
    }
}

/// A point of the (θ, J) phase space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub theta: f64,
    pub j: f64,
}

/// Reduces an angle to `[0, 2π)`.
#[inline]
pub fn wrap_angle(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    // rem_euclid may round up to exactly TAU
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Reduces an angle to `[-π, π)`.
#[inline]
pub fn wrap_centered(x: f64) -> f64 {
    wrap_angle(x + PI) - PI
}

impl PhasePoint {
    pub fn new(theta: f64, j: f64) -> Self {
        PhasePoint {
            theta: wrap_angle(theta),
            j,
        }
    }

    /// Same point with J reduced to the torus `[0, 2π)`.
    pub fn on_torus(self) -> Self {
        PhasePoint {
            theta: self.theta,
            j: wrap_angle(self.j),
        }
    }

    /// Physical scaled momentum I after `t` kicks.
    pub fn scaled_momentum(&self, p: &RotorParams, t: u64) -> f64 {
        let sgn = Sign::of(p.epsilon()).value();
        let tau = p.tau();
        let eta = p.eta();
        self.j - sgn * (PI * p.l() as f64 + tau * p.beta() + tau * eta * t as f64 + tau * eta / 2.0)
    }
}

/// One iteration: the angle moves first, the kick uses the new angle.
#[inline]
pub fn map_step(p: PhasePoint, mp: &MapParams) -> PhasePoint {
    let s = mp.sgn_eps.value();
    let theta = wrap_angle(p.theta + s * p.j);
    let j = p.j + mp.k_tilde * theta.sin() + s * mp.tau_eta;
    PhasePoint { theta, j }
}

/// One iteration on the 2-torus (J kept in `[0, 2π)`).
#[inline]
pub fn map_step_torus(p: PhasePoint, mp: &MapParams) -> PhasePoint {
    let q = map_step(p, mp);
    PhasePoint {
        theta: q.theta,
        j: wrap_angle(q.j),
    }
}

/// Tangent map `∂(θ', J')/∂(θ, J)` at `p`, row-major.
pub fn tangent_map(p: PhasePoint, mp: &MapParams) -> [[f64; 2]; 2] {
    let s = mp.sgn_eps.value();
    let theta_next = p.theta + s * p.j;
    let kc = mp.k_tilde * theta_next.cos();
    [[1.0, s], [kc, 1.0 + s * kc]]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedPoint {
    pub theta0: f64,
    pub stable: bool,
}

/// Period-one fixed point at J = 0 on the branch `cos θ0 = -sgn(ε)|cos θ0|`.
///
/// Returns `None` when `τη > k̃`. The branch is reported stable when
/// `k̃|cos θ0| <= 4`, boundary included.
pub fn fixed_point(mp: &MapParams) -> Option<FixedPoint> {
    let s = mp.sgn_eps.value();
    let sin0 = if mp.k_tilde == 0.0 {
        if mp.tau_eta == 0.0 {
            0.0
        } else {
            return None;
        }
    } else {
        let r = mp.tau_eta / mp.k_tilde;
        if r > 1.0 {
            return None;
        }
        -s * r
    };
    let base = sin0.asin();
    let theta0 = match mp.sgn_eps {
        // cos θ0 >= 0
        Sign::Minus => wrap_angle(base),
        Sign::Plus => wrap_angle(PI - base),
    };
    let cos_abs = (1.0 - sin0 * sin0).max(0.0).sqrt();
    Some(FixedPoint {
        theta0,
        stable: mp.k_tilde * cos_abs <= 4.0,
    })
}

/// The companion (hyperbolic) fixed point on the other branch.
pub fn saddle_point(mp: &MapParams) -> Option<f64> {
    fixed_point(mp).map(|fp| wrap_angle(PI - fp.theta0))
}

/// Eigenvalues of the tangent map at `(theta0, 0)`.
pub fn linear_stability(mp: &MapParams, theta0: f64) -> [Complex64; 2] {
    let m = tangent_map(PhasePoint { theta: theta0, j: 0.0 }, mp);
    let tr = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let half = Complex64::new(tr / 2.0, 0.0);
    let disc = (half * half - det).sqrt();
    [half + disc, half - disc]
}

/// True when both multipliers lie on the unit circle within `tol`.
pub fn multipliers_on_unit_circle(m: &[Complex64; 2], tol: f64) -> bool {
    m.iter().all(|z| (z.norm() - 1.0).abs() <= tol)
}

/// Momentum velocity of the accelerator mode, `-τη/ε`.
pub fn mode_velocity(p: &RotorParams) -> Result<f64> {
    if p.epsilon() == 0.0 {
        return Err(Error::invalid("mode velocity undefined at exact resonance"));
    }
    Ok(-p.tau_eta() / p.epsilon())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig4(k: f64) -> MapParams {
        let tau = 5.86;
        let p = RotorParams::from_tau(tau, 1, k, 0.01579 * tau, 0.48984326).unwrap();
        MapParams::from_rotor(&p).unwrap()
    }

    #[test]
    fn fixed_point_maps_to_itself() {
        for &k in &[0.7 * PI, 0.8 * PI, 2.0] {
            let mp = fig4(k);
            let fp = fixed_point(&mp).unwrap();
            let q = map_step(PhasePoint::new(fp.theta0, 0.0), &mp);
            assert!(wrap_centered(q.theta - fp.theta0).abs() < 1e-12);
            assert!(q.j.abs() < 1e-12);
        }
    }

    #[test]
    fn standard_map_limit() {
        let mp = MapParams::new(1.5, 0.0, Sign::Minus).unwrap();
        let fp = fixed_point(&mp).unwrap();
        assert_eq!(fp.theta0, 0.0);
        assert!(fp.stable);
        assert_eq!(map_step(PhasePoint::new(0.0, 0.0), &mp), PhasePoint::new(0.0, 0.0));
        let mp = MapParams::new(4.5, 0.0, Sign::Minus).unwrap();
        assert!(!fixed_point(&mp).unwrap().stable);
    }

    #[test]
    fn fig4_branch_is_stable_with_positive_cosine() {
        let mp = fig4(0.7 * PI);
        let fp = fixed_point(&mp).unwrap();
        assert!(fp.theta0.sin() > 0.0 && fp.theta0.cos() > 0.0);
        assert!((fp.theta0.sin() - mp.tau_eta / mp.k_tilde).abs() < 1e-15);
        assert!(fp.stable);
    }

    #[test]
    fn no_fixed_point_below_threshold() {
        let mp = MapParams::new(0.3, 0.5, Sign::Minus).unwrap();
        assert!(fixed_point(&mp).is_none());
    }

    #[test]
    fn multipliers_at_half_threshold() {
        // k̃|cos θ0| = 2 on the stable branch: trace 0, multipliers ±i
        let mp = MapParams::new(2.0, 0.0, Sign::Minus).unwrap();
        let m = linear_stability(&mp, 0.0);
        assert!(multipliers_on_unit_circle(&m, 1e-14));
        assert!((m[0] - Complex64::new(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn multipliers_just_past_threshold() {
        let mp = MapParams::new(4.0 + 1e-6, 0.0, Sign::Minus).unwrap();
        let m = linear_stability(&mp, 0.0);
        assert!(!multipliers_on_unit_circle(&m, 1e-6));
    }

    #[test]
    fn saddle_branch_has_real_multipliers() {
        let mp = fig4(0.7 * PI);
        let theta_s = saddle_point(&mp).unwrap();
        assert!(theta_s.cos() < 0.0);
        let m = linear_stability(&mp, theta_s);
        assert!(m.iter().all(|z| z.im == 0.0));
        assert!(!multipliers_on_unit_circle(&m, 1e-9));
    }

    #[test]
    fn velocity_signs() {
        let tau = 5.86;
        let eta = 0.01579 * tau;
        let p = RotorParams::from_tau(tau, 1, 2.0, eta, 0.3).unwrap();
        let v = mode_velocity(&p).unwrap();
        assert!((v - (-tau * eta / (tau - TAU))).abs() < 1e-15);
        assert!(v > 0.0);
        let q = RotorParams::near_resonance(1, -p.epsilon(), 2.0, eta * tau / (TAU - p.epsilon()), 0.3).unwrap();
        assert!((mode_velocity(&q).unwrap() + v).abs() < 1e-12);
        let z = RotorParams::from_tau(tau, 1, 2.0, 0.0, 0.3).unwrap();
        assert_eq!(mode_velocity(&z).unwrap(), 0.0);
        assert!(mode_velocity(&RotorParams::resonant(1, 1.0, 0.1, 0.2).unwrap()).is_err());
    }
}
