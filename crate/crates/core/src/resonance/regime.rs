//! Arithmetic classification of (η, β) and the fidelity law it predicts.

use serde::{Deserialize, Serialize};

use crate::resonance::weyl::gcd;

/// How η is supplied: an exact fraction skips rationality detection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum EtaInput {
    Float(f64),
    Fraction { p: u64, q: u64 },
}

impl EtaInput {
    pub fn value(&self) -> f64 {
        match *self {
            EtaInput::Float(x) => x,
            EtaInput::Fraction { p, q } => p as f64 / q as f64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RationalityTolerance {
    /// Largest denominator accepted as rational.
    pub max_denominator: u64,
    /// Largest `|η - p/q|` accepted as equality.
    pub abs_tol: f64,
    /// Distance of `2βq` to the nearest integer accepted as resonant.
    pub beta_tol: f64,
}

impl Default for RationalityTolerance {
    fn default() -> Self {
        RationalityTolerance {
            max_denominator: 1_000_000,
            abs_tol: 1e-14,
            beta_tol: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EtaClass {
    Rational { p: u64, q: u64 },
    Irrational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FidelityLaw {
    /// ⟨F⟩_T ~ log(T)/T
    BallisticLogTOverT,
    /// ⟨F⟩_T tends to a non-zero constant
    Saturation,
    /// ⟨F⟩_T ~ 1/√T
    SqrtDecay,
    /// ensemble ⟨F⟩_T ~ 1/T
    EnsembleInverseT,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub eta_class: EtaClass,
    /// `Some` only when η is rational.
    pub beta_resonant: Option<bool>,
    /// Law for a single β-rotor.
    pub predicted_law: FidelityLaw,
    /// Law for a uniform β ensemble.
    pub ensemble_law: FidelityLaw,
}

/// First continued-fraction convergent within `tol.abs_tol` of `x`.
pub fn rational_approximation(x: f64, tol: &RationalityTolerance) -> Option<(u64, u64)> {
    if !x.is_finite() || x < 0.0 {
        return None;
    }
    let (mut h_prev, mut h) = (1_u128, x.floor() as u128);
    let (mut k_prev, mut k) = (0_u128, 1_u128);
    let mut rest = x - x.floor();
    loop {
        if (x - h as f64 / k as f64).abs() <= tol.abs_tol {
            return Some((h as u64, k as u64));
        }
        if rest <= 0.0 {
            return None;
        }
        let inv = 1.0 / rest;
        let a = inv.floor();
        rest = inv - a;
        let a = a as u128;
        let h_next = a * h + h_prev;
        let k_next = a * k + k_prev;
        if k_next > tol.max_denominator as u128 {
            return None;
        }
        h_prev = h;
        h = h_next;
        k_prev = k;
        k = k_next;
    }
}

pub fn classify_regime(eta: EtaInput, beta: f64, tol: &RationalityTolerance) -> RegimeReport {
    let eta_class = match eta {
        EtaInput::Fraction { p, q } => {
            let g = gcd(p, q).max(1);
            EtaClass::Rational { p: p / g, q: q / g }
        }
        EtaInput::Float(x) => match rational_approximation(x, tol) {
            Some((p, q)) => EtaClass::Rational { p, q },
            None => EtaClass::Irrational,
        },
    };
    match eta_class {
        EtaClass::Rational { q, .. } => {
            let x = 2.0 * beta * q as f64;
            let resonant = (x - x.round()).abs() <= tol.beta_tol;
            RegimeReport {
                eta_class,
                beta_resonant: Some(resonant),
                predicted_law: if resonant {
                    FidelityLaw::BallisticLogTOverT
                } else {
                    FidelityLaw::Saturation
                },
                ensemble_law: FidelityLaw::Saturation,
            }
        }
        EtaClass::Irrational => RegimeReport {
            eta_class,
            beta_resonant: None,
            predicted_law: FidelityLaw::SqrtDecay,
            ensemble_law: FidelityLaw::EnsembleInverseT,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn classify(eta: f64, beta: f64) -> RegimeReport {
        classify_regime(EtaInput::Float(eta), beta, &RationalityTolerance::default())
    }

    #[test]
    fn resonant_rational() {
        let r = classify(0.1, 0.5);
        assert_eq!(r.eta_class, EtaClass::Rational { p: 1, q: 10 });
        assert_eq!(r.beta_resonant, Some(true));
        assert_eq!(r.predicted_law, FidelityLaw::BallisticLogTOverT);
    }

    #[test]
    fn non_resonant_rational() {
        let r = classify(0.1, 0.23);
        assert_eq!(r.beta_resonant, Some(false));
        assert_eq!(r.predicted_law, FidelityLaw::Saturation);
        let r = classify(0.1, 0.499);
        assert_eq!(r.predicted_law, FidelityLaw::Saturation);
    }

    #[test]
    fn golden_ratio_and_pi_are_irrational() {
        let golden = (5.0_f64.sqrt() - 1.0) / 2.0;
        let r = classify(golden, 0.23);
        assert_eq!(r.eta_class, EtaClass::Irrational);
        assert_eq!(r.beta_resonant, None);
        assert_eq!(r.predicted_law, FidelityLaw::SqrtDecay);
        assert_eq!(r.ensemble_law, FidelityLaw::EnsembleInverseT);
        assert_eq!(classify(std::f64::consts::PI, 0.5).eta_class, EtaClass::Irrational);
    }

    #[test]
    fn exact_fraction_bypasses_detection() {
        let r = classify_regime(
            EtaInput::Fraction { p: 2, q: 20 },
            0.05,
            &RationalityTolerance::default(),
        );
        assert_eq!(r.eta_class, EtaClass::Rational { p: 1, q: 10 });
        assert_eq!(r.beta_resonant, Some(true));
    }

    #[test]
    fn recognises_typical_decimal_rationals() {
        for &(x, p, q) in &[(0.25, 1, 4), (0.375, 3, 8), (0.01579, 1579, 100_000), (2.0 / 7.0, 2, 7)] {
            assert_eq!(
                rational_approximation(x, &RationalityTolerance::default()),
                Some((p, q))
            );
        }
    }
}
