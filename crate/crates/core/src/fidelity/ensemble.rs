use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fidelity::coevolve::overlap_series;
use crate::fidelity::trace::{FidelityTrace, TraceMeta};
use crate::resonance::{bessel_j0, weyl_series, weyl_series_rational, EtaInput};
use crate::rotor::{
    gaussian_accelerator_state, smallest_nonnegative_sheet, QuantumState, RotorParams,
    StateDescriptor,
};

/// Ensemble members per deterministic reduction chunk.
const CHUNK: usize = 64;

/// Quasi-momentum density on `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BetaDensity {
    Uniform,
    /// Gaussian of the given width wrapped onto the unit circle.
    WrappedGaussian { mean: f64, width: f64 },
}

impl BetaDensity {
    /// Unnormalised density at `beta`.
    pub fn weight(&self, beta: f64) -> f64 {
        match *self {
            BetaDensity::Uniform => 1.0,
            BetaDensity::WrappedGaussian { mean, width } => (-4..=4)
                .map(|j| {
                    let d = beta - mean + j as f64;
                    (-0.5 * d * d / (width * width)).exp()
                })
                .sum(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BetaSampling {
    /// iid uniform draws weighted by the density.
    MonteCarlo,
    /// Midpoint rule `β_i = (i + 1/2)/n`, weighted by the density.
    Midpoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub density: BetaDensity,
    pub n_beta: usize,
    pub seed: u64,
    pub sampling: BetaSampling,
}

impl Default for EnsembleSpec {
    fn default() -> Self {
        EnsembleSpec {
            density: BetaDensity::Uniform,
            n_beta: 5000,
            seed: 0,
            sampling: BetaSampling::MonteCarlo,
        }
    }
}

impl EnsembleSpec {
    pub fn new(n_beta: usize, seed: u64) -> Self {
        EnsembleSpec {
            n_beta,
            seed,
            ..Default::default()
        }
    }

    /// Quasi-momenta with weights summing to one.
    pub fn members(&self) -> Result<Vec<(f64, f64)>> {
        if self.n_beta == 0 {
            return Err(Error::invalid("ensemble needs n_beta >= 1"));
        }
        if let BetaDensity::WrappedGaussian { width, .. } = self.density {
            if !(width > 0.0) {
                return Err(Error::invalid("density width must be > 0"));
            }
        }
        let betas: Vec<f64> = match self.sampling {
            BetaSampling::MonteCarlo => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                (0..self.n_beta).map(|_| rng.gen::<f64>()).collect()
            }
            BetaSampling::Midpoint => (0..self.n_beta)
                .map(|i| (i as f64 + 0.5) / self.n_beta as f64)
                .collect(),
        };
        let w: Vec<f64> = betas.iter().map(|&b| self.density.weight(b)).collect();
        let total: f64 = w.iter().sum();
        if !(total > 0.0) {
            return Err(Error::invalid("density vanishes on every sampled beta"));
        }
        Ok(betas.into_iter().zip(w).map(|(b, w)| (b, w / total)).collect())
    }
}

/// Initial state of each ensemble member, built per β.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitialStateSpec {
    PlaneWave { n0: i64 },
    /// Gaussian on the accelerator mode; `m = None` picks the sheet with the
    /// smallest non-negative centre.
    AcceleratorGaussian { m: Option<i64>, sigma2: f64 },
}

impl InitialStateSpec {
    pub fn build(&self, params: &RotorParams) -> Result<(QuantumState, StateDescriptor)> {
        match *self {
            InitialStateSpec::PlaneWave { n0 } => {
                Ok((QuantumState::plane_wave(n0), StateDescriptor::PlaneWave { n0 }))
            }
            InitialStateSpec::AcceleratorGaussian { m, sigma2 } => {
                let m = match m {
                    Some(m) => m,
                    None => smallest_nonnegative_sheet(params)?,
                };
                let acc = gaussian_accelerator_state(params, m, sigma2)?;
                let d = acc.descriptor();
                Ok((acc.state, d))
            }
        }
    }
}

/// Resonant overlaps `J0(Δk |W_t|)`, `t = 0..=kicks`.
pub fn analytic_overlaps(eta: EtaInput, beta: f64, l: u32, delta_k: f64, kicks: u64) -> Result<Vec<f64>> {
    let ws = match eta {
        EtaInput::Float(x) => weyl_series(x, beta, l, kicks as usize)?,
        EtaInput::Fraction { p, q } => weyl_series_rational(p, q, beta, l, kicks as usize)?,
    };
    Ok(ws.w.iter().map(|w| bessel_j0(delta_k * w.norm())).collect())
}

/// Single-rotor resonant fidelity trace `J0(Δk |W_t|)²`.
pub fn analytic_fidelity_trace(
    eta: EtaInput,
    beta: f64,
    l: u32,
    delta_k: f64,
    kicks: u64,
) -> Result<FidelityTrace> {
    let f = analytic_overlaps(eta, beta, l, delta_k, kicks)?
        .into_iter()
        .map(|j| j * j)
        .collect();
    Ok(FidelityTrace::from_values(f))
}

/// Analytic route taken by [`fidelity_ensemble`].
pub fn uses_analytic_route(params: &RotorParams, init: &InitialStateSpec) -> bool {
    params.is_resonant() && matches!(init, InitialStateSpec::PlaneWave { .. })
}

/// Weighted complex overlap average over the ensemble, `t = 0..=kicks`.
///
/// Members are reduced in chunks of fixed size and the chunk sums are added
/// in index order, so the result does not depend on the thread count.
pub fn ensemble_overlaps(
    params1: &RotorParams,
    params2: &RotorParams,
    spec: &EnsembleSpec,
    init: &InitialStateSpec,
    kicks: u64,
) -> Result<Vec<Complex64>> {
    if !params1.same_except_k(params2) {
        return Err(Error::invalid(
            "the two branches must share tau, l, eta and beta and differ only in k",
        ));
    }
    let members = spec.members()?;
    let analytic = uses_analytic_route(params1, init);
    let len = kicks as usize + 1;
    let member = |beta: f64| -> Result<Vec<Complex64>> {
        let p1 = params1.with_beta(beta)?;
        let p2 = params2.with_beta(beta)?;
        if analytic {
            let dk = p2.k() - p1.k();
            let ov = analytic_overlaps(EtaInput::Float(p1.eta()), beta, p1.l(), dk, kicks)?;
            Ok(ov.into_iter().map(|x| Complex64::new(x, 0.0)).collect())
        } else {
            let (s0, _) = init.build(&p1)?;
            overlap_series(&p1, &p2, &s0, kicks)
        }
    };
    let batch = CHUNK * rayon::current_num_threads().max(1) * 2;
    let mut total = vec![Complex64::new(0.0, 0.0); len];
    for group in members.chunks(batch) {
        let sums: Vec<Result<Vec<Complex64>>> = group
            .par_chunks(CHUNK)
            .map(|chunk| {
                let mut acc = vec![Complex64::new(0.0, 0.0); len];
                for &(beta, w) in chunk {
                    for (a, z) in acc.iter_mut().zip(member(beta)?) {
                        *a += z * w;
                    }
                }
                Ok(acc)
            })
            .collect();
        for s in sums {
            for (a, z) in total.iter_mut().zip(s?) {
                *a += z;
            }
        }
    }
    total[0] = Complex64::new(1.0, 0.0);
    Ok(total)
}

/// `F[t] = |Σ_β w_β <U1^t ψ|U2^t ψ>|²`: amplitudes are averaged before the
/// modulus is taken.
pub fn fidelity_ensemble(
    params1: &RotorParams,
    params2: &RotorParams,
    spec: &EnsembleSpec,
    init: &InitialStateSpec,
    kicks: u64,
) -> Result<FidelityTrace> {
    let ov = ensemble_overlaps(params1, params2, spec, init, kicks)?;
    let f = ov.iter().map(|z| z.norm_sqr()).collect();
    let initial_state = match *init {
        InitialStateSpec::PlaneWave { n0 } => StateDescriptor::PlaneWave { n0 },
        InitialStateSpec::AcceleratorGaussian { .. } => StateDescriptor::Custom,
    };
    Ok(FidelityTrace::from_values(f).with_meta(TraceMeta {
        params1: Some(*params1),
        params2: Some(*params2),
        initial_state: Some(initial_state),
        ensemble: Some(*spec),
        seed: Some(spec.seed),
        derived: Vec::new(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_are_normalised() {
        for density in [
            BetaDensity::Uniform,
            BetaDensity::WrappedGaussian { mean: 0.9, width: 0.1 },
        ] {
            let spec = EnsembleSpec {
                density,
                n_beta: 300,
                ..Default::default()
            };
            let total: f64 = spec.members().unwrap().iter().map(|m| m.1).sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
        assert!(EnsembleSpec::new(0, 1).members().is_err());
    }

    #[test]
    fn members_are_seeded() {
        let a = EnsembleSpec::new(50, 7).members().unwrap();
        let b = EnsembleSpec::new(50, 7).members().unwrap();
        let c = EnsembleSpec::new(50, 8).members().unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(a.iter().all(|&(beta, _)| (0.0..1.0).contains(&beta)));
    }
}
