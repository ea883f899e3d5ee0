use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::fidelity::trace::{FidelityTrace, TraceMeta};
use crate::rotor::propagator::{FreePhase, KickOperator};
use crate::rotor::{PropagatorConfig, QuantumState, RotorParams, StateDescriptor};

/// Two copies of one initial state evolved under kick strengths `k1` and
/// `k2` on a shared lattice, so the free phase is computed once per kick.
pub struct CoEvolution {
    params1: RotorParams,
    params2: RotorParams,
    config: PropagatorConfig,
    free: FreePhase,
    planner: FftPlanner<f64>,
    kick1: Option<KickOperator>,
    kick2: Option<KickOperator>,
    phase_buf: Vec<Complex64>,
    a: QuantumState,
    b: QuantumState,
    t: u64,
}

impl CoEvolution {
    pub fn new(params1: &RotorParams, params2: &RotorParams, state0: &QuantumState) -> Result<Self> {
        Self::with_config(params1, params2, state0, PropagatorConfig::default())
    }

    pub fn with_config(
        params1: &RotorParams,
        params2: &RotorParams,
        state0: &QuantumState,
        config: PropagatorConfig,
    ) -> Result<Self> {
        if !params1.same_except_k(params2) {
            return Err(Error::invalid(
                "the two branches must share tau, l, eta and beta and differ only in k",
            ));
        }
        Ok(CoEvolution {
            params1: *params1,
            params2: *params2,
            config,
            free: FreePhase::new(params1),
            planner: FftPlanner::new(),
            kick1: None,
            kick2: None,
            phase_buf: Vec::new(),
            a: state0.clone(),
            b: state0.clone(),
            t: 0,
        })
    }

    /// Kicks applied so far.
    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn branches(&self) -> (&QuantumState, &QuantumState) {
        (&self.a, &self.b)
    }

    pub fn params(&self) -> (&RotorParams, &RotorParams) {
        (&self.params1, &self.params2)
    }

    /// `<ψ1(t)|ψ2(t)>`
    pub fn overlap(&self) -> Complex64 {
        self.a.inner(&self.b)
    }

    pub fn fidelity(&self) -> f64 {
        self.overlap().norm_sqr()
    }

    fn guard(&mut self) -> Result<()> {
        let g = self.config.guard_sites;
        loop {
            let (la, ra) = self.a.tail_mass(g);
            let (lb, rb) = self.b.tail_mass(g);
            let left = la.max(lb) > self.config.tail_tol;
            let right = ra.max(rb) > self.config.tail_tol;
            if !(left || right) {
                return Ok(());
            }
            if self.a.len() * 2 > self.config.max_sites {
                return Err(Error::BasisOverflow {
                    t: self.t,
                    cap: self.config.max_sites,
                });
            }
            self.a.grow(left, right);
            self.b.grow(left, right);
        }
    }

    /// Applies `U(t)` to both branches and advances the counter.
    pub fn step(&mut self) -> Result<()> {
        self.guard()?;
        let len = self.a.len();
        if self.phase_buf.len() != len {
            self.phase_buf.resize(len, Complex64::new(0.0, 0.0));
        }
        self.free.factors(self.a.n_min(), self.t, &mut self.phase_buf);
        for (st, kick, k) in [
            (&mut self.a, &mut self.kick1, self.params1.k()),
            (&mut self.b, &mut self.kick2, self.params2.k()),
        ] {
            let amps = st.amplitudes_mut();
            for (z, f) in amps.iter_mut().zip(&self.phase_buf) {
                *z *= f;
            }
            if k != 0.0 {
                let op = match kick {
                    Some(op) if op.len() == len => op,
                    slot => slot.insert(KickOperator::new(k, len, &mut self.planner)),
                };
                op.apply(amps);
            }
        }
        self.t += 1;
        self.guard()
    }
}

/// `F[t] = |<U1^t ψ|U2^t ψ>|²` for `t = 0..=kicks`.
pub fn fidelity_single(
    params1: &RotorParams,
    params2: &RotorParams,
    state0: &QuantumState,
    kicks: u64,
) -> Result<FidelityTrace> {
    overlap_series(params1, params2, state0, kicks).map(|ov| {
        let f = ov.iter().map(|z| z.norm_sqr()).collect();
        FidelityTrace::from_values(f).with_meta(TraceMeta {
            params1: Some(*params1),
            params2: Some(*params2),
            initial_state: Some(StateDescriptor::Custom),
            ..Default::default()
        })
    })
}

/// Overlap amplitudes `<U1^t ψ|U2^t ψ>` for `t = 0..=kicks`; entry 0 is exactly 1.
pub fn overlap_series(
    params1: &RotorParams,
    params2: &RotorParams,
    state0: &QuantumState,
    kicks: u64,
) -> Result<Vec<Complex64>> {
    let mut run = CoEvolution::new(params1, params2, state0)?;
    let mut out = Vec::with_capacity(kicks as usize + 1);
    out.push(Complex64::new(1.0, 0.0));
    for _ in 0..kicks {
        run.step()?;
        out.push(run.overlap());
    }
    Ok(out)
}
