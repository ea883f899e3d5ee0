use serde::{Deserialize, Serialize};

use crate::fidelity::ensemble::EnsembleSpec;
use crate::rotor::{RotorParams, StateDescriptor};

/// Provenance stored alongside a trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct TraceMeta {
    pub params1: Option<RotorParams>,
    pub params2: Option<RotorParams>,
    pub initial_state: Option<StateDescriptor>,
    pub ensemble: Option<EnsembleSpec>,
    pub seed: Option<u64>,
    /// Free-form label of how the trace was derived (e.g. "time_average").
    pub derived: Vec<String>,
}

/// Fidelity (or any probability-like quantity) sampled at integer times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct FidelityTrace {
    pub t: Vec<u64>,
    pub f: Vec<f64>,
    pub meta: TraceMeta,
}

impl FidelityTrace {
    pub fn new(t: Vec<u64>, f: Vec<f64>) -> Self {
        assert_eq!(t.len(), f.len(), "time and value columns differ in length");
        FidelityTrace {
            t,
            f,
            meta: TraceMeta::default(),
        }
    }

    /// Trace sampled at `t = 0, 1, ..., f.len() - 1`.
    pub fn from_values(f: Vec<f64>) -> Self {
        let t = (0..f.len() as u64).collect();
        Self::new(t, f)
    }

    pub fn len(&self) -> usize {
        self.f.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f.is_empty()
    }

    pub fn with_meta(mut self, meta: TraceMeta) -> Self {
        self.meta = meta;
        self
    }

    /// Value at time `t`, if sampled.
    pub fn at(&self, t: u64) -> Option<f64> {
        self.t.binary_search(&t).ok().map(|i| self.f[i])
    }

    /// Samples with `lo <= t <= hi`.
    pub fn window(&self, lo: u64, hi: u64) -> (Vec<f64>, Vec<f64>) {
        self.t
            .iter()
            .zip(&self.f)
            .filter(|(t, _)| **t >= lo && **t <= hi)
            .map(|(t, f)| (*t as f64, *f))
            .unzip()
    }

    /// Copy with every value multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        FidelityTrace {
            t: self.t.clone(),
            f: self.f.iter().map(|v| v * c).collect(),
            meta: self.meta.clone(),
        }
    }

    /// Keeps samples whose time is `0` or lies on a roughly logarithmic
    /// grid with `per_decade` points per decade.
    pub fn log_decimated(&self, per_decade: usize) -> Self {
        let mut keep = Vec::new();
        let mut next = 0.0_f64;
        let ratio = 10f64.powf(1.0 / per_decade as f64);
        for (i, &t) in self.t.iter().enumerate() {
            if t as f64 >= next {
                keep.push(i);
                next = (t as f64 * ratio).max(t as f64 + 1.0);
            }
        }
        if let Some(&last) = self.t.last() {
            if keep.last().map(|&i| self.t[i]) != Some(last) {
                keep.push(self.t.len() - 1);
            }
        }
        FidelityTrace {
            t: keep.iter().map(|&i| self.t[i]).collect(),
            f: keep.iter().map(|&i| self.f[i]).collect(),
            meta: self.meta.clone(),
        }
    }
}
