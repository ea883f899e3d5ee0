use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default number of sites kept on either side of a freshly built state.
pub const DEFAULT_MARGIN: i64 = 64;

/// Complex amplitudes `<n|psi>` on the truncated momentum lattice
/// `n_min, n_min + 1, ..., n_min + len - 1`.
///
/// The lattice length is always a power of two so the kick can be applied
/// by FFT.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    n_min: i64,
    amps: Vec<Complex64>,
}

/// Describes how a state was prepared; stored with fidelity traces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StateDescriptor {
    PlaneWave { n0: i64 },
    Gaussian { n0: f64, theta0: f64, sigma2: f64, m: i64 },
    Custom,
}

impl QuantumState {
    /// Wraps raw amplitudes. The length must be a power of two.
    pub fn from_amplitudes(n_min: i64, amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() || !amps.len().is_power_of_two() {
            return Err(Error::invalid(format!(
                "lattice length must be a non-zero power of two, got {}",
                amps.len()
            )));
        }
        Ok(QuantumState { n_min, amps })
    }

    /// Zero state covering at least `[lo, hi]`, centred in a power-of-two lattice.
    pub(crate) fn zeros_covering(lo: i64, hi: i64) -> Self {
        let span = (hi - lo + 1).max(1) as usize;
        let len = span.next_power_of_two();
        let slack = (len - span) as i64;
        QuantumState {
            n_min: lo - slack / 2,
            amps: vec![Complex64::new(0.0, 0.0); len],
        }
    }

    /// The momentum eigenstate `|n0>`.
    pub fn plane_wave(n0: i64) -> Self {
        let mut s = Self::zeros_covering(n0 - DEFAULT_MARGIN, n0 + DEFAULT_MARGIN - 1);
        let i = (n0 - s.n_min) as usize;
        s.amps[i] = Complex64::new(1.0, 0.0);
        s
    }

    pub fn n_min(&self) -> i64 {
        self.n_min
    }

    pub fn n_max(&self) -> i64 {
        self.n_min + self.amps.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    /// `<n|psi>`, zero outside the lattice.
    pub fn amplitude(&self, n: i64) -> Complex64 {
        if n < self.n_min || n > self.n_max() {
            Complex64::new(0.0, 0.0)
        } else {
            self.amps[(n - self.n_min) as usize]
        }
    }

    /// `(n, <n|psi>)` pairs over the lattice.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let n0 = self.n_min;
        self.amps.iter().enumerate().map(move |(i, a)| (n0 + i as i64, *a))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let norm = self.norm_sqr().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::invalid("cannot normalize a zero state"));
        }
        let inv = 1.0 / norm;
        self.amps.iter_mut().for_each(|a| *a *= inv);
        Ok(())
    }

    /// Probability on `[lo, hi]` intersected with the lattice, and whether the
    /// requested range had to be clipped.
    pub fn mass_in(&self, lo: i64, hi: i64) -> (f64, bool) {
        let a = lo.max(self.n_min);
        let b = hi.min(self.n_max());
        let clipped = a != lo || b != hi;
        if a > b {
            return (0.0, clipped);
        }
        let i0 = (a - self.n_min) as usize;
        let i1 = (b - self.n_min) as usize;
        (self.amps[i0..=i1].iter().map(|z| z.norm_sqr()).sum(), clipped)
    }

    /// Probability on the outermost `sites` of each edge: `(left, right)`.
    pub fn tail_mass(&self, sites: usize) -> (f64, f64) {
        let g = sites.min(self.amps.len() / 2);
        let left = self.amps[..g].iter().map(|z| z.norm_sqr()).sum();
        let right = self.amps[self.amps.len() - g..]
            .iter()
            .map(|z| z.norm_sqr())
            .sum();
        (left, right)
    }

    /// Doubles the lattice, padding with zeros on the heavy side(s).
    pub(crate) fn grow(&mut self, left: bool, right: bool) {
        let n = self.amps.len();
        let pad_left = match (left, right) {
            (true, true) => n / 2,
            (true, false) => n,
            _ => 0,
        };
        let mut amps = vec![Complex64::new(0.0, 0.0); 2 * n];
        amps[pad_left..pad_left + n].copy_from_slice(&self.amps);
        self.amps = amps;
        self.n_min -= pad_left as i64;
    }

    /// `<self|other>` over the common momentum support.
    pub fn inner(&self, other: &QuantumState) -> Complex64 {
        let a = self.n_min.max(other.n_min);
        let b = self.n_max().min(other.n_max());
        if a > b {
            return Complex64::new(0.0, 0.0);
        }
        let i = (a - self.n_min) as usize;
        let j = (a - other.n_min) as usize;
        let n = (b - a + 1) as usize;
        self.amps[i..i + n]
            .iter()
            .zip(&other.amps[j..j + n])
            .map(|(x, y)| x.conj() * y)
            .sum()
    }
}
