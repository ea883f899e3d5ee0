//! Quadratic Weyl sums governing the rotor at exact resonance.
//!
//! `W_t = Σ_{r=0}^{t-1} exp(-iπl(2β+1)r - 2iπlrηt + iπlηr²)` is rewritten as
//! `W_t = e^{iΦ_t} 𝔚_t`, with `Φ_t = -πl(2β+1+ηt)t` and the partial sum
//! `𝔚_t = Σ_{r=1}^{t} exp(iπl(2β+1)r + iπlηr²)`. The partial sums are
//! accumulated once, so the whole series up to `T` costs `O(T)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dd::Dd;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeylSeries {
    pub eta: f64,
    pub beta: f64,
    pub l: u32,
    /// `w[t] = W_t` for `t = 0..=T`.
    pub w: Vec<Complex64>,
    /// `Φ_t` reduced to `[0, 2π)`.
    pub phi: Vec<f64>,
}

impl WeylSeries {
    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }

    pub fn horizon(&self) -> usize {
        self.w.len() - 1
    }

    pub fn abs(&self) -> Vec<f64> {
        self.w.iter().map(|z| z.norm()).collect()
    }
}

/// Quadratic coefficient of the Weyl phase.
#[derive(Debug, Clone, Copy)]
enum Quadratic {
    /// `lη/2` turns per r².
    Float(f64),
    /// `l p r² mod 2q`, over `2q`.
    Exact { lp: u128, modulus: u128 },
}

/// Phase of the term `r`, in turns: `l(2β+1)r/2 + lηr²/2`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct WeylPhase {
    lin: Dd,
    quad: Quadratic,
}

impl WeylPhase {
    pub(crate) fn new(eta: f64, beta: f64, l: u32) -> Self {
        WeylPhase {
            lin: Self::linear(beta, l),
            quad: Quadratic::Float(eta * 0.5 * l as f64),
        }
    }

    /// η = p/q taken exactly.
    pub(crate) fn exact(p: u64, q: u64, beta: f64, l: u32) -> Self {
        WeylPhase {
            lin: Self::linear(beta, l),
            quad: Quadratic::Exact {
                lp: l as u128 * p as u128,
                modulus: 2 * q as u128,
            },
        }
    }

    fn linear(beta: f64, l: u32) -> Dd {
        (Dd::from_f64(2.0 * beta) + Dd::from_f64(1.0)).mul_f64(0.5 * l as f64)
    }

    /// Turns reduced to `[0, 1)`.
    #[inline]
    pub(crate) fn turns(&self, r: u64) -> Dd {
        let rf = r as f64;
        let quad = match self.quad {
            // r² exact for r < 2^26
            Quadratic::Float(c) => Dd::prod(rf, rf) * Dd::from_f64(c),
            Quadratic::Exact { lp, modulus } => {
                let rr = r as u128 % modulus;
                let num = (lp % modulus) * (rr * rr % modulus) % modulus;
                Dd::from_f64(num as f64).div(Dd::from_f64(modulus as f64))
            }
        };
        (self.lin.mul_f64(rf) + quad).fract()
    }

    #[inline]
    pub(crate) fn term(&self, r: u64) -> Complex64 {
        let (s, c) = self.turns(r).turns_to_radians().sin_cos();
        Complex64::new(c, s)
    }

    fn partial_sums(&self, horizon: usize) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(horizon + 1);
        let mut acc = Complex64::new(0.0, 0.0);
        let mut comp = Complex64::new(0.0, 0.0);
        out.push(acc);
        for r in 1..=horizon as u64 {
            // Kahan-compensated accumulation
            let y = self.term(r) - comp;
            let next = acc + y;
            comp = (next - acc) - y;
            acc = next;
            out.push(acc);
        }
        out
    }

    fn series(&self, eta: f64, beta: f64, l: u32, horizon: usize) -> Result<WeylSeries> {
        if horizon < 1 {
            return Err(Error::invalid("Weyl series horizon must be >= 1"));
        }
        if l == 0 {
            return Err(Error::invalid("resonance order l must be >= 1"));
        }
        let partial = self.partial_sums(horizon);
        let mut w = Vec::with_capacity(horizon + 1);
        let mut phi = Vec::with_capacity(horizon + 1);
        for (t, s) in partial.iter().enumerate() {
            // Φ_t is minus the phase of the t-th term
            let angle = (-self.turns(t as u64)).turns_to_radians();
            let (sn, cs) = angle.sin_cos();
            w.push(Complex64::new(cs, sn) * s);
            phi.push(angle);
        }
        Ok(WeylSeries {
            eta,
            beta,
            l,
            w,
            phi,
        })
    }
}

/// Partial sums `𝔚_t` for `t = 0..=horizon`.
pub fn weyl_partial_sums(eta: f64, beta: f64, l: u32, horizon: usize) -> Vec<Complex64> {
    WeylPhase::new(eta, beta, l).partial_sums(horizon)
}

/// `Φ_t = -πl(2β+1+ηt)t` in `[0, 2π)`.
pub fn weyl_phase_phi(eta: f64, beta: f64, l: u32, t: u64) -> f64 {
    (-WeylPhase::new(eta, beta, l).turns(t)).turns_to_radians()
}

/// The series `W_t`, `t = 0..=horizon`.
pub fn weyl_series(eta: f64, beta: f64, l: u32, horizon: usize) -> Result<WeylSeries> {
    WeylPhase::new(eta, beta, l).series(eta, beta, l, horizon)
}

/// The series `W_t` with `η = p/q` treated as an exact fraction.
pub fn weyl_series_rational(p: u64, q: u64, beta: f64, l: u32, horizon: usize) -> Result<WeylSeries> {
    if q == 0 {
        return Err(Error::invalid("denominator q must be >= 1"));
    }
    WeylPhase::exact(p, q, beta, l).series(p as f64 / q as f64, beta, l, horizon)
}

/// Block structure of `𝔚_t` for rational `η = p/q`.
///
/// Splitting `r = 2jq + ν` with `0 <= ν < 2q`, every term factorises as
/// `g^j b_ν` with `g = exp(4iπlβq)` and `b_ν = exp(iπl(2β+1)ν + iπlν²p/q)`.
/// With `t = 2qJ + R`:
///
/// `𝔚_t = C·B_block + g^J·B − 1`,
///
/// where `C = Σ_{j<J} g^j` counts complete blocks, `B_block = Σ_{ν<2q} b_ν`
/// and `B = Σ_{ν<=R} b_ν` is `2q`-periodic in `t`. The `−1` removes the
/// `r = 0` term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RationalDecomposition {
    pub c: Complex64,
    pub b: Complex64,
    pub b_block: Complex64,
    pub g_pow: Complex64,
    pub blocks: u64,
    pub remainder: u64,
}

impl RationalDecomposition {
    /// `𝔚_t` rebuilt from the factors.
    pub fn reconstruct(&self) -> Complex64 {
        self.c * self.b_block + self.g_pow * self.b - Complex64::new(1.0, 0.0)
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

fn cis_dd(turns: Dd) -> Complex64 {
    let (s, c) = turns.turns_to_radians().sin_cos();
    Complex64::new(c, s)
}

pub fn rational_decomposition(
    p: u64,
    q: u64,
    beta: f64,
    l: u32,
    t: u64,
) -> Result<RationalDecomposition> {
    if q == 0 {
        return Err(Error::invalid("denominator q must be >= 1"));
    }
    if gcd(p, q) != 1 {
        return Err(Error::invalid(format!("p={p} and q={q} are not coprime")));
    }
    let period = 2 * q;
    let blocks = t / period;
    let remainder = t % period;
    // b_ν with the quadratic phase lν²p/(2q) reduced exactly in integers
    let lin = (Dd::from_f64(2.0 * beta) + Dd::from_f64(1.0)).mul_f64(0.5 * l as f64);
    let modulus = 2 * q as u128;
    let b_nu = |nu: u64| {
        let num = (l as u128 * (nu as u128) * (nu as u128) * p as u128) % modulus;
        let quad = num as f64 / modulus as f64;
        cis_dd(lin.mul_f64(nu as f64) + Dd::from_f64(quad))
    };
    let mut b_block = Complex64::new(0.0, 0.0);
    let mut b = Complex64::new(0.0, 0.0);
    for nu in 0..period {
        let v = b_nu(nu);
        b_block += v;
        if nu <= remainder {
            b += v;
        }
    }
    // g = exp(2πi · 2lβq)
    let g_turns = Dd::prod(2.0 * beta, (l as u64 * q) as f64).fract();
    let g = cis_dd(g_turns);
    let g_pow = cis_dd(g_turns.mul_f64(blocks as f64));
    let c = if (g - Complex64::new(1.0, 0.0)).norm() < 1e-15 {
        Complex64::new(blocks as f64, 0.0)
    } else {
        (g_pow - Complex64::new(1.0, 0.0)) / (g - Complex64::new(1.0, 0.0))
    };
    Ok(RationalDecomposition {
        c,
        b,
        b_block,
        g_pow,
        blocks,
        remainder,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exact phase oracle for dyadic η = a/2^s, β = b/2^s: the exponent of
    /// every term of W_t divided by π is an integer over 2^s.
    fn dyadic_w(a: i128, b: i128, s: u32, l: i128, t: i128) -> Complex64 {
        let den = 1_i128 << s;
        let mut acc = Complex64::new(0.0, 0.0);
        for r in 0..t {
            // -(2β+1) r - 2 r η t + η r², in units of π/den
            let num = l * (-(2 * b + den) * r - 2 * r * a * t + a * r * r);
            let reduced = num.rem_euclid(2 * den);
            let angle = std::f64::consts::PI * reduced as f64 / den as f64;
            acc += Complex64::new(angle.cos(), angle.sin());
        }
        acc
    }

    #[test]
    fn first_term_and_empty_sum() {
        let s = weyl_series(0.37, 0.123, 1, 5).unwrap();
        assert_eq!(s.w[0], Complex64::new(0.0, 0.0));
        assert!((s.w[1].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn resonant_beta_without_gravity_is_linear() {
        let s = weyl_series(0.0, 0.5, 1, 200).unwrap();
        for (t, z) in s.w.iter().enumerate() {
            assert!((z.norm() - t as f64).abs() < 1e-11);
        }
    }

    #[test]
    fn matches_exact_dyadic_oracle() {
        for &(a, b, l, t) in &[(13_i128, 15_i128, 1_i128, 137_i128), (301, 777, 2, 1000), (5, 512, 1, 4000)] {
            let eta = a as f64 / 1024.0;
            let beta = b as f64 / 1024.0;
            let s = weyl_series(eta, beta, l as u32, t as usize).unwrap();
            let oracle = dyadic_w(a, b, 10, l, t);
            assert!((s.w[t as usize] - oracle).norm() < 1e-10 * (1.0 + oracle.norm()));
        }
    }

    #[test]
    fn phase_identity_between_w_and_partial_sum() {
        let (eta, beta, l) = (0.1, 0.23, 1);
        let s = weyl_series(eta, beta, l, 300).unwrap();
        let partial = weyl_partial_sums(eta, beta, l, 300);
        for t in 0..=300 {
            let e = Complex64::new(s.phi[t].cos(), s.phi[t].sin());
            assert!((e * partial[t] - s.w[t]).norm() < 1e-10);
            assert!(s.w[t].norm() <= t as f64 + 1e-9);
        }
    }

    #[test]
    fn decomposition_reconstructs_partial_sum() {
        let partial = weyl_partial_sums(0.1, 0.23, 1, 400);
        for &t in &[0_u64, 1, 19, 20, 137, 399] {
            let d = rational_decomposition(1, 10, 0.23, 1, t).unwrap();
            assert!((d.reconstruct() - partial[t as usize]).norm() < 1e-10, "t={t}");
        }
    }

    #[test]
    fn resonant_decomposition_grows_linearly() {
        // 2βq = 10 is an integer: g = 1 and C counts blocks
        let d = rational_decomposition(1, 10, 0.5, 1, 2000).unwrap();
        assert_eq!(d.c, Complex64::new(100.0, 0.0));
        assert_eq!(d.remainder, 0);
        let exact = weyl_series_rational(1, 10, 0.5, 1, 2000).unwrap();
        assert!((exact.w[2000].norm() - (d.c * d.b_block).norm()).abs() < 1e-9);
        // η = 0.1 as a double differs from 1/10 by 5.6e-18, which shifts the
        // phase of term r by ~r²·1e-17 turns
        let float = weyl_partial_sums(0.1, 0.5, 1, 2000);
        assert!((float[2000] - d.c * d.b_block).norm() < 1e-7);
    }

    #[test]
    fn irrational_beta_keeps_c_bounded() {
        let beta = std::f64::consts::FRAC_1_SQRT_2;
        let q = 5;
        let bound = 1.0 / (std::f64::consts::TAU * beta * q as f64).sin().abs();
        for t in (0..100_000).step_by(997) {
            let d = rational_decomposition(2, q, beta, 1, t).unwrap();
            assert!(d.c.norm() <= bound + 1e-9);
        }
    }

    #[test]
    fn exact_and_float_eta_agree_for_dyadic_values() {
        let a = weyl_series_rational(3, 8, 0.3, 1, 3000).unwrap();
        let b = weyl_series(0.375, 0.3, 1, 3000).unwrap();
        for t in (0..=3000).step_by(50) {
            assert!((a.w[t] - b.w[t]).norm() < 1e-10);
        }
    }

    #[test]
    fn rejects_non_coprime() {
        assert!(rational_decomposition(2, 10, 0.3, 1, 5).is_err());
        assert!(rational_decomposition(1, 0, 0.3, 1, 5).is_err());
    }
}
