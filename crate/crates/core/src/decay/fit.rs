//! Least-squares decay fits in log space.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fidelity::FidelityTrace;

/// Fewest samples accepted by a fit.
pub const MIN_SAMPLES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecayModel {
    /// `F = A e^{-Γ t}`
    Exponential,
    /// `F = A t^s`
    PowerLaw,
}

/// `F = c log(t)/t`, fitted next to a power law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogCorrection {
    pub c: f64,
    pub residual_rms_log: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub model: DecayModel,
    /// Γ for an exponential, the exponent `s` for a power law.
    pub rate_or_slope: f64,
    pub amplitude: f64,
    pub window: (u64, u64),
    pub residual_rms_log: f64,
    /// Standard error of `rate_or_slope` from the regression.
    pub std_error: f64,
    /// Estimates with each quarter of the window left out.
    pub jackknife: Vec<f64>,
    pub jackknife_std_error: f64,
    pub n_samples: usize,
    pub log_correction: Option<LogCorrection>,
}

/// Ordinary least squares `y = a + b x`: `(a, b, se_b, rms)`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (xi, yi) in x.iter().zip(y) {
        sxx += (xi - mx) * (xi - mx);
        sxy += (xi - mx) * (yi - my);
    }
    let b = sxy / sxx;
    let a = my - b * mx;
    let sse: f64 = x.iter().zip(y).map(|(xi, yi)| (yi - a - b * xi).powi(2)).sum();
    let se = if x.len() > 2 {
        (sse / (n - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    (a, b, se, (sse / n).sqrt())
}

fn window_samples(trace: &FidelityTrace, window: (u64, u64)) -> Result<(Vec<f64>, Vec<f64>)> {
    if window.0 >= window.1 {
        return Err(Error::Fit(format!(
            "empty fit window [{}, {}]",
            window.0, window.1
        )));
    }
    let (t, f) = trace.window(window.0, window.1);
    if t.len() < MIN_SAMPLES {
        return Err(Error::Fit(format!(
            "fit window [{}, {}] holds {} samples, need at least {MIN_SAMPLES}",
            window.0,
            window.1,
            t.len()
        )));
    }
    if let Some(v) = f.iter().find(|v| !(**v > 0.0)) {
        return Err(Error::Fit(format!(
            "log fit needs positive values, found {v} in [{}, {}]",
            window.0, window.1
        )));
    }
    Ok((t, f.iter().map(|v| v.ln()).collect()))
}

/// Slope estimates with each contiguous quarter removed, and their
/// jackknife standard error.
fn jackknife(x: &[f64], y: &[f64]) -> (Vec<f64>, f64) {
    let n = x.len();
    let mut est = Vec::with_capacity(4);
    for q in 0..4 {
        let (lo, hi) = (q * n / 4, (q + 1) * n / 4);
        let xs: Vec<f64> = x[..lo].iter().chain(&x[hi..]).copied().collect();
        let ys: Vec<f64> = y[..lo].iter().chain(&y[hi..]).copied().collect();
        if xs.len() >= 3 {
            est.push(linear_fit(&xs, &ys).1);
        }
    }
    let g = est.len() as f64;
    let mean = est.iter().sum::<f64>() / g;
    let var = est.iter().map(|e| (e - mean).powi(2)).sum::<f64>() * (g - 1.0) / g;
    (est, var.sqrt())
}

/// `log F = log A − Γ t` on samples with `t` in `window` (inclusive).
pub fn fit_exponential(trace: &FidelityTrace, window: (u64, u64)) -> Result<DecayFit> {
    let (t, y) = window_samples(trace, window)?;
    let (a, b, se, rms) = linear_fit(&t, &y);
    let (jk, jk_se) = jackknife(&t, &y);
    Ok(DecayFit {
        model: DecayModel::Exponential,
        rate_or_slope: -b,
        amplitude: a.exp(),
        window,
        residual_rms_log: rms,
        std_error: se,
        jackknife: jk.into_iter().map(|s| -s).collect(),
        jackknife_std_error: jk_se,
        n_samples: t.len(),
        log_correction: None,
    })
}

/// `log F = log A + s log t`, with the `c log(t)/t` alternative alongside.
pub fn fit_power_law(trace: &FidelityTrace, window: (u64, u64)) -> Result<DecayFit> {
    if window.0 == 0 {
        return Err(Error::Fit("power-law window must start at t >= 1".into()));
    }
    let (t, y) = window_samples(trace, window)?;
    let x: Vec<f64> = t.iter().map(|v| v.ln()).collect();
    let (a, b, se, rms) = linear_fit(&x, &y);
    let (jk, jk_se) = jackknife(&x, &y);
    // log F − log(log t / t) = log c
    let log_correction = if t.iter().all(|&v| v > 1.0) {
        let r: Vec<f64> = t.iter().zip(&y).map(|(tv, yv)| yv - (tv.ln() / tv).ln()).collect();
        let mean = r.iter().sum::<f64>() / r.len() as f64;
        let rms_c = (r.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / r.len() as f64).sqrt();
        Some(LogCorrection {
            c: mean.exp(),
            residual_rms_log: rms_c,
        })
    } else {
        None
    };
    Ok(DecayFit {
        model: DecayModel::PowerLaw,
        rate_or_slope: b,
        amplitude: a.exp(),
        window,
        residual_rms_log: rms,
        std_error: se,
        jackknife: jk,
        jackknife_std_error: jk_se,
        n_samples: t.len(),
        log_correction,
    })
}
