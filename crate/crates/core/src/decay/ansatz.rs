//! Tunneling ansatz for the smoothed fidelity and its comparison to data.

use serde::{Deserialize, Serialize};

use crate::classical::OverlapMeasures;
use crate::decay::fit::{linear_fit, MIN_SAMPLES};
use crate::error::{Error, Result};
use crate::fidelity::FidelityTrace;

/// Default calibration window.
pub const CALIBRATION_WINDOW: (u64, u64) = (100, 10_000);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnsatzModel {
    pub measures: OverlapMeasures,
    pub gamma1: f64,
    pub gamma2: f64,
    pub scale: f64,
}

impl AnsatzModel {
    pub fn new(measures: OverlapMeasures, gamma1: f64, gamma2: f64) -> Result<Self> {
        if !(gamma1 > 0.0 && gamma2 > 0.0) {
            return Err(Error::invalid("tunneling rates must be > 0"));
        }
        Ok(AnsatzModel {
            measures,
            gamma1,
            gamma2,
            scale: 1.0,
        })
    }

    /// The model sampled at the times of `trace`.
    pub fn sample(&self, t: &[u64]) -> FidelityTrace {
        FidelityTrace::new(t.to_vec(), t.iter().map(|&t| ansatz_eval(self, t)).collect())
    }
}

/// `scale·[μ1 e^{−Γ1 t} + μ2 e^{−Γ2 t} + μ12 e^{−(Γ1+Γ2) t}]`
pub fn ansatz_eval(model: &AnsatzModel, t: u64) -> f64 {
    let t = t as f64;
    let m = &model.measures;
    model.scale
        * (m.mu_1_only * (-model.gamma1 * t).exp()
            + m.mu_2_only * (-model.gamma2 * t).exp()
            + m.mu_both * (-(model.gamma1 + model.gamma2) * t).exp())
}

/// Fits the scale so that `log(ansatz)` matches `log(trace)` on `window` in
/// the least-squares sense; rates and measures are kept.
pub fn calibrate_ansatz(
    trace: &FidelityTrace,
    model: &AnsatzModel,
    window: (u64, u64),
) -> Result<AnsatzModel> {
    let unit = AnsatzModel { scale: 1.0, ..*model };
    let mut acc = 0.0;
    let mut n = 0usize;
    for (&t, &f) in trace.t.iter().zip(&trace.f) {
        if t < window.0 || t > window.1 {
            continue;
        }
        let a = ansatz_eval(&unit, t);
        if !(f > 0.0 && a > 0.0) {
            return Err(Error::Fit(format!(
                "calibration needs positive trace and ansatz values (t = {t})"
            )));
        }
        acc += f.ln() - a.ln();
        n += 1;
    }
    if n < MIN_SAMPLES {
        return Err(Error::Fit(format!(
            "calibration window [{}, {}] holds {n} samples, need at least {MIN_SAMPLES}",
            window.0, window.1
        )));
    }
    Ok(AnsatzModel {
        scale: (acc / n as f64).exp(),
        ..*model
    })
}

/// Continuous two-segment fit of `log F` against `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeSplit {
    /// Decay rate (−slope of log F) before the break.
    pub early_rate: f64,
    /// Decay rate after the break.
    pub late_rate: f64,
    pub break_t: f64,
    /// Early/late rate ratio exceeds the detection threshold.
    pub two_regimes: bool,
}

/// Rate ratio above which two regimes are reported.
pub const TWO_REGIME_RATIO: f64 = 2.0;

/// Best continuous broken line through `(t, log f)`, with the break
/// searched on a logarithmic grid.
pub fn split_regimes(t: &[f64], log_f: &[f64]) -> Option<RegimeSplit> {
    let n = t.len();
    if n < 2 * MIN_SAMPLES {
        return None;
    }
    let (t_lo, t_hi) = (t[MIN_SAMPLES], t[n - MIN_SAMPLES]);
    if !(t_lo > 0.0 && t_hi > t_lo) {
        return None;
    }
    let mut best: Option<(f64, RegimeSplit)> = None;
    let steps = 200;
    for i in 0..=steps {
        let tb = t_lo * (t_hi / t_lo).powf(i as f64 / steps as f64);
        // y = a + b1 t + d·max(0, t − tb): normal equations in (a, b1, d)
        let mut m = [[0.0_f64; 3]; 3];
        let mut r = [0.0_f64; 3];
        for (ti, yi) in t.iter().zip(log_f) {
            let x = [1.0, *ti, (ti - tb).max(0.0)];
            for a in 0..3 {
                r[a] += x[a] * yi;
                for b in 0..3 {
                    m[a][b] += x[a] * x[b];
                }
            }
        }
        let Some(c) = solve3(m, r) else { continue };
        let sse: f64 = t
            .iter()
            .zip(log_f)
            .map(|(ti, yi)| (yi - c[0] - c[1] * ti - c[2] * (ti - tb).max(0.0)).powi(2))
            .sum();
        let early = -c[1];
        let late = -(c[1] + c[2]);
        let split = RegimeSplit {
            early_rate: early,
            late_rate: late,
            break_t: tb,
            two_regimes: late > 0.0 && early > TWO_REGIME_RATIO * late,
        };
        if best.as_ref().is_none_or(|(s, _)| sse < *s) {
            best = Some((sse, split));
        }
    }
    best.map(|b| b.1)
}

fn solve3(mut m: [[f64; 3]; 3], mut r: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let piv = (col..3).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[piv][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, piv);
        r.swap(col, piv);
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            for k in col..3 {
                m[row][k] -= f * m[col][k];
            }
            r[row] -= f * r[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let s: f64 = (row + 1..3).map(|k| m[row][k] * x[k]).sum();
        x[row] = (r[row] - s) / m[row][row];
    }
    Some(x)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub window: (u64, u64),
    pub residual_rms_log: f64,
    pub max_log_deviation: f64,
    /// Rate ratio `max(Γ1, Γ2)/min(Γ1, Γ2)` of the model.
    pub gamma_ratio: f64,
    /// Regime split of the data; reported when the rate ratio exceeds 3.
    pub trace_regimes: Option<RegimeSplit>,
    pub model_regimes: Option<RegimeSplit>,
    /// Single-exponential rate of each over the window, otherwise.
    pub trace_rate: f64,
    pub model_rate: f64,
}

/// Log-space agreement of `trace` and `model` on `window`.
pub fn compare(trace: &FidelityTrace, model: &AnsatzModel, window: (u64, u64)) -> Result<Comparison> {
    let mut t = Vec::new();
    let mut lf = Vec::new();
    let mut la = Vec::new();
    for (&ti, &fi) in trace.t.iter().zip(&trace.f) {
        if ti < window.0 || ti > window.1 {
            continue;
        }
        let a = ansatz_eval(model, ti);
        if !(fi > 0.0 && a > 0.0) {
            return Err(Error::Fit(format!("non-positive value at t = {ti}")));
        }
        t.push(ti as f64);
        lf.push(fi.ln());
        la.push(a.ln());
    }
    if t.len() < MIN_SAMPLES {
        return Err(Error::Fit(format!(
            "comparison window [{}, {}] holds {} samples, need at least {MIN_SAMPLES}",
            window.0,
            window.1,
            t.len()
        )));
    }
    let res: Vec<f64> = lf.iter().zip(&la).map(|(a, b)| a - b).collect();
    let rms = (res.iter().map(|r| r * r).sum::<f64>() / res.len() as f64).sqrt();
    let max_dev = res.iter().fold(0.0_f64, |m, r| m.max(r.abs()));
    let (g1, g2) = (model.gamma1, model.gamma2);
    let gamma_ratio = g1.max(g2) / g1.min(g2);
    let two = gamma_ratio > 3.0;
    Ok(Comparison {
        window,
        residual_rms_log: rms,
        max_log_deviation: max_dev,
        gamma_ratio,
        trace_regimes: if two { split_regimes(&t, &lf) } else { None },
        model_regimes: if two { split_regimes(&t, &la) } else { None },
        trace_rate: -linear_fit(&t, &lf).1,
        model_rate: -linear_fit(&t, &la).1,
    })
}
