use crate::fidelity::trace::FidelityTrace;

/// Running time average `<F>_T = (1/T) Σ_{t<T} F[t]` for `T = 1..=len`.
///
/// The input is assumed to be sampled at consecutive times starting at 0.
pub fn time_average(trace: &FidelityTrace) -> FidelityTrace {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    let mut out = Vec::with_capacity(trace.len());
    for (i, v) in trace.f.iter().enumerate() {
        let y = v - comp;
        let s = sum + y;
        comp = (s - sum) - y;
        sum = s;
        out.push(sum / (i + 1) as f64);
    }
    let t = (1..=trace.len() as u64).collect();
    let mut meta = trace.meta.clone();
    meta.derived.push("time_average".into());
    FidelityTrace::new(t, out).with_meta(meta)
}

/// Centred moving mean over `window` samples; the window shrinks at the
/// edges so the output keeps the input length.
pub fn moving_average(trace: &FidelityTrace, window: usize) -> FidelityTrace {
    assert!(window >= 1, "moving-average window must be >= 1");
    let n = trace.len();
    let before = (window - 1) / 2;
    let after = window / 2;
    let f = (0..n)
        .map(|i| {
            let lo = i.saturating_sub(after);
            let hi = (i + before).min(n - 1);
            trace.f[lo..=hi].iter().sum::<f64>() / (hi + 1 - lo) as f64
        })
        .collect();
    let mut meta = trace.meta.clone();
    meta.derived.push(format!("moving_average({window})"));
    FidelityTrace::new(trace.t.clone(), f).with_meta(meta)
}
