//! Subcommand implementations. Each reads its keys from the configuration
//! (recording defaults) and writes tables into the run output.

use std::f64::consts::{PI, TAU};

use serde_json::{json, Value};

use crate::classical::{
    cloud_measures, existence_range, island_area_scan, island_boundary, phase_portrait,
    write_boundary_csv, write_portrait_csv, CloudSpec, IslandSpec, MapParams, PortraitGrid,
};
use crate::cli::config::{RotorDefaults, RunConfig};
use crate::cli::output::{fmt, RunOutput, Table};
use crate::decay::{
    ansatz_pipeline, fit_exponential, fit_power_law, survival_rate, AnsatzPipelineSpec,
};
use crate::error::{Error, Result};
use crate::fidelity::{
    analytic_fidelity_trace, fidelity_ensemble, moving_average, run_accelerator_pair,
    time_average, AcceleratorRunSpec, BetaSampling, EnsembleSpec, FidelityTrace,
    InitialStateSpec,
};
use crate::resonance::{classify_regime, weyl_series, weyl_series_rational, EtaInput, RationalityTolerance};
use crate::rotor::{RotorParams, DEFAULT_HALF_WIDTH, DEFAULT_SIGMA2};

/// Rows kept per decade when `decimate > 0`.
fn keep_rows(cfg: &mut RunConfig, trace: &FidelityTrace) -> Result<Vec<usize>> {
    let per_decade = cfg.u64_or("decimate", 0)? as usize;
    if per_decade == 0 {
        return Ok((0..trace.len()).collect());
    }
    let kept = trace.log_decimated(per_decade);
    Ok(kept
        .t
        .iter()
        .filter_map(|t| trace.t.binary_search(t).ok())
        .collect())
}

fn regime_json(eta: EtaInput, beta: f64) -> Value {
    serde_json::to_value(classify_regime(eta, beta, &RationalityTolerance::default()))
        .unwrap_or(Value::Null)
}

/// `k2`, or `k1 + delta_k` when only the difference is given.
fn second_kick(cfg: &mut RunConfig, k1: f64, default_k2: f64) -> Result<f64> {
    if cfg.contains("delta_k") && !cfg.contains("k2") {
        return Ok(k1 + cfg.f64_or("delta_k", 0.0)?);
    }
    cfg.f64_or("k2", default_k2)
}

pub fn resonance_fidelity(cfg: &mut RunConfig, out: &mut RunOutput) -> Result<()> {
    let kicks = cfg.u64_or("kicks", 100_000)?;
    let l = cfg.u64_or("l", 1)? as u32;
    // exact resonance only: reject a detuned tau or epsilon rather than ignore it
    let tau = cfg.f64_opt("tau")?;
    let eps = cfg.f64_opt("epsilon")?;
    let res_tau = TAU * l.max(1) as f64;
    if eps.is_some_and(|e| e != 0.0) || tau.is_some_and(|t| (t - res_tau).abs() > 1e-12 * res_tau) {
        return Err(Error::Config(format!(
            "resonance-fidelity runs at tau = 2πl = {res_tau} (epsilon = 0); use ensemble-fidelity for detuned runs"
        )));
    }
    let eta = cfg.eta_or("1/10")?;
    let beta = cfg.f64_or("beta", 0.5)?;
    let k1 = cfg.f64_or("k1", 0.8 * PI)?;
    let k2 = second_kick(cfg, k1, 0.7 * PI)?;
    RotorParams::resonant(l.max(1), k1, eta.value(), beta).map_err(|e| Error::Config(e.to_string()))?;
    let ws = match eta {
        EtaInput::Float(x) => weyl_series(x, beta, l, kicks as usize)?,
        EtaInput::Fraction { p, q } => weyl_series_rational(p, q, beta, l, kicks as usize)?,
    };
    let tr = analytic_fidelity_trace(eta, beta, l, k2 - k1, kicks)?;
    let avg = time_average(&tr);
    let mut table = Table::new(&["t[kicks]", "abs_W[1]", "F[1]", "F_time_avg[1]"]);
    for i in keep_rows(cfg, &tr)? {
        let a = if i == 0 { String::new() } else { fmt(avg.f[i - 1]) };
        table.push(vec![tr.t[i].to_string(), fmt(ws.w[i].norm()), fmt(tr.f[i]), a]);
    }
    out.write_table("resonance_fidelity.csv", &table)?;
    out.note("regime", regime_json(eta, beta));
    if kicks >= 1000 {
        let fit = fit_power_law(&avg, (100, kicks))?;
        out.note("time_avg_power_law", serde_json::to_value(&fit)?);
    }
    Ok(())
}

fn parse_sampling(s: &str) -> Result<BetaSampling> {
    match s {
        "monte_carlo" | "mc" => Ok(BetaSampling::MonteCarlo),
        "midpoint" => Ok(BetaSampling::Midpoint),
        other => Err(Error::Config(format!(
            "`sampling` must be monte_carlo or midpoint, got `{other}`"
        ))),
    }
}

fn ensemble_trace(cfg: &mut RunConfig, kicks: u64) -> Result<(FidelityTrace, EtaInput)> {
    let mut defaults = RotorDefaults::resonant("golden", 0.0, 0.8 * PI);
    defaults.epsilon = 0.0;
    let p1 = cfg.rotor("k1", &defaults)?;
    let k2 = second_kick(cfg, p1.k(), 0.7 * PI)?;
    let p2 = p1.with_k(k2).map_err(|e| Error::Config(e.to_string()))?;
    let eta = cfg.eta_or("golden")?;
    let spec = EnsembleSpec {
        n_beta: cfg.u64_or("n_beta", 5000)? as usize,
        seed: cfg.u64_or("seed", 0)?,
        sampling: parse_sampling(&cfg.str_or("sampling", "monte_carlo"))?,
        ..Default::default()
    };
    let init = InitialStateSpec::PlaneWave {
        n0: cfg.i64_opt("n0")?.unwrap_or(0),
    };
    Ok((fidelity_ensemble(&p1, &p2, &spec, &init, kicks)?, eta))
}

pub fn ensemble_fidelity(cfg: &mut RunConfig, out: &mut RunOutput) -> Result<()> {
    let kicks = cfg.u64_or("kicks", 10_000)?;
    let (tr, eta) = ensemble_trace(cfg, kicks)?;
    let avg = time_average(&tr);
    let mut table = Table::new(&["t[kicks]", "F_ens[1]", "F_ens_time_avg[1]"]);
    for i in keep_rows(cfg, &tr)? {
        let a = if i == 0 { String::new() } else { fmt(avg.f[i - 1]) };
        table.push(vec![tr.t[i].to_string(), fmt(tr.f[i]), a]);
    }
    out.write_table("ensemble_fidelity.csv", &table)?;
    out.note("regime", regime_json(eta, 0.0));
    if kicks >= 1000 {
        out.note("time_avg_power_law", serde_json::to_value(fit_power_law(&avg, (100, kicks))?)?);
    }
    Ok(())
}

fn accelerator_pair(cfg: &mut RunConfig, k1: f64, k2: f64) -> Result<(RotorParams, RotorParams)> {
    let p1 = cfg.rotor("k1", &RotorDefaults::accelerator(k1))?;
    let k2 = second_kick(cfg, p1.k(), k2)?;
    let p2 = p1.with_k(k2).map_err(|e| Error::Config(e.to_string()))?;
    if p1.is_resonant() {
        return Err(Error::Config(
            "accelerator-mode commands need a non-zero detuning epsilon".into(),
        ));
    }
    Ok((p1, p2))
}

fn run_spec(cfg: &mut RunConfig) -> Result<AcceleratorRunSpec> {
    Ok(AcceleratorRunSpec {
        kicks: cfg.u64_or("kicks", 100_000)?,
        m: cfg.i64_opt("m")?,
        sigma2: cfg.f64_or("sigma2", DEFAULT_SIGMA2)?,
        half_width: cfg.u64_or("half_width", DEFAULT_HALF_WIDTH as u64)? as i64,
    })
}

pub fn near_resonance_fidelity(cfg: &mut RunConfig, out: &mut RunOutput) -> Result<()> {
    let (p1, p2) = accelerator_pair(cfg, 0.7 * PI, 0.8 * PI)?;
    let spec = run_spec(cfg)?;
    let smooth = cfg.u64_or("smooth", 200)? as usize;
    let run = run_accelerator_pair(&p1, &p2, &spec)?;
    let sm = moving_average(&run.fidelity, smooth.max(1));
    let mut table = Table::new(&["t[kicks]", "F[1]", "F_smoothed[1]", "S1[1]", "S2[1]"]);
    for i in keep_rows(cfg, &run.fidelity)? {
        table.push(vec![
            run.fidelity.t[i].to_string(),
            fmt(run.fidelity.f[i]),
            fmt(sm.f[i]),
            fmt(run.survival1.f[i]),
            fmt(run.survival2.f[i]),
        ]);
    }
    out.write_table("near_resonance_fidelity.csv", &table)?;
    out.note("n0", json!(run.n0));
    out.note("theta0", json!(run.theta0));
    out.note("survival_window_clipped", json!(run.clipped));
    out.note("final_lattice_sites", json!(run.final_sites));
    Ok(())
}

pub fn survival(cfg: &mut RunConfig, out: &mut RunOutput) -> Result<()> {
    let (p1, _) = accelerator_pair(cfg, 0.7 * PI, 0.7 * PI)?;
    let spec = run_spec(cfg)?;
    let fit_start = cfg.u64_or("fit_start", 1000)?;
    let fit_end = cfg.u64_or("fit_end", spec.kicks)?;
    let floor = cfg.f64_or("survival_floor", 1e-9)?;
    let run = run_accelerator_pair(&p1, &p1, &spec)?;
    let mut table = Table::new(&["t[kicks]", "S[1]", "packet_center[n]"]);
    for i in keep_rows(cfg, &run.survival1)? {
        table.push(vec![
            run.survival1.t[i].to_string(),
            fmt(run.survival1.f[i]),
            fmt(run.packet_center[i]),
        ]);
    }
    out.write_table("survival.csv", &table)?;
    let fit = survival_rate(&run.survival1, (fit_start, fit_end), floor)?;
    out.write_json("survival_fit.json", &serde_json::to_value(&fit)?)?;
    out.note("gamma", json!(fit.rate_or_slope));
    out.note("survival_window_clipped", json!(run.clipped));
    Ok(())
}

pub fn island_spec_from(cfg: &mut RunConfig) -> Result<IslandSpec> {
    let d = IslandSpec::default();
    Ok(IslandSpec {
        n_traj: cfg.u64_or("n_traj", d.n_traj as u64)? as usize,
        n_kicks: cfg.u64_or("map_kicks", d.n_kicks)?,
        d_phi: cfg.f64_or("d_phi", d.d_phi)?,
    })
}

fn map_params(cfg: &mut RunConfig, key: &str, k: f64) -> Result<(RotorParams, MapParams)> {
    let p = cfg.rotor(key, &RotorDefaults::accelerator(k))?;
    let mp = MapParams::from_rotor(&p).map_err(|e| Error::Config(e.to_string()))?;
    Ok((p, mp))
}

pub fn phase_portrait_cmd(cfg: &mut RunConfig, out: &mut RunOutput) -> Result<()> {
    let (_, mp) = map_params(cfg, "k", 0.7 * PI)?;
    let grid = PortraitGrid {
        n_theta: cfg.u64_or("n_theta", 12)? as usize,
        n_j: cfg.u64_or("n_j", 12)? as usize,
        n_kicks: cfg.u64_or("map_kicks", 1000)?,
        stride: cfg.u64_or("stride", 1)?,
    };
    let pts = phase_portrait(&mp, &grid);
    let mut buf = Vec::new();
    write_portrait_csv(&mut buf, &pts)?;
    out.write("phase_portrait.csv", &String::from_utf8_lossy(&buf))?;
    out.note("map", serde_json::to_value(mp)?);
    Ok(())
}

pub fn island_area_scan_cmd(cfg: &mut RunConfig, out: &mut RunOutput) -> Result<()> {
    let (p, _) = map_params(cfg, "k", 0.7 * PI)?;
    let (lo, hi) = existence_range(&p).unwrap_or((0.0, 0.0));
    let k_min = cfg.f64_or("k_min", 0.9 * lo)?;
    let k_max = cfg.f64_or("k_max", 1.02 * hi)?;
    let steps = cfg.u64_or("k_steps", 40)?.max(1);
    let spec = island_spec_from(cfg)?;
    let ks: Vec<f64> = (0..=steps)
        .map(|i| k_min + (k_max - k_min) * i as f64 / steps as f64)
        .collect();
    let scan = island_area_scan(&p, &ks, &spec)?;
    out.write_table("island_area_scan.csv", &scan_table(&scan, None))?;
    out.note("existence_range_k", json!([lo, hi]));
    Ok(())
}

/// Area scan rows, optionally tagged with a parameter-set label.
pub fn scan_table(scan: &[crate::classical::ScanPoint], label: Option<&str>) -> Table {
    let mut header = vec!["k[1]", "k_tilde[1]", "area[rad^2]", "status", "invalid_bins[count]", "max_rel_change[1]"];
    if label.is_some() {
        header.insert(0, "set");
    }
    let mut t = Table::new(&header);
    for s in scan {
        let mut row = vec![
            fmt(s.k),
            fmt(s.k_tilde),
            fmt(s.area),
            format!("{:?}", s.status).to_lowercase(),
            s.invalid_bins.to_string(),
            fmt(s.max_relative_change),
        ];
        if let Some(l) = label {
            row.insert(0, l.to_string());
        }
        t.push(row);
    }
    t
}

fn cloud_spec(cfg: &mut RunConfig) -> Result<CloudSpec> {
    Ok(CloudSpec {
        n_points: cfg.u64_or("n_points", 10_000)? as usize,
        n_kicks: cfg.u64_or("cloud_kicks", 500)?,
        seed: cfg.u64_or("seed", 0)?,
        ..Default::default()
    })
}

pub fn cloud_measures_cmd(cfg: &mut RunConfig, out: &mut RunOutput) -> Result<()> {
    let (p1, p2) = accelerator_pair(cfg, 0.7 * PI, 0.8 * PI)?;
    let spec = island_spec_from(cfg)?;
    let cloud = cloud_spec(cfg)?;
    let (mp1, mp2) = (MapParams::from_rotor(&p1)?, MapParams::from_rotor(&p2)?);
    let a1 = island_boundary(&mp1, &spec)?;
    let a2 = island_boundary(&mp2, &spec)?;
    let m = cloud_measures(&mp1, &mp2, (&a1, &a2), &cloud)?;
    let mut t = Table::new(&["mu_1_only[rad^2]", "mu_2_only[rad^2]", "mu_both[rad^2]", "area1[rad^2]", "area2[rad^2]"]);
    t.push(vec![fmt(m.mu_1_only), fmt(m.mu_2_only), fmt(m.mu_both), fmt(a1.area), fmt(a2.area)]);
    out.write_table("cloud_measures.csv", &t)?;
    for (name, isl) in [("island1_boundary.csv", &a1), ("island2_boundary.csv", &a2)] {
        let mut buf = Vec::new();
        write_boundary_csv(&mut buf, isl)?;
        out.write(name, &String::from_utf8_lossy(&buf))?;
    }
    out.note("measures", serde_json::to_value(m)?);
    Ok(())
}

pub fn ansatz_compare(cfg: &mut RunConfig, out: &mut RunOutput) -> Result<()> {
    let (p1, p2) = accelerator_pair(cfg, 0.7 * PI, 0.8 * PI)?;
    let spec = run_spec(cfg)?;
    let mut ps = AnsatzPipelineSpec {
        island: island_spec_from(cfg)?,
        cloud: cloud_spec(cfg)?,
        ..Default::default()
    };
    ps.fit_window = (cfg.u64_or("fit_start", 1000)?, cfg.u64_or("fit_end", spec.kicks)?);
    ps.survival_floor = cfg.f64_or("survival_floor", ps.survival_floor)?;
    ps.calibrate_window = (
        cfg.u64_or("calibrate_start", ps.calibrate_window.0)?,
        cfg.u64_or("calibrate_end", ps.calibrate_window.1.min(spec.kicks))?,
    );
    ps.compare_window = (cfg.u64_or("compare_start", 1000)?, cfg.u64_or("compare_end", spec.kicks)?);
    ps.smooth = cfg.u64_or("smooth", 200)? as usize;
    let run = run_accelerator_pair(&p1, &p2, &spec)?;
    let rep = ansatz_pipeline(&run, &p1, &p2, &ps)?;
    let mut table = Table::new(&["t[kicks]", "F[1]", "F_smoothed[1]", "ansatz[1]", "S1[1]", "S2[1]"]);
    for i in keep_rows(cfg, &run.fidelity)? {
        let t = run.fidelity.t[i];
        table.push(vec![
            t.to_string(),
            fmt(run.fidelity.f[i]),
            fmt(rep.smoothed.f[i]),
            fmt(crate::decay::ansatz_eval(&rep.model, t)),
            fmt(run.survival1.f[i]),
            fmt(run.survival2.f[i]),
        ]);
    }
    out.write_table("ansatz_compare.csv", &table)?;
    out.write_json("fit_report.json", &serde_json::to_value(&rep)?)?;
    out.note("gamma1", json!(rep.gamma1.rate_or_slope));
    out.note("gamma2", json!(rep.gamma2.rate_or_slope));
    out.note("residual_rms_log", json!(rep.comparison.residual_rms_log));
    let late = (cfg.u64_or("fidelity_fit_start", 10_000)?, spec.kicks);
    if let Ok(fit) = fit_exponential(&rep.smoothed, late) {
        out.note("fidelity_late_exponential", serde_json::to_value(fit)?);
    }
    Ok(())
}

/// Golden ratio (√5 − 1)/2.
pub fn golden() -> f64 {
    (5f64.sqrt() - 1.0) / 2.0
}
