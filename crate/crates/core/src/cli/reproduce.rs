//! Presets regenerating the data behind each published figure.

use std::f64::consts::{PI, TAU};

use clap::ValueEnum;
use serde_json::json;

use crate::classical::{existence_range, island_area_scan, phase_portrait, write_portrait_csv, MapParams, PortraitGrid};
use crate::cli::commands::{self, golden, scan_table};
use crate::cli::config::RunConfig;
use crate::cli::output::{fmt, RunOutput, Table};
use crate::error::{Error, Result};
use crate::fidelity::{
    analytic_fidelity_trace, fidelity_ensemble, time_average, EnsembleSpec, FidelityTrace,
    InitialStateSpec,
};
use crate::resonance::EtaInput;
use crate::rotor::RotorParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    Fig1a,
    Fig1b,
    Fig2,
    Fig3,
    Fig4a,
    Fig4b,
    Fig4c,
    Fig5a,
    Fig5b,
    Fig6a,
    Fig6b,
    Fig6c,
    Fig7,
    Fig8,
}

impl Figure {
    pub fn name(self) -> String {
        self.to_possible_value()
            .map(|v| v.get_name().to_string())
            .unwrap_or_default()
    }
}

const TAU_ACC: f64 = 5.86;
const ETA_ACC: f64 = 0.01579 * TAU_ACC;
const BETA_ACC: f64 = 0.48984326;
const TAU_FIG5: f64 = 6.6;
const BETA_FIG5: f64 = 0.123456789;
const EPS_L2: f64 = -0.5;
const ETA_L2: f64 = 0.001;

fn tau_l2() -> f64 {
    2.0 * TAU + EPS_L2
}

/// `(x + τη)/|ε|` for the l = 2 set.
fn k_l2(x: f64) -> f64 {
    (x + tau_l2() * ETA_L2) / EPS_L2.abs()
}

fn set_num(cfg: &mut RunConfig, key: &str, v: f64) {
    cfg.set_default(key, &format!("{v}"));
}

fn accelerator_defaults(cfg: &mut RunConfig, k1: f64, k2: f64) {
    set_num(cfg, "tau", TAU_ACC);
    set_num(cfg, "eta", ETA_ACC);
    set_num(cfg, "beta", BETA_ACC);
    set_num(cfg, "k1", k1);
    set_num(cfg, "k2", k2);
}

fn fig5_defaults(cfg: &mut RunConfig, k1_offset: f64) {
    let eta = golden() / 10.0;
    let te = TAU_FIG5 * eta;
    set_num(cfg, "tau", TAU_FIG5);
    set_num(cfg, "eta", eta);
    set_num(cfg, "beta", BETA_FIG5);
    set_num(cfg, "k1", k1_offset + te);
    set_num(cfg, "k2", 2.5 + te);
}

fn fig6_defaults(cfg: &mut RunConfig, k1_offset: f64) {
    cfg.set_default("l", "2");
    set_num(cfg, "epsilon", EPS_L2);
    set_num(cfg, "eta", ETA_L2);
    set_num(cfg, "beta", BETA_FIG5);
    set_num(cfg, "k1", k_l2(k1_offset));
    set_num(cfg, "k2", k_l2(1.35));
}

pub fn reproduce(fig: Figure, cfg: &mut RunConfig, out: &mut RunOutput) -> Result<()> {
    match fig {
        Figure::Fig1a => fig1(cfg, out, &[("1/10", 0.23), ("1/10", 0.499), ("1/10", 0.5)], 1.0),
        Figure::Fig1b => fig1(cfg, out, &[("golden", 0.23), ("pi", 0.23), ("pi", 0.5)], 0.5),
        Figure::Fig2 => fig2(cfg, out),
        Figure::Fig3 => {
            accelerator_defaults(cfg, 0.7 * PI, 0.8 * PI);
            fig3(cfg, out)
        }
        Figure::Fig4a | Figure::Fig4b | Figure::Fig4c => {
            let k1 = match fig {
                Figure::Fig4a => 0.7,
                Figure::Fig4b => 0.72,
                _ => 0.83,
            } * PI;
            accelerator_defaults(cfg, k1, 0.8 * PI);
            commands::ansatz_compare(cfg, out)
        }
        Figure::Fig5a | Figure::Fig5b => {
            fig5_defaults(cfg, if fig == Figure::Fig5a { 2.0 } else { 3.5 });
            commands::ansatz_compare(cfg, out)
        }
        Figure::Fig6a | Figure::Fig6b | Figure::Fig6c => {
            let x = match fig {
                Figure::Fig6a => 1.0,
                Figure::Fig6b => 2.0,
                _ => 2.2,
            };
            fig6_defaults(cfg, x);
            commands::ansatz_compare(cfg, out)
        }
        Figure::Fig7 => fig7(cfg, out),
        Figure::Fig8 => fig8(cfg, out),
    }
}

fn column_name(eta: &str, beta: f64) -> String {
    format!("F_avg_eta={eta}_beta={beta}[1]")
}

/// Time-averaged single-rotor fidelity at exact resonance for several
/// (η, β), with a `const/T^power` guide.
fn fig1(cfg: &mut RunConfig, out: &mut RunOutput, curves: &[(&str, f64)], power: f64) -> Result<()> {
    let kicks = cfg.u64_or("kicks", 100_000)?;
    let k1 = cfg.f64_or("k1", 0.8 * PI)?;
    let k2 = cfg.f64_or("k2", 0.7 * PI)?;
    let per_decade = cfg.u64_or("decimate", 50)? as usize;
    let mut avgs = Vec::new();
    for &(eta, beta) in curves {
        let e = parse_eta(eta)?;
        let tr = analytic_fidelity_trace(e, beta, 1, k2 - k1, kicks)?;
        avgs.push(time_average(&tr));
    }
    let mut header = vec!["T[kicks]".to_string()];
    header.extend(curves.iter().map(|(e, b)| column_name(e, *b)));
    header.push(format!("guide_const_over_T^{power}[1]"));
    let h: Vec<&str> = header.iter().map(String::as_str).collect();
    write_averages(out, "fig_data.csv", &h, &avgs, per_decade, power)?;
    out.note("curves", json!(curves.iter().map(|(e, b)| json!({"eta": e, "beta": b})).collect::<Vec<_>>()));
    Ok(())
}

fn parse_eta(s: &str) -> Result<EtaInput> {
    let mut c = RunConfig::new();
    c.set("eta", s)?;
    c.eta_or(s)
}

/// Columns of time averages sampled on a log grid, plus a power-law guide
/// pinned to the first curve at T = 10.
fn write_averages(
    out: &mut RunOutput,
    name: &str,
    header: &[&str],
    avgs: &[FidelityTrace],
    per_decade: usize,
    power: f64,
) -> Result<()> {
    let first = &avgs[0];
    let rows: Vec<usize> = if per_decade == 0 {
        (0..first.len()).collect()
    } else {
        let kept = first.log_decimated(per_decade);
        kept.t.iter().filter_map(|t| first.t.binary_search(t).ok()).collect()
    };
    let pin = first.at(10).unwrap_or(1.0) * 10f64.powf(power);
    let mut table = Table::new(header);
    for i in rows {
        let t = first.t[i];
        let mut row = vec![t.to_string()];
        row.extend(avgs.iter().map(|a| fmt(a.f[i])));
        row.push(fmt(pin / (t as f64).powf(power)));
        table.push(row);
    }
    out.write_table(name, &table)
}

fn fig2(cfg: &mut RunConfig, out: &mut RunOutput) -> Result<()> {
    let kicks = cfg.u64_or("kicks", 10_000)?;
    let k1 = cfg.f64_or("k1", 0.8 * PI)?;
    let k2 = cfg.f64_or("k2", 0.7 * PI)?;
    let spec = EnsembleSpec::new(cfg.u64_or("n_beta", 5000)? as usize, cfg.u64_or("seed", 0)?);
    let per_decade = cfg.u64_or("decimate", 50)? as usize;
    let etas = ["golden", "pi", "1/10"];
    let mut avgs = Vec::new();
    for eta in etas {
        let e = parse_eta(eta)?.value();
        let p1 = RotorParams::resonant(1, k1, e, 0.0)?;
        let p2 = p1.with_k(k2)?;
        let tr = fidelity_ensemble(&p1, &p2, &spec, &InitialStateSpec::PlaneWave { n0: 0 }, kicks)?;
        avgs.push(time_average(&tr));
    }
    let mut header = vec!["T[kicks]".to_string()];
    header.extend(etas.iter().map(|e| format!("F_ens_avg_eta={e}[1]")));
    header.push("guide_const_over_T^1[1]".into());
    let h: Vec<&str> = header.iter().map(String::as_str).collect();
    write_averages(out, "fig_data.csv", &h, &avgs, per_decade, 1.0)
}

fn fig3(cfg: &mut RunConfig, out: &mut RunOutput) -> Result<()> {
    commands::ansatz_compare(cfg, out)
}

fn fig7(cfg: &mut RunConfig, out: &mut RunOutput) -> Result<()> {
    let grid = PortraitGrid {
        n_theta: cfg.u64_or("n_theta", 12)? as usize,
        n_j: cfg.u64_or("n_j", 12)? as usize,
        n_kicks: cfg.u64_or("map_kicks", 1000)?,
        stride: cfg.u64_or("stride", 1)?,
    };
    let panels = [
        ("top_left", RotorParams::from_tau(TAU_ACC, 1, 0.7 * PI, ETA_ACC, BETA_ACC)?),
        ("bottom_left", RotorParams::from_tau(TAU_ACC, 1, 0.8 * PI, ETA_ACC, BETA_ACC)?),
        ("top_right", RotorParams::near_resonance(2, EPS_L2, k_l2(1.35), ETA_L2, BETA_FIG5)?),
        ("bottom_right", RotorParams::near_resonance(2, EPS_L2, k_l2(2.2), ETA_L2, BETA_FIG5)?),
    ];
    for (name, p) in panels {
        let mp = MapParams::from_rotor(&p)?;
        let mut buf = Vec::new();
        write_portrait_csv(&mut buf, &phase_portrait(&mp, &grid))?;
        out.write(&format!("portrait_{name}.csv"), &String::from_utf8_lossy(&buf))?;
        out.note(&format!("map_{name}"), serde_json::to_value(mp)?);
    }
    Ok(())
}

fn fig8(cfg: &mut RunConfig, out: &mut RunOutput) -> Result<()> {
    let steps = cfg.u64_or("k_steps", 40)?.max(1);
    let spec = commands::island_spec_from(cfg)?;
    let sets = [
        ("black", RotorParams::from_tau(TAU_ACC, 1, 1.0, ETA_ACC, BETA_ACC)?),
        ("red", RotorParams::from_tau(TAU_FIG5, 1, 1.0, golden() / 10.0, BETA_FIG5)?),
        ("blue", RotorParams::near_resonance(2, EPS_L2, 1.0, ETA_L2, BETA_FIG5)?),
    ];
    let mut all = Table::new(&[]);
    for (i, (name, p)) in sets.iter().enumerate() {
        let (lo, hi) = existence_range(p).ok_or_else(|| Error::Config(format!("{name}: no accelerator mode")))?;
        let (a, b) = (0.9 * lo, 1.02 * hi);
        let ks: Vec<f64> = (0..=steps).map(|j| a + (b - a) * j as f64 / steps as f64).collect();
        let scan = island_area_scan(p, &ks, &spec)?;
        let t = scan_table(&scan, Some(name));
        if i == 0 {
            all = Table::new(&t.header.iter().map(String::as_str).collect::<Vec<_>>());
        }
        for r in t.rows {
            all.push(r);
        }
        out.note(&format!("existence_range_k_{name}"), json!([lo, hi]));
    }
    out.write_table("island_area_scan.csv", &all)?;
    Ok(())
}
