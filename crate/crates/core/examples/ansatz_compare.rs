//! Tunneling ansatz, calibrated on the early fidelity and compared with the
//! smoothed trace. Short run; the full comparison needs ~1e5 kicks.
//!
//! `cargo run --release --example ansatz_compare`

use std::f64::consts::PI;

use kickfid::classical::{CloudSpec, IslandSpec};
use kickfid::decay::{ansatz_eval, ansatz_pipeline, AnsatzPipelineSpec};
use kickfid::fidelity::{run_accelerator_pair, AcceleratorRunSpec};
use kickfid::rotor::RotorParams;

fn main() -> kickfid::Result<()> {
    let tau = 5.86;
    let p1 = RotorParams::from_tau(tau, 1, 0.7 * PI, 0.01579 * tau, 0.48984326)?;
    let p2 = p1.with_k(0.8 * PI)?;
    let kicks = 6000;
    let run = run_accelerator_pair(&p1, &p2, &AcceleratorRunSpec { kicks, ..Default::default() })?;

    let spec = AnsatzPipelineSpec {
        fit_window: (500, kicks),
        island: IslandSpec { n_kicks: 200_000, ..Default::default() },
        cloud: CloudSpec { n_points: 4000, ..Default::default() },
        calibrate_window: (100, 3000),
        compare_window: (500, kicks),
        ..Default::default()
    };
    let rep = ansatz_pipeline(&run, &p1, &p2, &spec)?;
    println!("Γ1 = {:.3e}, Γ2 = {:.3e}", rep.gamma1.rate_or_slope, rep.gamma2.rate_or_slope);
    println!("measures: {:?}", rep.measures);
    println!("scale = {:.3}, log-RMS over {:?} = {:.3}", rep.model.scale, spec.compare_window, rep.comparison.residual_rms_log);
    for t in [500u64, 1000, 2000, 4000, 6000] {
        println!("  t = {t:>5}  F_smooth = {:.4e}  ansatz = {:.4e}", rep.smoothed.f[t as usize], ansatz_eval(&rep.model, t));
    }
    Ok(())
}
