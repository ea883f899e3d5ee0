//! Two-branch fidelity of a Gaussian packet launched on an accelerator mode.
//!
//! `cargo run --release --example near_resonance_fidelity`

use std::f64::consts::PI;

use kickfid::fidelity::{moving_average, run_accelerator_pair, AcceleratorRunSpec};
use kickfid::rotor::RotorParams;

fn main() -> kickfid::Result<()> {
    let tau = 5.86;
    let p1 = RotorParams::from_tau(tau, 1, 0.7 * PI, 0.01579 * tau, 0.48984326)?;
    let p2 = p1.with_k(0.8 * PI)?;
    let spec = AcceleratorRunSpec { kicks: 3000, ..Default::default() };
    let run = run_accelerator_pair(&p1, &p2, &spec)?;
    let smooth = moving_average(&run.fidelity, 100);

    println!("epsilon = {:.4}, mode centre n0 = {:.2}", p1.epsilon(), run.n0);
    for t in [0usize, 100, 500, 1000, 2000, 3000] {
        println!(
            "  t = {t:>5}  F = {:.4}  F_smooth = {:.4}  packet at n = {:>9.1}",
            run.fidelity.f[t], smooth.f[t], run.packet_center[t]
        );
    }
    println!("lattice sites at the end: {}", run.final_sites);
    Ok(())
}
