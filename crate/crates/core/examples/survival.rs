//! Survival probability in an accelerator mode and its exponential decay rate.
//!
//! `cargo run --release --example survival`

use std::f64::consts::PI;

use kickfid::decay::survival_rate;
use kickfid::fidelity::{run_accelerator_pair, AcceleratorRunSpec};
use kickfid::rotor::RotorParams;

fn main() -> kickfid::Result<()> {
    let tau = 5.86;
    let p1 = RotorParams::from_tau(tau, 1, 0.7 * PI, 0.01579 * tau, 0.48984326)?;
    let p2 = p1.with_k(0.8 * PI)?;
    let run = run_accelerator_pair(&p1, &p2, &AcceleratorRunSpec { kicks: 4000, ..Default::default() })?;

    for (name, s) in [("k = 0.7π", &run.survival1), ("k = 0.8π", &run.survival2)] {
        let fit = survival_rate(s, (500, 4000), 1e-9)?;
        println!(
            "{name}: P(4000) = {:.4}  Γ = {:.3e} ± {:.1e} (jackknife) over {:?}",
            s.f[4000], fit.rate_or_slope, fit.jackknife_std_error, fit.window
        );
    }
    Ok(())
}
