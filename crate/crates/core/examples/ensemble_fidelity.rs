//! Quasi-momentum-averaged fidelity of a plane wave, on and off resonance.
//!
//! `cargo run --release --example ensemble_fidelity`

use std::f64::consts::PI;

use kickfid::fidelity::{fidelity_ensemble, EnsembleSpec, InitialStateSpec};
use kickfid::rotor::RotorParams;

fn main() -> kickfid::Result<()> {
    let kicks = 400;
    let spec = EnsembleSpec::new(400, 7);
    let init = InitialStateSpec::PlaneWave { n0: 0 };

    for eps in [0.0, 0.05] {
        let p1 = RotorParams::near_resonance(1, eps, 0.8 * PI, 0.1, 0.0)?;
        let p2 = p1.with_k(0.7 * PI)?;
        let f = fidelity_ensemble(&p1, &p2, &spec, &init, kicks)?;
        println!("epsilon = {eps}");
        for t in [1usize, 10, 50, 100, 200, 400] {
            println!("  t = {t:>4}  F = {:.5}", f.f[t]);
        }
    }
    Ok(())
}
