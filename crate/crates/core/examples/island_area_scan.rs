//! Area of the stable accelerator island across its existence range.
//!
//! `cargo run --release --example island_area_scan`

use std::f64::consts::PI;

use kickfid::classical::{existence_range, island_area_scan, IslandSpec};
use kickfid::rotor::RotorParams;

fn main() -> kickfid::Result<()> {
    let tau = 5.86;
    let p = RotorParams::from_tau(tau, 1, 0.7 * PI, 0.01579 * tau, 0.48984326)?;
    let (lo, hi) = existence_range(&p).expect("non-zero detuning");
    println!("island exists for k in [{:.3}π, {:.3}π]", lo / PI, hi / PI);

    let ks: Vec<f64> = (3..=12).map(|i| i as f64 * 0.1 * PI).collect();
    let spec = IslandSpec { n_kicks: 100_000, ..Default::default() };
    for s in island_area_scan(&p, &ks, &spec)? {
        println!(
            "  k = {:.1}π  {:?}  area = {:.3}  convergence change = {:.1}%",
            s.k / PI,
            s.status,
            s.area,
            100.0 * s.max_relative_change
        );
    }
    Ok(())
}
