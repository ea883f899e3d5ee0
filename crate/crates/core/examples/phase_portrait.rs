//! Orbits of the pseudo-classical map around an accelerator island; the CSV
//! goes to stdout.
//!
//! `cargo run --release --example phase_portrait > portrait.csv`

use std::f64::consts::PI;

use kickfid::classical::{fixed_point, phase_portrait, write_portrait_csv, MapParams, PortraitGrid};
use kickfid::rotor::RotorParams;

fn main() -> kickfid::Result<()> {
    let tau = 5.86;
    let p = RotorParams::from_tau(tau, 1, 0.8 * PI, 0.01579 * tau, 0.48984326)?;
    let mp = MapParams::from_rotor(&p)?;
    if let Some(fp) = fixed_point(&mp) {
        eprintln!("fixed point at theta = {:.4}, J = 0 (stable: {})", fp.theta0, fp.stable);
    }
    let grid = PortraitGrid { n_theta: 10, n_j: 10, n_kicks: 500, stride: 1 };
    let points = phase_portrait(&mp, &grid);
    eprintln!("{} points", points.len());
    write_portrait_csv(std::io::stdout().lock(), &points)
}
