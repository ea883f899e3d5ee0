//! Overlap measures of the islands of two kick strengths, from a Gaussian
//! cloud of classical points.
//!
//! `cargo run --release --example cloud_measures`

use std::f64::consts::PI;

use kickfid::classical::{cloud_measures, island_boundary, CloudSpec, IslandSpec, MapParams};
use kickfid::rotor::RotorParams;

fn main() -> kickfid::Result<()> {
    let tau = 5.86;
    let p1 = RotorParams::from_tau(tau, 1, 0.7 * PI, 0.01579 * tau, 0.48984326)?;
    let p2 = p1.with_k(0.8 * PI)?;
    let (mp1, mp2) = (MapParams::from_rotor(&p1)?, MapParams::from_rotor(&p2)?);
    let ispec = IslandSpec { n_kicks: 200_000, ..Default::default() };
    let a1 = island_boundary(&mp1, &ispec)?;
    let a2 = island_boundary(&mp2, &ispec)?;
    println!("areas: A1 = {:.3}, A2 = {:.3}", a1.area, a2.area);

    let m = cloud_measures(&mp1, &mp2, (&a1, &a2), &CloudSpec { n_points: 4000, ..Default::default() })?;
    println!("mu(A1 only) = {:.4}", m.mu_1_only);
    println!("mu(A2 only) = {:.4}", m.mu_2_only);
    println!("mu(both)    = {:.4}", m.mu_both);
    println!("cloud widths: sigma_theta = {:.3}, sigma_J = {:.3}", m.sigma_theta, m.sigma_j);
    Ok(())
}
