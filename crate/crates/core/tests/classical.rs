use std::f64::consts::PI;

use proptest::prelude::*;

use kickfid::classical::{
    cloud_measures, existence_range, fixed_point, island_boundary, linear_stability, map_step,
    multipliers_on_unit_circle, phase_portrait, tangent_map, wrap_centered, write_boundary_csv,
    write_portrait_csv, CloudSpec, IslandSpec, IslandStatus, MapParams, PhasePoint,
    PortraitGrid, Sign,
};
use kickfid::rotor::RotorParams;

fn sign(b: bool) -> Sign {
    if b { Sign::Plus } else { Sign::Minus }
}

fn fig4(k: f64) -> MapParams {
    let tau = 5.86;
    MapParams::from_rotor(&RotorParams::from_tau(tau, 1, k, 0.01579 * tau, 0.48984326).unwrap()).unwrap()
}

fn quick_spec() -> IslandSpec {
    IslandSpec { n_kicks: 200_000, ..Default::default() }
}

proptest! {
    #[test]
    fn tangent_map_is_symplectic(k in 0.0f64..10.0, te in 0.0f64..3.0, plus: bool, theta in 0.0f64..6.28, j in -5.0f64..5.0) {
        let mp = MapParams::new(k, te, sign(plus)).unwrap();
        let p = PhasePoint::new(theta, j);
        let m = tangent_map(p, &mp);
        prop_assert!((m[0][0] * m[1][1] - m[0][1] * m[1][0] - 1.0).abs() < 1e-9);
        // finite differences of the map itself
        let h = 1e-6;
        let at = |dt: f64, dj: f64| map_step(PhasePoint { theta: p.theta + dt, j: p.j + dj }, &mp);
        let (a, b) = (at(h, 0.0), at(-h, 0.0));
        let (c, d) = (at(0.0, h), at(0.0, -h));
        let j11 = wrap_centered(a.theta - b.theta) / (2.0 * h);
        let j21 = (a.j - b.j) / (2.0 * h);
        let j12 = wrap_centered(c.theta - d.theta) / (2.0 * h);
        let j22 = (c.j - d.j) / (2.0 * h);
        prop_assert!((j11 * j22 - j12 * j21 - 1.0).abs() < 1e-5);
    }

    #[test]
    fn fixed_point_residual(k in 0.0f64..10.0, te in 0.0f64..3.0, plus: bool) {
        let mp = MapParams::new(k, te, sign(plus)).unwrap();
        match fixed_point(&mp) {
            Some(fp) => {
                let q = map_step(PhasePoint::new(fp.theta0, 0.0), &mp);
                prop_assert!(wrap_centered(q.theta - fp.theta0).abs() < 1e-12);
                prop_assert!(q.j.abs() < 1e-12);
            }
            None => prop_assert!(te > k),
        }
    }

    #[test]
    fn stability_iff_unit_multipliers(k in 0.0f64..10.0, te in 0.0f64..3.0, plus: bool) {
        let mp = MapParams::new(k, te, sign(plus)).unwrap();
        if let Some(fp) = fixed_point(&mp) {
            let margin = (k * fp.theta0.cos().abs() - 4.0).abs();
            prop_assume!(margin > 1e-6);
            let unit = multipliers_on_unit_circle(&linear_stability(&mp, fp.theta0), 1e-9);
            prop_assert_eq!(unit, fp.stable);
        }
    }
}

#[test]
fn existence_range_brackets_the_stable_mode() {
    let tau = 5.86;
    let p = RotorParams::from_tau(tau, 1, 2.0, 0.01579 * tau, 0.48984326).unwrap();
    let (lo, hi) = existence_range(&p).unwrap();
    let at = |k: f64| fixed_point(&MapParams::from_rotor(&p.with_k(k).unwrap()).unwrap());
    assert!(at(lo * 0.99).is_none());
    assert!(at(lo * 1.01).unwrap().stable);
    assert!(at(hi * 0.99).unwrap().stable);
    assert!(!at(hi * 1.01).unwrap().stable);
}

#[test]
fn harmonic_limit_area() {
    // pendulum separatrix area 16√K
    for &k in &[0.01, 0.04] {
        let mp = MapParams::new(k, 0.0, Sign::Minus).unwrap();
        let isl = island_boundary(&mp, &quick_spec()).unwrap();
        let want = 16.0 * f64::sqrt(k);
        assert!((isl.area - want).abs() / want < 0.25, "K = {k}: {} vs {want}", isl.area);
    }
}

#[test]
fn missing_and_unstable_islands() {
    let none = island_boundary(&MapParams::new(0.2, 0.5, Sign::Minus).unwrap(), &quick_spec()).unwrap();
    assert_eq!(none.status, IslandStatus::NoFixedPoint);
    assert_eq!(none.area, 0.0);
    let bad = island_boundary(&MapParams::new(6.0, 0.0, Sign::Minus).unwrap(), &quick_spec()).unwrap();
    assert_eq!(bad.status, IslandStatus::Unstable);
    assert_eq!(bad.area, 0.0);
}

#[test]
fn identical_maps_have_no_exclusive_measure() {
    let mp = fig4(0.7 * PI);
    let a = island_boundary(&mp, &quick_spec()).unwrap();
    let m = cloud_measures(&mp, &mp, (&a, &a), &CloudSpec { n_points: 2000, ..Default::default() }).unwrap();
    assert_eq!(m.mu_1_only, 0.0);
    assert_eq!(m.mu_2_only, 0.0);
    assert!(m.mu_both > 0.0);
}

#[test]
fn tiny_cloud_is_trapped_by_both() {
    let (mp1, mp2) = (fig4(0.7 * PI), fig4(0.8 * PI));
    let a1 = island_boundary(&mp1, &quick_spec()).unwrap();
    let a2 = island_boundary(&mp2, &quick_spec()).unwrap();
    let spec = CloudSpec { n_points: 1000, sigma_theta: Some(1e-4), sigma_j: Some(1e-4), ..Default::default() };
    let m = cloud_measures(&mp1, &mp2, (&a1, &a2), &spec).unwrap();
    assert!((m.mu_both - m.reference_area).abs() < 1e-15);
    assert_eq!(m.mu_1_only + m.mu_2_only, 0.0);
}

#[test]
fn cloud_measures_are_stationary() {
    let (mp1, mp2) = (fig4(0.7 * PI), fig4(0.8 * PI));
    let a1 = island_boundary(&mp1, &quick_spec()).unwrap();
    let a2 = island_boundary(&mp2, &quick_spec()).unwrap();
    let run = |n_kicks| cloud_measures(&mp1, &mp2, (&a1, &a2), &CloudSpec { n_points: 4000, n_kicks, ..Default::default() }).unwrap();
    let (m5, m10) = (run(500), run(1000));
    assert!(m10.total() <= m5.total() + 1e-12);
    assert!((m5.total() - m10.total()) / m5.total() < 0.05);
    assert!(m5.mu_1_only >= 0.0 && m5.mu_2_only > 0.0 && m5.mu_both > 0.0);
}

#[test]
fn island_contains_its_centre_and_is_deterministic() {
    let mp = fig4(0.7 * PI);
    let a = island_boundary(&mp, &quick_spec()).unwrap();
    let b = island_boundary(&mp, &quick_spec()).unwrap();
    assert_eq!(a.area, b.area);
    assert!(a.contains(PhasePoint::new(a.theta0, 0.0)));
    assert!(!a.contains(PhasePoint::new(a.theta0 + PI, 0.0)));
    assert_eq!(a.invalid_bins(), 0);
}

#[test]
fn csv_writers() {
    let mp = fig4(0.7 * PI);
    let pts = phase_portrait(&mp, &PortraitGrid { n_theta: 2, n_j: 2, n_kicks: 5, stride: 1 });
    assert_eq!(pts.len(), 2 * 2 * 6);
    let mut buf = Vec::new();
    write_portrait_csv(&mut buf, &pts).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("orbit[1],theta[rad],J[rad]\n"));
    let isl = island_boundary(&mp, &IslandSpec { n_kicks: 10_000, ..Default::default() }).unwrap();
    let mut buf = Vec::new();
    write_boundary_csv(&mut buf, &isl).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap().lines().count(), isl.boundary.len() + 1);
}
