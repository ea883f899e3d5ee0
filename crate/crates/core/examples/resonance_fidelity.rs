//! Fidelity of a single β-rotor at exact resonance, from its Weyl sum.
//!
//! `cargo run --release --example resonance_fidelity`

use std::f64::consts::PI;

use kickfid::fidelity::{analytic_fidelity_trace, time_average};
use kickfid::resonance::{classify_regime, weyl_series, EtaInput, RationalityTolerance};

fn main() -> kickfid::Result<()> {
    let (k1, k2, l) = (0.8 * PI, 0.7 * PI, 1);
    let golden = (5f64.sqrt() - 1.0) / 2.0;
    let kicks = 20_000;

    for (label, eta, beta) in [
        ("eta = 1/10, resonant beta", EtaInput::Fraction { p: 1, q: 10 }, 0.5),
        ("eta = 1/10, generic beta", EtaInput::Fraction { p: 1, q: 10 }, 0.3),
        ("eta = golden mean", EtaInput::Float(golden), 0.3),
    ] {
        let regime = classify_regime(eta, beta, &RationalityTolerance::default());
        let w = weyl_series(eta.value(), beta, l, kicks)?;
        let f = analytic_fidelity_trace(eta, beta, l, k2 - k1, kicks as u64)?;
        let avg = time_average(&f);
        println!("{label}: predicted law {:?}", regime.predicted_law);
        for t in [10usize, 100, 1000, 10_000, 20_000] {
            println!(
                "  t = {t:>6}  |W_t| = {:>9.3}  F = {:.4e}  <F> = {:.4e}",
                w.w[t].norm(),
                f.f[t],
                avg.f[t - 1]
            );
        }
    }
    Ok(())
}
