//! Drives the command-line front end in-process: regenerates the phase
//! portraits of four parameter sets into `out/example_fig7`.
//!
//! `cargo run --release --example cli_reproduce`

fn main() {
    let code = kickfid::cli::run([
        "kickfid", "reproduce", "fig7",
        "--set", "map_kicks=300",
        "--out", "out/example_fig7",
    ]);
    std::process::exit(code);
}
