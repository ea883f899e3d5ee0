//! Command-line frontend: flag and config parsing, dispatch and manifests.

pub mod commands;
pub mod config;
pub mod output;
pub mod reproduce;

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
pub use config::{parse_real, RotorDefaults, RunConfig, KNOWN_KEYS};
pub use output::{RunOutput, Table};
pub use reproduce::Figure;

/// Environment variable fixing the worker thread count.
pub const THREADS_ENV: &str = "KICKFID_THREADS";

#[derive(Debug, Parser)]
#[command(name = "kickfid", version, about = "Fidelity of kicked atoms with gravity near a quantum resonance")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Single-rotor fidelity at exact resonance (closed form).
    ResonanceFidelity(Common),
    /// Quasi-momentum ensemble fidelity.
    EnsembleFidelity(Common),
    /// Two-branch fidelity near resonance from the accelerator-mode state.
    NearResonanceFidelity(Common),
    /// Accelerator-mode survival probability and its decay rate.
    Survival(Common),
    /// Orbits of the pseudo-classical map.
    PhasePortrait(Common),
    /// Stable-island area against kick strength.
    IslandAreaScan(Common),
    /// Overlap measures of the two islands.
    CloudMeasures(Common),
    /// Calibrated tunneling ansatz against smoothed fidelity.
    AnsatzCompare(Common),
    /// Regenerate the data of a figure.
    Reproduce {
        #[arg(value_enum)]
        figure: Figure,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Clone, Args)]
struct Common {
    /// Flat `key = value` configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    tau: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    epsilon: Option<String>,
    #[arg(long)]
    l: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    k: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    k1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    k2: Option<String>,
    #[arg(long = "delta-k", allow_hyphen_values = true)]
    delta_k: Option<String>,
    #[arg(long)]
    eta: Option<String>,
    #[arg(long)]
    beta: Option<String>,
    #[arg(long)]
    kicks: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Any other configuration key.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl Common {
    fn into_config(self) -> Result<RunConfig> {
        let mut cfg = RunConfig::new();
        if let Some(path) = &self.config {
            cfg.load_file(path)?;
        }
        let flags = [
            ("tau", self.tau),
            ("epsilon", self.epsilon),
            ("l", self.l),
            ("k", self.k),
            ("k1", self.k1),
            ("k2", self.k2),
            ("delta_k", self.delta_k),
            ("eta", self.eta),
            ("beta", self.beta),
            ("kicks", self.kicks),
            ("seed", self.seed),
            ("out", self.out.map(|p| p.to_string_lossy().into_owned())),
        ];
        for (key, v) in flags {
            if let Some(v) = v {
                cfg.set(key, &v)?;
            }
        }
        for kv in &self.set {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("--set expects KEY=VALUE, got `{kv}`")))?;
            cfg.set(k.trim(), v.trim())?;
        }
        Ok(cfg)
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(dir) => {
            println!("{}", dir.display());
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("{THREADS_ENV} must be a positive integer, got `{v}`")))?;
    // a pool built earlier in the same process wins
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn execute(cli: Cli) -> Result<PathBuf> {
    configure_threads()?;
    let (name, common, fig) = match cli.command {
        Command::ResonanceFidelity(c) => ("resonance-fidelity", c, None),
        Command::EnsembleFidelity(c) => ("ensemble-fidelity", c, None),
        Command::NearResonanceFidelity(c) => ("near-resonance-fidelity", c, None),
        Command::Survival(c) => ("survival", c, None),
        Command::PhasePortrait(c) => ("phase-portrait", c, None),
        Command::IslandAreaScan(c) => ("island-area-scan", c, None),
        Command::CloudMeasures(c) => ("cloud-measures", c, None),
        Command::AnsatzCompare(c) => ("ansatz-compare", c, None),
        Command::Reproduce { figure, common } => ("reproduce", common, Some(figure)),
    };
    let mut cfg = common.into_config()?;
    let label = match fig {
        Some(f) => format!("{name} {}", f.name()),
        None => name.to_string(),
    };
    let default_out = match fig {
        Some(f) => format!("out/{}", f.name()),
        None => format!("out/{name}"),
    };
    let dir = PathBuf::from(cfg.str_or("out", &default_out));
    let mut out = RunOutput::new(&dir)?;
    let start = Instant::now();
    match (name, fig) {
        (_, Some(f)) => reproduce::reproduce(f, &mut cfg, &mut out)?,
        ("resonance-fidelity", _) => commands::resonance_fidelity(&mut cfg, &mut out)?,
        ("ensemble-fidelity", _) => commands::ensemble_fidelity(&mut cfg, &mut out)?,
        ("near-resonance-fidelity", _) => commands::near_resonance_fidelity(&mut cfg, &mut out)?,
        ("survival", _) => commands::survival(&mut cfg, &mut out)?,
        ("phase-portrait", _) => commands::phase_portrait_cmd(&mut cfg, &mut out)?,
        ("island-area-scan", _) => commands::island_area_scan_cmd(&mut cfg, &mut out)?,
        ("cloud-measures", _) => commands::cloud_measures_cmd(&mut cfg, &mut out)?,
        _ => commands::ansatz_compare(&mut cfg, &mut out)?,
    }
    let elapsed = start.elapsed().as_secs_f64();
    let text = cfg.to_text();
    let bytes = cfg.file_bytes().to_vec();
    let resolved = cfg.resolved().clone();
    out.finish(&label, &text, &bytes, &resolved, elapsed)?;
    Ok(dir)
}
