//! Flat `key = value` run configuration with typed, recorded lookups.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};
use std::path::Path;

use crate::error::{Error, Result};
use crate::resonance::EtaInput;
use crate::rotor::RotorParams;

/// Every key understood by some subcommand.
pub const KNOWN_KEYS: &[&str] = &[
    "beta", "cloud_kicks", "compare_end", "compare_start", "calibrate_end", "calibrate_start",
    "d_phi", "decimate", "delta_k", "epsilon", "eta", "fidelity_fit_start", "fit_end", "fit_start", "half_width",
    "k", "k1", "k2", "k_max", "k_min", "k_steps", "kicks", "l", "m", "map_kicks", "n0",
    "n_beta", "n_j", "n_points", "n_theta", "n_traj", "out", "sampling", "seed", "sigma2",
    "smooth", "stride", "survival_floor", "tau",
];

/// Parses a real: a plain number, `pi`, `<x>pi`, `<x>*pi`, `<a>/<b>` or
/// `golden` for (√5 − 1)/2.
pub fn parse_real(s: &str) -> Option<f64> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if s == "golden" {
        return Some((5f64.sqrt() - 1.0) / 2.0);
    }
    if let Some((a, b)) = s.split_once('/') {
        let (a, b) = (parse_real(a)?, parse_real(b)?);
        return (b != 0.0).then_some(a / b);
    }
    if let Some(head) = s.strip_suffix("pi") {
        let head = head.trim().trim_end_matches('*').trim();
        return if head.is_empty() {
            Some(PI)
        } else {
            head.parse::<f64>().ok().map(|x| x * PI)
        };
    }
    s.parse::<f64>().ok().filter(|x| x.is_finite())
}

/// Layered configuration: defaults < file < command-line overrides. Every
/// value read is recorded, so the resolved set can be written back out.
#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    raw: BTreeMap<String, String>,
    resolved: BTreeMap<String, String>,
    file_bytes: Vec<u8>,
}

impl RunConfig {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse_text(&mut self, text: &str) -> Result<()> {
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(Error::Config(format!(
                    "line {}: expected `key = value`, got `{line}`",
                    i + 1
                )));
            };
            self.set(k.trim(), v.trim())?;
        }
        Ok(())
    }

    pub fn load_file(&mut self, path: &Path) -> Result<()> {
        let bytes = std::fs::read(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        let text = String::from_utf8(bytes.clone())
            .map_err(|_| Error::Config(format!("config {} is not UTF-8", path.display())))?;
        self.file_bytes = bytes;
        self.parse_text(&text)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.replace('-', "_");
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(Error::Config(format!("unknown config key `{key}`")));
        }
        self.raw.insert(key, value.to_string());
        Ok(())
    }

    /// Sets `key` unless it is already present.
    pub fn set_default(&mut self, key: &str, value: &str) {
        self.raw.entry(key.to_string()).or_insert_with(|| value.to_string());
    }

    pub fn contains(&self, key: &str) -> bool {
        self.raw.contains_key(key)
    }

    pub fn file_bytes(&self) -> &[u8] {
        &self.file_bytes
    }

    pub fn resolved(&self) -> &BTreeMap<String, String> {
        &self.resolved
    }

    /// Resolved configuration in the file format, one key per line, sorted.
    pub fn to_text(&self) -> String {
        self.resolved.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }

    fn record(&mut self, key: &str, value: String) {
        self.resolved.insert(key.to_string(), value);
    }

    pub fn str_or(&mut self, key: &str, default: &str) -> String {
        let v = self.raw.get(key).cloned().unwrap_or_else(|| default.to_string());
        self.record(key, v.clone());
        v
    }

    pub fn f64_opt(&mut self, key: &str) -> Result<Option<f64>> {
        match self.raw.get(key).cloned() {
            None => Ok(None),
            Some(s) => {
                let v = parse_real(&s)
                    .ok_or_else(|| Error::Config(format!("`{key}`: cannot parse `{s}` as a number")))?;
                self.record(key, s);
                Ok(Some(v))
            }
        }
    }

    pub fn f64_or(&mut self, key: &str, default: f64) -> Result<f64> {
        match self.f64_opt(key)? {
            Some(v) => Ok(v),
            None => {
                self.record(key, format!("{default}"));
                Ok(default)
            }
        }
    }

    pub fn i64_opt(&mut self, key: &str) -> Result<Option<i64>> {
        match self.raw.get(key).cloned() {
            None => Ok(None),
            Some(s) => {
                let v = parse_count(&s).ok_or_else(|| {
                    Error::Config(format!("`{key}`: cannot parse `{s}` as an integer"))
                })?;
                self.record(key, s);
                Ok(Some(v))
            }
        }
    }

    pub fn u64_or(&mut self, key: &str, default: u64) -> Result<u64> {
        match self.i64_opt(key)? {
            Some(v) if v >= 0 => Ok(v as u64),
            Some(v) => Err(Error::Config(format!("`{key}` must be >= 0, got {v}"))),
            None => {
                self.record(key, default.to_string());
                Ok(default)
            }
        }
    }

    /// η, kept as an exact fraction when written `p/q` with integers.
    pub fn eta_or(&mut self, default: &str) -> Result<EtaInput> {
        let s = self.str_or("eta", default);
        if let Some((a, b)) = s.split_once('/') {
            if let (Ok(p), Ok(q)) = (a.trim().parse::<u64>(), b.trim().parse::<u64>()) {
                if q == 0 {
                    return Err(Error::Config("`eta`: zero denominator".into()));
                }
                let g = crate::resonance::weyl::gcd(p, q);
                return Ok(EtaInput::Fraction { p: p / g, q: q / g });
            }
        }
        parse_real(&s)
            .map(EtaInput::Float)
            .ok_or_else(|| Error::Config(format!("`eta`: cannot parse `{s}`")))
    }

    /// Rotor parameters from `tau`/`epsilon`/`l`, `eta`, `beta` and the kick
    /// strength under `k_key`. Giving both `tau` and `epsilon` requires them
    /// to agree.
    pub fn rotor(&mut self, k_key: &str, defaults: &RotorDefaults) -> Result<RotorParams> {
        let l = self.u64_or("l", defaults.l as u64)?;
        if l == 0 || l > u32::MAX as u64 {
            return Err(Error::Config(format!("`l` must be a positive integer, got {l}")));
        }
        let l = l as u32;
        let tau = self.f64_opt("tau")?;
        let eps = self.f64_opt("epsilon")?;
        // Some(τ) builds from τ, None from ε
        let (tau, eps) = match (tau, eps) {
            (Some(t), Some(e)) => {
                if (t - TAU * l as f64 - e).abs() > 1e-12 * t.abs().max(1.0) {
                    return Err(Error::Config(format!(
                        "tau = {t} and epsilon = {e} disagree for l = {l} (tau must equal 2πl + epsilon)"
                    )));
                }
                (Some(t), e)
            }
            (Some(t), None) => (Some(t), 0.0),
            (None, Some(e)) => (None, e),
            (None, None) => match defaults.tau {
                Some(t) => {
                    self.record("tau", format!("{t}"));
                    (Some(t), 0.0)
                }
                None => {
                    self.record("epsilon", format!("{}", defaults.epsilon));
                    (None, defaults.epsilon)
                }
            },
        };
        let eta = self.eta_or(&defaults.eta)?.value();
        let beta = self.f64_or("beta", defaults.beta)?;
        let k = self.f64_or(k_key, defaults.k)?;
        let p = match tau {
            Some(t) => RotorParams::from_tau(t, l, k, eta, beta),
            None => RotorParams::near_resonance(l, eps, k, eta, beta),
        };
        p.map_err(|e| Error::Config(e.to_string()))
    }
}

fn parse_count(s: &str) -> Option<i64> {
    let s = s.trim();
    if let Ok(v) = s.parse::<i64>() {
        return Some(v);
    }
    // accept 1e5-style integers
    let x: f64 = s.parse().ok()?;
    (x.fract() == 0.0 && x.abs() < 9.0e15).then_some(x as i64)
}

/// Fallback rotor parameters of a subcommand.
#[derive(Debug, Clone)]
pub struct RotorDefaults {
    pub l: u32,
    /// Takes precedence over `epsilon` when set.
    pub tau: Option<f64>,
    pub epsilon: f64,
    pub eta: String,
    pub beta: f64,
    pub k: f64,
}

impl RotorDefaults {
    pub fn resonant(eta: &str, beta: f64, k: f64) -> Self {
        RotorDefaults {
            l: 1,
            tau: None,
            epsilon: 0.0,
            eta: eta.to_string(),
            beta,
            k,
        }
    }

    /// The detuned parameter set used for the accelerator-mode figures.
    pub fn accelerator(k: f64) -> Self {
        RotorDefaults {
            l: 1,
            tau: Some(5.86),
            epsilon: 0.0,
            eta: format!("{}", 0.01579 * 5.86),
            beta: 0.48984326,
            k,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_numbers() {
        assert_eq!(parse_real("0.5"), Some(0.5));
        assert_eq!(parse_real("pi"), Some(PI));
        assert_eq!(parse_real("0.7pi"), Some(0.7 * PI));
        assert_eq!(parse_real("0.7*pi"), Some(0.7 * PI));
        assert_eq!(parse_real("1/10"), Some(0.1));
        assert_eq!(parse_real("golden"), Some((5f64.sqrt() - 1.0) / 2.0));
        assert_eq!(parse_real("x"), None);
        assert_eq!(parse_count("1e5"), Some(100_000));
    }

    #[test]
    fn file_and_overrides() {
        let mut c = RunConfig::new();
        c.parse_text("# comment\ntau = 5.86\nk1 = 0.7pi  # trailing\n").unwrap();
        c.set("k1", "0.8pi").unwrap();
        let p = c.rotor("k1", &RotorDefaults::accelerator(1.0)).unwrap();
        assert_eq!(p.k(), 0.8 * PI);
        assert_eq!(p.tau(), 5.86);
        assert!(c.to_text().contains("k1 = 0.8pi"));
        assert!(c.set("bogus", "1").is_err());
        assert!(c.parse_text("no equals sign").is_err());
    }

    #[test]
    fn inconsistent_tau_epsilon() {
        let mut c = RunConfig::new();
        c.set("tau", "5.86").unwrap();
        c.set("epsilon", "-0.1").unwrap();
        assert!(c.rotor("k1", &RotorDefaults::accelerator(1.0)).is_err());
    }

    #[test]
    fn exact_eta_fraction() {
        let mut c = RunConfig::new();
        c.set("eta", "2/20").unwrap();
        assert_eq!(c.eta_or("0").unwrap(), EtaInput::Fraction { p: 1, q: 10 });
    }
}
