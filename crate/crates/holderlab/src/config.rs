//! Experiment configuration: one flat key = value file, environment-variable
//! overrides (prefix `HOLDERLAB_`), command-line flags on top.

use crate::analysis::ClassifyThresholds;
use crate::error::{Error, Result};
use crate::sieve::SieveParams;
use crate::synthesis::Window;
use crate::wavelets::{Family, WaveletSpec};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub seeds: Vec<u64>,
    pub wavelet: WaveletSpec,
    pub h: f64,
    /// Optional affine Hurst description `(a, b)` for `H(t) = a + b t`.
    pub hurst_affine: Option<(f64, f64)>,
    pub j_max: u32,
    pub j_grid: u32,
    pub window: Window,
    pub sieve: SieveParams,
    pub j_lo: u32,
    /// Scales between the finest analysis scale and the grid.
    pub margin: u32,
    pub thresholds: ClassifyThresholds,
    pub out_dir: String,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seeds: vec![1],
            wavelet: WaveletSpec::daubechies(4).expect("db4"),
            h: 0.5,
            hurst_affine: None,
            j_max: 14,
            j_grid: 16,
            window: Window::UNIT,
            sieve: SieveParams::default(),
            j_lo: 5,
            margin: 4,
            thresholds: ClassifyThresholds::default(),
            out_dir: "out".into(),
        }
    }
}

fn parse_seed(s: &str) -> Result<u64> {
    let s = s.trim();
    let parsed = if let Some(hex) = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        u64::from_str_radix(hex, 16)
    } else {
        s.parse()
    };
    parsed.map_err(|_| Error::Config(format!("bad seed {s:?}: expected decimal or 0x-hex u64")))
}

fn parse_num<T: std::str::FromStr>(key: &str, s: &str) -> Result<T> {
    s.trim().parse().map_err(|_| Error::Config(format!("bad value {s:?} for key {key}")))
}

fn parse_bool(key: &str, s: &str) -> Result<bool> {
    match s.trim() {
        "true" | "1" | "yes" | "on" => Ok(true),
        "false" | "0" | "no" | "off" => Ok(false),
        other => Err(Error::Config(format!("bad boolean {other:?} for key {key}"))),
    }
}

fn parse_wavelet(s: &str) -> Result<WaveletSpec> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("tent") || s.eq_ignore_ascii_case("faber-schauder") {
        return Ok(WaveletSpec::faber_schauder());
    }
    if let Some(n) = s.strip_prefix("db").and_then(|n| n.parse::<u8>().ok()) {
        return WaveletSpec::daubechies(n);
    }
    Err(Error::Config(format!("unknown wavelet {s:?}: expected tent or db2..db10")))
}

fn wavelet_str(spec: &WaveletSpec) -> String {
    match spec.family {
        Family::FaberSchauder => "tent".into(),
        Family::Daubechies(n) => format!("db{n}"),
    }
}

impl ExperimentConfig {
    /// Apply one `key = value` pair.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "seeds" => {
                self.seeds = value
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(parse_seed)
                    .collect::<Result<_>>()?;
                if self.seeds.is_empty() {
                    return Err(Error::Config("seeds list is empty".into()));
                }
            }
            "wavelet" => self.wavelet = parse_wavelet(value)?,
            "h" => {
                let h: f64 = parse_num(key, value)?;
                if !(0.0 < h && h < 1.0) {
                    return Err(Error::Config(format!("h = {h} must lie in (0, 1)")));
                }
                self.h = h;
            }
            "hurst_affine" => {
                let parts: Vec<&str> = value.split(',').collect();
                if parts.len() != 2 {
                    return Err(Error::Config("hurst_affine expects two comma-separated numbers a, b".into()));
                }
                self.hurst_affine = Some((parse_num(key, parts[0])?, parse_num(key, parts[1])?));
            }
            "j_max" => self.j_max = parse_num(key, value)?,
            "j_grid" => self.j_grid = parse_num(key, value)?,
            "window" => {
                let parts: Vec<&str> = value.split(',').collect();
                if parts.len() != 2 {
                    return Err(Error::Config("window expects lo, hi".into()));
                }
                self.window = Window::new(parse_num(key, parts[0])?, parse_num(key, parts[1])?)?;
            }
            "sieve_m" => self.sieve.m = parse_num(key, value)?,
            "sieve_mu" => self.sieve.mu = parse_num(key, value)?,
            "sieve_j_cap" => self.sieve.j_cap = parse_num(key, value)?,
            "sieve_j1" => self.sieve.j1 = parse_num(key, value)?,
            "sieve_trim" => self.sieve.trim_edges = parse_bool(key, value)?,
            "j_lo" => self.j_lo = parse_num(key, value)?,
            "margin" => self.margin = parse_num(key, value)?,
            "rho_slow" => self.thresholds.rho_slow = parse_num(key, value)?,
            "rho_rapid" => self.thresholds.rho_rapid = parse_num(key, value)?,
            "trace_min" => self.thresholds.trace_min = parse_num(key, value)?,
            "out_dir" => self.out_dir = value.trim().to_string(),
            other => return Err(Error::Config(format!("unknown config key {other:?}"))),
        }
        Ok(())
    }

    /// Serialize to the on-disk key = value format (lossless round trip).
    pub fn to_key_values(&self) -> String {
        let mut out = String::from("# holderlab experiment configuration\n");
        let seeds: Vec<String> = self.seeds.iter().map(|s| s.to_string()).collect();
        let mut push = |k: &str, v: String| {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(&v);
            out.push('\n');
        };
        push("seeds", seeds.join(","));
        push("wavelet", wavelet_str(&self.wavelet));
        push("h", format!("{}", self.h));
        if let Some((a, b)) = self.hurst_affine {
            push("hurst_affine", format!("{a},{b}"));
        }
        push("j_max", self.j_max.to_string());
        push("j_grid", self.j_grid.to_string());
        push("window", format!("{},{}", self.window.lo, self.window.hi));
        push("sieve_m", self.sieve.m.to_string());
        push("sieve_mu", self.sieve.mu.to_string());
        push("sieve_j_cap", self.sieve.j_cap.to_string());
        push("sieve_j1", self.sieve.j1.to_string());
        push("sieve_trim", self.sieve.trim_edges.to_string());
        push("j_lo", self.j_lo.to_string());
        push("margin", self.margin.to_string());
        push("rho_slow", format!("{}", self.thresholds.rho_slow));
        push("rho_rapid", format!("{}", self.thresholds.rho_rapid));
        push("trace_min", format!("{}", self.thresholds.trace_min));
        push("out_dir", self.out_dir.clone());
        out
    }

    pub fn parse_key_values(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected key = value", lineno + 1))
            })?;
            cfg.set(key.trim(), value.trim())?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg = Self::parse_key_values(&text)?;
        cfg.apply_env_overrides(std::env::vars())?;
        Ok(cfg)
    }

    /// Apply `HOLDERLAB_<KEY>` environment overrides (keys matched
    /// case-insensitively after the prefix).
    pub fn apply_env_overrides(
        &mut self,
        vars: impl Iterator<Item = (String, String)>,
    ) -> Result<()> {
        // sort for deterministic application order
        let mut relevant: BTreeMap<String, String> = BTreeMap::new();
        for (k, v) in vars {
            if let Some(rest) = k.strip_prefix("HOLDERLAB_") {
                relevant.insert(rest.to_ascii_lowercase(), v);
            }
        }
        for (k, v) in relevant {
            self.set(&k, &v)?;
        }
        Ok(())
    }

    /// Cross-field checks performed before a command runs.
    pub fn validate(&self) -> Result<()> {
        if self.j_grid < self.j_max {
            return Err(Error::Config(format!(
                "j_grid = {} must be at least j_max = {}",
                self.j_grid, self.j_max
            )));
        }
        let j_hi = self.j_hi()?;
        if self.j_lo > j_hi {
            return Err(Error::Config(format!(
                "analysis range empty: j_lo = {} > j_grid - margin - 1 = {j_hi}",
                self.j_lo
            )));
        }
        Ok(())
    }

    /// Finest analysis scale: `j_grid - margin` (margin at least 1, since
    /// annuli need two grid points).
    pub fn j_hi(&self) -> Result<u32> {
        self.j_grid.checked_sub(self.margin.max(1)).ok_or_else(|| {
            Error::Config(format!("margin {} exceeds j_grid {}", self.margin, self.j_grid))
        })
    }
}
