//! Flat `key = value` run configuration.
//!
//! One pair per line, `#` starts a comment, unknown and duplicate keys are
//! errors. Every numeric constraint the solver enforces later is re-checked
//! here so mistakes are reported with the offending line number instead of
//! surfacing mid-run.

use std::collections::HashMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use splinecdr::problem::{AssemblyMode, Preset};

/// Fully validated description of one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub preset: Preset,
    /// Domain length `L`.
    pub length: f64,
    /// Diffusion `D`.
    pub diffusion: f64,
    /// Convection `V`.
    pub convection: f64,
    /// Reaction `A`.
    pub reaction: f64,
    /// Knot count `N`; the spacing is `h = L / (N - 1)`.
    pub n: usize,
    /// Collocation offset as a fraction of `h`, strictly inside (0, 1).
    pub mu_fraction: f64,
    /// Time step.
    pub rho: f64,
    pub t_end: f64,
    /// Times whose nearest completed steps get written out.
    pub snapshot_times: Vec<f64>,
    pub mode: AssemblyMode,
    /// Refuse to step when the monotonicity check fails.
    pub strict_monotone: bool,
    pub out_dir: PathBuf,
}

/// Parse failure carrying the offending line when there is one.
#[derive(Debug, Clone)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl ConfigError {
    fn at(line: usize, message: impl Into<String>) -> ConfigError {
        ConfigError {
            line: Some(line),
            message: message.into(),
        }
    }

    fn global(message: impl Into<String>) -> ConfigError {
        ConfigError {
            line: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "config line {line}: {}", self.message),
            None => write!(f, "config: {}", self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

const KEYS: [&str; 13] = [
    "preset",
    "L",
    "D",
    "V",
    "A",
    "N",
    "mu_fraction",
    "rho",
    "t_end",
    "snapshot_times",
    "mode",
    "strict_monotone",
    "out_dir",
];

const REQUIRED: [&str; 8] = ["preset", "L", "D", "V", "A", "N", "rho", "t_end"];

struct Entry {
    line: usize,
    value: String,
}

fn lex(text: &str) -> Result<HashMap<&str, Entry>, ConfigError> {
    let mut entries: HashMap<&str, Entry> = HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(ConfigError::at(line, format!("expected `key = value`, got `{content}`")));
        };
        let (key, value) = (key.trim(), value.trim());
        let Some(&key) = KEYS.iter().find(|&&k| k == key) else {
            return Err(ConfigError::at(line, format!("unknown key `{key}`")));
        };
        if value.is_empty() {
            return Err(ConfigError::at(line, format!("empty value for key `{key}`")));
        }
        if let Some(first) = entries.get(key) {
            return Err(ConfigError::at(
                line,
                format!("duplicate key `{key}` (already set on line {})", first.line),
            ));
        }
        entries.insert(
            key,
            Entry {
                line,
                value: value.to_string(),
            },
        );
    }
    Ok(entries)
}

fn number(entry: &Entry, key: &str) -> Result<f64, ConfigError> {
    let v: f64 = entry
        .value
        .parse()
        .map_err(|_| ConfigError::at(entry.line, format!("malformed number `{}` for key `{key}`", entry.value)))?;
    if !v.is_finite() {
        return Err(ConfigError::at(entry.line, format!("key `{key}` must be finite, got `{}`", entry.value)));
    }
    Ok(v)
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let entries = lex(text)?;

    let missing: Vec<&str> = REQUIRED
        .iter()
        .copied()
        .filter(|k| !entries.contains_key(k))
        .collect();
    if !missing.is_empty() {
        return Err(ConfigError::global(format!("missing required key(s): {}", missing.join(", "))));
    }

    let preset_entry = &entries["preset"];
    let preset = Preset::from_str(&preset_entry.value)
        .map_err(|e| ConfigError::at(preset_entry.line, e.to_string()))?;

    let length = number(&entries["L"], "L")?;
    if !(length > 0.0) {
        return Err(ConfigError::at(entries["L"].line, format!("L must be positive, got {length}")));
    }
    let diffusion = number(&entries["D"], "D")?;
    if !(diffusion > 0.0) {
        return Err(ConfigError::at(entries["D"].line, format!("D must be positive, got {diffusion}")));
    }
    let convection = number(&entries["V"], "V")?;
    if convection == 0.0 {
        return Err(ConfigError::at(entries["V"].line, "V must be nonzero"));
    }
    let reaction = number(&entries["A"], "A")?;

    let n_entry = &entries["N"];
    let n: usize = n_entry
        .value
        .parse()
        .map_err(|_| ConfigError::at(n_entry.line, format!("malformed integer `{}` for key `N`", n_entry.value)))?;
    if n < 4 {
        return Err(ConfigError::at(n_entry.line, format!("N must be at least 4, got {n}")));
    }

    let mu_fraction = match entries.get("mu_fraction") {
        Some(entry) => {
            let v = number(entry, "mu_fraction")?;
            if !(v > 0.0 && v < 1.0) {
                return Err(ConfigError::at(
                    entry.line,
                    format!("mu_fraction must lie strictly inside (0, 1), got {v}"),
                ));
            }
            v
        }
        None => 0.5,
    };

    let rho = number(&entries["rho"], "rho")?;
    if !(rho > 0.0) {
        return Err(ConfigError::at(entries["rho"].line, format!("rho must be positive, got {rho}")));
    }
    let t_end = number(&entries["t_end"], "t_end")?;
    if t_end < rho * (1.0 - 1e-9) {
        return Err(ConfigError::at(
            entries["t_end"].line,
            format!("t_end = {t_end} is shorter than one time step rho = {rho}"),
        ));
    }

    let snapshot_times = match entries.get("snapshot_times") {
        Some(entry) => {
            let mut times = Vec::new();
            for piece in entry.value.split(',') {
                let piece = piece.trim();
                let t: f64 = piece.parse().map_err(|_| {
                    ConfigError::at(entry.line, format!("malformed number `{piece}` in snapshot_times"))
                })?;
                if !(t > 0.0) || t > t_end * (1.0 + 1e-9) {
                    return Err(ConfigError::at(
                        entry.line,
                        format!("snapshot time {t} lies outside (0, t_end = {t_end}]"),
                    ));
                }
                times.push(t);
            }
            times
        }
        None => vec![t_end],
    };

    let mode = match entries.get("mode") {
        Some(entry) => match entry.value.as_str() {
            "uniform" => AssemblyMode::Uniform,
            "general" => AssemblyMode::General,
            other => {
                return Err(ConfigError::at(
                    entry.line,
                    format!("mode must be `uniform` or `general`, got `{other}`"),
                ))
            }
        },
        None => AssemblyMode::Uniform,
    };

    let strict_monotone = match entries.get("strict_monotone") {
        Some(entry) => match entry.value.as_str() {
            "true" => true,
            "false" => false,
            other => {
                return Err(ConfigError::at(
                    entry.line,
                    format!("strict_monotone must be `true` or `false`, got `{other}`"),
                ))
            }
        },
        None => true,
    };

    let out_dir = entries
        .get("out_dir")
        .map(|entry| PathBuf::from(&entry.value))
        .unwrap_or_else(|| PathBuf::from("."));

    Ok(RunConfig {
        preset,
        length,
        diffusion,
        convection,
        reaction,
        n,
        mu_fraction,
        rho,
        t_end,
        snapshot_times,
        mode,
        strict_monotone,
        out_dir,
    })
}
