//! Sweep configuration: flat `key = value` lines with `#` comments.
//!
//! A [`SweepConfig`] only records what was set. File values and command-line
//! flags are parsed into two of them and merged, flags winning; defaults are
//! filled in by [`SweepConfig::resolve`], which also validates everything
//! against the model types before any computation starts.

use std::fmt;
use std::path::{Path, PathBuf};

use qd_haze::algebra::{binary_entropy, C64};
use qd_haze::observables::Method;
use qd_haze::{EnvQubit, ModelConfig, SystemQubit, Time};

use crate::grid::{FragGrid, TimeGrid, ValueGrid};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub field: String,
    pub message: String,
}

impl ConfigError {
    pub fn field(field: &str, message: impl Into<String>) -> Self {
        ConfigError {
            line: None,
            field: field.to_string(),
            message: message.into(),
        }
    }

    fn at(mut self, line: Option<usize>) -> Self {
        self.line = line;
        self
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}, field `{}`: {}", self.field, self.message),
            None => write!(f, "field `{}`: {}", self.field, self.message),
        }
    }
}

/// How the environment qubit is given; exactly one per layer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EnvSpec {
    R01(f64),
    Haziness(f64),
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepConfig {
    pub n_env: Option<usize>,
    pub s00: Option<f64>,
    pub s01_re: Option<f64>,
    pub s01_im: Option<f64>,
    pub r00: Option<f64>,
    pub env: Option<EnvSpec>,
    pub t_grid: Option<TimeGrid>,
    pub frag_grid: Option<FragGrid>,
    pub h_grid: Option<ValueGrid>,
    pub n_frag: Option<usize>,
    pub delta: Option<f64>,
    pub method: Option<Method>,
    pub threads: Option<usize>,
    pub output: Option<PathBuf>,
}

pub const KEYS: &[&str] = &[
    "n_env", "s00", "s01_re", "s01_im", "r00", "r01", "haziness", "t_grid", "frag_grid", "h_grid",
    "n_frag", "delta", "method", "threads", "output",
];

impl SweepConfig {
    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::field("config", format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = SweepConfig::default();
        let mut seen: Vec<&str> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = Some(idx + 1);
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let Some((key, value)) = body.split_once('=') else {
                return Err(ConfigError::field("config", format!("expected `key = value`, got `{body}`")).at(line));
            };
            let (key, value) = (key.trim(), value.trim());
            let Some(&known) = KEYS.iter().find(|&&k| k == key) else {
                return Err(ConfigError::field(key, "unknown key").at(line));
            };
            if seen.contains(&known) {
                return Err(ConfigError::field(key, "set more than once").at(line));
            }
            seen.push(known);
            cfg.set(known, value).map_err(|e| e.at(line))?;
        }
        Ok(cfg)
    }

    /// Sets one field from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let err = |m: String| ConfigError::field(key, m);
        match key {
            "n_env" => self.n_env = Some(parse_num(value).map_err(err)?),
            "s00" => self.s00 = Some(parse_num(value).map_err(err)?),
            "s01_re" => self.s01_re = Some(parse_num(value).map_err(err)?),
            "s01_im" => self.s01_im = Some(parse_num(value).map_err(err)?),
            "r00" => self.r00 = Some(parse_num(value).map_err(err)?),
            "r01" | "haziness" => {
                if self.env.is_some() {
                    return Err(err("give exactly one of r01 and haziness".into()));
                }
                let v = parse_num(value).map_err(err)?;
                self.env = Some(if key == "r01" { EnvSpec::R01(v) } else { EnvSpec::Haziness(v) });
            }
            "t_grid" => self.t_grid = Some(TimeGrid::parse(value).map_err(err)?),
            "frag_grid" => self.frag_grid = Some(FragGrid::parse(value).map_err(err)?),
            "h_grid" => self.h_grid = Some(ValueGrid::parse(value).map_err(err)?),
            "n_frag" => self.n_frag = Some(parse_num(value).map_err(err)?),
            "delta" => self.delta = Some(parse_num(value).map_err(err)?),
            "method" => self.method = Some(value.parse().map_err(|e: qd_haze::Error| err(e.to_string()))?),
            "threads" => self.threads = Some(parse_num(value).map_err(err)?),
            "output" => {
                if value.is_empty() {
                    return Err(err("empty path".into()));
                }
                self.output = Some(PathBuf::from(value));
            }
            _ => return Err(err("unknown key".into())),
        }
        Ok(())
    }

    /// `self` on top of `base`: every field set here wins.
    pub fn over(self, base: SweepConfig) -> SweepConfig {
        SweepConfig {
            n_env: self.n_env.or(base.n_env),
            s00: self.s00.or(base.s00),
            s01_re: self.s01_re.or(base.s01_re),
            s01_im: self.s01_im.or(base.s01_im),
            r00: self.r00.or(base.r00),
            env: self.env.or(base.env),
            t_grid: self.t_grid.or(base.t_grid),
            frag_grid: self.frag_grid.or(base.frag_grid),
            h_grid: self.h_grid.or(base.h_grid),
            n_frag: self.n_frag.or(base.n_frag),
            delta: self.delta.or(base.delta),
            method: self.method.or(base.method),
            threads: self.threads.or(base.threads),
            output: self.output.or(base.output),
        }
    }

    /// Config-file text for the fields that are set.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let mut put = |k: &str, v: String| out.push_str(&format!("{k} = {v}\n"));
        if let Some(v) = self.n_env {
            put("n_env", v.to_string());
        }
        if let Some(v) = self.s00 {
            put("s00", format!("{v:?}"));
        }
        if let Some(v) = self.s01_re {
            put("s01_re", format!("{v:?}"));
        }
        if let Some(v) = self.s01_im {
            put("s01_im", format!("{v:?}"));
        }
        if let Some(v) = self.r00 {
            put("r00", format!("{v:?}"));
        }
        match self.env {
            Some(EnvSpec::R01(v)) => put("r01", format!("{v:?}")),
            Some(EnvSpec::Haziness(v)) => put("haziness", format!("{v:?}")),
            None => {}
        }
        if let Some(v) = &self.t_grid {
            put("t_grid", v.to_string());
        }
        if let Some(v) = &self.frag_grid {
            put("frag_grid", v.to_string());
        }
        if let Some(v) = &self.h_grid {
            put("h_grid", v.to_string());
        }
        if let Some(v) = self.n_frag {
            put("n_frag", v.to_string());
        }
        if let Some(v) = self.delta {
            put("delta", format!("{v:?}"));
        }
        if let Some(v) = self.method {
            put("method", v.to_string());
        }
        if let Some(v) = self.threads {
            put("threads", v.to_string());
        }
        if let Some(v) = &self.output {
            put("output", v.display().to_string());
        }
        out
    }

    /// Fills defaults and validates. `default_t` is the time grid used when
    /// none was given, which differs between subcommands.
    pub fn resolve(&self, default_t: &str) -> Result<Sweep, ConfigError> {
        let n_env = self.n_env.unwrap_or(100);
        if n_env == 0 {
            return Err(ConfigError::field("n_env", "must be at least 1"));
        }
        let s00 = self.s00.unwrap_or(0.5);
        let s01 = C64::new(self.s01_re.unwrap_or(0.5), self.s01_im.unwrap_or(0.0));
        let system = SystemQubit::new(s00, s01).map_err(|e| ConfigError::field("s00/s01", e.to_string()))?;
        let r00 = self.r00.unwrap_or(0.5);
        let env_spec = self.env.unwrap_or(EnvSpec::Haziness(0.0));
        let env = make_env(r00, env_spec)?;
        let model = ModelConfig::new(n_env, system, env).map_err(|e| ConfigError::field("n_env", e.to_string()))?;

        let t_grid = match &self.t_grid {
            Some(g) => g.clone(),
            None => TimeGrid::parse(default_t).expect("built-in grid"),
        };
        let times = t_grid.points();
        if times.is_empty() {
            return Err(ConfigError::field("t_grid", "empty grid"));
        }
        let frags = self.frag_grid.clone().unwrap_or(FragGrid::All).sizes(n_env);
        if frags.is_empty() {
            return Err(ConfigError::field("frag_grid", "empty grid"));
        }
        let hazes = match (&self.h_grid, env_spec) {
            (None, _) => vec![env.haziness()],
            (Some(_), EnvSpec::R01(_)) if self.env.is_some() => {
                return Err(ConfigError::field("h_grid", "cannot be combined with r01"));
            }
            (Some(g), _) => {
                let pts = g.points();
                let cap = binary_entropy(r00).map_err(|e| ConfigError::field("r00", e.to_string()))?;
                if let Some(h) = pts.iter().find(|&&h| !(0.0..=cap + 1e-12).contains(&h)) {
                    return Err(ConfigError::field(
                        "h_grid",
                        format!("haziness {h} outside [0, {cap}] reachable at r00 = {r00}"),
                    ));
                }
                pts
            }
        };
        let delta = self.delta.unwrap_or(0.1);
        if !(delta > 0.0 && delta < 1.0) {
            return Err(ConfigError::field("delta", format!("{delta} is not in (0, 1)")));
        }
        let threads = match self.threads {
            Some(0) => return Err(ConfigError::field("threads", "must be at least 1")),
            Some(n) => n,
            None => std::thread::available_parallelism().map_or(1, |n| n.get()),
        };
        Ok(Sweep {
            model,
            r00,
            times,
            frags,
            hazes,
            n_frag: self.n_frag.unwrap_or(50),
            delta,
            method: self.method.unwrap_or(Method::Auto),
            threads,
            output: self.output.clone(),
        })
    }
}

fn make_env(r00: f64, spec: EnvSpec) -> Result<EnvQubit, ConfigError> {
    match spec {
        EnvSpec::R01(r01) => {
            EnvQubit::new(r00, C64::new(r01, 0.0)).map_err(|e| ConfigError::field("r01", e.to_string()))
        }
        EnvSpec::Haziness(h) => {
            EnvQubit::from_haziness(h, r00).map_err(|e| ConfigError::field("haziness", e.to_string()))
        }
    }
}

fn parse_num<T: std::str::FromStr>(s: &str) -> Result<T, String> {
    s.trim().parse().map_err(|_| format!("cannot parse `{}`", s.trim()))
}

/// A validated sweep, defaults applied.
#[derive(Debug, Clone)]
pub struct Sweep {
    pub model: ModelConfig,
    pub r00: f64,
    pub times: Vec<Time>,
    pub frags: Vec<usize>,
    /// Haziness axis of the redundancy sweep; the configured environment's
    /// own haziness when no `h_grid` is set.
    pub hazes: Vec<f64>,
    pub n_frag: usize,
    pub delta: f64,
    pub method: Method,
    pub threads: usize,
    pub output: Option<PathBuf>,
}

impl Sweep {
    /// The configured model with the environment swapped for one of haziness
    /// `h`. Keeps the configured environment when `h` is its own haziness, so
    /// an `r01`-specified state is used verbatim.
    pub fn model_at(&self, h: f64) -> qd_haze::Result<ModelConfig> {
        if h == self.model.env.haziness() {
            return Ok(self.model);
        }
        ModelConfig::new(self.model.n_env, self.model.system, EnvQubit::from_haziness(h, self.r00)?)
    }
}
