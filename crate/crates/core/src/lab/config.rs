//! Flat `key = value` run configuration.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::LabError;
use crate::spectral::{FlowSpec, SolverConfig, SpectralField};

/// Every key the runners understand. Anything else is rejected so that a
/// typo cannot silently fall back to a default.
pub const KNOWN_KEYS: &[&str] = &[
    "flow.kind",
    "flow.l",
    "flow.mu",
    "grid.N",
    "time.dt",
    "time.T",
    "dealias",
    "integrator.order",
    "ic.kind",
    "ic.amplitude",
    "ic.band",
    "ic.decay",
    "ic.k0",
    "seed",
    "diagnostics.s",
    "diagnostics.every",
    "output.path",
    "energy.s",
    "refine.dt",
    "ladder.mu",
    "ladder.eps",
    "ladder.nu",
    "ladder.beta",
    "ladder.k0",
    "ladder.delta",
    "bona.s",
    "bona.eta",
    "bona.m",
    "scaling.lambda",
    "threshold.drift",
    "threshold.order_tol",
    "threshold.slope",
    "threshold.slope_tol",
    "threshold.rate_tol",
    "threshold.beta_margin",
    "threshold.scaling",
    "threshold.contrast",
    "threshold.n_stability",
];

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Config {
    entries: BTreeMap<String, String>,
}

impl Config {
    pub fn new() -> Self {
        Config::default()
    }

    pub fn parse(text: &str) -> Result<Config, LabError> {
        let mut cfg = Config::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| LabError::Parse {
                line: i + 1,
                msg: format!("expected `key = value`, found `{line}`"),
            })?;
            cfg.set(k.trim(), v.trim()).map_err(|e| LabError::Parse { line: i + 1, msg: e.to_string() })?;
        }
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Config, LabError> {
        Config::parse(&std::fs::read_to_string(path)?)
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<(), LabError> {
        if !KNOWN_KEYS.contains(&key) {
            return Err(LabError::Config(format!("unknown key `{key}`")));
        }
        self.entries.insert(key.to_string(), value.into());
        Ok(())
    }

    /// Builder form of [`Config::set`]; panics on an unknown key.
    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.set(key, value.to_string()).unwrap_or_else(|e| panic!("{e}"));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn entries(&self) -> &BTreeMap<String, String> {
        &self.entries
    }

    pub fn value_or<T: FromStr>(&self, key: &str, default: T) -> Result<T, LabError> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| LabError::Config(format!("bad value `{v}` for `{key}`"))),
        }
    }

    /// Comma-separated list.
    pub fn list_or(&self, key: &str, default: &[f64]) -> Result<Vec<f64>, LabError> {
        match self.get(key) {
            None => Ok(default.to_vec()),
            Some(v) => v
                .split(',')
                .map(|x| x.trim().parse().map_err(|_| LabError::Config(format!("bad list entry `{x}` for `{key}`"))))
                .collect(),
        }
    }

    pub fn level_or(&self, default: usize) -> Result<usize, LabError> {
        let l = self.value_or("flow.l", default)?;
        if l == 0 {
            return Err(LabError::Config("flow.l must be at least 1".into()));
        }
        Ok(l)
    }

    /// Solver settings; unspecified keys take the library defaults.
    pub fn solver(&self) -> Result<SolverConfig, LabError> {
        let d = SolverConfig::default();
        let cfg = SolverConfig {
            n: self.value_or("grid.N", d.n)?,
            dt: self.value_or("time.dt", d.dt)?,
            t_final: self.value_or("time.T", d.t_final)?,
            dealias: self.value_or("dealias", d.dealias)?,
            order: self.value_or("integrator.order", d.order)?,
            diag_every: self.value_or("diagnostics.every", d.diag_every)?,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// `flow.kind` is one of `model`, `regularized` or `hierarchy`.
    pub fn flow(&self, default_kind: &str, default_l: usize) -> Result<FlowSpec, LabError> {
        let l = self.level_or(default_l)?;
        let mu: f64 = self.value_or("flow.mu", 0.0)?;
        if !(mu >= 0.0) {
            return Err(LabError::Config("flow.mu must be nonnegative".into()));
        }
        match self.get("flow.kind").unwrap_or(default_kind) {
            "model" => Ok(FlowSpec::model(l)),
            "regularized" => Ok(FlowSpec::regularized(l, mu)),
            "hierarchy" => Ok(FlowSpec::hierarchy(l)),
            other => Err(LabError::Config(format!("unknown flow.kind `{other}`"))),
        }
    }

    pub fn seed(&self) -> Result<u64, LabError> {
        self.value_or("seed", 42)
    }

    /// Initial data on an `n`-point grid.
    ///
    /// * `cos`, `sin`: `A cos x`, `A sin x`
    /// * `zero`
    /// * `random`: modes `1..=band` with magnitude `A k^{−decay}` and seeded
    ///   uniform phases
    /// * `contrast`: `A(cos x + k0^{−decay}(cos k0x + sin (k0+1)x))`
    pub fn initial(&self, n: usize) -> Result<SpectralField, LabError> {
        let a: f64 = self.value_or("ic.amplitude", 0.1)?;
        let kind = self.get("ic.kind").unwrap_or("cos");
        match kind {
            "cos" => Ok(SpectralField::from_fn(n, |x| a * x.cos())),
            "sin" => Ok(SpectralField::from_fn(n, |x| a * x.sin())),
            "zero" => Ok(SpectralField::zeros(n)),
            "random" => {
                let band: usize = self.value_or("ic.band", 8)?;
                let decay: f64 = self.value_or("ic.decay", 4.0)?;
                if band == 0 || band >= n / 2 {
                    return Err(LabError::Config(format!("ic.band must lie in 1..{}", n / 2)));
                }
                Ok(random_field(n, band, a, decay, self.seed()?))
            }
            "contrast" => {
                let k0: usize = self.value_or("ic.k0", 8)?;
                let decay: f64 = self.value_or("ic.decay", 4.0)?;
                if k0 + 1 >= n / 2 {
                    return Err(LabError::Config("ic.k0 too large for the grid".into()));
                }
                Ok(contrast_field(n, k0, a, decay))
            }
            other => Err(LabError::Config(format!("unknown ic.kind `{other}`"))),
        }
    }
}

/// Band-limited field with modes `1..=band`, `|f̂_k| = A k^{−decay}` and
/// phases drawn from a seeded ChaCha stream.
pub fn random_field(n: usize, band: usize, amplitude: f64, decay: f64, seed: u64) -> SpectralField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let phases: Vec<f64> = (0..=band).map(|_| rng.gen::<f64>() * std::f64::consts::TAU).collect();
    SpectralField::from_half_spectrum(n, |k| {
        let k = k as usize;
        if k == 0 || k > band {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::from_polar(amplitude * (k as f64).powf(-decay), phases[k])
        }
    })
}

/// Low mode plus a high-frequency pair `(k0, k0+1)`; the pair and the low
/// mode form an interacting triad.
pub fn contrast_field(n: usize, k0: usize, amplitude: f64, decay: f64) -> SpectralField {
    let k = k0 as f64;
    let b = k.powf(-decay);
    SpectralField::from_fn(n, |x| amplitude * (x.cos() + b * ((k * x).cos() + ((k + 1.0) * x).sin())))
}

impl fmt::Display for Config {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.entries {
            writeln!(f, "{k} = {v}")?;
        }
        Ok(())
    }
}

impl FromStr for Config {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Config::parse(s)
    }
}
