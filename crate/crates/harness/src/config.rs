//! Tournament configuration and its TOML file form.
//!
//! ```toml
//! rounds = 400000
//! mode = "quantum"        # classical | mixed | quantum
//! seed = 42
//! sampling = "mc"         # exact | mc
//! out = "results"
//! strategy = "0000"       # classical card, bits a0 a1 b0 b1
//! weights = ["1/2", "1/2", "0", ...]   # mixed: 16 exact weights
//!
//! [geometry]
//! distance_light_minutes = 30.0
//! answer_window_minutes = 5.0
//!
//! [protocol]
//! theta_a = [0.0, 1.5707963267948966]
//! theta_b = [0.7853981633974483, -0.7853981633974483]
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use chsh_core::{default_protocol, DeterministicStrategy, QuantumProtocol, Rate};
use serde::{Deserialize, Serialize};

use crate::audit::Geometry;
use crate::error::{Error, Result};

pub const DEFAULT_ROUNDS: u64 = 40;

#[derive(Debug, Clone, PartialEq)]
pub enum Mode {
    Classical(DeterministicStrategy),
    /// Weights indexed by `DeterministicStrategy::index`.
    Mixed([Rate; 16]),
    Quantum(QuantumProtocol),
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Classical(_) => "classical",
            Mode::Mixed(_) => "mixed",
            Mode::Quantum(_) => "quantum",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sampling {
    ExactMeasure,
    MonteCarlo,
}

impl FromStr for Sampling {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" | "exact_measure" => Ok(Sampling::ExactMeasure),
            "mc" | "monte_carlo" => Ok(Sampling::MonteCarlo),
            other => Err(Error::Config(format!("unknown sampling `{other}` (expected exact or mc)"))),
        }
    }
}

impl fmt::Display for Sampling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sampling::ExactMeasure => "exact_measure",
            Sampling::MonteCarlo => "monte_carlo",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TournamentConfig {
    pub rounds: u64,
    pub mode: Mode,
    pub seed: u64,
    pub sampling: Sampling,
    pub geometry: Geometry,
    /// Directory receiving `summary.json` and `rounds.csv`; nothing is written when unset.
    pub output_path: Option<PathBuf>,
}

impl TournamentConfig {
    pub fn new(rounds: u64, mode: Mode, seed: u64, sampling: Sampling) -> Self {
        Self { rounds, mode, seed, sampling, geometry: Geometry::default(), output_path: None }
    }

    pub fn validate(&self) -> Result<()> {
        if self.rounds == 0 {
            return Err(Error::Config("rounds must be at least 1".into()));
        }
        if let Mode::Mixed(w) = &self.mode {
            chsh_core::mixed_strategy_rate(w)?;
        }
        crate::audit::causality_audit(&self.geometry)?;
        Ok(())
    }
}

/// Every setting optional, as read from a config file or from flags.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverrides {
    pub rounds: Option<u64>,
    pub mode: Option<String>,
    pub seed: Option<u64>,
    pub sampling: Option<String>,
    pub out: Option<PathBuf>,
    pub strategy: Option<String>,
    pub weights: Option<Vec<String>>,
    pub geometry: Option<GeometryOverrides>,
    pub protocol: Option<ProtocolAngles>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryOverrides {
    pub distance_light_minutes: Option<f64>,
    pub answer_window_minutes: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtocolAngles {
    pub theta_a: [f64; 2],
    pub theta_b: [f64; 2],
}

impl ConfigOverrides {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        toml::from_str(&text).map_err(|source| Error::ConfigParse { path: path.to_path_buf(), source })
    }

    /// Fields set in `over` replace those in `self`.
    pub fn merged(self, over: ConfigOverrides) -> Self {
        let geometry = match (self.geometry, over.geometry) {
            (Some(base), Some(top)) => Some(GeometryOverrides {
                distance_light_minutes: top.distance_light_minutes.or(base.distance_light_minutes),
                answer_window_minutes: top.answer_window_minutes.or(base.answer_window_minutes),
            }),
            (base, top) => top.or(base),
        };
        Self {
            rounds: over.rounds.or(self.rounds),
            mode: over.mode.or(self.mode),
            seed: over.seed.or(self.seed),
            sampling: over.sampling.or(self.sampling),
            out: over.out.or(self.out),
            strategy: over.strategy.or(self.strategy),
            weights: over.weights.or(self.weights),
            geometry,
            protocol: over.protocol.or(self.protocol),
        }
    }

    pub fn resolve(self) -> Result<TournamentConfig> {
        let mode = match self.mode.as_deref().unwrap_or("quantum") {
            "classical" => Mode::Classical(parse_strategy(self.strategy.as_deref().unwrap_or("0000"))?),
            "mixed" => {
                let raw = self.weights.ok_or_else(|| Error::Config("mixed mode needs 16 weights".into()))?;
                Mode::Mixed(parse_weights(&raw)?)
            }
            "quantum" => Mode::Quantum(match self.protocol {
                Some(a) => QuantumProtocol::new(a.theta_a, a.theta_b)?,
                None => default_protocol()?,
            }),
            other => return Err(Error::Config(format!("unknown mode `{other}`"))),
        };
        let mut geometry = Geometry::default();
        if let Some(g) = self.geometry {
            geometry.distance_light_minutes = g.distance_light_minutes.unwrap_or(geometry.distance_light_minutes);
            geometry.answer_window_minutes = g.answer_window_minutes.unwrap_or(geometry.answer_window_minutes);
        }
        let cfg = TournamentConfig {
            rounds: self.rounds.unwrap_or(DEFAULT_ROUNDS),
            mode,
            seed: self.seed.unwrap_or(0),
            sampling: self.sampling.as_deref().unwrap_or("mc").parse()?,
            geometry,
            output_path: self.out,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Four answer bits `a0 a1 b0 b1`, e.g. `"1011"`.
pub fn parse_strategy(s: &str) -> Result<DeterministicStrategy> {
    let bits: Vec<u8> = s
        .chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(()),
        })
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::Config(format!("strategy `{s}` must be four 0/1 digits")))?;
    match bits[..] {
        [a0, a1, b0, b1] => Ok(DeterministicStrategy::from_index(a0 << 3 | a1 << 2 | b0 << 1 | b1)),
        _ => Err(Error::Config(format!("strategy `{s}` must be four 0/1 digits"))),
    }
}

/// Sixteen exact weights such as `"1/16"` or `"0"`.
pub fn parse_weights(raw: &[String]) -> Result<[Rate; 16]> {
    if raw.len() != 16 {
        return Err(Error::Config(format!("expected 16 weights, got {}", raw.len())));
    }
    let mut out = [Rate::from_integer(0); 16];
    for (slot, text) in out.iter_mut().zip(raw) {
        *slot = text.trim().parse().map_err(|_| Error::Config(format!("weight `{text}` is not a rational")))?;
    }
    Ok(out)
}
