//! Flat `section.key = value` scenario files.
//!
//! One assignment per line; `#` starts a comment. Every key has a default and
//! unknown or repeated keys are rejected. Real values accept an optional `pi`
//! factor (`pi`, `2pi`, `2*pi`, `0.5*pi`).

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::ValueEnum;
use serde::Serialize;
use thiserror::Error;
use wwgm::classical_limit::ContractionParams;
use wwgm::dynamics::{EvolutionConfig, Hamiltonian, Picture};
use wwgm::gaussian_core::PhasePoint;
use wwgm::star_numeric::GridSpec;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("line {line}: expected `key = value`, found `{text}`")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: key `{key}` given twice")]
    DuplicateKey { line: usize, key: String },
    #[error("`{key} = {value}`: {reason}")]
    Value { key: String, value: String, reason: String },
    #[error("config is for command `{found}` but `{requested}` was requested")]
    CommandMismatch { found: String, requested: String },
    #[error("WWGM_THREADS = `{0}` is not a positive integer")]
    Threads(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Verify,
    Evolve,
    Contract,
    Koopman,
    Report,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::Evolve => "evolve",
            Command::Contract => "contract",
            Command::Koopman => "koopman",
            Command::Report => "report",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    GaussianCore,
    StarNumeric,
    WeylAlgebra,
    Tomita,
    Dynamics,
    ClassicalLimit,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::GaussianCore, Suite::StarNumeric, Suite::WeylAlgebra, Suite::Tomita, Suite::Dynamics, Suite::ClassicalLimit];

    pub fn name(self) -> &'static str {
        match self {
            Suite::GaussianCore => "gaussian_core",
            Suite::StarNumeric => "star_numeric",
            Suite::WeylAlgebra => "weyl_algebra",
            Suite::Tomita => "tomita",
            Suite::Dynamics => "dynamics",
            Suite::ClassicalLimit => "classical_limit",
        }
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL.into_iter().find(|v| v.name() == s).ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

/// Keys and their defaults; `evolution.picture` depends on the command.
const DEFAULTS: &[(&str, &str)] = &[
    ("command", ""),
    ("seed", "0"),
    ("output.dir", "out"),
    ("grid.N", "128"),
    ("grid.L", "12"),
    ("hamiltonian.mass", "1"),
    ("hamiltonian.potential", "0,0,0.5"),
    ("contraction.hbar", "1"),
    ("contraction.k", "4"),
    ("contraction.k_list", "4,8,16,32"),
    ("evolution.picture", ""),
    ("evolution.t_end", "1"),
    ("evolution.dt", "0.001"),
    ("evolution.stride", "100"),
    ("initial.p", "0.5"),
    ("initial.x", "0"),
    ("verify.suites", "gaussian_core,star_numeric,weyl_algebra,tomita"),
    ("verify.samples", "20"),
    ("plot.stride", "1"),
];

/// A validated scenario; `resolved` holds every key after defaults are applied.
#[derive(Clone, Debug)]
pub struct ScenarioConfig {
    pub command: Command,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub grid: GridSpec,
    pub hamiltonian: Hamiltonian,
    pub contraction: ContractionParams,
    pub k_list: Vec<f64>,
    pub evolution: EvolutionConfig,
    pub initial: PhasePoint,
    pub suites: Vec<Suite>,
    pub samples: usize,
    pub plot_stride: usize,
    pub resolved: BTreeMap<String, String>,
}

/// Command-line values that take precedence over the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub output_dir: Option<PathBuf>,
    pub seed: Option<u64>,
}

fn value_err(key: &str, value: &str, reason: impl fmt::Display) -> ConfigError {
    ConfigError::Value { key: key.into(), value: value.into(), reason: reason.to_string() }
}

/// A finite real with an optional trailing `pi` factor.
pub fn parse_real(s: &str) -> Option<f64> {
    let s = s.trim();
    let v = match s.strip_suffix("pi") {
        Some("") => PI,
        Some(head) => head.trim_end().trim_end_matches('*').trim().parse::<f64>().ok()? * PI,
        None => s.parse().ok()?,
    };
    v.is_finite().then_some(v)
}

fn parse_list(s: &str) -> Option<Vec<f64>> {
    s.split(',').map(parse_real).collect()
}

fn parse_lines(text: &str) -> Result<BTreeMap<String, (usize, String)>, ConfigError> {
    let mut given = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (key, value) = body.split_once('=').ok_or_else(|| ConfigError::Syntax { line, text: raw.trim().into() })?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || key.matches('.').count() > 1 {
            return Err(ConfigError::Syntax { line, text: raw.trim().into() });
        }
        if !DEFAULTS.iter().any(|(k, _)| *k == key) {
            return Err(ConfigError::UnknownKey { line, key: key.into() });
        }
        if given.insert(key.to_string(), (line, value.to_string())).is_some() {
            return Err(ConfigError::DuplicateKey { line, key: key.into() });
        }
    }
    Ok(given)
}

impl ScenarioConfig {
    pub fn parse(text: &str, command: Command, overrides: &Overrides) -> Result<Self, ConfigError> {
        let given = parse_lines(text)?;
        let mut map: BTreeMap<String, String> = DEFAULTS.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        for (k, (_, v)) in given {
            map.insert(k, v);
        }
        let found = map["command"].clone();
        if !found.is_empty() && found != command.name() {
            return Err(ConfigError::CommandMismatch { found, requested: command.name().into() });
        }
        map.insert("command".into(), command.name().into());
        if map["evolution.picture"].is_empty() {
            let picture = if command == Command::Koopman { "schrodinger" } else { "liouville" };
            map.insert("evolution.picture".into(), picture.into());
        }
        if let Some(seed) = overrides.seed {
            map.insert("seed".into(), seed.to_string());
        }
        if let Some(dir) = &overrides.output_dir {
            map.insert("output.dir".into(), dir.display().to_string());
        }
        Self::build(command, map)
    }

    fn build(command: Command, map: BTreeMap<String, String>) -> Result<Self, ConfigError> {
        let get = |k: &str| map[k].as_str();
        let real = |k: &str| parse_real(get(k)).ok_or_else(|| value_err(k, get(k), "not a finite real"));
        let count = |k: &str| get(k).parse::<usize>().map_err(|e| value_err(k, get(k), e));

        let seed = get("seed").parse::<u64>().map_err(|e| value_err("seed", get("seed"), e))?;
        let output_dir = PathBuf::from(get("output.dir"));
        if get("output.dir").is_empty() {
            return Err(value_err("output.dir", "", "empty path"));
        }
        let grid = GridSpec::new(count("grid.N")?, real("grid.L")?).map_err(|e| value_err("grid", get("grid.N"), e))?;
        let potential = parse_list(get("hamiltonian.potential"))
            .ok_or_else(|| value_err("hamiltonian.potential", get("hamiltonian.potential"), "not a list of reals"))?;
        let hamiltonian = Hamiltonian::new(real("hamiltonian.mass")?, potential)
            .map_err(|e| value_err("hamiltonian", get("hamiltonian.potential"), e))?;
        let contraction = ContractionParams::new(real("contraction.hbar")?, real("contraction.k")?)
            .map_err(|e| value_err("contraction", get("contraction.k"), e))?;
        let k_list = parse_list(get("contraction.k_list"))
            .ok_or_else(|| value_err("contraction.k_list", get("contraction.k_list"), "not a list of reals"))?;
        if k_list.len() < 2 || k_list.windows(2).any(|w| !(w[1] > w[0])) || k_list[0] < 1.0 {
            return Err(value_err("contraction.k_list", get("contraction.k_list"), "need at least two ascending values >= 1"));
        }
        let picture = match get("evolution.picture") {
            "schrodinger" => Picture::Schrodinger,
            "liouville" => Picture::Liouville,
            "heisenberg" => Picture::Heisenberg,
            other => return Err(value_err("evolution.picture", other, "expected schrodinger, liouville or heisenberg")),
        };
        if command == Command::Koopman && picture != Picture::Schrodinger {
            return Err(value_err("evolution.picture", get("evolution.picture"), "koopman evolves wavefunctions"));
        }
        let stride = count("evolution.stride")?;
        let evolution = EvolutionConfig::new(picture, real("evolution.t_end")?, real("evolution.dt")?).with_stride(stride);
        evolution.steps().map_err(|e| value_err("evolution", get("evolution.dt"), e))?;
        let initial = PhasePoint::new(vec![real("initial.p")?], vec![real("initial.x")?])
            .map_err(|e| value_err("initial", get("initial.p"), e))?;
        let mut suites = Vec::new();
        for name in get("verify.suites").split(',').map(str::trim) {
            let s = name.parse::<Suite>().map_err(|e| value_err("verify.suites", name, e))?;
            if !suites.contains(&s) {
                suites.push(s);
            }
        }
        let samples = count("verify.samples")?;
        if samples == 0 {
            return Err(value_err("verify.samples", "0", "must be positive"));
        }
        let plot_stride = count("plot.stride")?;
        if plot_stride == 0 {
            return Err(value_err("plot.stride", "0", "must be positive"));
        }
        Ok(ScenarioConfig {
            command,
            seed,
            output_dir,
            grid,
            hamiltonian,
            contraction,
            k_list,
            evolution,
            initial,
            suites,
            samples,
            plot_stride,
            resolved: map,
        })
    }
}

/// `WWGM_THREADS`, if set, as a positive thread count.
pub fn threads_from_env(value: Option<&str>) -> Result<Option<usize>, ConfigError> {
    match value {
        None => Ok(None),
        Some(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(ConfigError::Threads(v.into())),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<ScenarioConfig, ConfigError> {
        ScenarioConfig::parse(text, Command::Evolve, &Overrides::default())
    }

    #[test]
    fn defaults_are_valid() {
        let c = parse("").unwrap();
        assert_eq!(c.grid.n_points(), 128);
        assert_eq!(c.evolution.picture, Picture::Liouville);
        assert_eq!(c.suites.len(), 4);
    }

    #[test]
    fn values_and_comments() {
        let c = parse("# scenario\ngrid.N = 64   # small\nevolution.t_end = 2pi\nevolution.dt = 0.25*pi\n").unwrap();
        assert_eq!(c.grid.n_points(), 64);
        assert_eq!(c.evolution.steps().unwrap(), 8);
        assert_eq!(parse_real("pi"), Some(PI));
        assert_eq!(parse_real("2 * pi"), Some(2.0 * PI));
    }

    #[test]
    fn unknown_and_duplicate_keys_are_rejected() {
        assert!(matches!(parse("grid.M = 3"), Err(ConfigError::UnknownKey { line: 1, .. })));
        assert!(matches!(parse("seed = 1\nseed = 2"), Err(ConfigError::DuplicateKey { line: 2, .. })));
        assert!(matches!(parse("grid.N"), Err(ConfigError::Syntax { .. })));
        assert!(matches!(parse("a.b.c = 1"), Err(ConfigError::Syntax { .. })));
    }

    #[test]
    fn invalid_values_are_rejected() {
        for text in [
            "grid.N = 100",
            "grid.L = -1",
            "hamiltonian.mass = 0",
            "contraction.k_list = 8",
            "contraction.k_list = 8,4",
            "evolution.dt = 0.3",
            "evolution.picture = dirac",
            "verify.suites = nothing",
            "seed = -1",
            "evolution.t_end = nan",
        ] {
            assert!(matches!(parse(text), Err(ConfigError::Value { .. })), "{text}");
        }
    }

    #[test]
    fn command_and_overrides() {
        assert!(matches!(parse("command = verify"), Err(ConfigError::CommandMismatch { .. })));
        let o = Overrides { output_dir: Some("elsewhere".into()), seed: Some(9) };
        let c = ScenarioConfig::parse("seed = 3\ncommand = koopman", Command::Koopman, &o).unwrap();
        assert_eq!((c.seed, c.output_dir.to_str().unwrap()), (9, "elsewhere"));
        assert_eq!(c.evolution.picture, Picture::Schrodinger);
        let bad = ScenarioConfig::parse("evolution.picture = liouville", Command::Koopman, &o);
        assert!(matches!(bad, Err(ConfigError::Value { .. })));
    }

    #[test]
    fn thread_variable() {
        assert_eq!(threads_from_env(None).unwrap(), None);
        assert_eq!(threads_from_env(Some("3")).unwrap(), Some(3));
        assert!(threads_from_env(Some("0")).is_err());
        assert!(threads_from_env(Some("many")).is_err());
    }
}
