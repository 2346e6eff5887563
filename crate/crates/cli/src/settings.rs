//! Option resolution: command-line flag, then config file, then built-in default.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Args;
use fgan::density::{Density, Gaussian1D, Mixture1D, Mixture2D};
use fgan::neural::Hidden;
use fgan::DivergenceKind;

use crate::error::CliError;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "FGAN_OUT_DIR";
pub const DEFAULT_SEED: u64 = 0;

/// Flags every command accepts.
#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// Output directory [default: $FGAN_OUT_DIR, else the current directory]
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Config file of `key = value` lines; flags override it
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Random seed [default: 0]
    #[arg(long)]
    pub seed: Option<u64>,
}

/// Values read from a config file, keyed by flag name (`u-min` and `u_min` are the same key).
#[derive(Debug, Clone, Default)]
pub struct FileConfig {
    values: BTreeMap<String, String>,
}

fn normalize_key(k: &str) -> String {
    k.trim().replace('_', "-")
}

impl FileConfig {
    /// Parses a config file and rejects keys the command does not know.
    pub fn load(path: &Path, allowed: &[&str]) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text, allowed)
            .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
    }

    pub fn parse(text: &str, allowed: &[&str]) -> Result<Self, String> {
        let table: toml::Table = toml::from_str(text).map_err(|e| e.to_string())?;
        let mut values = BTreeMap::new();
        for (k, v) in table {
            let key = normalize_key(&k);
            if !allowed.contains(&key.as_str()) && !["out", "seed"].contains(&key.as_str()) {
                return Err(format!("unknown key '{k}' (known: out, seed, {})", allowed.join(", ")));
            }
            values.insert(key, scalar_text(&v).ok_or_else(|| format!("key '{k}' has an unsupported value"))?);
        }
        Ok(FileConfig { values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn load_for(common: &Common, allowed: &[&str]) -> Result<Self, CliError> {
        match &common.config {
            Some(p) => Self::load(p, allowed),
            None => Ok(FileConfig::default()),
        }
    }
}

/// Text form of a config value; arrays become comma-separated lists.
fn scalar_text(v: &toml::Value) -> Option<String> {
    use toml::Value;
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Integer(i) => Some(i.to_string()),
        Value::Float(f) => Some(f.to_string()),
        Value::Boolean(b) => Some(b.to_string()),
        Value::Array(items) => items
            .iter()
            .map(scalar_text)
            .collect::<Option<Vec<_>>>()
            .map(|parts| parts.join(",")),
        _ => None,
    }
}

/// Flag value if given, else the file value, else `default`.
pub fn resolve<T>(flag: Option<T>, file: &FileConfig, key: &str, default: T) -> Result<T, CliError>
where
    T: FromStr,
    T::Err: Display,
{
    if let Some(v) = flag {
        return Ok(v);
    }
    match file.get(key) {
        Some(text) => text
            .parse()
            .map_err(|e| CliError::Usage(format!("config key '{key}' = '{text}': {e}"))),
        None => Ok(default),
    }
}

pub fn output_dir(common: &Common, file: &FileConfig) -> Result<PathBuf, CliError> {
    let dir = common
        .out
        .clone()
        .or_else(|| file.get("out").map(PathBuf::from))
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir).map_err(|e| CliError::output(&dir, e))?;
    Ok(dir)
}

pub fn seed(common: &Common, file: &FileConfig) -> Result<u64, CliError> {
    resolve(common.seed, file, "seed", DEFAULT_SEED)
}

/// A comma-separated list of divergence names.
#[derive(Debug, Clone, PartialEq)]
pub struct DivList(pub Vec<DivergenceKind>);

impl FromStr for DivList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let kinds = s
            .split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(|p| p.parse::<DivergenceKind>().map_err(|e| e.to_string()))
            .collect::<Result<Vec<_>, _>>()?;
        if kinds.is_empty() {
            return Err(format!(
                "empty divergence list (valid: {})",
                DivergenceKind::VALID_NAMES
            ));
        }
        Ok(DivList(kinds))
    }
}

/// A single divergence name.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Div(pub DivergenceKind);

impl FromStr for Div {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.parse().map(Div).map_err(|e: fgan::Error| e.to_string())
    }
}

/// Hidden layer widths, e.g. `32,32`. An empty string means no hidden layers.
#[derive(Debug, Clone, PartialEq)]
pub struct Sizes(pub Vec<usize>);

impl FromStr for Sizes {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(|p| match p.parse::<usize>() {
                Ok(0) | Err(_) => Err(format!("bad layer width '{p}'")),
                Ok(n) => Ok(n),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Sizes)
    }
}

impl Display for Sizes {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

/// Hidden nonlinearity: `leaky-relu`, `leaky-relu:<slope>` or `tanh`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Activation(pub Hidden);

impl FromStr for Activation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s == "tanh" {
            return Ok(Activation(Hidden::Tanh));
        }
        if s == "leaky-relu" {
            return Ok(Activation(Hidden::LeakyRelu(0.1)));
        }
        match s.strip_prefix("leaky-relu:").map(str::parse::<f64>) {
            Some(Ok(slope)) if slope.is_finite() => Ok(Activation(Hidden::LeakyRelu(slope))),
            _ => Err(format!("unknown activation '{s}' (valid: leaky-relu, leaky-relu:<slope>, tanh)")),
        }
    }
}

impl Display for Activation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.0 {
            Hidden::Tanh => f.write_str("tanh"),
            Hidden::LeakyRelu(s) => write!(f, "leaky-relu:{s}"),
        }
    }
}

/// A data density: `ring8`, `two-mode`, `normal:<mean>,<stddev>`, or a path to a density file.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityArg {
    pub text: String,
    pub density: Density,
}

impl FromStr for DensityArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let density = match s {
            "ring8" => Density::TwoD(Mixture2D::ring8()),
            "two-mode" => Density::OneD(Mixture1D::two_mode()),
            _ => {
                if let Some(rest) = s.strip_prefix("normal:") {
                    let parts: Vec<&str> = rest.split(',').collect();
                    let nums: Vec<f64> = parts
                        .iter()
                        .map(|p| p.trim().parse::<f64>())
                        .collect::<Result<_, _>>()
                        .map_err(|_| format!("bad normal spec '{s}' (want normal:<mean>,<stddev>)"))?;
                    if nums.len() != 2 {
                        return Err(format!("bad normal spec '{s}' (want normal:<mean>,<stddev>)"));
                    }
                    let g = Gaussian1D::new(nums[0], nums[1]).map_err(|e| e.to_string())?;
                    Density::OneD(Mixture1D::from(g))
                } else {
                    let text = std::fs::read_to_string(s).map_err(|e| {
                        format!("'{s}' is not ring8, two-mode, normal:<mean>,<stddev> or a readable file ({e})")
                    })?;
                    Density::from_toml_str(&text).map_err(|e| format!("{s}: {e}"))?
                }
            }
        };
        Ok(DensityArg {
            text: s.to_string(),
            density,
        })
    }
}

impl DensityArg {
    pub fn one_d(&self, what: &str) -> Result<&Mixture1D, CliError> {
        match &self.density {
            Density::OneD(m) => Ok(m),
            Density::TwoD(_) => Err(CliError::Usage(format!("{what} must be a 1D density, got '{}'", self.text))),
        }
    }
}
