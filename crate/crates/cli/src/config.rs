//! Experiment parameters from flags and from a TOML file, flags winning.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use ymcyl::GroupKind;

/// Environment variable holding the default seed.
pub const SEED_ENV: &str = "YMCYL_SEED";

pub const DEFAULT_SEED: u64 = 1;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// A configuration problem, reported with exit status 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl<E: std::fmt::Display> From<E> for ConfigError {
    fn from(e: E) -> Self {
        ConfigError(e.to_string())
    }
}

fn is_false(b: &bool) -> bool {
    !*b
}

/// Every experiment parameter. Unset fields fall back to the config file,
/// then to per-command defaults.
#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    /// Experiment file (TOML, one experiment per table).
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Table of the experiment file to run.
    #[arg(long)]
    #[serde(skip)]
    pub table: Option<String>,
    /// Command named inside an experiment table.
    #[arg(skip)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,

    /// Structure group: u1 or su2.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupKind>,
    /// Irrep label (charge for U(1), 2j for SU(2)).
    #[arg(long, visible_alias = "n", allow_hyphen_values = true)]
    #[serde(default, alias = "n", skip_serializing_if = "Option::is_none")]
    pub k: Option<i64>,
    /// Largest label in Gram matrices.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    /// Heat time of the real Gaussian measure.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    /// Planck constant.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hbar: Option<f64>,
    /// List of s values.
    #[arg(long, value_delimiter = ',')]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_values: Option<Vec<f64>>,
    /// Number of lattice sites N.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub links: Option<usize>,
    /// Monte Carlo sample count.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    /// RNG seed (default from the environment, then 1).
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Worker threads; never changes results.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    /// Lattice connection file (JSON).
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<PathBuf>,
    /// Fourier modes of random smooth connections.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modes: Option<usize>,
    /// Amplitude of random smooth connections.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<f64>,
    /// Scale of the imaginary part of a random complex base.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub imag_scale: Option<f64>,
    /// Finite-difference step in link-exponent units.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fd_step: Option<f64>,
    /// Polynomial degree for Euclidean checks.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    /// Euclidean dimension (1 or 2).
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    /// Haar quadrature level.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<usize>,
    /// Number of random cases.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cases: Option<usize>,
    /// Polar coordinates x of a label g = exp(x) exp(iy).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polar_x: Option<Vec<f64>>,
    /// Polar coordinates y of a label g = exp(x) exp(iy).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polar_y: Option<Vec<f64>>,
    /// Also extrapolate to s = infinity.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "is_false")]
    pub limit: bool,
    /// Radial profile: r2, log, const or gauss.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<String>,
    /// Radii for the radial check.
    #[arg(long, value_delimiter = ',')]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radii: Option<Vec<f64>>,
    /// Momentum seed X0 for constrained pairs.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<Vec<f64>>,
    /// Final time of the geodesic comparison.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
    /// Number of grid times.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub times: Option<usize>,
    /// Use random instead of transported momentum.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "is_false")]
    pub unconstrained: bool,
    /// Report format.
    #[arg(long, value_enum)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    /// Report file (default stdout).
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

/// Picks the experiment table: the named one, the only one, or the
/// top-level keys when there are no tables.
fn select_table(doc: toml::Table, name: Option<&str>, path: &Path) -> Result<toml::Table, ConfigError> {
    let tables: Vec<&String> = doc.iter().filter(|(_, v)| v.is_table()).map(|(k, _)| k).collect();
    match name {
        Some(n) => match doc.get(n) {
            Some(toml::Value::Table(t)) => Ok(t.clone()),
            _ => Err(ConfigError(format!("no table [{n}] in {}", path.display()))),
        },
        None if tables.is_empty() => Ok(doc),
        None if tables.len() == 1 && doc.len() == 1 => {
            let key = tables[0].clone();
            match doc.get(&key) {
                Some(toml::Value::Table(t)) => Ok(t.clone()),
                _ => unreachable!(),
            }
        }
        None => Err(ConfigError(format!(
            "{} holds several experiments; choose one with --table",
            path.display()
        ))),
    }
}

fn strip_nulls(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m.into_iter().filter(|(_, v)| !v.is_null()).collect(),
        _ => Map::new(),
    }
}

impl Params {
    /// Merges the config file (if any) under the flags and fills the seed
    /// from the environment when neither sets it.
    pub fn resolve(self) -> Result<Params, ConfigError> {
        let (config, table) = (self.config.clone(), self.table.clone());
        let mut merged = Map::new();
        if let Some(path) = &config {
            let text = std::fs::read_to_string(path).map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
            let doc: toml::Table = toml::from_str(&text).map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
            let t = select_table(doc, table.as_deref(), path)?;
            merged = strip_nulls(serde_json::to_value(t)?);
        } else if table.is_some() {
            return Err(ConfigError("--table needs --config".into()));
        }
        merged.extend(strip_nulls(serde_json::to_value(&self)?));
        let mut p: Params = serde_json::from_value(Value::Object(merged)).map_err(|e| ConfigError(format!("config: {e}")))?;
        p.config = config;
        p.table = table;
        if p.seed.is_none() {
            p.seed = Some(match std::env::var(SEED_ENV) {
                Ok(v) => v.trim().parse().map_err(|_| ConfigError(format!("{SEED_ENV}='{v}' is not a valid seed")))?,
                Err(_) => DEFAULT_SEED,
            });
        }
        Ok(p)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(text: &str) -> tempfile::NamedTempFile {
        let f = tempfile::NamedTempFile::new().unwrap();
        std::fs::write(f.path(), text).unwrap();
        f
    }

    #[test]
    fn flags_override_the_file() {
        let f = write("[a]\ncommand = \"gram\"\ns = 2.0\nhbar = 0.5\nseed = 3\n");
        let p = Params { config: Some(f.path().into()), s: Some(4.0), ..Default::default() }.resolve().unwrap();
        assert_eq!((p.s, p.hbar, p.seed, p.command.as_deref()), (Some(4.0), Some(0.5), Some(3), Some("gram")));
    }

    #[test]
    fn several_tables_need_a_choice() {
        let f = write("[a]\ns = 1.0\n[b]\ns = 2.0\n");
        assert!(Params { config: Some(f.path().into()), ..Default::default() }.resolve().is_err());
        let p = Params { config: Some(f.path().into()), table: Some("b".into()), ..Default::default() }.resolve().unwrap();
        assert_eq!(p.s, Some(2.0));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let f = write("sigma = 1.0\n");
        assert!(Params { config: Some(f.path().into()), ..Default::default() }.resolve().is_err());
    }

    #[test]
    fn group_and_label_alias_parse_from_the_file() {
        let f = write("group = \"su2\"\nn = 2\n");
        let p = Params { config: Some(f.path().into()), ..Default::default() }.resolve().unwrap();
        assert_eq!((p.group, p.k), (Some(GroupKind::Su2), Some(2)));
    }
}
