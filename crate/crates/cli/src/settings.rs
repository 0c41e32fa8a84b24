//! Option values after merging the command line, the environment and the
//! config file.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::args::{Format, GlobalArgs};
use crate::error::CliError;
use hecke_core::acceptance::DEFAULT_SEED;

/// Contents of a `--config` file. Every key is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub format: Option<Format>,
    pub datum: Option<String>,
    pub p: Option<u64>,
    pub ext_degree: Option<usize>,
    pub k: Option<i64>,
    #[serde(rename = "N")]
    pub n: Option<usize>,
    pub ell: Option<EllValue>,
    pub q: Option<i64>,
    pub sqrt_q: Option<String>,
    pub seed: Option<u64>,
    pub cutoff: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum EllValue {
    One(u64),
    Many(Vec<u64>),
    Text(String),
}

impl EllValue {
    fn into_text(self) -> String {
        match self {
            EllValue::One(x) => x.to_string(),
            EllValue::Many(v) => v.iter().map(u64::to_string).collect::<Vec<_>>().join(","),
            EllValue::Text(s) => s,
        }
    }
}

/// Resolved values; these are what the run manifest records.
#[derive(Debug, Clone, Serialize)]
pub struct Settings {
    pub format: Format,
    pub datum: Option<String>,
    pub p: Option<u64>,
    pub ext_degree: usize,
    pub k: Option<i64>,
    #[serde(rename = "N")]
    pub n: usize,
    pub ell: Option<String>,
    pub q: Option<i64>,
    pub sqrt_q: Option<String>,
    pub seed: u64,
    pub cutoff: Option<String>,
}

pub const DEFAULT_N: usize = 100;

impl Settings {
    pub fn resolve(global: &GlobalArgs) -> Result<Settings, CliError> {
        let file = match &global.config {
            Some(path) => read_config(path)?,
            None => ConfigFile::default(),
        };
        Ok(Settings {
            format: global.format.or(file.format).unwrap_or(Format::Json),
            datum: global.datum.clone().or(file.datum),
            p: global.p.or(file.p),
            ext_degree: global.ext_degree.or(file.ext_degree).unwrap_or(1),
            k: global.k.or(file.k),
            n: global.n.or(file.n).unwrap_or(DEFAULT_N),
            ell: global.ell.clone().or(file.ell.map(EllValue::into_text)),
            q: global.q.or(file.q),
            sqrt_q: global.sqrt_q.clone().or(file.sqrt_q),
            seed: global.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            cutoff: global.cutoff.clone().or(file.cutoff),
        })
    }

    pub fn require_datum(&self) -> Result<&str, CliError> {
        self.datum.as_deref().ok_or_else(|| CliError::usage("--datum is required"))
    }

    pub fn require_p(&self) -> Result<u64, CliError> {
        self.p.ok_or_else(|| CliError::usage("--p is required"))
    }

    pub fn require_k(&self) -> Result<i64, CliError> {
        self.k.ok_or_else(|| CliError::usage("--k is required"))
    }

    pub fn require_q(&self) -> Result<i64, CliError> {
        self.q.ok_or_else(|| CliError::usage("--q is required"))
    }

    pub fn ells(&self) -> Result<Vec<u64>, CliError> {
        let text = self.ell.as_deref().ok_or_else(|| CliError::usage("--ell is required"))?;
        text.split(',')
            .map(|s| {
                s.trim()
                    .parse()
                    .map_err(|_| CliError::usage(format!("--ell: `{s}` is not a positive integer")))
            })
            .collect()
    }

    pub fn ell(&self) -> Result<u64, CliError> {
        match self.ells()?.as_slice() {
            [one] => Ok(*one),
            _ => Err(CliError::usage("--ell must be a single prime here")),
        }
    }
}

fn read_config(path: &Path) -> Result<ConfigFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        hecke_core::error::Error::parse("config", format!("{}: {e}", path.display())).into()
    })
}
