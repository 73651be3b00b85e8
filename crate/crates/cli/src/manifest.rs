use serde::{Deserialize, Serialize};

use empsup::limits::DensitySpec;
use empsup::ExperimentConfig;

use crate::CliError;

/// Written next to every output file; enough to regenerate it byte for byte.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Resolved configuration for `command` (see [`ResolvedConfig`]).
    pub config: serde_json::Value,
    pub master_seed: Option<u64>,
    pub version: String,
    /// Parallelism used for the run. Does not affect output bytes.
    pub workers: usize,
    pub started_at: String,
    pub finished_at: String,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Manifest(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }

    pub fn resolved(&self) -> Result<ResolvedConfig, CliError> {
        let v = self.config.clone();
        let bad = |e: serde_json::Error| CliError::Manifest(e.to_string());
        Ok(match self.command.as_str() {
            "experiment" => ResolvedConfig::Experiment(serde_json::from_value(v).map_err(bad)?),
            "verify" => ResolvedConfig::Verify(serde_json::from_value(v).map_err(bad)?),
            "density" => ResolvedConfig::Density(serde_json::from_value(v).map_err(bad)?),
            "table" => ResolvedConfig::Table(serde_json::from_value(v).map_err(bad)?),
            other => {
                return Err(CliError::Manifest(format!(
                    "manifest command `{other}` cannot be replayed"
                )))
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub n: u64,
    pub a: f64,
    pub lambda: f64,
    pub replications: u64,
    pub master_seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityConfig {
    pub nodes_x: usize,
    pub nodes_y: usize,
    pub y_max: f64,
    pub spec: DensitySpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableConfig {
    pub experiment: ExperimentConfig,
    pub y_edges: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ResolvedConfig {
    Experiment(ExperimentConfig),
    Verify(VerifyConfig),
    Density(DensityConfig),
    Table(TableConfig),
}

impl ResolvedConfig {
    pub fn command(&self) -> &'static str {
        match self {
            ResolvedConfig::Experiment(_) => "experiment",
            ResolvedConfig::Verify(_) => "verify",
            ResolvedConfig::Density(_) => "density",
            ResolvedConfig::Table(_) => "table",
        }
    }

    pub fn master_seed(&self) -> Option<u64> {
        match self {
            ResolvedConfig::Experiment(c) => Some(c.master_seed),
            ResolvedConfig::Verify(c) => Some(c.master_seed),
            ResolvedConfig::Density(_) => None,
            ResolvedConfig::Table(c) => Some(c.experiment.master_seed),
        }
    }

    pub fn to_value(&self) -> serde_json::Value {
        let v = match self {
            ResolvedConfig::Experiment(c) => serde_json::to_value(c),
            ResolvedConfig::Verify(c) => serde_json::to_value(c),
            ResolvedConfig::Density(c) => serde_json::to_value(c),
            ResolvedConfig::Table(c) => serde_json::to_value(c),
        };
        v.expect("configs serialize")
    }
}
