use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Synth,
    Census,
    Density,
    Identity,
    Scaling,
    Paired,
    RpwTrunc,
    KlBound,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Synth => "synth",
            ExperimentKind::Census => "census",
            ExperimentKind::Density => "density",
            ExperimentKind::Identity => "identity",
            ExperimentKind::Scaling => "scaling",
            ExperimentKind::Paired => "paired",
            ExperimentKind::RpwTrunc => "rpw-trunc",
            ExperimentKind::KlBound => "kl-bound",
        }
    }
}

/// One experiment, read from a TOML file. Which optional fields are required depends on `kind`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    /// Output directory.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    /// Window side `R`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_list: Option<Vec<f64>>,
    /// Grid spacing; the coarsest admissible spacing when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    /// One of `inv-r`, `inv-sqrt-r`, `singular`, `fixed`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_rule: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_rule_c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_per_r: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_list: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_ref: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    /// EXLB1 grid read by `census`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    /// Lags for the covariance table written by `synth`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lags: Option<Vec<[f64; 2]>>,
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind) -> Self {
        Self {
            kind,
            seed: 0,
            model: None,
            out: None,
            r: None,
            r_list: None,
            h: None,
            margin: None,
            level: None,
            levels: None,
            a: None,
            b: None,
            a_rule: None,
            a_rule_c: None,
            n_samples: None,
            n_per_r: None,
            n_list: None,
            n_ref: None,
            k: None,
            s: None,
            input: None,
            lags: None,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// JSON with sorted keys and shortest round-trip floats. The output directory is
    /// left out: it says where results go, not what they are.
    pub fn canonical_json(&self) -> String {
        let value = serde_json::to_value(Self { out: None, ..self.clone() }).expect("config serializes");
        serde_json::to_string(&value).expect("value serializes")
    }

    /// SHA-256 of the canonical JSON, hex encoded.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_json().as_bytes()))
    }
}
