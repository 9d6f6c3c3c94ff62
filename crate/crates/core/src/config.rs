//! Experiment configuration files (TOML).
//!
//! ```toml
//! horizon = 100000
//! repetitions = 10
//! master_seed = 42
//! output_dir = "results"
//!
//! [environment]
//! arms_per_player = [3, 3]
//!
//! [[policies]]
//! name = "mucb-intervals"
//! gamma = 0.5
//! ```
//!
//! Every key is optional; omitted keys take the defaults listed on
//! [`ExperimentConfig`]. Without a `[[policies]]` table all three registered
//! policies run with default parameters.

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::baselines::EtcParams;
use crate::environment::EnvironmentSpec;
use crate::error::{Error, Result};
use crate::simulator::{DeltaChoice, Policy};

/// One problem with a configuration, tied to the offending field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub path: String,
    pub reason: String,
}

impl Diagnostic {
    pub fn new(path: impl Into<String>, reason: impl Into<String>) -> Self {
        Self {
            path: path.into(),
            reason: reason.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.reason)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnvironmentMode {
    /// One environment drawn per experiment and shared by every repetition.
    #[default]
    Shared,
    /// A fresh environment for every repetition.
    FreshPerRun,
}

/// A `[[policies]]` entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicyConfig {
    pub name: String,
    /// Output file stem; defaults to `name`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<DeltaChoice>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub explore_growth: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub commit_growth: Option<f64>,
}

pub const DEFAULT_GAMMA: f64 = 0.5;

impl PolicyConfig {
    pub fn named(name: &str) -> Self {
        Self {
            name: name.to_string(),
            label: None,
            gamma: None,
            delta: None,
            explore_growth: None,
            commit_growth: None,
        }
    }

    pub fn label(&self) -> &str {
        self.label.as_deref().unwrap_or(&self.name)
    }

    fn diagnostics(&self, path: &str, horizon: u64, num_actions: usize) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let field = |f: &str| format!("{path}.{f}");
        let unused = |f: &str, present: bool, out: &mut Vec<Diagnostic>| {
            if present {
                out.push(Diagnostic::new(
                    field(f),
                    format!("{f} is not a parameter of {}", self.name),
                ));
            }
        };
        match self.name.as_str() {
            Policy::MUCB_INTERVALS => {
                unused("explore_growth", self.explore_growth.is_some(), &mut out);
                unused("commit_growth", self.commit_growth.is_some(), &mut out);
                let gamma = self.gamma.unwrap_or(DEFAULT_GAMMA);
                if !(gamma > 0.0 && gamma.is_finite()) {
                    out.push(Diagnostic::new(field("gamma"), "gamma must be > 0"));
                } else if horizon >= 2 {
                    if let Err(e) = self.delta.unwrap_or_default().resolve(horizon, gamma) {
                        out.push(Diagnostic::new(field("delta"), strip_domain(e)));
                    }
                }
                if (horizon as u128) < num_actions as u128 {
                    out.push(Diagnostic::new(
                        "horizon",
                        format!(
                            "horizon must be ≥ {num_actions} (one initialization pull per joint action) for {}",
                            self.label()
                        ),
                    ));
                }
            }
            Policy::CENTRALIZED_UCB => {
                unused("gamma", self.gamma.is_some(), &mut out);
                unused("explore_growth", self.explore_growth.is_some(), &mut out);
                unused("commit_growth", self.commit_growth.is_some(), &mut out);
                if horizon >= 2 {
                    if let Err(e) = self.delta.unwrap_or_default().resolve(horizon, std::f64::consts::SQRT_2) {
                        out.push(Diagnostic::new(field("delta"), strip_domain(e)));
                    }
                }
            }
            Policy::ETC_DSEE_STYLE => {
                unused("gamma", self.gamma.is_some(), &mut out);
                unused("delta", self.delta.is_some(), &mut out);
                let defaults = EtcParams::default();
                for (f, v) in [
                    ("explore_growth", self.explore_growth.unwrap_or(defaults.explore_growth)),
                    ("commit_growth", self.commit_growth.unwrap_or(defaults.commit_growth)),
                ] {
                    if !(v >= 1.0 && v.is_finite()) {
                        out.push(Diagnostic::new(field(f), format!("{f} must be ≥ 1")));
                    }
                }
            }
            other => out.push(Diagnostic::new(
                field("name"),
                format!("unknown policy {other:?}; expected one of {}", Policy::NAMES.join(", ")),
            )),
        }
        if let Some(label) = &self.label {
            if label.is_empty()
                || !label
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_' || c == '.')
                || label.starts_with('.')
            {
                out.push(Diagnostic::new(
                    field("label"),
                    "label must be a plain file stem of letters, digits, '-', '_' or '.'",
                ));
            }
        }
        out
    }

    /// The runnable policy. Call only on a validated config.
    pub fn to_policy(&self) -> Result<Policy> {
        let defaults = EtcParams::default();
        match self.name.as_str() {
            Policy::MUCB_INTERVALS => Ok(Policy::MucbIntervals {
                gamma: self.gamma.unwrap_or(DEFAULT_GAMMA),
                delta: self.delta.unwrap_or_default(),
            }),
            Policy::CENTRALIZED_UCB => Ok(Policy::CentralizedUcb {
                delta: self.delta.unwrap_or_default(),
            }),
            Policy::ETC_DSEE_STYLE => Ok(Policy::EtcDseeStyle(EtcParams {
                explore_growth: self.explore_growth.unwrap_or(defaults.explore_growth),
                commit_growth: self.commit_growth.unwrap_or(defaults.commit_growth),
            })),
            other => Err(Error::config("policies.name", format!("unknown policy {other:?}"))),
        }
    }
}

fn strip_domain(e: Error) -> String {
    match e {
        Error::Domain(msg) => msg,
        other => other.to_string(),
    }
}

fn default_policies() -> Vec<PolicyConfig> {
    Policy::NAMES.iter().map(|n| PolicyConfig::named(n)).collect()
}

fn default_horizon() -> u64 {
    100_000
}

fn default_repetitions() -> usize {
    10
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("results")
}

fn yes() -> bool {
    true
}

/// A complete experiment: one environment recipe, several policies, and the
/// run schedule. Defaults: horizon 100000, 10 repetitions, master seed 0,
/// output to `results/`, plots on, audit off, shared environment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub environment: EnvironmentSpec,
    #[serde(default = "default_policies")]
    pub policies: Vec<PolicyConfig>,
    #[serde(default = "default_horizon")]
    pub horizon: u64,
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default = "yes")]
    pub emit_plots: bool,
    #[serde(default)]
    pub audit: bool,
    #[serde(default)]
    pub environment_mode: EnvironmentMode,
    /// Also write reward-sampled regret columns.
    #[serde(default)]
    pub sampled_regret: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            environment: EnvironmentSpec::default(),
            policies: default_policies(),
            horizon: default_horizon(),
            repetitions: default_repetitions(),
            master_seed: 0,
            output_dir: default_output_dir(),
            emit_plots: true,
            audit: false,
            environment_mode: EnvironmentMode::Shared,
            sampled_regret: false,
        }
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> std::result::Result<Self, Diagnostic> {
        toml::from_str(text).map_err(|e| {
            let reason = e.message().to_string();
            let path = e
                .span()
                .map(|s| {
                    let line = text[..s.start.min(text.len())].matches('\n').count() + 1;
                    format!("line {line}")
                })
                .unwrap_or_else(|| "<document>".into());
            Diagnostic::new(path, reason)
        })
    }

    /// Reads and validates a config file. Relative output paths are resolved
    /// against the config file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut config = Self::parse(&text).map_err(|d| Error::Config(vec![d]))?;
        let diags = config.diagnostics();
        if !diags.is_empty() {
            return Err(Error::Config(diags));
        }
        if config.output_dir.is_relative() {
            if let Some(dir) = path.parent() {
                config.output_dir = dir.join(&config.output_dir);
            }
        }
        Ok(config)
    }

    pub fn diagnostics(&self) -> Vec<Diagnostic> {
        let mut out = self.environment.diagnostics("environment");
        if self.horizon == 0 {
            out.push(Diagnostic::new("horizon", "horizon must be ≥ 1"));
        }
        if self.repetitions == 0 {
            out.push(Diagnostic::new("repetitions", "repetitions must be ≥ 1"));
        }
        if self.policies.is_empty() {
            out.push(Diagnostic::new("policies", "at least one policy is required"));
        }
        let num_actions = self.environment.num_joint_actions();
        let mut labels = BTreeSet::new();
        for (i, p) in self.policies.iter().enumerate() {
            let path = format!("policies[{i}]");
            out.extend(p.diagnostics(&path, self.horizon, num_actions));
            if !labels.insert(p.label().to_string()) {
                out.push(Diagnostic::new(
                    format!("{path}.label"),
                    format!("duplicate policy label {:?}; set distinct labels", p.label()),
                ));
            }
        }
        if self.output_dir.as_os_str().is_empty() {
            out.push(Diagnostic::new("output_dir", "output_dir must not be empty"));
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let diags = self.diagnostics();
        if diags.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(diags))
        }
    }
}

/// Diagnostics for the config at `path`; empty iff it is runnable. Only an
/// unreadable file is an error.
pub fn validate_config(path: &Path) -> Result<Vec<Diagnostic>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(match ExperimentConfig::parse(&text) {
        Ok(config) => config.diagnostics(),
        Err(d) => vec![d],
    })
}
