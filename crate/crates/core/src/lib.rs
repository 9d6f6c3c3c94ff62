//! Decentralized cooperative multiplayer bandits with reward asymmetry.
//!
//! Every player sees every joint action but only its own private copy of the
//! reward. The [`protocol`] module implements mUCB-Intervals, where players
//! coordinate arm elimination purely through the actions they take. The rest
//! of the crate supplies Gaussian [`environment`]s, comparison [`baselines`],
//! a round-by-round [`simulator`] with regret accounting, and an
//! [`experiment`] harness driven by TOML configs.

pub mod action;
pub mod baselines;
pub mod confidence;
pub mod config;
pub mod environment;
pub mod error;
pub mod experiment;
pub mod plot;
pub mod protocol;
pub mod rng;
pub mod simulator;

pub use action::{ActionId, ActionSpace, JointAction};
pub use baselines::{CentralizedUcbState, EtcParams, EtcState};
pub use confidence::{epsilon, interval_of, is_disjoint_above, ucb_index, update_stats, ArmStats, ConfidenceInterval, WidthParams};
pub use config::{validate_config, Diagnostic, EnvironmentMode, ExperimentConfig, PolicyConfig};
pub use environment::{Environment, EnvironmentSpec, RewardDraw, RewardKind};
pub use error::{Error, Result};
pub use experiment::{run_experiment, simulate, RunOptions};
pub use protocol::{default_order, DesiredSet, Phase, PlayerState, RoundOutcome};
pub use simulator::{
    aggregate, decomposition_check, hoeffding_coverage_test, pseudo_regret, run_episode, run_many, AggregateResult,
    CoverageReport, DeltaChoice, DeltaPreset, EpisodeOptions, Policy, RunRecord,
};
