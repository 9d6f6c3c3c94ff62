//! Gaussian joint-action environments.
//!
//! Each joint action `a` carries a Gaussian reward distribution with mean
//! `mu_a` and standard deviation `sigma_a`. Every round all players receive
//! their own independent draw from the distribution of the action that was
//! taken. Rewards are not clamped to `[0, 1]`.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::action::{ActionId, ActionSpace, JointAction};
use crate::config::Diagnostic;
use crate::error::{Error, Result};
use crate::rng::{rng_from_seed, SimRng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RewardKind {
    /// Means and standard deviations drawn uniformly per joint action.
    GaussianRandom,
    /// Means and standard deviations given explicitly.
    GaussianFixed,
}

/// Recipe for building an [`Environment`]; this is the `[environment]` table
/// of an experiment config.
///
/// Fixed tables are flat lists in lexicographic joint-action order, so for two
/// players with two arms each the order is `(1,1), (1,2), (2,1), (2,2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvironmentSpec {
    #[serde(default = "default_players")]
    pub num_players: usize,
    #[serde(default = "default_arms")]
    pub arms_per_player: Vec<usize>,
    #[serde(default = "default_kind")]
    pub reward_kind: RewardKind,
    #[serde(default)]
    pub mean_low: f64,
    #[serde(default = "one")]
    pub mean_high: f64,
    #[serde(default)]
    pub sd_low: f64,
    #[serde(default = "half")]
    pub sd_high: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed_means: Option<Vec<f64>>,
    /// Defaults to all zeros when `fixed_means` is given alone.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed_sds: Option<Vec<f64>>,
}

fn default_players() -> usize {
    2
}
fn default_arms() -> Vec<usize> {
    vec![3, 3]
}
fn default_kind() -> RewardKind {
    RewardKind::GaussianRandom
}
fn one() -> f64 {
    1.0
}
fn half() -> f64 {
    0.5
}

impl Default for EnvironmentSpec {
    fn default() -> Self {
        Self {
            num_players: default_players(),
            arms_per_player: default_arms(),
            reward_kind: default_kind(),
            mean_low: 0.0,
            mean_high: 1.0,
            sd_low: 0.0,
            sd_high: 0.5,
            fixed_means: None,
            fixed_sds: None,
        }
    }
}

impl EnvironmentSpec {
    /// Uniformly random means and standard deviations.
    pub fn random(arms_per_player: Vec<usize>, means: (f64, f64), sds: (f64, f64)) -> Self {
        Self {
            num_players: arms_per_player.len(),
            arms_per_player,
            reward_kind: RewardKind::GaussianRandom,
            mean_low: means.0,
            mean_high: means.1,
            sd_low: sds.0,
            sd_high: sds.1,
            fixed_means: None,
            fixed_sds: None,
        }
    }

    /// Fixed tables in lexicographic joint-action order.
    pub fn fixed(arms_per_player: Vec<usize>, means: Vec<f64>, sds: Vec<f64>) -> Self {
        Self {
            num_players: arms_per_player.len(),
            arms_per_player,
            reward_kind: RewardKind::GaussianFixed,
            fixed_means: Some(means),
            fixed_sds: Some(sds),
            ..Self::default()
        }
    }

    /// Fixed means sharing a single standard deviation.
    pub fn fixed_uniform_sd(arms_per_player: Vec<usize>, means: Vec<f64>, sd: f64) -> Self {
        let sds = vec![sd; means.len()];
        Self::fixed(arms_per_player, means, sds)
    }

    /// Number of joint actions, saturating on overflow.
    pub fn num_joint_actions(&self) -> usize {
        self.arms_per_player
            .iter()
            .try_fold(1usize, |acc, &k| acc.checked_mul(k))
            .unwrap_or(usize::MAX)
    }

    pub fn action_space(&self) -> Result<ActionSpace> {
        ActionSpace::new(&self.arms_per_player)
    }

    /// Field-level problems, each prefixed with `prefix` (e.g. `"environment"`).
    pub fn diagnostics(&self, prefix: &str) -> Vec<Diagnostic> {
        let field = |name: &str| {
            if prefix.is_empty() {
                name.to_string()
            } else {
                format!("{prefix}.{name}")
            }
        };
        let mut out = Vec::new();
        if self.num_players < 2 {
            out.push(Diagnostic::new(
                field("num_players"),
                format!("num_players must be ≥ 2, got {}", self.num_players),
            ));
        }
        if self.arms_per_player.len() != self.num_players {
            out.push(Diagnostic::new(
                field("arms_per_player"),
                format!(
                    "arms_per_player lists {} players but num_players is {}",
                    self.arms_per_player.len(),
                    self.num_players
                ),
            ));
        }
        for (i, &k) in self.arms_per_player.iter().enumerate() {
            if k < 2 {
                out.push(Diagnostic::new(
                    format!("{}[{i}]", field("arms_per_player")),
                    "arms_per_player must be ≥ 2 (signaling requires a second marginal arm)",
                ));
            }
        }
        let joint = self.num_joint_actions();
        if joint == usize::MAX || joint > 1 << 24 {
            out.push(Diagnostic::new(
                field("arms_per_player"),
                "joint action space is too large to tabulate",
            ));
            return out;
        }
        match self.reward_kind {
            RewardKind::GaussianRandom => {
                if !(self.mean_low.is_finite() && self.mean_high.is_finite())
                    || self.mean_low > self.mean_high
                {
                    out.push(Diagnostic::new(
                        field("mean_high"),
                        format!(
                            "mean range must be finite with mean_low ≤ mean_high, got [{}, {}]",
                            self.mean_low, self.mean_high
                        ),
                    ));
                }
                if !(self.sd_low.is_finite() && self.sd_high.is_finite())
                    || self.sd_low < 0.0
                    || self.sd_low > self.sd_high
                {
                    out.push(Diagnostic::new(
                        field("sd_high"),
                        format!(
                            "standard deviation range must satisfy 0 ≤ sd_low ≤ sd_high, got [{}, {}]",
                            self.sd_low, self.sd_high
                        ),
                    ));
                }
            }
            RewardKind::GaussianFixed => match &self.fixed_means {
                None => out.push(Diagnostic::new(
                    field("fixed_means"),
                    "gaussian-fixed environments need fixed_means",
                )),
                Some(means) => {
                    if means.len() != joint {
                        out.push(Diagnostic::new(
                            field("fixed_means"),
                            format!("expected {joint} entries (one per joint action), got {}", means.len()),
                        ));
                    }
                    if let Some(i) = means.iter().position(|m| !m.is_finite()) {
                        out.push(Diagnostic::new(
                            format!("{}[{i}]", field("fixed_means")),
                            "means must be finite",
                        ));
                    }
                    if let Some(sds) = &self.fixed_sds {
                        if sds.len() != joint {
                            out.push(Diagnostic::new(
                                field("fixed_sds"),
                                format!("expected {joint} entries (one per joint action), got {}", sds.len()),
                            ));
                        }
                        if let Some(i) = sds.iter().position(|s| !(s.is_finite() && *s >= 0.0)) {
                            out.push(Diagnostic::new(
                                format!("{}[{i}]", field("fixed_sds")),
                                "standard deviations must be finite and ≥ 0",
                            ));
                        }
                    }
                }
            },
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let diags = self.diagnostics("environment");
        if diags.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(diags))
        }
    }
}

/// One private reward per player for a single pull.
#[derive(Debug, Clone, PartialEq)]
pub struct RewardDraw {
    pub per_player: Vec<f64>,
}

/// Ground-truth reward tables, immutable once built.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Environment {
    space: ActionSpace,
    means: Vec<f64>,
    sds: Vec<f64>,
    optimal: ActionId,
    mu_star: f64,
}

impl Environment {
    pub fn from_tables(space: ActionSpace, means: Vec<f64>, sds: Vec<f64>) -> Result<Self> {
        if means.len() != space.size() || sds.len() != space.size() {
            return Err(Error::Domain(format!(
                "reward tables need {} entries, got {} means and {} sds",
                space.size(),
                means.len(),
                sds.len()
            )));
        }
        if means.iter().any(|m| !m.is_finite()) || sds.iter().any(|s| !(s.is_finite() && *s >= 0.0)) {
            return Err(Error::Domain("reward tables must be finite with sds ≥ 0".into()));
        }
        // first maximum wins: lexicographically smallest optimal action
        let (optimal, mu_star) = means
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, &m)| if m > best.1 { (i, m) } else { best });
        Ok(Self {
            space,
            means,
            sds,
            optimal: ActionId(optimal),
            mu_star,
        })
    }

    /// Builds the environment described by `spec`. Random tables are drawn from
    /// a generator seeded with `seed`: all means in lexicographic order first,
    /// then all standard deviations.
    pub fn sample(spec: &EnvironmentSpec, seed: u64) -> Result<Self> {
        spec.validate()?;
        let space = spec.action_space()?;
        let n = space.size();
        let (means, sds) = match spec.reward_kind {
            RewardKind::GaussianRandom => {
                let mut rng = rng_from_seed(seed);
                let mut uniform = |lo: f64, hi: f64| lo + (hi - lo) * rng.random::<f64>();
                let means: Vec<f64> = (0..n).map(|_| uniform(spec.mean_low, spec.mean_high)).collect();
                let sds: Vec<f64> = (0..n).map(|_| uniform(spec.sd_low, spec.sd_high)).collect();
                (means, sds)
            }
            RewardKind::GaussianFixed => {
                let means = spec.fixed_means.clone().unwrap_or_default();
                let sds = spec.fixed_sds.clone().unwrap_or_else(|| vec![0.0; n]);
                (means, sds)
            }
        };
        Self::from_tables(space, means, sds)
    }

    pub fn space(&self) -> &ActionSpace {
        &self.space
    }

    pub fn num_players(&self) -> usize {
        self.space.num_players()
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn sds(&self) -> &[f64] {
        &self.sds
    }

    pub fn mean(&self, id: ActionId) -> f64 {
        self.means[id.0]
    }

    pub fn sd(&self, id: ActionId) -> f64 {
        self.sds[id.0]
    }

    pub fn optimal_action(&self) -> ActionId {
        self.optimal
    }

    pub fn mu_star(&self) -> f64 {
        self.mu_star
    }

    /// `mu_star - mu_a`. Panics if `id` is outside the space.
    pub fn gap(&self, id: ActionId) -> f64 {
        self.mu_star - self.means[id.0]
    }

    pub fn gap_of(&self, action: &JointAction) -> Result<f64> {
        Ok(self.gap(self.space.id_of(action)?))
    }

    pub fn gaps(&self) -> Vec<f64> {
        self.means.iter().map(|m| self.mu_star - m).collect()
    }

    /// Writes one independent draw per player into `out`, in player order.
    /// Exactly one standard normal variate is consumed per player.
    pub fn draw_into(&self, id: ActionId, rng: &mut SimRng, out: &mut [f64]) {
        let (mu, sd) = (self.means[id.0], self.sds[id.0]);
        for slot in out.iter_mut() {
            let z: f64 = rng.sample(StandardNormal);
            *slot = mu + sd * z;
        }
    }

    pub fn draw_rewards(&self, action: &JointAction, rng: &mut SimRng) -> Result<RewardDraw> {
        let id = self.space.id_of(action)?;
        let mut per_player = vec![0.0; self.num_players()];
        self.draw_into(id, rng, &mut per_player);
        Ok(RewardDraw { per_player })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_by_two() -> Environment {
        Environment::sample(
            &EnvironmentSpec::fixed_uniform_sd(vec![2, 2], vec![0.9, 0.5, 0.6, 0.7], 0.0),
            0,
        )
        .unwrap()
    }

    fn ja(arms: &[usize]) -> JointAction {
        JointAction::from_one_based(arms).unwrap()
    }

    #[test]
    fn fixed_table_optimum_and_gaps() {
        let env = two_by_two();
        assert_eq!(env.space().label(env.optimal_action()), "(1,1)");
        assert_eq!(env.mu_star(), 0.9);
        assert!((env.gap_of(&ja(&[2, 2])).unwrap() - 0.2).abs() < 1e-12);
        assert!((env.gap_of(&ja(&[1, 2])).unwrap() - 0.4).abs() < 1e-12);
        assert_eq!(env.gap_of(&ja(&[1, 1])).unwrap(), 0.0);
        assert!(env.gap_of(&ja(&[3, 1])).is_err());
    }

    #[test]
    fn constant_table_ties_break_lexicographically() {
        let spec = EnvironmentSpec::random(vec![3, 2, 2], (0.3, 0.3), (0.0, 0.1));
        let env = Environment::sample(&spec, 9).unwrap();
        assert_eq!(env.optimal_action(), ActionId(0));
        assert!(env.gaps().iter().all(|&g| g == 0.0));
    }

    #[test]
    fn random_environment_is_reproducible() {
        let spec = EnvironmentSpec::default();
        let a = Environment::sample(&spec, 42).unwrap();
        let b = Environment::sample(&spec, 42).unwrap();
        assert_eq!(a.means().len(), 9);
        assert!(a.means().iter().all(|&m| m > 0.0 && m < 1.0));
        assert!(a.sds().iter().all(|&s| (0.0..0.5).contains(&s)));
        let bits = |e: &Environment| e.means().iter().chain(e.sds()).map(|x| x.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&a), bits(&b));
        assert_ne!(bits(&a), bits(&Environment::sample(&spec, 43).unwrap()));
        let min_gap = a.gaps().into_iter().fold(f64::INFINITY, f64::min);
        assert_eq!(min_gap, 0.0);
        assert_eq!(a.gaps().iter().filter(|&&g| g == 0.0).count(), 1);
    }

    #[test]
    fn zero_sd_draws_are_exact() {
        let env = two_by_two();
        let mut rng = rng_from_seed(5);
        for _ in 0..100 {
            let draw = env.draw_rewards(&ja(&[2, 1]), &mut rng).unwrap();
            assert_eq!(draw.per_player, vec![0.6, 0.6]);
        }
    }

    #[test]
    fn draw_rejects_out_of_range() {
        let env = two_by_two();
        let mut rng = rng_from_seed(5);
        assert!(env.draw_rewards(&ja(&[1, 3]), &mut rng).is_err());
        assert!(env.draw_rewards(&ja(&[1]), &mut rng).is_err());
    }

    #[test]
    fn spec_diagnostics() {
        let spec = EnvironmentSpec {
            arms_per_player: vec![1, 3],
            ..EnvironmentSpec::default()
        };
        let diags = spec.diagnostics("environment");
        assert!(diags.iter().any(|d| d.path == "environment.arms_per_player[0]"
            && d.reason.contains("signaling requires a second marginal arm")));

        let spec = EnvironmentSpec {
            mean_low: 0.8,
            mean_high: 0.2,
            ..EnvironmentSpec::default()
        };
        assert!(!spec.diagnostics("environment").is_empty());

        let spec = EnvironmentSpec::fixed(vec![2, 2], vec![0.1, 0.2], vec![0.0; 4]);
        assert!(spec.diagnostics("environment").iter().any(|d| d.path == "environment.fixed_means"));

        assert!(EnvironmentSpec::default().diagnostics("environment").is_empty());
    }
}
