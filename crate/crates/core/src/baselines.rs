//! Comparison policies.
//!
//! * [`CentralizedUcbState`] picks the joint action with the largest UCB index
//!   from a single reward stream. No player-level asymmetry exists, so it acts
//!   as an oracle that needs no coordination.
//! * [`EtcState`] is an explore-then-commit schedule in the style of DSEE:
//!   epochs of equal round-robin exploration followed by commitment, with
//!   both phases growing geometrically. Each player commits to the joint action
//!   with the best mean in its *own* reward stream and plays its component of
//!   it, so players may commit to different actions. It is a stand-in with the
//!   same shape as mDSEE, not a reproduction of it.

use serde::{Deserialize, Serialize};

use crate::action::{ActionId, ActionSpace};
use crate::confidence::{ucb_index, ArmStats};
use crate::error::{Error, Result};

/// First index holding the maximum; `NaN` never wins.
fn first_argmax(values: impl Iterator<Item = f64>) -> usize {
    values
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, v)| if v > best.1 { (i, v) } else { best })
        .0
}

#[derive(Debug, Clone)]
pub struct CentralizedUcbState {
    stats: Vec<ArmStats>,
    delta: f64,
}

impl CentralizedUcbState {
    pub fn new(space: &ActionSpace, delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::Domain(format!("delta must lie in (0, 1), got {delta}")));
        }
        Ok(Self {
            stats: vec![ArmStats::new(); space.size()],
            delta,
        })
    }

    pub fn from_stats(stats: Vec<ArmStats>, delta: f64) -> Self {
        Self { stats, delta }
    }

    pub fn stats(&self) -> &[ArmStats] {
        &self.stats
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn indices(&self) -> Vec<f64> {
        self.stats.iter().map(|s| ucb_index(s, self.delta)).collect()
    }

    /// Joint action with the largest index; ties go to the smallest id, so
    /// unpulled actions are tried in lexicographic order first.
    pub fn step(&self) -> ActionId {
        ActionId(first_argmax(self.stats.iter().map(|s| ucb_index(s, self.delta))))
    }

    pub fn observe(&mut self, taken: ActionId, reward: f64) {
        self.stats[taken.0].record(reward);
    }
}

/// Growth rates of the explore-then-commit schedule. Epoch `j` pulls every
/// joint action `ceil(explore_growth^j)` times in round-robin order, then
/// commits for `n * ceil(commit_growth^j)` rounds, `n` being the number of
/// joint actions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EtcParams {
    #[serde(default = "default_explore_growth")]
    pub explore_growth: f64,
    #[serde(default = "default_commit_growth")]
    pub commit_growth: f64,
}

fn default_explore_growth() -> f64 {
    2.0
}

fn default_commit_growth() -> f64 {
    4.0
}

impl Default for EtcParams {
    fn default() -> Self {
        Self {
            explore_growth: default_explore_growth(),
            commit_growth: default_commit_growth(),
        }
    }
}

impl EtcParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.explore_growth >= 1.0 && self.explore_growth.is_finite()) {
            return Err(Error::Domain(format!(
                "explore_growth must be ≥ 1, got {}",
                self.explore_growth
            )));
        }
        if !(self.commit_growth >= 1.0 && self.commit_growth.is_finite()) {
            return Err(Error::Domain(format!(
                "commit_growth must be ≥ 1, got {}",
                self.commit_growth
            )));
        }
        Ok(())
    }

    /// Pulls per joint action during the exploration phase of `epoch`.
    pub fn explore_pulls(&self, epoch: u32) -> u64 {
        growth_ceil(self.explore_growth, epoch)
    }

    /// Length in rounds of the commit phase of `epoch`.
    pub fn commit_rounds(&self, epoch: u32, num_actions: usize) -> u64 {
        growth_ceil(self.commit_growth, epoch).saturating_mul(num_actions as u64)
    }
}

fn growth_ceil(base: f64, epoch: u32) -> u64 {
    let v = base.powi(epoch.min(i32::MAX as u32) as i32).ceil();
    if v >= u64::MAX as f64 {
        u64::MAX
    } else {
        v as u64
    }
}

#[derive(Debug, Clone)]
pub struct EtcState {
    space: ActionSpace,
    params: EtcParams,
    /// `stats[player][action]`
    stats: Vec<Vec<ArmStats>>,
    epoch: u32,
    exploring: bool,
    /// Per-player commit target while committing.
    committed: Option<Vec<ActionId>>,
    phase_round: u64,
}

impl EtcState {
    pub fn new(space: ActionSpace, params: EtcParams) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            stats: vec![vec![ArmStats::new(); space.size()]; space.num_players()],
            space,
            params,
            epoch: 0,
            exploring: true,
            committed: None,
            phase_round: 0,
        })
    }

    pub fn epoch(&self) -> u32 {
        self.epoch
    }

    pub fn is_exploring(&self) -> bool {
        self.exploring
    }

    pub fn stats(&self, player: usize) -> &[ArmStats] {
        &self.stats[player]
    }

    /// Joint action each player believes best, while committing.
    pub fn commit_targets(&self) -> Option<&[ActionId]> {
        self.committed.as_deref()
    }

    /// Joint action the team plays while committing: every player's component
    /// of its own target.
    pub fn committed(&self) -> Option<ActionId> {
        self.committed.as_ref().map(|targets| self.assemble(targets))
    }

    fn assemble(&self, targets: &[ActionId]) -> ActionId {
        let arms: Vec<usize> = targets
            .iter()
            .enumerate()
            .map(|(p, &t)| self.space.arm(t, p))
            .collect();
        self.space
            .encode(&arms)
            .expect("components of in-range actions are in range")
    }

    fn explore_len(&self) -> u64 {
        self.params
            .explore_pulls(self.epoch)
            .saturating_mul(self.space.size() as u64)
    }

    pub fn step(&self) -> ActionId {
        match &self.committed {
            Some(targets) if !self.exploring => self.assemble(targets),
            _ => ActionId((self.phase_round % self.space.size() as u64) as usize),
        }
    }

    /// Records the taken action with every player's private reward.
    pub fn observe(&mut self, taken: ActionId, rewards: &[f64]) {
        for (stats, &r) in self.stats.iter_mut().zip(rewards) {
            stats[taken.0].record(r);
        }
        self.phase_round += 1;
        if self.exploring {
            if self.phase_round >= self.explore_len() {
                self.exploring = false;
                self.phase_round = 0;
                self.committed = Some(
                    self.stats
                        .iter()
                        .map(|s| ActionId(first_argmax(s.iter().map(|a| a.mean().unwrap_or(f64::NEG_INFINITY)))))
                        .collect(),
                );
            }
        } else if self.phase_round >= self.params.commit_rounds(self.epoch, self.space.size()) {
            self.epoch += 1;
            self.exploring = true;
            self.committed = None;
            self.phase_round = 0;
        }
    }
}
