//! Episode execution, regret accounting, and run aggregation.
//!
//! An [`Episode`] advances one policy against one environment round by round.
//! For mUCB-Intervals every player first picks its arm from its own state,
//! then the joint action is formed, rewards are drawn (one per player, in
//! player order), and each player receives the taken action together with its
//! own reward only. No player's observation can influence another player's
//! choice in the same round.
//!
//! Regret is pseudo-regret: the running sum of gaps `mu_star - mu_{a_t}` of the
//! taken actions. The reward-sampled variant can be recorded alongside it.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::action::ActionId;
use crate::baselines::{CentralizedUcbState, EtcParams, EtcState};
use crate::confidence::WidthParams;
use crate::environment::Environment;
use crate::error::{Error, Result};
use crate::protocol::{DesiredSet, PlayerState};
use crate::rng::{rng_from_seed, SimRng};

/// How the confidence parameter is chosen for a horizon `T`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DeltaChoice {
    Preset(DeltaPreset),
    Value(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeltaPreset {
    /// `delta = 1/T^2`
    InverseTSquared,
    /// `delta = T^(-2/gamma)`
    ProofSchedule,
}

impl Default for DeltaChoice {
    fn default() -> Self {
        DeltaChoice::Preset(DeltaPreset::InverseTSquared)
    }
}

impl DeltaChoice {
    pub fn resolve(&self, horizon: u64, gamma: f64) -> Result<WidthParams> {
        match self {
            DeltaChoice::Preset(DeltaPreset::InverseTSquared) => WidthParams::inverse_t_squared(horizon, gamma),
            DeltaChoice::Preset(DeltaPreset::ProofSchedule) => WidthParams::proof_schedule(horizon, gamma),
            DeltaChoice::Value(delta) => WidthParams::new(*delta, gamma),
        }
    }
}

/// A policy and its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum Policy {
    MucbIntervals { gamma: f64, delta: DeltaChoice },
    CentralizedUcb { delta: DeltaChoice },
    EtcDseeStyle(EtcParams),
}

impl Policy {
    pub const MUCB_INTERVALS: &'static str = "mucb-intervals";
    pub const CENTRALIZED_UCB: &'static str = "centralized-ucb";
    pub const ETC_DSEE_STYLE: &'static str = "etc-dsee-style";
    pub const NAMES: [&'static str; 3] = [Self::MUCB_INTERVALS, Self::CENTRALIZED_UCB, Self::ETC_DSEE_STYLE];

    /// mUCB-Intervals with `delta = 1/T^2`.
    pub fn mucb(gamma: f64) -> Self {
        Policy::MucbIntervals {
            gamma,
            delta: DeltaChoice::default(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Policy::MucbIntervals { .. } => Self::MUCB_INTERVALS,
            Policy::CentralizedUcb { .. } => Self::CENTRALIZED_UCB,
            Policy::EtcDseeStyle(_) => Self::ETC_DSEE_STYLE,
        }
    }

    pub fn is_protocol(&self) -> bool {
        matches!(self, Policy::MucbIntervals { .. })
    }

    /// Width parameters of mUCB-Intervals at this horizon.
    pub fn width_params(&self, horizon: u64) -> Option<Result<WidthParams>> {
        match self {
            Policy::MucbIntervals { gamma, delta } => Some(delta.resolve(horizon, *gamma)),
            _ => None,
        }
    }

    /// Smallest horizon this policy can run for in a space of `num_actions`.
    pub fn min_horizon(&self, num_actions: usize) -> u64 {
        if self.is_protocol() {
            num_actions as u64
        } else {
            0
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EpisodeOptions {
    /// Keep per-round desired sets, choices, and private rewards.
    pub audit: bool,
    /// Also record regret computed from player 1's sampled rewards.
    pub sampled_regret: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Elimination {
    /// One-based round in which the elimination was signaled.
    pub round: u64,
    pub action: ActionId,
}

/// Per-round trace used by the coordination and locality checks.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Audit {
    /// `desired[t][i]`: player `i`'s desired set after round `t + 1`.
    /// Empty for policies without desired sets.
    pub desired: Vec<Vec<DesiredSet>>,
    /// `choices[t][i]`: marginal arm chosen by player `i` in round `t + 1`.
    pub choices: Vec<Vec<usize>>,
    /// `private_rewards[i][t]`: reward seen by player `i` in round `t + 1`.
    pub private_rewards: Vec<Vec<f64>>,
}

/// Complete trace of one episode.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub seed: u64,
    pub policy: String,
    pub horizon: u64,
    pub actions: Vec<ActionId>,
    /// Cumulative pseudo-regret after each round.
    pub regret_trace: Vec<f64>,
    /// `n_a(T)` indexed by action id.
    pub pull_counts: Vec<u64>,
    pub eliminations: Vec<Elimination>,
    /// Surviving candidates at the horizon (mUCB-Intervals only).
    pub final_desired: Option<Vec<ActionId>>,
    /// Cumulative `mu_star - X` using player 1's reward copy.
    pub sampled_regret: Option<Vec<f64>>,
    pub audit: Option<Audit>,
}

impl RunRecord {
    pub fn final_regret(&self) -> f64 {
        self.regret_trace.last().copied().unwrap_or(0.0)
    }

    /// Cumulative regret after `round` rounds (0 for round 0).
    pub fn regret_at(&self, round: u64) -> f64 {
        if round == 0 {
            0.0
        } else {
            self.regret_trace[round as usize - 1]
        }
    }

    pub fn last_elimination_round(&self) -> Option<u64> {
        self.eliminations.last().map(|e| e.round)
    }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Prefix sums of the gaps of `actions`.
pub fn pseudo_regret(env: &Environment, actions: &[ActionId]) -> Vec<f64> {
    let mut acc = CompensatedSum::default();
    actions
        .iter()
        .map(|&a| {
            acc.add(env.gap(a));
            acc.value()
        })
        .collect()
}

/// `|R_T - sum_a gap_a * n_a(T)|` for a finished run.
pub fn decomposition_check(record: &RunRecord, env: &Environment) -> f64 {
    let mut by_action = CompensatedSum::default();
    for (a, &n) in record.pull_counts.iter().enumerate() {
        by_action.add(env.gap(ActionId(a)) * n as f64);
    }
    (record.final_regret() - by_action.value()).abs()
}

enum PolicyState {
    Mucb(Vec<PlayerState>),
    Ucb(CentralizedUcbState),
    Etc(EtcState),
}

/// What happened in one round.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Step {
    pub round: u64,
    pub taken: ActionId,
    /// Considered action for mUCB-Intervals.
    pub considered: Option<ActionId>,
    pub eliminated: Option<ActionId>,
    pub gap: f64,
}

/// A policy being played against an environment.
pub struct Episode<'a> {
    env: &'a Environment,
    state: PolicyState,
    rng: SimRng,
    round: u64,
    choices: Vec<usize>,
    rewards: Vec<f64>,
}

impl<'a> Episode<'a> {
    pub fn new(env: &'a Environment, policy: &Policy, horizon: u64, seed: u64) -> Result<Self> {
        let space = env.space();
        let min = policy.min_horizon(space.size());
        if horizon < min {
            return Err(Error::config(
                "horizon",
                format!(
                    "horizon {horizon} is shorter than the {min}-round initialization sweep of {}",
                    policy.name()
                ),
            ));
        }
        let state = match policy {
            Policy::MucbIntervals { .. } => {
                let params = policy
                    .width_params(horizon)
                    .expect("protocol policies have width parameters")?;
                PolicyState::Mucb(PlayerState::team(space, params)?)
            }
            Policy::CentralizedUcb { delta } => {
                let delta = delta.resolve(horizon, std::f64::consts::SQRT_2)?.delta();
                PolicyState::Ucb(CentralizedUcbState::new(space, delta)?)
            }
            Policy::EtcDseeStyle(params) => PolicyState::Etc(EtcState::new(space.clone(), *params)?),
        };
        Ok(Self {
            env,
            state,
            rng: rng_from_seed(seed),
            round: 0,
            choices: vec![0; env.num_players()],
            rewards: vec![0.0; env.num_players()],
        })
    }

    pub fn round(&self) -> u64 {
        self.round
    }

    /// Player states of an mUCB-Intervals episode.
    pub fn players(&self) -> Option<&[PlayerState]> {
        match &self.state {
            PolicyState::Mucb(players) => Some(players),
            _ => None,
        }
    }

    /// Marginal arms chosen in the last round.
    pub fn last_choices(&self) -> &[usize] {
        &self.choices
    }

    /// Private rewards drawn in the last round.
    pub fn last_rewards(&self) -> &[f64] {
        &self.rewards
    }

    pub fn step(&mut self) -> Step {
        self.round += 1;
        let space = self.env.space();
        let (taken, considered, eliminated) = match &mut self.state {
            PolicyState::Mucb(players) => {
                // every choice is made before anyone observes
                for (slot, p) in self.choices.iter_mut().zip(players.iter()) {
                    *slot = p.choose_action();
                }
                let considered = players[0].considered();
                let taken = space.encode(&self.choices).expect("players choose in-range arms");
                self.env.draw_into(taken, &mut self.rng, &mut self.rewards);
                let mut eliminated = None;
                for (i, p) in players.iter_mut().enumerate() {
                    let outcome = p.observe(taken, self.rewards[i]).expect("taken action is in range");
                    if i == 0 {
                        eliminated = outcome.eliminated;
                    }
                }
                (taken, Some(considered), eliminated)
            }
            PolicyState::Ucb(ucb) => {
                let taken = ucb.step();
                self.env.draw_into(taken, &mut self.rng, &mut self.rewards);
                ucb.observe(taken, self.rewards[0]);
                (taken, None, None)
            }
            PolicyState::Etc(etc) => {
                let taken = etc.step();
                self.env.draw_into(taken, &mut self.rng, &mut self.rewards);
                etc.observe(taken, &self.rewards);
                (taken, None, None)
            }
        };
        if !matches!(self.state, PolicyState::Mucb(_)) {
            for (p, slot) in self.choices.iter_mut().enumerate() {
                *slot = space.arm(taken, p);
            }
        }
        Step {
            round: self.round,
            taken,
            considered,
            eliminated,
            gap: self.env.gap(taken),
        }
    }
}

/// Plays `policy` for `horizon` rounds. Deterministic in `(env, policy, seed)`.
pub fn run_episode(
    env: &Environment,
    policy: &Policy,
    horizon: u64,
    seed: u64,
    options: EpisodeOptions,
) -> Result<RunRecord> {
    let mut episode = Episode::new(env, policy, horizon, seed)?;
    let m = env.num_players();
    let len = horizon as usize;
    let mut actions = Vec::with_capacity(len);
    let mut regret_trace = Vec::with_capacity(len);
    let mut pull_counts = vec![0u64; env.space().size()];
    let mut eliminations = Vec::new();
    let mut regret = CompensatedSum::default();
    let mut sampled = options.sampled_regret.then(|| (CompensatedSum::default(), Vec::with_capacity(len)));
    let mut audit = options.audit.then(|| Audit {
        desired: Vec::with_capacity(len),
        choices: Vec::with_capacity(len),
        private_rewards: vec![Vec::with_capacity(len); m],
    });

    for _ in 0..horizon {
        let step = episode.step();
        actions.push(step.taken);
        pull_counts[step.taken.0] += 1;
        regret.add(step.gap);
        regret_trace.push(regret.value());
        if let Some(action) = step.eliminated {
            eliminations.push(Elimination {
                round: step.round,
                action,
            });
        }
        if let Some((acc, trace)) = sampled.as_mut() {
            acc.add(env.mu_star() - episode.last_rewards()[0]);
            trace.push(acc.value());
        }
        if let Some(audit) = audit.as_mut() {
            audit.choices.push(episode.last_choices().to_vec());
            for (i, &r) in episode.last_rewards().iter().enumerate() {
                audit.private_rewards[i].push(r);
            }
            if let Some(players) = episode.players() {
                audit.desired.push(players.iter().map(|p| p.desired().clone()).collect());
            }
        }
    }

    Ok(RunRecord {
        seed,
        policy: policy.name().to_string(),
        horizon,
        actions,
        regret_trace,
        pull_counts,
        eliminations,
        final_desired: episode.players().map(|p| p[0].desired().actions().to_vec()),
        sampled_regret: sampled.map(|(_, trace)| trace),
        audit,
    })
}

/// Runs one episode per seed in parallel; output order follows `seeds`.
pub fn run_many(
    env: &Environment,
    policy: &Policy,
    horizon: u64,
    seeds: &[u64],
    options: EpisodeOptions,
) -> Result<Vec<RunRecord>> {
    seeds
        .par_iter()
        .map(|&seed| run_episode(env, policy, horizon, seed, options))
        .collect()
}

/// Powers of two up to `horizon`, plus `horizon` itself.
pub fn checkpoints(horizon: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut t = 1u64;
    while t <= horizon {
        out.push(t);
        match t.checked_mul(2) {
            Some(next) => t = next,
            None => break,
        }
    }
    if horizon > 0 && out.last() != Some(&horizon) {
        out.push(horizon);
    }
    out
}

/// Interval coverage of the true means over many mUCB-Intervals runs.
///
/// An event is one `(run, player, joint action, checkpoint)` tuple for an
/// action pulled at least once; it is a violation when the true mean lies
/// outside the player's interval. `predicted_rate` averages the per-event
/// tail bound `min(1, 2 exp(-n eps^2 / (2 sigma^2)))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoverageReport {
    pub runs: usize,
    pub events: u64,
    pub violations: u64,
    pub horizon_events: u64,
    pub horizon_violations: u64,
    pub predicted_violations: f64,
}

impl CoverageReport {
    pub fn rate(&self) -> f64 {
        ratio(self.violations, self.events)
    }

    /// Violation rate at the final checkpoint only.
    pub fn horizon_rate(&self) -> f64 {
        ratio(self.horizon_violations, self.horizon_events)
    }

    pub fn predicted_rate(&self) -> f64 {
        if self.events == 0 {
            0.0
        } else {
            self.predicted_violations / self.events as f64
        }
    }
}

fn ratio(a: u64, b: u64) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

pub fn hoeffding_coverage_test(
    env: &Environment,
    gamma: f64,
    delta: DeltaChoice,
    horizon: u64,
    seeds: &[u64],
) -> Result<CoverageReport> {
    let policy = Policy::MucbIntervals { gamma, delta };
    let grid = checkpoints(horizon);
    let partials = seeds
        .par_iter()
        .map(|&seed| -> Result<CoverageReport> {
            let mut episode = Episode::new(env, &policy, horizon, seed)?;
            let mut report = CoverageReport {
                runs: 1,
                events: 0,
                violations: 0,
                horizon_events: 0,
                horizon_violations: 0,
                predicted_violations: 0.0,
            };
            for &checkpoint in &grid {
                while episode.round() < checkpoint {
                    episode.step();
                }
                let at_horizon = checkpoint == horizon;
                for player in episode.players().expect("protocol episode") {
                    let params = player.params();
                    for id in env.space().ids() {
                        let n = player.stats()[id.0].pulls();
                        if n == 0 {
                            continue;
                        }
                        let violated = !player.interval(id).contains(env.mean(id));
                        report.events += 1;
                        report.violations += violated as u64;
                        if at_horizon {
                            report.horizon_events += 1;
                            report.horizon_violations += violated as u64;
                        }
                        let sd = env.sd(id);
                        if sd > 0.0 {
                            let eps = params.half_width(n);
                            let bound = 2.0 * (-(n as f64) * eps * eps / (2.0 * sd * sd)).exp();
                            report.predicted_violations += bound.min(1.0);
                        }
                    }
                }
            }
            Ok(report)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(partials.into_iter().fold(
        CoverageReport {
            runs: 0,
            events: 0,
            violations: 0,
            horizon_events: 0,
            horizon_violations: 0,
            predicted_violations: 0.0,
        },
        |a, b| CoverageReport {
            runs: a.runs + b.runs,
            events: a.events + b.events,
            violations: a.violations + b.violations,
            horizon_events: a.horizon_events + b.horizon_events,
            horizon_violations: a.horizon_violations + b.horizon_violations,
            predicted_violations: a.predicted_violations + b.predicted_violations,
        },
    ))
}

/// Empirical quantile with linear interpolation between order statistics
/// (`h = (n - 1) q`). `sorted` must be ascending and non-empty.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of an empty sample");
    let h = (sorted.len() - 1) as f64 * q.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub const LOWER_QUANTILE: f64 = 0.025;
pub const UPPER_QUANTILE: f64 = 0.975;

/// Pointwise median and 2.5% / 97.5% quantiles of several regret traces.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregateResult {
    pub policy: String,
    pub horizon: u64,
    pub runs: usize,
    pub median: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl AggregateResult {
    pub fn final_median(&self) -> f64 {
        self.median.last().copied().unwrap_or(0.0)
    }
}

pub fn aggregate(records: &[RunRecord]) -> Result<AggregateResult> {
    let first = records
        .first()
        .ok_or_else(|| Error::Aggregation("no runs to aggregate".into()))?;
    if let Some(r) = records.iter().find(|r| r.horizon != first.horizon) {
        return Err(Error::Aggregation(format!(
            "mixed horizons {} and {}",
            first.horizon, r.horizon
        )));
    }
    if let Some(r) = records.iter().find(|r| r.policy != first.policy) {
        return Err(Error::Aggregation(format!(
            "mixed policies {} and {}",
            first.policy, r.policy
        )));
    }
    let len = first.regret_trace.len();
    let mut median = Vec::with_capacity(len);
    let mut lower = Vec::with_capacity(len);
    let mut upper = Vec::with_capacity(len);
    let mut column = Vec::with_capacity(records.len());
    for t in 0..len {
        column.clear();
        column.extend(records.iter().map(|r| r.regret_trace[t]));
        column.sort_by(f64::total_cmp);
        median.push(quantile(&column, 0.5));
        lower.push(quantile(&column, LOWER_QUANTILE));
        upper.push(quantile(&column, UPPER_QUANTILE));
    }
    Ok(AggregateResult {
        policy: first.policy.clone(),
        horizon: first.horizon,
        runs: records.len(),
        median,
        lower,
        upper,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::environment::EnvironmentSpec;

    fn fixed_env(sd: f64) -> Environment {
        Environment::sample(
            &EnvironmentSpec::fixed_uniform_sd(vec![2, 2], vec![0.9, 0.5, 0.6, 0.7], sd),
            0,
        )
        .unwrap()
    }

    fn record_with(counts: Vec<u64>, regret: f64) -> RunRecord {
        RunRecord {
            seed: 0,
            policy: "hand-built".into(),
            horizon: counts.iter().sum(),
            actions: vec![],
            regret_trace: vec![regret],
            pull_counts: counts,
            eliminations: vec![],
            final_desired: None,
            sampled_regret: None,
            audit: None,
        }
    }

    #[test]
    fn pseudo_regret_examples() {
        let env = fixed_env(0.0);
        assert_eq!(pseudo_regret(&env, &[ActionId(0); 5]), vec![0.0; 5]);
        let trace = pseudo_regret(&env, &[ActionId(0), ActionId(1)]);
        assert_eq!(trace[0], 0.0);
        assert!((trace[1] - 0.4).abs() < 1e-12);
    }

    #[test]
    fn decomposition_of_hand_built_record() {
        let env = fixed_env(0.0);
        // gaps (0, 0.4, 0.3, 0.2) with counts (10, 5, 3, 2): 2.0 + 0.9 + 0.4
        let record = record_with(vec![10, 5, 3, 2], 3.3);
        assert!(decomposition_check(&record, &env) < 1e-12);
        let empty = RunRecord {
            horizon: 0,
            regret_trace: vec![],
            pull_counts: vec![0; 4],
            ..record
        };
        assert_eq!(decomposition_check(&empty, &env), 0.0);
    }

    #[test]
    fn zero_noise_episode_commits_to_optimum() {
        // Trace frozen from an independent hand-simulation of the noiseless
        // dynamics with gamma = 0.1, delta = 1/T^2, T = 20.
        let env = fixed_env(0.0);
        let record = run_episode(&env, &Policy::mucb(0.1), 20, 1, EpisodeOptions::default()).unwrap();
        let labels: Vec<String> = record.actions.iter().map(|&a| env.space().label(a)).collect();
        let expected = [
            "(1,1)", "(1,2)", "(2,1)", "(2,2)", "(1,1)", "(1,2)", "(2,1)", "(2,2)", "(1,1)", "(2,1)",
            "(1,2)", "(2,2)", "(1,1)", "(2,2)", "(1,1)", "(2,2)", "(1,1)", "(2,2)", "(1,1)", "(1,1)",
        ];
        assert_eq!(labels, expected);
        let elims: Vec<(u64, String)> = record
            .eliminations
            .iter()
            .map(|e| (e.round, env.space().label(e.action)))
            .collect();
        assert_eq!(
            elims,
            [(10, "(1,2)".to_string()), (11, "(2,1)".to_string()), (20, "(2,2)".to_string())]
        );
        assert_eq!(record.pull_counts.iter().sum::<u64>(), 20);
        assert_eq!(record.final_desired, Some(vec![ActionId(0)]));
        assert!(decomposition_check(&record, &env) < 1e-9);
    }

    #[test]
    fn short_horizon_rejected_for_protocol() {
        let env = fixed_env(0.1);
        assert!(matches!(
            run_episode(&env, &Policy::mucb(0.5), 3, 1, EpisodeOptions::default()),
            Err(Error::Config(_))
        ));
        let ucb = Policy::CentralizedUcb {
            delta: DeltaChoice::default(),
        };
        assert!(run_episode(&env, &ucb, 3, 1, EpisodeOptions::default()).is_ok());
    }

    #[test]
    fn checkpoint_grid() {
        assert_eq!(checkpoints(0), Vec::<u64>::new());
        assert_eq!(checkpoints(1), vec![1]);
        assert_eq!(checkpoints(4), vec![1, 2, 4]);
        assert_eq!(checkpoints(9), vec![1, 2, 4, 8, 9]);
    }

    #[test]
    fn quantile_interpolates() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile(&xs, 0.5), 2.5);
        assert_eq!(quantile(&xs, 0.0), 1.0);
        assert_eq!(quantile(&xs, 1.0), 4.0);
        assert!((quantile(&xs, 0.025) - 1.075).abs() < 1e-12);
        assert_eq!(quantile(&[7.0], 0.3), 7.0);
    }

    #[test]
    fn aggregate_examples() {
        let constant = |v: f64| RunRecord {
            regret_trace: vec![v; 3],
            ..record_with(vec![3, 0, 0, 0], 0.0)
        };
        let single = aggregate(&[constant(1.5)]).unwrap();
        assert_eq!(single.median, vec![1.5; 3]);
        assert_eq!(single.lower, single.median);
        assert_eq!(single.upper, single.median);

        let agg = aggregate(&[constant(1.0), constant(2.0), constant(3.0)]).unwrap();
        assert_eq!(agg.median, vec![2.0; 3]);
        assert_eq!(agg.runs, 3);

        let mut other = constant(1.0);
        other.horizon = 99;
        assert!(matches!(aggregate(&[constant(1.0), other]), Err(Error::Aggregation(_))));
        assert!(aggregate(&[]).is_err());
    }

    #[test]
    fn compensated_sum_beats_naive_accumulation() {
        let mut acc = CompensatedSum::default();
        let mut naive = 0.0;
        for _ in 0..1_000_000 {
            acc.add(0.1);
            naive += 0.1;
        }
        assert!((acc.value() - 100_000.0).abs() < 1e-9);
        assert!((naive - 100_000.0f64).abs() > 1e-9);
    }
}
